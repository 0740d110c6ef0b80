#pragma once

#include "ellq/monomial.hpp"

#include <functional>
#include <optional>

namespace ellq {

// Sparse Laurent polynomial: finite sum of Rat * Monomial.  Zero coefficients
// are never stored, so equality is structural.
struct LaurentPoly {
  std::map<Monomial, Rat> t;

  LaurentPoly() = default;
  /*implicit*/ LaurentPoly(const Rat& c)
  {
    if (!ellq::isZero(c))
      t.emplace(Monomial{}, c);
  }
  /*implicit*/ LaurentPoly(long n) : LaurentPoly(Rat(n)) {}

  static LaurentPoly term(const Rat& c, const Monomial& m)
  {
    LaurentPoly p;
    if (!ellq::isZero(c))
      t_insert(p, m, c);
    return p;
  }
  static LaurentPoly var(const std::string& s, int k = 1)
  {
    return term(Rat(1), Monomial::var(s, k));
  }

  bool isZero() const { return t.empty(); }
  bool isConstant() const
  {
    return t.empty() || (t.size() == 1 && t.begin()->first.trivial());
  }
  bool isMonomial() const { return t.size() == 1; }

  Rat constantValue() const
  {
    if (t.empty())
      return Rat(0);
    if (!isConstant())
      throw std::logic_error("LaurentPoly: not a constant");
    return t.begin()->second;
  }

  LaurentPoly& operator+=(const LaurentPoly& o)
  {
    for (auto& [m, c] : o.t)
      addTerm(m, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o)
  {
    for (auto& [m, c] : o.t)
      addTerm(m, -c);
    return *this;
  }
  void addTerm(const Monomial& m, const Rat& c)
  {
    if (ellq::isZero(c))
      return;
    auto [it, fresh] = t.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (ellq::isZero(it->second))
        t.erase(it);
    }
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b)
  {
    a += b;
    return a;
  }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b)
  {
    a -= b;
    return a;
  }
  LaurentPoly operator-() const
  {
    LaurentPoly r;
    for (auto& [m, c] : t)
      r.t.emplace(m, -c);
    return r;
  }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
  {
    LaurentPoly r;
    if (a.t.empty() || b.t.empty())
      return r;
    // fast path: constants multiply constants in the specialized hot loop
    if (a.t.size() == 1 && b.t.size() == 1) {
      r.t.emplace(a.t.begin()->first * b.t.begin()->first,
                  a.t.begin()->second * b.t.begin()->second);
      return r;
    }
    for (auto& [ma, ca] : a.t)
      for (auto& [mb, cb] : b.t)
        r.addTerm(ma * mb, ca * cb);
    return r;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  bool operator==(const LaurentPoly& o) const = default;

  // inverse exists only for single-term polynomials
  LaurentPoly inv() const
  {
    if (t.size() != 1)
      throw std::domain_error("LaurentPoly::inv: not a monomial");
    auto& [m, c] = *t.begin();
    return term(Rat(1) / c, m.inv());
  }

  LaurentPoly pow(int n) const
  {
    if (n < 0)
      return inv().pow(-n);
    LaurentPoly r(Rat(1)), base = *this;
    while (n) {
      if (n & 1)
        r *= base;
      base *= base;
      n >>= 1;
    }
    return r;
  }

  // substitute symbol -> rational value
  LaurentPoly substRat(const std::string& s, const Rat& v) const
  {
    LaurentPoly r;
    for (auto& [m, c] : t) {
      int k = m.deg(s);
      if (k == 0) {
        r.addTerm(m, c);
        continue;
      }
      Monomial m2 = m;
      m2.e.erase(s);
      r.addTerm(m2, c * ratPow(v, k));
    }
    return r;
  }

  // substitute symbol -> polynomial (requires nonnegative exponents of s,
  // unless the replacement is itself a monomial)
  LaurentPoly substPoly(const std::string& s, const LaurentPoly& v) const
  {
    LaurentPoly r;
    for (auto& [m, c] : t) {
      int k = m.deg(s);
      Monomial m2 = m;
      m2.e.erase(s);
      LaurentPoly piece = term(c, m2);
      if (k != 0) {
        if (k < 0 && !v.isMonomial())
          throw std::domain_error("substPoly: negative power of substituted symbol");
        piece *= v.pow(k);
      }
      r += piece;
    }
    return r;
  }

  // full specialization through a symbol table; throws on missing symbols
  Rat eval(const std::function<Rat(const std::string&)>& env) const
  {
    Rat acc(0);
    for (auto& [m, c] : t) {
      Rat v = c;
      for (auto& [s, k] : m.e)
        v *= ratPow(env(s), k);
      acc += v;
    }
    return acc;
  }

  bool dependsOn(const std::string& s) const
  {
    for (auto& [m, c] : t)
      if (m.dependsOn(s))
        return true;
    return false;
  }

  // Exact division; returns nullopt when the division leaves a remainder.
  std::optional<LaurentPoly> divideExact(const LaurentPoly& d) const;

  std::string str() const
  {
    if (t.empty())
      return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : t) {
      Rat a = c;
      if (!first)
        os << (sgn(a) < 0 ? " - " : " + ");
      else if (sgn(a) < 0)
        os << "-";
      first = false;
      a = abs(a);
      if (m.trivial())
        os << a.get_str();
      else if (a == 1)
        os << m.str();
      else
        os << a.get_str() << "*" << m.str();
    }
    return os.str();
  }

private:
  static void t_insert(LaurentPoly& p, const Monomial& m, const Rat& c)
  {
    p.t.emplace(m, c);
  }
};

// True lexicographic order on exponent vectors (absent symbol = exponent 0).
// Unlike the storage order this is multiplicative, so it is safe for division.
inline bool monoLexLess(const Monomial& a, const Monomial& b)
{
  auto ia = a.e.begin(), ib = b.e.begin();
  while (ia != a.e.end() || ib != b.e.end()) {
    std::string sa = ia != a.e.end() ? ia->first : std::string();
    std::string sb = ib != b.e.end() ? ib->first : std::string();
    std::string s;
    if (ia == a.e.end())
      s = sb;
    else if (ib == b.e.end())
      s = sa;
    else
      s = std::min(sa, sb);
    int ea = (ia != a.e.end() && ia->first == s) ? ia->second : 0;
    int eb = (ib != b.e.end() && ib->first == s) ? ib->second : 0;
    if (ea != eb)
      return ea < eb;
    if (ia != a.e.end() && ia->first == s)
      ++ia;
    if (ib != b.e.end() && ib->first == s)
      ++ib;
  }
  return false;
}

inline std::optional<LaurentPoly> LaurentPoly::divideExact(const LaurentPoly& d) const
{
  if (d.isZero())
    throw std::domain_error("divideExact: zero divisor");
  auto leading = [](const LaurentPoly& p) {
    auto best = p.t.begin();
    for (auto it = std::next(p.t.begin()); it != p.t.end(); ++it)
      if (monoLexLess(best->first, it->first))
        best = it;
    return best;
  };
  LaurentPoly rem = *this, quo;
  auto lead = leading(d);
  int guard = 0;
  while (!rem.isZero()) {
    if (++guard > 100000)
      return std::nullopt;
    auto rl = leading(rem);
    Monomial rlm = rl->first;
    Monomial qm = rlm * lead->first.inv();
    Rat qc = rl->second / lead->second;
    LaurentPoly qt = LaurentPoly::term(qc, qm);
    quo += qt;
    rem -= qt * d;
    // the remainder's leading monomial must strictly drop, else inexact
    if (!rem.isZero() && !monoLexLess(leading(rem)->first, rlm))
      return std::nullopt;
  }
  return quo;
}

} // namespace ellq
