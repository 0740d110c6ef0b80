#pragma once

#include "ellq/rational.hpp"

#include <map>
#include <string>
#include <vector>
#include <sstream>

namespace ellq {

// A monomial in the engine's alphabet with integer (possibly negative)
// exponents.  The letter "q" is never stored: it always enters as q1*q2.
// Exponents are kept in a sorted map so the ordering of monomials (and with it
// the printing of polynomials) is canonical.
struct Monomial {
  std::map<std::string, int> e;

  Monomial() = default;

  static Monomial var(const std::string& s, int k = 1)
  {
    check(s);
    Monomial m;
    if (k != 0)
      m.e[s] = k;
    return m;
  }

  static void check(const std::string& s)
  {
    if (s == "q")
      throw std::invalid_argument("Monomial: 'q' is not a symbol; use q1*q2");
    if (s.empty())
      throw std::invalid_argument("Monomial: empty symbol");
  }

  bool trivial() const { return e.empty(); }

  int deg(const std::string& s) const
  {
    auto it = e.find(s);
    return it == e.end() ? 0 : it->second;
  }

  bool dependsOn(const std::string& s) const { return e.count(s) != 0; }

  Monomial& mulIn(const Monomial& o)
  {
    for (auto& [s, k] : o.e) {
      int n = (e[s] += k);
      if (n == 0)
        e.erase(s);
    }
    return *this;
  }

  Monomial operator*(const Monomial& o) const
  {
    Monomial r = *this;
    r.mulIn(o);
    return r;
  }

  Monomial inv() const
  {
    Monomial r;
    for (auto& [s, k] : e)
      r.e[s] = -k;
    return r;
  }

  Monomial pow(int n) const
  {
    Monomial r;
    if (n != 0)
      for (auto& [s, k] : e)
        r.e[s] = k * n;
    return r;
  }

  auto operator<=>(const Monomial& o) const = default;

  std::string str() const
  {
    if (e.empty())
      return "1";
    std::ostringstream os;
    bool first = true;
    for (auto& [s, k] : e) {
      if (!first)
        os << "*";
      first = false;
      os << s;
      if (k != 1)
        os << "^" << k;
    }
    return os.str();
  }
};

inline Monomial qMono() { return Monomial::var("q1") * Monomial::var("q2"); }

// L2 is sugar for q/L1 = q1*q2*L1^-1.
inline Monomial L2Mono() { return qMono() * Monomial::var("L1", -1); }

} // namespace ellq
