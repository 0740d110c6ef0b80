#pragma once

#include "ellq/laurent.hpp"

#include <vector>

namespace ellq {

// Truncated power series in the nome p:  c[0] + c[1] p + ... + c[np] p^np.
// Coefficients are Laurent polynomials in the remaining alphabet.
struct PSeries {
  int np = 0;
  std::vector<LaurentPoly> c;

  PSeries() : c(1) {}
  explicit PSeries(int order) : np(order), c(order + 1) {}
  PSeries(int order, const LaurentPoly& c0) : np(order), c(order + 1) { c[0] = c0; }

  static PSeries one(int order) { return PSeries(order, LaurentPoly(1)); }
  static PSeries pPow(int order, int k, const LaurentPoly& coeff = LaurentPoly(1))
  {
    PSeries s(order);
    if (k < 0)
      throw std::domain_error("PSeries: negative p-power");
    if (k <= order)
      s.c[k] = coeff;
    return s;
  }

  bool isZero() const
  {
    for (auto& x : c)
      if (!x.isZero())
        return false;
    return true;
  }

  PSeries truncate(int order) const
  {
    PSeries r(order);
    for (int i = 0; i <= std::min(order, np); ++i)
      r.c[i] = c[i];
    return r;
  }

  PSeries& operator+=(const PSeries& o)
  {
    matchOrder(o);
    for (int i = 0; i <= np; ++i)
      c[i] += o.c[i];
    return *this;
  }
  PSeries& operator-=(const PSeries& o)
  {
    matchOrder(o);
    for (int i = 0; i <= np; ++i)
      c[i] -= o.c[i];
    return *this;
  }
  friend PSeries operator+(PSeries a, const PSeries& b) { return a += b; }
  friend PSeries operator-(PSeries a, const PSeries& b) { return a -= b; }
  PSeries operator-() const
  {
    PSeries r(np);
    for (int i = 0; i <= np; ++i)
      r.c[i] = -c[i];
    return r;
  }

  friend PSeries operator*(const PSeries& a, const PSeries& b)
  {
    int order = std::min(a.np, b.np);
    PSeries r(order);
    for (int i = 0; i <= order; ++i) {
      if (a.c[i].isZero())
        continue;
      for (int j = 0; i + j <= order; ++j) {
        if (b.c[j].isZero())
          continue;
        r.c[i + j] += a.c[i] * b.c[j];
      }
    }
    return r;
  }
  PSeries& operator*=(const PSeries& o) { return *this = *this * o; }

  PSeries scaled(const LaurentPoly& s) const
  {
    PSeries r(np);
    for (int i = 0; i <= np; ++i)
      r.c[i] = c[i] * s;
    return r;
  }

  // multiply by p^k (k >= 0): shift coefficients up
  PSeries pShifted(int k) const
  {
    if (k < 0)
      throw std::domain_error("PSeries::pShifted: negative shift");
    PSeries r(np);
    for (int i = 0; i + k <= np; ++i)
      r.c[i + k] = c[i];
    return r;
  }

  // inverse; requires c[0] to be an invertible monomial
  PSeries inv() const
  {
    PSeries r(np);
    LaurentPoly i0 = c[0].inv();
    r.c[0] = i0;
    for (int n = 1; n <= np; ++n) {
      LaurentPoly acc;
      for (int k = 1; k <= n; ++k)
        acc += c[k] * r.c[n - k];
      r.c[n] = -(i0 * acc);
    }
    return r;
  }

  bool operator==(const PSeries& o) const
  {
    int order = std::min(np, o.np);
    for (int i = 0; i <= order; ++i)
      if (!(c[i] == o.c[i]))
        return false;
    // differing tails must be zero
    for (int i = order + 1; i <= np; ++i)
      if (!c[i].isZero())
        return false;
    for (int i = order + 1; i <= o.np; ++i)
      if (!o.c[i].isZero())
        return false;
    return true;
  }

  PSeries substRat(const std::string& s, const Rat& v) const
  {
    PSeries r(np);
    for (int i = 0; i <= np; ++i)
      r.c[i] = c[i].substRat(s, v);
    return r;
  }

  // numeric value with p specialized (coefficients must be constants)
  Rat evalP(const Rat& p) const
  {
    Rat acc(0), pk(1);
    for (int i = 0; i <= np; ++i) {
      acc += c[i].constantValue() * pk;
      pk *= p;
    }
    return acc;
  }

  std::string str() const
  {
    std::ostringstream os;
    bool some = false;
    for (int i = 0; i <= np; ++i) {
      if (c[i].isZero())
        continue;
      if (some)
        os << " + ";
      some = true;
      if (i == 0)
        os << "(" << c[i].str() << ")";
      else
        os << "(" << c[i].str() << ")*p^" << i;
    }
    if (!some)
      return "0";
    return os.str();
  }

private:
  void matchOrder(const PSeries& o)
  {
    if (np == o.np)
      return;
    int order = std::min(np, o.np);
    // truncate to the common order: arithmetic never invents precision
    PSeries t = truncate(order);
    np = t.np;
    c = t.c;
  }
};

} // namespace ellq
