#pragma once

#include "ellq/laurent.hpp"

namespace ellq {

// Rational function as an unreduced num/den pair.  Equality is decided by
// cross-multiplication, so no gcd computation is ever needed.
struct RatFn {
  LaurentPoly num = LaurentPoly(1);
  LaurentPoly den = LaurentPoly(1);

  static RatFn poly(const LaurentPoly& p) { return {p, LaurentPoly(1)}; }

  bool isZero() const { return num.isZero(); }

  RatFn operator*(const RatFn& o) const { return {num * o.num, den * o.den}; }
  RatFn operator/(const RatFn& o) const
  {
    if (o.num.isZero())
      throw std::domain_error("RatFn: division by zero");
    return {num * o.den, den * o.num};
  }
  RatFn operator+(const RatFn& o) const
  {
    return {num * o.den + o.num * den, den * o.den};
  }
  RatFn operator-(const RatFn& o) const
  {
    return {num * o.den - o.num * den, den * o.den};
  }
  RatFn operator-() const { return {-num, den}; }

  RatFn inv() const
  {
    if (num.isZero())
      throw std::domain_error("RatFn: inverse of zero");
    return {den, num};
  }

  friend bool operator==(const RatFn& a, const RatFn& b)
  {
    return a.num * b.den == b.num * a.den;
  }

  RatFn substPoly(const std::string& s, const LaurentPoly& v) const
  {
    return {num.substPoly(s, v), den.substPoly(s, v)};
  }

  std::string str() const { return "(" + num.str() + ") / (" + den.str() + ")"; }
};

inline Monomial renameVars(const Monomial& m,
                           const std::map<std::string, std::string>& ren)
{
  Monomial r;
  for (auto& [s, k] : m.e) {
    auto it = ren.find(s);
    r.mulIn(Monomial::var(it == ren.end() ? s : it->second, k));
  }
  return r;
}

inline LaurentPoly renameVars(const LaurentPoly& p,
                              const std::map<std::string, std::string>& ren)
{
  LaurentPoly r;
  for (auto& [m, c] : p.t)
    r.addTerm(renameVars(m, ren), c);
  return r;
}

inline RatFn renameVars(const RatFn& f, const std::map<std::string, std::string>& ren)
{
  return {renameVars(f.num, ren), renameVars(f.den, ren)};
}

// swap two symbols everywhere (e.g. the q1 <-> q2 symmetry tests)
inline LaurentPoly swapVars(const LaurentPoly& p, const std::string& a,
                            const std::string& b)
{
  return renameVars(p, {{a, b}, {b, a}});
}

} // namespace ellq
