#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <string>
#include <stdexcept>

namespace ellq {

// Exact rational scalar. mpq_class keeps values canonical (reduced, positive
// denominator), which is all the engine needs.
using Rat = mpq_class;

inline Rat rat(long n, long d = 1)
{
  if (d == 0)
    throw std::invalid_argument("rat: zero denominator");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline Rat ratFromString(const std::string& s)
{
  Rat r(s);
  r.canonicalize();
  return r;
}

inline bool isZero(const Rat& r) { return sgn(r) == 0; }

inline Rat absRat(const Rat& r) { return abs(r); }

// r^k for possibly negative k; r must be nonzero when k < 0.
inline Rat ratPow(const Rat& r, long k)
{
  if (k == 0)
    return Rat(1);
  bool inv = k < 0;
  unsigned long e = inv ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  Rat base = r;
  if (inv) {
    if (isZero(r))
      throw std::domain_error("ratPow: inverse of zero");
    base = 1 / r;
  }
  Rat acc(1);
  while (e) {
    if (e & 1)
      acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

inline std::string ratStr(const Rat& r) { return r.get_str(); }

inline double ratToDouble(const Rat& r) { return r.get_d(); }

} // namespace ellq
