#pragma once

#include "ellq/laurent.hpp"

#include <functional>
#include <random>
#include <vector>

namespace ellq {

struct GenericityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric specialization used to pick expansion directions (and, in fully
// specialized runs, to give every symbol its value).  All magnitudes are exact
// rationals, so "on the contour" is decidable.
struct ParamSpec {
  Rat p;                 // 0 < p < 1
  Rat q1, q2;            // positive
  std::vector<Rat> u;    // framing weights, each in (p, 1]
  Rat L1;                // Koszul root; L2 = q1*q2/L1 implicitly
  Rat x1 = Rat(1, 2);    // auxiliary spectator weight for the theta seed state
  std::uint64_t seed = 0;
  int resamples = 0;     // how many rejected draws preceded this spec

  int rank() const { return static_cast<int>(u.size()); }

  Rat q() const { return q1 * q2; }
  Rat L2() const { return q1 * q2 / L1; }

  Rat value(const std::string& s) const
  {
    if (s == "q1")
      return q1;
    if (s == "q2")
      return q2;
    if (s == "L1")
      return L1;
    if (s == "x1")
      return x1;
    if (s.size() == 2 && s[0] == 'u') {
      int i = s[1] - '1';
      if (i >= 0 && i < static_cast<int>(u.size()))
        return u[static_cast<std::size_t>(i)];
    }
    throw std::invalid_argument("ParamSpec: unknown symbol " + s);
  }

  std::function<Rat(const std::string&)> env() const
  {
    return [this](const std::string& s) { return value(s); };
  }

  // |value| of a coefficient monomial (symbols specialized, no p part)
  Rat magnitude(const Monomial& m, const Rat& coef) const
  {
    Rat v = abs(coef);
    for (auto& [s, k] : m.e)
      v *= ratPow(abs(value(s)), k);
    return v;
  }
};

// Draw a random spec.  Candidates violating the basic range constraints are
// rejected and redrawn; finer genericity violations surface later as
// GenericityError and the caller redraws with a bumped seed.
ParamSpec sampleParamSpec(std::uint64_t seed, int rank, int npGuard = 12);

inline ParamSpec sampleParamSpecImpl(std::uint64_t seed, int rank, int npGuard)
{
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  auto smallRat = [&](int nlo, int nhi, int dlo, int dhi) {
    std::uniform_int_distribution<int> dn(nlo, nhi), dd(dlo, dhi);
    Rat r(dn(rng), dd(rng));
    r.canonicalize(); // mpq_class(num, den) does not reduce
    return r;
  };
  for (int attempt = 0;; ++attempt) {
    ParamSpec ps;
    ps.seed = seed;
    ps.resamples = attempt;
    // small nome keeps residual magnitudes well separated from the contours
    std::uniform_int_distribution<int> dp(17, 41);
    ps.p = Rat(1, dp(rng));
    // q1, q2 slightly above 1 so q^{-1} lands strictly inside the annulus
    ps.q1 = 1 + smallRat(1, 4, 23, 37);
    ps.q2 = 1 + smallRat(1, 4, 29, 43);
    ps.L1 = smallRat(2, 5, 7, 11); // in (p,1)
    ps.x1 = smallRat(3, 7, 13, 19);
    ps.u.clear();
    for (int i = 0; i < rank; ++i)
      ps.u.push_back(smallRat(2, 9, 11, 23));
    // basic sanity: all magnitudes distinct from 1 and from powers of p
    auto ok = [&](const Rat& v) {
      if (sgn(v) <= 0)
        return false;
      Rat a = abs(v);
      if (a == 1)
        return false;
      Rat pk(1);
      for (int k = 0; k <= npGuard; ++k) {
        if (a == pk)
          return false;
        pk *= ps.p;
      }
      return a > pk; // keep everything well above p^npGuard
    };
    bool good = ok(ps.L1) && ok(ps.x1) && ok(ps.L2()) && ps.q() < 1 / ps.p;
    for (auto& v : ps.u)
      good = good && ok(v) && v > ps.p && v < 1;
    good = good && ps.L1 > ps.p && ps.L1 < 1;
    // pairwise distinct framing weights (projective-bundle denominators)
    for (std::size_t i = 0; good && i < ps.u.size(); ++i)
      for (std::size_t j = i + 1; j < ps.u.size(); ++j)
        if (ps.u[i] == ps.u[j]) {
          good = false;
          break;
        }
    if (good)
      return ps;
  }
}

inline ParamSpec sampleParamSpec(std::uint64_t seed, int rank, int npGuard)
{
  return sampleParamSpecImpl(seed, rank, npGuard);
}

} // namespace ellq
