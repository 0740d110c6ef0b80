#pragma once

#include "ellq/mero.hpp"
#include "ellq/ratfn.hpp"

#include <climits>
#include <map>

namespace ellq {

struct DivisibilityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// coefficient of var^k, with that variable stripped
inline LaurentPoly coeffOf(const LaurentPoly& p, const std::string& var, int k)
{
  LaurentPoly r;
  for (auto& [m, c] : p.t)
    if (m.deg(var) == k) {
      Monomial stripped = m * Monomial::var(var, -k);
      r.addTerm(stripped, c);
    }
  return r;
}

inline int lowestDeg(const LaurentPoly& p, const std::string& var)
{
  int lo = INT_MAX;
  for (auto& [m, c] : p.t)
    lo = std::min(lo, m.deg(var));
  return lo;
}
inline int highestDeg(const LaurentPoly& p, const std::string& var)
{
  int hi = INT_MIN;
  for (auto& [m, c] : p.t)
    hi = std::max(hi, m.deg(var));
  return hi;
}

// Truncated expansion around the big variable Z:
//   Z^lead * sum_{k=0}^{N} c[k] Z^{-k}
// with coefficients Laurent polynomials in the remaining symbols.
struct BigSeries {
  int N = 0;
  int lead = 0;
  std::vector<LaurentPoly> c;

  BigSeries() : c(1) {}
  explicit BigSeries(int order) : N(order), c(order + 1) {}

  static BigSeries one(int order)
  {
    BigSeries s(order);
    s.c[0] = LaurentPoly(1);
    return s;
  }
  static BigSeries constant(int order, const LaurentPoly& v)
  {
    BigSeries s(order);
    s.c[0] = v;
    return s;
  }
  // (zc * Z + rest)^e ; zc an invertible monomial term when e < 0
  static BigSeries linear(const LaurentPoly& zc, const LaurentPoly& rest, int e,
                          int order);

  bool isZero() const
  {
    for (auto& x : c)
      if (!x.isZero())
        return false;
    return true;
  }

  // coefficient of Z^k (absolute power, lead included)
  LaurentPoly coeffZ(int k) const
  {
    int idx = lead - k;
    if (idx < 0 || idx > N)
      return {};
    return c[idx];
  }

  BigSeries operator*(const BigSeries& o) const;
  BigSeries operator+(const BigSeries& o) const;
  BigSeries operator-(const BigSeries& o) const;
  BigSeries scaled(const LaurentPoly& f) const;
  BigSeries inv() const;
  BigSeries pow(int e) const;

  bool operator==(const BigSeries& o) const;
  std::string str(int maxTerms = 12) const;
};

// Linear algebra over the diagonal symbol D with the square rule D^2 = e D,
// series-valued coefficients: elements a + b D.
struct DSeries {
  BigSeries a, b;

  static DSeries scalar(const BigSeries& s) { return {s, BigSeries(s.N)}; }
  static DSeries diag(const BigSeries& s, const BigSeries& d) { return {s, d}; }

  DSeries mul(const DSeries& o, const LaurentPoly& e) const
  {
    return {a * o.a, a * o.b + b * o.a + (b * o.b).scaled(e)};
  }
  DSeries inv(const LaurentPoly& e) const
  {
    BigSeries ai = a.inv();
    return {ai, (b * ai * (a + b.scaled(e)).inv()).scaled(LaurentPoly(Rat(-1)))};
  }
};

// same algebra at the exact rational-function level
struct DRat {
  RatFn a, b;

  DRat mul(const DRat& o, const RatFn& e) const
  {
    return {a * o.a, a * o.b + b * o.a + b * o.b * e};
  }
  DRat inv(const RatFn& e) const
  {
    RatFn ai = a.inv();
    return {ai, -(b * ai / (a + b * e))};
  }
  DRat substPoly(const std::string& s, const LaurentPoly& v) const
  {
    return {a.substPoly(s, v), b.substPoly(s, v)};
  }
};

// ---- gamma tables ---------------------------------------------------------

// zeta(z-w)/zeta(w-z) = 1 + sum_{a>=3} sum_{b=0}^{a-2} t1 t2 gamma_{ab} w^b z^-a;
// returns the divided gamma_{ab} and verifies vanishing outside that range.
std::map<std::pair<int, int>, LaurentPoly> gammaRational(int maxA);

// zeta(z/w)/zeta(w/z) = 1 + sum_{a>=1} (1-q1)(1-q2) gamma^sgn_a (w/z)^{sgn a}
// in the region where z (sgn=+1) or w (sgn=-1) is large; divided coefficients.
std::map<int, LaurentPoly> gammaTrig(int maxA, int sgn);

// the same ratios at sheaf level, D-linear; a-part must be 1 and the D-part
// must reproduce the plain gamma tables
DSeries cohRatio(int maxA);
DSeries kthRatio(int maxA);

// ---- exact kernels --------------------------------------------------------

// variable is always the symbol "x"
RatFn zetaRational(bool tilde);
RatFn zetaTrig(bool tilde);

// elliptic kernels over formal q1, q2 as a factored expression in z^ze w^we
Mero zetaE(const Coef& x, int ze, int we, bool tilde);

// sheaf-level D kernels; colored = keep red/blue copies (symbols tr/tb, qr/qb)
DRat zetaCoh(bool colored);
DRat zetaKth(bool colored);
DRat zetaCohTilde(int sign);
DRat zetaKthTilde(int sign);

// identify red and blue pullbacks against D (restriction to the diagonal)
RatFn projectDiagonal(const RatFn& f, bool kTheory);

// ---- degenerations --------------------------------------------------------

// p = 0: every theta factor becomes (1 - argument); univariate in `var`,
// result expressed in the symbol "x"
RatFn meroAtPZero(const Mero& m, char var);

// leading epsilon-order of p under x -> exp(eps xt) for each substituted
// symbol; `additive` maps a symbol to its exponent polynomial
std::pair<int, LaurentPoly> epsLeading(const LaurentPoly& p,
                                       const std::map<std::string, LaurentPoly>& additive,
                                       int maxOrd = 16);

// trig -> rational: substitute x -> exp(eps x), q1 -> exp(eps t1),
// q2 -> exp(eps t2) and keep the leading epsilon order of num and den
RatFn rationalLimit(const RatFn& f);

} // namespace ellq
