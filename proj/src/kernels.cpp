#include "ellq/kernels.hpp"

namespace ellq {

namespace {

LaurentPoly mono(const std::string& s, int k = 1)
{
  return LaurentPoly::term(Rat(1), Monomial::var(s, k));
}

LaurentPoly tSum() { return mono("t1") + mono("t2"); }
LaurentPoly t1t2() { return mono("t1") * mono("t2"); }
LaurentPoly qPoly() { return LaurentPoly::term(Rat(1), qMono()); }
LaurentPoly qFactor()
{
  return (LaurentPoly(1) - mono("q1")) * (LaurentPoly(1) - mono("q2"));
}

} // namespace

// ---- BigSeries ------------------------------------------------------------

BigSeries BigSeries::linear(const LaurentPoly& zc, const LaurentPoly& rest, int e,
                            int order)
{
  BigSeries base(order);
  base.lead = 1;
  base.c[0] = zc;
  if (order >= 1)
    base.c[1] = rest;
  return base.pow(e);
}

BigSeries BigSeries::operator*(const BigSeries& o) const
{
  BigSeries r(std::min(N, o.N));
  r.lead = lead + o.lead;
  for (int i = 0; i <= r.N; ++i)
    for (int j = 0; i + j <= r.N; ++j) {
      if (i > N || j > o.N)
        continue;
      r.c[i + j] += c[i] * o.c[j];
    }
  return r;
}

BigSeries BigSeries::operator+(const BigSeries& o) const
{
  BigSeries r(std::min(N, o.N));
  r.lead = std::max(lead, o.lead);
  for (int k = 0; k <= r.N; ++k) {
    int mine = k - (r.lead - lead);
    int theirs = k - (r.lead - o.lead);
    if (mine >= 0 && mine <= N)
      r.c[k] += c[mine];
    if (theirs >= 0 && theirs <= o.N)
      r.c[k] += o.c[theirs];
  }
  return r;
}

BigSeries BigSeries::operator-(const BigSeries& o) const
{
  return *this + o.scaled(LaurentPoly(Rat(-1)));
}

BigSeries BigSeries::scaled(const LaurentPoly& f) const
{
  BigSeries r = *this;
  for (auto& x : r.c)
    x = x * f;
  return r;
}

BigSeries BigSeries::inv() const
{
  LaurentPoly lead0 = c[0];
  BigSeries r(N);
  r.lead = -lead;
  LaurentPoly li = lead0.inv(); // requires an invertible leading term
  r.c[0] = li;
  for (int k = 1; k <= N; ++k) {
    LaurentPoly acc;
    for (int j = 1; j <= k; ++j)
      acc += c[j] * r.c[k - j];
    r.c[k] = LaurentPoly(Rat(-1)) * li * acc;
  }
  return r;
}

BigSeries BigSeries::pow(int e) const
{
  if (e < 0)
    return inv().pow(-e);
  BigSeries r = one(N);
  for (int i = 0; i < e; ++i)
    r = r * *this;
  return r;
}

bool BigSeries::operator==(const BigSeries& o) const { return (*this - o).isZero(); }

std::string BigSeries::str(int maxTerms) const
{
  std::ostringstream os;
  int n = 0;
  for (int k = 0; k <= N && n < maxTerms; ++k) {
    if (c[k].isZero())
      continue;
    if (n++)
      os << " + ";
    os << "Z^" << lead - k << "*(" << c[k].str() << ")";
  }
  return n ? os.str() : "0";
}

// ---- gamma tables ---------------------------------------------------------

std::map<std::pair<int, int>, LaurentPoly> gammaRational(int maxA)
{
  int N = maxA;
  LaurentPoly w = mono("w"), t1 = mono("t1"), t2 = mono("t2"), t = tSum();
  auto L = [&](const LaurentPoly& rest) {
    return BigSeries::linear(LaurentPoly(1), rest, 1, N);
  };
  // numerator (z-w+t1)(z-w+t2)(z-w-t), denominator (z-w-t1)(z-w-t2)(z-w+t)
  LaurentPoly neg1(Rat(-1));
  BigSeries ratio = L(t1 - w) * L(t2 - w) * L(neg1 * t - w) *
                    (L(neg1 * t1 - w) * L(neg1 * t2 - w) * L(t - w)).inv();
  if (!(ratio.coeffZ(0) == LaurentPoly(1)))
    throw DivisibilityViolation("rational ratio: constant term is not 1");
  for (int a : {1, 2})
    if (!ratio.coeffZ(-a).isZero())
      throw DivisibilityViolation("rational ratio: unexpected low-order term");

  std::map<std::pair<int, int>, LaurentPoly> out;
  LaurentPoly div = t1t2();
  for (int a = 3; a <= maxA; ++a) {
    LaurentPoly ca = ratio.coeffZ(-a);
    if (ca.isZero())
      continue;
    for (int b = lowestDeg(ca, "w"); b <= highestDeg(ca, "w"); ++b) {
      LaurentPoly cb = coeffOf(ca, "w", b);
      if (cb.isZero())
        continue;
      if (b < 0 || b > a - 2)
        throw DivisibilityViolation("rational ratio: w-degree out of range");
      auto q = cb.divideExact(div);
      if (!q)
        throw DivisibilityViolation("gamma_{" + std::to_string(a) + "," +
                                    std::to_string(b) + "} not divisible by t1 t2");
      out[{a, b}] = *q;
    }
  }
  return out;
}

std::map<int, LaurentPoly> gammaTrig(int maxA, int sgn)
{
  int N = maxA;
  std::map<int, LaurentPoly> out;
  LaurentPoly w = mono("w"), z = mono("z"), q1 = mono("q1"), q2 = mono("q2"),
              q = qPoly(), neg1 = LaurentPoly(Rat(-1));
  BigSeries ratio(N);
  if (sgn > 0) {
    // big variable z:  (z q1 - w)(z q2 - w)(z - w q) / ((z - w q1)(z - w q2)(z q - w))
    ratio = BigSeries::linear(q1, neg1 * w, 1, N) * BigSeries::linear(q2, neg1 * w, 1, N) *
            BigSeries::linear(LaurentPoly(1), neg1 * w * q, 1, N) *
            (BigSeries::linear(LaurentPoly(1), neg1 * w * q1, 1, N) *
             BigSeries::linear(LaurentPoly(1), neg1 * w * q2, 1, N) *
             BigSeries::linear(q, neg1 * w, 1, N))
                .inv();
  } else {
    // big variable w, same six factors
    ratio = BigSeries::linear(neg1, z * q1, 1, N) * BigSeries::linear(neg1, z * q2, 1, N) *
            BigSeries::linear(neg1 * q, z, 1, N) *
            (BigSeries::linear(neg1 * q1, z, 1, N) * BigSeries::linear(neg1 * q2, z, 1, N) *
             BigSeries::linear(neg1, z * q, 1, N))
                .inv();
  }
  if (!(ratio.coeffZ(0) == LaurentPoly(1)))
    throw DivisibilityViolation("trig ratio: constant term is not 1");

  std::string small = sgn > 0 ? "w" : "z";
  LaurentPoly div = qFactor();
  for (int a = 1; a <= maxA; ++a) {
    LaurentPoly ca = ratio.coeffZ(-a);
    if (ca.isZero())
      continue;
    for (int b = lowestDeg(ca, small); b <= highestDeg(ca, small); ++b) {
      LaurentPoly cb = coeffOf(ca, small, b);
      if (cb.isZero())
        continue;
      if (b != a)
        throw DivisibilityViolation("trig ratio: off-diagonal term");
      auto qout = cb.divideExact(div);
      if (!qout)
        throw DivisibilityViolation("gamma^" + std::string(sgn > 0 ? "+" : "-") + "_" +
                                    std::to_string(a) + " not divisible by (1-q1)(1-q2)");
      out[a] = *qout;
    }
  }
  return out;
}

DSeries cohRatio(int maxA)
{
  int N = maxA;
  LaurentPoly w = mono("w"), t = tSum(), e = t1t2(), neg1 = LaurentPoly(Rat(-1));
  auto L = [&](const LaurentPoly& zc, const LaurentPoly& rest) {
    return BigSeries::linear(zc, rest, 1, N);
  };
  // zeta(z-w) = 1 + D / ((z-w)(z-w+t))
  DSeries zPlus{BigSeries::one(N), (L(LaurentPoly(1), neg1 * w) * L(LaurentPoly(1), t - w)).inv()};
  // zeta(w-z) = 1 + D / ((w-z)(w-z+t))
  DSeries zMinus{BigSeries::one(N), (L(neg1, w) * L(neg1, w + t)).inv()};
  return zPlus.mul(zMinus.inv(e), e);
}

DSeries kthRatio(int maxA)
{
  int N = maxA;
  LaurentPoly w = mono("w"), q = qPoly(), e = qFactor(), neg1 = LaurentPoly(Rat(-1));
  auto L = [&](const LaurentPoly& zc, const LaurentPoly& rest) {
    return BigSeries::linear(zc, rest, 1, N);
  };
  // zeta(z/w) = 1 + z w D / ((w-z)(w-zq))
  DSeries zPlus{BigSeries::one(N),
                L(w, LaurentPoly{}) * (L(neg1, w) * L(neg1 * q, w)).inv()};
  // zeta(w/z) = 1 + w z D / ((z-w)(z-wq))
  DSeries zMinus{BigSeries::one(N),
                 L(w, LaurentPoly{}) * (L(LaurentPoly(1), neg1 * w) *
                                        L(LaurentPoly(1), neg1 * w * q))
                                           .inv()};
  return zPlus.mul(zMinus.inv(e), e);
}

// ---- exact kernels --------------------------------------------------------

RatFn zetaRational(bool tilde)
{
  LaurentPoly x = mono("x"), t1 = mono("t1"), t2 = mono("t2"), t = tSum();
  if (!tilde)
    return {(x + t1) * (x + t2), x * (x + t)};
  return {(x + t1) * (x + t2) * (x - t), x};
}

RatFn zetaTrig(bool tilde)
{
  LaurentPoly one(1), x = mono("x"), q1 = mono("q1"), q2 = mono("q2"), q = qPoly(),
              xi = mono("x", -1);
  if (!tilde)
    return {(one - x * q1) * (one - x * q2), (one - x) * (one - x * q)};
  return {(one - x * q1) * (one - x * q2) * (one - xi * q), one - x};
}

Mero zetaE(const Coef& x, int ze, int we, bool tilde)
{
  Mero m;
  m.mulTheta(x * Coef::mono(Monomial::var("q1")), ze, we);
  m.mulTheta(x * Coef::mono(Monomial::var("q2")), ze, we);
  m.mulTheta(x, ze, we, -1);
  m.mulTheta(x * Coef::mono(qMono()), ze, we, tilde ? 0 : -1);
  if (tilde)
    m.mulTheta(x.inv() * Coef::mono(qMono()), -ze, -we);
  return m;
}

DRat zetaCoh(bool colored)
{
  LaurentPoly x = mono("x");
  LaurentPoly t = colored ? mono("tr") : tSum();
  return {RatFn::poly(LaurentPoly(1)), {LaurentPoly(1), x * (x + t)}};
}

DRat zetaKth(bool colored)
{
  LaurentPoly one(1), x = mono("x");
  LaurentPoly q = colored ? mono("qr") : qPoly();
  return {RatFn::poly(one), {x, (one - x) * (one - x * q)}};
}

DRat zetaCohTilde(int sign)
{
  LaurentPoly x = mono("x"), tr = mono("tr"), tb = mono("tb");
  RatFn f = RatFn::poly(sign > 0 ? (x + tr) * (x - tb) : (x - tr) * (x + tb));
  DRat z = zetaCoh(true);
  return {z.a * f, z.b * f};
}

DRat zetaKthTilde(int sign)
{
  LaurentPoly one(1), x = mono("x"), xi = mono("x", -1), qr = mono("qr"), qb = mono("qb");
  RatFn f = RatFn::poly(sign > 0 ? (one - x * qr) * (one - xi * qb)
                                 : (one - xi * qr) * (one - x * qb));
  DRat z = zetaKth(true);
  return {z.a * f, z.b * f};
}

RatFn projectDiagonal(const RatFn& f, bool kTheory)
{
  if (kTheory) {
    LaurentPoly q = qPoly();
    return f.substPoly("qr", q).substPoly("qb", q);
  }
  LaurentPoly t = tSum();
  return f.substPoly("tr", t).substPoly("tb", t);
}

// ---- degenerations --------------------------------------------------------

RatFn meroAtPZero(const Mero& m, char var)
{
  if (!m.tags.empty())
    throw std::logic_error("meroAtPZero: tagged expression");
  if (m.pre.pk < 0)
    throw AutomorphyError("meroAtPZero: negative p-power prefactor");
  if (m.pre.pk > 0)
    return {LaurentPoly{}, LaurentPoly(1)};
  int vp = var == 'z' ? m.zp : m.wp;
  if ((var == 'z' ? m.wp : m.zp) != 0)
    throw std::logic_error("meroAtPZero: expression is not univariate");
  RatFn r = RatFn::poly(LaurentPoly::term(m.pre.c, m.pre.m * Monomial::var("x", vp)));
  for (auto& f : m.fs) {
    int a = var == 'z' ? f.ze : f.we;
    if ((var == 'z' ? f.we : f.ze) != 0)
      throw std::logic_error("meroAtPZero: expression is not univariate");
    if (f.A.pk < 0)
      throw AutomorphyError("meroAtPZero: factor argument diverges at p=0");
    LaurentPoly base =
        f.A.pk > 0 ? LaurentPoly(1)
                   : LaurentPoly(1) - LaurentPoly::term(f.A.c, f.A.m * Monomial::var("x", a));
    RatFn fac = RatFn::poly(base);
    for (int i = 0; i < std::abs(f.e); ++i)
      r = f.e > 0 ? r * fac : r / fac;
  }
  return r;
}

std::pair<int, LaurentPoly> epsLeading(const LaurentPoly& p,
                                       const std::map<std::string, LaurentPoly>& additive,
                                       int maxOrd)
{
  std::vector<LaurentPoly> eps(maxOrd + 1);
  for (auto& [m, c] : p.t) {
    LaurentPoly expo;
    for (auto& [s, k] : m.e) {
      auto it = additive.find(s);
      if (it == additive.end())
        throw std::logic_error("epsLeading: no additive image for symbol " + s);
      expo += LaurentPoly(Rat(k)) * it->second;
    }
    // exp(eps * expo), truncated
    LaurentPoly powk(c);
    Rat fact(1);
    for (int k = 0; k <= maxOrd; ++k) {
      if (k > 0) {
        powk = powk * expo;
        fact *= k;
      }
      eps[k] += powk * LaurentPoly(Rat(1) / fact);
    }
  }
  for (int k = 0; k <= maxOrd; ++k)
    if (!eps[k].isZero())
      return {k, eps[k]};
  throw std::logic_error("epsLeading: vanishes to the probed order");
}

RatFn rationalLimit(const RatFn& f)
{
  std::map<std::string, LaurentPoly> additive = {
      {"x", mono("x")}, {"q1", mono("t1")}, {"q2", mono("t2")}};
  auto [on, ln] = epsLeading(f.num, additive);
  auto [od, ld] = epsLeading(f.den, additive);
  (void)on;
  (void)od;
  return {ln, ld};
}

} // namespace ellq
