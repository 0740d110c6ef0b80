// Kernel checks: gamma coefficient tables against hand-expanded low orders,
// the diagonal-class (D-symbol) ratios against the plain tables, degeneration
// of the theta kernels at p=0 and of the multiplicative kernels to the
// additive ones, and the red/blue symmetries of the sheaf-level kernels.

#include "ellq/kernels.hpp"

#include <gtest/gtest.h>

using namespace ellq;

namespace {

LaurentPoly mono(const std::string& s, int k = 1)
{
  return LaurentPoly::term(Rat(1), Monomial::var(s, k));
}

LaurentPoly tSum() { return mono("t1") + mono("t2"); }
LaurentPoly qInv() { return LaurentPoly::term(Rat(1), qMono().inv()); }

} // namespace

// (z-w+t1)(z-w+t2)(z-w-t) / ((z-w-t1)(z-w-t2)(z-w+t)) with u = z-w equals
// (A-s)/(A+s), A = u^3 + (t1t2 - t^2) u, s = t t1t2; expanding by hand,
//   ratio = 1 - 2 t t1t2 u^-3 + 2 t t1t2 (t1t2 - t^2) u^-5 + O(u^-6)
// and u^-3 = sum_k binom(k+2,2) w^k z^{-3-k} pins the first table entries.
TEST(GammaRational, HandExpandedLowOrders)
{
  auto g = gammaRational(6);
  LaurentPoly t = tSum();

  EXPECT_EQ(g.at({3, 0}), LaurentPoly(Rat(-2)) * t);
  EXPECT_EQ(g.at({4, 1}), LaurentPoly(Rat(-6)) * t);
  EXPECT_EQ(g.at({5, 2}), LaurentPoly(Rat(-12)) * t);
  EXPECT_EQ(g.at({5, 0}),
            LaurentPoly(Rat(2)) * t * (mono("t1") * mono("t2") - t * t));
  // the w z^-3 and z^-4 slots receive no contribution at all
  EXPECT_FALSE(g.count({3, 1}));
  EXPECT_FALSE(g.count({4, 0}));
}

TEST(GammaRational, SymmetricInT1T2)
{
  for (auto& [ab, v] : gammaRational(7))
    EXPECT_EQ(v, swapVars(v, "t1", "t2")) << "gamma_{" << ab.first << ","
                                          << ab.second << "}";
}

TEST(GammaRational, StableUnderDeeperTruncation)
{
  auto g6 = gammaRational(6);
  auto g8 = gammaRational(8);
  for (auto& [ab, v] : g6)
    EXPECT_EQ(v, g8.at(ab));
  for (auto& [ab, v] : g8)
    if (ab.first <= 6)
      EXPECT_TRUE(g6.count(ab)) << "entry lost at lower truncation";
}

// First order of (zq1-w)(zq2-w)(z-wq) / ((z-wq1)(z-wq2)(zq-w)):
// the w/z coefficient is q1+q2+q^-1-q1^-1-q2^-1-q = (1-q1)(1-q2)(q^-1 - 1).
TEST(GammaTrig, FirstCoefficients)
{
  auto gp = gammaTrig(5, +1);
  auto gm = gammaTrig(5, -1);
  LaurentPoly one(1);

  EXPECT_EQ(gp.at(1), qInv() - one);
  EXPECT_EQ(gm.at(1), one - qInv());
}

TEST(GammaTrig, SymmetricInQ1Q2)
{
  for (int sgn : {+1, -1})
    for (auto& [a, v] : gammaTrig(6, sgn))
      EXPECT_EQ(v, swapVars(v, "q1", "q2")) << "sign " << sgn << " a=" << a;
}

TEST(GammaTrig, StableUnderDeeperTruncation)
{
  for (int sgn : {+1, -1}) {
    auto g5 = gammaTrig(5, sgn);
    auto g7 = gammaTrig(7, sgn);
    for (auto& [a, v] : g5)
      EXPECT_EQ(v, g7.at(a));
  }
}

// The diagonal-class ratio expands as 1 + sum gamma_ab w^b z^-a * D: the
// square rule D^2 = t1t2 D strips exactly one factor of t1t2 relative to the
// scalar expansion, so the D coefficients are the plain table entries.
TEST(DiagonalRatio, CohomologicalMatchesGammaTable)
{
  int N = 6;
  DSeries r = cohRatio(N);
  auto g = gammaRational(N);

  EXPECT_EQ(r.a, BigSeries::one(N));
  for (int k = 0; k >= -2; --k)
    EXPECT_TRUE(r.b.coeffZ(k).isZero()) << "z^" << k;
  for (int a = 3; a <= N; ++a) {
    LaurentPoly ca = r.b.coeffZ(-a);
    for (int b = 0; b <= a - 2; ++b) {
      LaurentPoly want = g.count({a, b}) ? g.at({a, b}) : LaurentPoly{};
      EXPECT_EQ(coeffOf(ca, "w", b), want) << "(a,b)=(" << a << "," << b << ")";
    }
  }
}

TEST(DiagonalRatio, KTheoreticMatchesGammaTable)
{
  int N = 6;
  DSeries r = kthRatio(N);
  auto g = gammaTrig(N, +1);

  EXPECT_EQ(r.a, BigSeries::one(N));
  EXPECT_TRUE(r.b.coeffZ(0).isZero());
  for (int a = 1; a <= N; ++a) {
    LaurentPoly ca = r.b.coeffZ(-a);
    for (int b = lowestDeg(ca, "w"); b <= highestDeg(ca, "w"); ++b)
      if (b != a)
        EXPECT_TRUE(coeffOf(ca, "w", b).isZero()) << "off-diagonal " << a << "," << b;
    EXPECT_EQ(coeffOf(ca, "w", a), g.count(a) ? g.at(a) : LaurentPoly{}) << "a=" << a;
  }
}

// Multiplying two D-linear kernels must agree with multiplying their scalar
// specializations D -> e.
TEST(DiagonalRatio, SquareRuleConsistentWithScalarSpecialization)
{
  RatFn eC = RatFn::poly(mono("t1") * mono("t2"));
  DRat zc = zetaCoh(false);
  DRat mc = zc.mul(zc, eC);
  EXPECT_EQ(mc.a + mc.b * eC, (zc.a + zc.b * eC) * (zc.a + zc.b * eC));

  RatFn eK = RatFn::poly((LaurentPoly(1) - mono("q1")) * (LaurentPoly(1) - mono("q2")));
  DRat zk = zetaKth(false);
  DRat mk = zk.mul(zk, eK);
  EXPECT_EQ(mk.a + mk.b * eK, (zk.a + zk.b * eK) * (zk.a + zk.b * eK));
}

// At p=0 every theta factor collapses to (1 - argument), so the elliptic
// kernels must land exactly on the multiplicative ones.
TEST(Degeneration, EllipticKernelAtPZeroIsTrigonometric)
{
  EXPECT_EQ(meroAtPZero(zetaE(Coef::rational(Rat(1)), 1, 0, false), 'z'),
            zetaTrig(false));
  EXPECT_EQ(meroAtPZero(zetaE(Coef::rational(Rat(1)), 1, 0, true), 'z'),
            zetaTrig(true));
}

// x -> exp(eps x), q_i -> exp(eps t_i): the leading eps order of the
// multiplicative kernel reproduces the additive one.  The tilde variant
// picks up a sign because numerator and denominator degenerate at orders of
// opposite parity ((-eps)^3 up top against -eps x below).
TEST(Degeneration, TrigonometricKernelLimitsToRational)
{
  EXPECT_EQ(rationalLimit(zetaTrig(false)), zetaRational(false));
  EXPECT_EQ(rationalLimit(zetaTrig(true)), -zetaRational(true));
}

// Exchanging the red and blue copies of the surface swaps the two tilde
// kernels; the colors themselves only cancel against the diagonal class, so
// the comparison happens after projecting both colors onto it.
TEST(ColoredSymmetry, RedBlueSwapExchangesTildeKernels)
{
  std::map<std::string, std::string> swapT{{"tr", "tb"}, {"tb", "tr"}};
  std::map<std::string, std::string> swapQ{{"qr", "qb"}, {"qb", "qr"}};

  DRat cp = zetaCohTilde(+1), cm = zetaCohTilde(-1);
  EXPECT_EQ(projectDiagonal(renameVars(cp.a, swapT), false),
            projectDiagonal(cm.a, false));
  EXPECT_EQ(projectDiagonal(renameVars(cp.b, swapT), false),
            projectDiagonal(cm.b, false));

  DRat kp = zetaKthTilde(+1), km = zetaKthTilde(-1);
  EXPECT_EQ(projectDiagonal(renameVars(kp.a, swapQ), true),
            projectDiagonal(km.a, true));
  EXPECT_EQ(projectDiagonal(renameVars(kp.b, swapQ), true),
            projectDiagonal(km.b, true));
}

// The polynomial prefactors alone swap under x -> 1/x (multiplicative) or
// x -> -x (additive), with the colors held fixed:
//   (1 - x qr)(1 - qb/x) at 1/x is (1 - qr/x)(1 - x qb), and
//   (x + tr)(x - tb) at -x is (x - tr)(x + tb).
TEST(ColoredSymmetry, ArgumentReflectionExchangesPrefactors)
{
  LaurentPoly xinv = mono("x", -1);
  EXPECT_EQ(zetaKthTilde(+1).a.substPoly("x", xinv), zetaKthTilde(-1).a);
  EXPECT_EQ(zetaKthTilde(-1).a.substPoly("x", xinv), zetaKthTilde(+1).a);

  LaurentPoly negx = LaurentPoly(Rat(-1)) * mono("x");
  EXPECT_EQ(zetaCohTilde(+1).a.substPoly("x", negx), zetaCohTilde(-1).a);
  EXPECT_EQ(zetaCohTilde(-1).a.substPoly("x", negx), zetaCohTilde(+1).a);
}

// The tilde kernel clears the theta(xq) denominator, leaving poles only at
// x in p^Z; the plain kernel keeps a second pole orbit at x = q^-1 p^Z.
TEST(EllipticKernel, TildeVariantHasPolesOnlyAtPowersOfP)
{
  ParamSpec ps = sampleParamSpec(37, 1);
  MeroEval ev(ps);
  EvalOptions opt{8, 4};

  auto rsTilde = ev.annulusResidues(zetaE(Coef::rational(Rat(1)), 1, 0, true), 'z', opt);
  ASSERT_EQ(rsTilde.size(), 1u);
  EXPECT_EQ(rsTilde[0].v0.valueNoP(ps), Rat(1));
  EXPECT_EQ(rsTilde[0].v0.pk, 0);

  auto rsPlain = ev.annulusResidues(zetaE(Coef::rational(Rat(1)), 1, 0, false), 'z', opt);
  ASSERT_EQ(rsPlain.size(), 2u);
  std::set<Rat> locs{rsPlain[0].v0.valueNoP(ps), rsPlain[1].v0.valueNoP(ps)};
  Rat qv = ps.q1 * ps.q2;
  EXPECT_TRUE(locs.count(Rat(1)));
  EXPECT_TRUE(locs.count(Rat(1) / qv));
}
