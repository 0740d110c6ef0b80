// Theta factors as sections: low-order truncations, quasi-periodicity and
// inversion identities, automorphy bookkeeping, and theta of a K-class.

#include "ellq/theta.hpp"

#include <gtest/gtest.h>

using namespace ellq;

namespace {

ParamSpec spec(std::uint64_t seed = 41, int rank = 3)
{
  return sampleParamSpec(seed, rank);
}

Monomial sym(const std::string& s, int k = 1) { return Monomial::var(s, k); }

Mero thetaZ(const Coef& A = Coef{}, int e = 1)
{
  Mero m;
  m.mulTheta(A, 1, 0, e);
  return m;
}

} // namespace

TEST(ThetaSeries, ModP)
{
  MeroEval ev(spec());
  BiSeries s = ev.evaluate(thetaZ(), {0, 4});
  EXPECT_EQ(s.at(0, 0).c[0], LaurentPoly(Rat(1)));
  EXPECT_EQ(s.at(1, 0).c[0], LaurentPoly(Rat(-1)));
  for (int n : {-2, -1, 2, 3})
    EXPECT_TRUE(s.at(n, 0).isZero());
}

// theta(z) mod p^2 = (1-z) - p (1-z)^3 / z
TEST(ThetaSeries, ModPSquared)
{
  MeroEval ev(spec());
  BiSeries s = ev.evaluate(thetaZ(), {1, 4});
  std::map<int, Rat> order1 = {{-1, Rat(-1)}, {0, Rat(3)}, {1, Rat(-3)}, {2, Rat(1)}};
  for (int n = -4; n <= 4; ++n) {
    Rat want = order1.count(n) ? order1[n] : Rat(0);
    EXPECT_EQ(s.at(n, 0).truncate(1).c[1], LaurentPoly(want)) << "z^" << n;
  }
}

TEST(ThetaSeries, VanishesAtOne)
{
  MeroEval ev(spec());
  Mero m;
  m.mulTheta(Coef::rational(Rat(1)), 0, 0);
  EXPECT_TRUE(ev.evaluate(m, {8, 2}).isZero());
}

// theta(z p) + theta(z)/z = 0  and  p theta(z/p) + z theta(z) = 0
TEST(ThetaSeries, QuasiPeriodicity)
{
  MeroEval ev(spec());
  EvalOptions opt{8, 6};
  Mero m = thetaZ(Coef::mono(sym("u1")));
  BiSeries up = ev.evaluate(m.pShift('z'), opt);
  BiSeries base = ev.evaluate(m, opt);
  EXPECT_TRUE((up + base.shifted(-1, 0).scaledP(
                        PSeries(opt.np, LaurentPoly(Rat(1) / ev.params().value("u1")))))
                  .isZero());

  Mero down = thetaZ(Coef{Rat(1), -1, sym("u1")}); // theta(z u1 / p)
  down.mulCoef(Coef{Rat(1), 1, {}});
  Mero other = thetaZ(Coef::mono(sym("u1")));
  other.mulMono(1, 0, Coef::mono(sym("u1")));
  BiSeries lhs = ev.evaluate(down, opt);
  BiSeries rhs = ev.evaluate(other, opt);
  EXPECT_TRUE((lhs + rhs).isZero());
}

// theta(z^-1) + z^-1 theta(z) = 0
TEST(ThetaSeries, Inversion)
{
  MeroEval ev(spec());
  EvalOptions opt{8, 6};
  Mero m;
  m.mulTheta(Coef::rational(Rat(1)), -1, 0);
  BiSeries lhs = ev.evaluate(m, opt);
  BiSeries rhs = ev.evaluate(thetaZ(), opt).shifted(-1, 0);
  EXPECT_TRUE((lhs + rhs).isZero());
}

TEST(Automorphy, BasicSections)
{
  MeroEval ev(spec());

  EXPECT_EQ(sectionClass(ev, thetaZ(), 'z'),
            (AutomorphyFactor{1, Coef::rational(Rat(-1))}));

  // theta(z x1) theta(z x2) / theta(z y1) -> (1, -x1 x2 / y1)
  Mero m = thetaZ(Coef::mono(sym("u1")));
  m.mulTheta(Coef::mono(sym("u2")), 1, 0);
  m.mulTheta(Coef::mono(sym("L1")), 1, 0, -1);
  AutomorphyFactor a = sectionClass(ev, m, 'z');
  EXPECT_EQ(a.n, 1);
  EXPECT_EQ(a.lambda, (Coef{Rat(-1), 0, sym("u1") * sym("u2") * sym("L1", -1)}));

  // z^k -> (0, p^-k)
  Mero zk;
  zk.mulMono(3, 0);
  EXPECT_EQ(sectionClass(ev, zk, 'z'), (AutomorphyFactor{0, Coef{Rat(1), -3, {}}}));
}

TEST(Automorphy, MonoidHomomorphism)
{
  MeroEval ev(spec());
  Mero a = thetaZ(Coef::mono(sym("u1")), 2);
  a.mulMono(-1, 0);
  Mero b = thetaZ(Coef::mono(sym("L1", -1)), -1);
  b.mulTheta(Coef::mono(sym("u2")), 1, 0);
  Mero ab = a;
  ab.mulMero(b);
  EXPECT_EQ(sectionClass(ev, ab, 'z'),
            sectionClass(ev, a, 'z') * sectionClass(ev, b, 'z'));
}

// A ratio of automorphy class (0, 1) has a p-shift-invariant expansion.
TEST(Automorphy, TrivialClassIsInvariant)
{
  MeroEval ev(spec());
  EvalOptions opt{6, 6};
  Mero m = thetaZ(Coef::mono(sym("u1")));
  m.mulTheta(Coef::mono(sym("u1", -1)), 1, 0);
  m.mulTheta(Coef::mono(sym("u2")), 1, 0, -1);
  m.mulTheta(Coef::mono(sym("u2", -1)), 1, 0, -1);
  EXPECT_EQ(sectionClass(ev, m, 'z'), AutomorphyFactor{});
  EXPECT_TRUE(BiSeries::agree(ev.evaluate(m.pShift('z'), opt), ev.evaluate(m, opt)));
}

TEST(KClassOps, DualAndRankDet)
{
  KClass U = KClass::universal(3);
  EXPECT_EQ(U.rank(), 3);
  EXPECT_EQ(U.det(), sym("u1") * sym("u2") * sym("u3"));
  EXPECT_EQ(U.dual().dual(), U);
  EXPECT_EQ(U.dual().rank(), 3);
  EXPECT_EQ(U.dual().det(), U.det().inv());

  KClass D = KClass::diagonalKoszul();
  EXPECT_EQ(D.rank(), 0);
  EXPECT_EQ(D.det(), Monomial{});

  // q . dual(O_Delta) = O_Delta
  EXPECT_EQ(D.dual().scaled(qMono()), D);

  // dual(U) . (q - 1) has rank 0 and determinant q^r
  KClass twist = U.dual().scaled(qMono()) - U.dual();
  EXPECT_EQ(twist.rank(), 0);
  EXPECT_EQ(twist.det(), qMono().pow(3));
}

TEST(KClassOps, AddScaled)
{
  KClass U = KClass::universal(2);
  KClass D = KClass::diagonalKoszul();
  KClass plus = U.addScaled(D, sym("z"));
  EXPECT_EQ(plus.rank(), U.rank());
  EXPECT_EQ(plus.det(), U.det()); // det D = 1, rank D = 0
  EXPECT_EQ(plus.w.at(sym("z")), 1);
  EXPECT_EQ(plus.w.at(sym("z") * sym("L1")), -1);
  EXPECT_EQ(plus.w.at(sym("z") * L2Mono()), -1);
  EXPECT_EQ(plus.w.at(sym("z") * qMono()), 1);

  KClass minus = U.addScaled(D, sym("z"), -1);
  EXPECT_EQ(minus + KClass{}.addScaled(D, sym("z")), U);
  EXPECT_EQ(KClass{}.addScaled(U, Monomial{}), U);

  // rank and det composition, with the scaled det picking up s^rank
  KClass V = KClass::universal(2).scaled(sym("q1")) + KClass::weight(sym("L1"));
  KClass sum = U.addScaled(V, sym("w"));
  EXPECT_EQ(sum.rank(), U.rank() + V.rank());
  EXPECT_EQ(sum.det(), U.det() * V.det() * sym("w", V.rank()));
}

TEST(ThetaOfClass, SingleWeightAndKoszul)
{
  MeroEval ev(spec());
  EvalOptions opt{6, 6};

  // theta(u1 / z)
  BiSeries got =
      ev.evaluate(thetaOfClass(KClass::weight(sym("u1")), Coef{}, -1, 0), opt);
  Mero direct;
  direct.mulTheta(Coef::mono(sym("u1")), -1, 0);
  EXPECT_TRUE(BiSeries::agree(got, ev.evaluate(direct, opt)));

  // theta(-x O_Delta) = theta(x L1) theta(x L2) / (theta(x) theta(x q))
  // at x = u1 z; x = z itself would put the zeta pole on the expansion circle
  Coef x = Coef::mono(sym("u1"));
  Mero zeta = zetaEll(x, 1, 0);
  Mero explicitRatio;
  explicitRatio.mulTheta(x * Coef::mono(sym("L1")), 1, 0);
  explicitRatio.mulTheta(x * Coef::mono(L2Mono()), 1, 0);
  explicitRatio.mulTheta(x, 1, 0, -1);
  explicitRatio.mulTheta(x * Coef::mono(qMono()), 1, 0, -1);
  EXPECT_TRUE(BiSeries::agree(ev.evaluate(zeta, opt), ev.evaluate(explicitRatio, opt)));
}

// theta(-z/U) = (z^r / det U) theta(-U/z) for a rank-r universal class,
// applying theta(1/X) = -X^-1 theta(X) weight by weight
TEST(ThetaOfClass, DeterminantForm)
{
  int r = 3;
  MeroEval ev(spec(43, r));
  EvalOptions opt{6, 6};
  KClass U = KClass::universal(r);

  // theta(-z/u_i) has argument (-1/u_i) z, hence the dual class with scale -z
  Mero lhs = thetaOfClass(U.dual(), Coef::rational(Rat(-1)), 1, 0);

  Mero rhs = thetaOfClass(U, Coef::rational(Rat(-1)), -1, 0);
  rhs.mulMono(r, 0, Coef::mono(U.det().inv()));

  EXPECT_TRUE(BiSeries::agree(ev.evaluate(lhs, opt), ev.evaluate(rhs, opt)));
}
