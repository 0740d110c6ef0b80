// Expansion engine checks: theta series against the triple-product sum,
// residues in the annulus, the two-circle difference expansion, and the
// delta terms produced by commuting the two expansion orders.

#include "ellq/mero.hpp"

#include <gtest/gtest.h>

using namespace ellq;

namespace {

ParamSpec spec(std::uint64_t seed = 11)
{
  return sampleParamSpec(seed, 2);
}

Monomial sym(const std::string& s, int k = 1)
{
  Monomial m;
  m.e[s] = k;
  return m;
}

PSeries constSeries(int np, const Rat& v)
{
  return PSeries(np, LaurentPoly(v));
}

// (p;p)_inf^3 truncated to order np
PSeries eulerCubed(int np)
{
  PSeries e = PSeries::one(np);
  for (int s = 1; s <= np; ++s) {
    PSeries f = PSeries::one(np);
    f.c[s] = LaurentPoly(Rat(-1));
    e = e * f;
  }
  return e * e * e;
}

} // namespace

// theta(x) = (1-x) prod_{s>=1} (1-p^s x)(1-p^s/x)/(1-p^s)^2 satisfies the
// Jacobi sum identity  (p;p)^3 theta(x) = sum_n (-1)^n p^{n(n-1)/2} x^n.
TEST(Theta, TripleProductSum)
{
  ParamSpec ps = spec();
  MeroEval ev(ps);
  EvalOptions opt{10, 6};

  for (Rat a : {Rat(1), ps.value("u1")}) {
    Mero m;
    m.mulTheta(Coef::rational(a), 1, 0);
    BiSeries th = ev.evaluate(m, opt).scaledP(eulerCubed(opt.np));

    BiSeries want(opt.np, th.zlo, th.zhi, th.wlo, th.whi);
    for (int n = -opt.W; n <= opt.W; ++n) {
      int k = n * (n - 1) / 2;
      if (k > opt.np)
        continue;
      Rat coef = ratPow(a, n);
      if (n % 2)
        coef = -coef;
      want.set(n, 0, PSeries::pPow(opt.np, k, LaurentPoly(coef)));
    }
    EXPECT_TRUE(BiSeries::agree(th, want)) << "a=" << a.get_str();
  }
}

// theta(p x) = -x^-1 theta(x): the factored-level shift must match the
// evaluated series, and automorphy() must report the same multiplier.
TEST(Theta, QuasiPeriodicityOfSeries)
{
  ParamSpec ps = spec(3);
  MeroEval ev(ps);
  EvalOptions opt{8, 6};

  Mero m;
  m.mulTheta(Coef::mono(sym("L1")), 1, 0);

  BiSeries s = ev.evaluate(m, opt);
  BiSeries shifted = ev.evaluate(m.pShift('z'), opt);
  Rat lam = Rat(-1) / ps.value("L1");
  BiSeries want = s.shifted(-1, 0).scaledP(constSeries(opt.np, lam));
  EXPECT_TRUE(BiSeries::agree(shifted, want));

  Automorphy a = ev.automorphy(m, 'z');
  EXPECT_EQ(a.vpow, -1);
  EXPECT_EQ(a.lam.pk, 0);
  EXPECT_EQ(a.lam.valueNoP(ps), lam);
}

// Res_{z=1} theta(z)^-1 dz/(2 pi i z) = -1, exactly at every p-order.
TEST(Residues, ThetaInverseUnitPole)
{
  MeroEval ev(spec(5));
  EvalOptions opt{12, 4};

  Mero m;
  m.mulTheta(Coef::rational(Rat(1)), 1, 0, -1);
  auto rs = ev.annulusResidues(m, 'z', opt);
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs[0].v0.valueNoP(ev.params()), Rat(1));
  EXPECT_EQ(rs[0].v0.pk, 0);
  EXPECT_EQ(rs[0].value.at(0, 0).truncate(opt.np), constSeries(opt.np, Rat(-1)));
  for (auto& [k, v] : rs[0].value.t)
    if (k != std::pair{0, 0})
      EXPECT_TRUE(v.isZero());
}

// Two-circle difference of 1/(1 - c/z) with p < |c| < 1:
//   sum_{k>=0} c^k z^-k  +  sum_{k>=1} (p/c)^k z^k
TEST(Residues, TwoCircleDifferenceGeometric)
{
  ParamSpec ps = spec(7);
  MeroEval ev(ps);
  EvalOptions opt{8, 8};
  Rat c = ps.value("u1");

  Mero m;
  m.mulLin(Coef::mono(sym("u1")), -1, 0, -1);
  m.tags.push_back({'z', ExpTag::OneMinusP});
  BiSeries got = ev.evalTagged(m, opt);

  BiSeries want(opt.np, got.zlo, got.zhi, got.wlo, got.whi);
  for (int k = 0; k <= opt.W; ++k)
    want.set(-k, 0, constSeries(opt.np, ratPow(c, k)));
  for (int k = 1; k <= std::min(opt.W, opt.np); ++k)
    want.set(k, 0, PSeries::pPow(opt.np, k, LaurentPoly(ratPow(c, -k))));
  EXPECT_TRUE(BiSeries::agree(got, want));
}

// Constant-term difference between the unit circle and the circle |z| = p
// equals the sum of the residues picked up in between.
TEST(Residues, AnnulusReconstruction)
{
  ParamSpec ps = spec(13);
  MeroEval ev(ps);
  EvalOptions opt{8, 10};

  Mero m;
  m.mulTheta(Coef::mono(sym("L1")), 1, 0);
  m.mulLin(Coef::mono(sym("u1")), -1, 0, -1);   // pole at z = u1
  m.mulLin(Coef::mono(sym("u2", -1)), 1, 0, -1); // pole at z = u2

  PSeries outer = ev.evaluate(m, opt).at(0, 0);
  PSeries inner = ev.evaluate(m.pShift('z'), opt).at(0, 0);

  auto rs = ev.annulusResidues(m, 'z', opt);
  ASSERT_EQ(rs.size(), 2u);
  PSeries sum(opt.np);
  for (auto& r : rs)
    sum = sum + r.value.at(0, 0).truncate(opt.np);
  EXPECT_EQ((outer - inner).truncate(opt.np), sum);
}

// The |w|<|z| and |w|>|z| expansions of (1 - u1 z/w)^-1 differ by the
// bilateral sum -delta(u1 z/w); bracketResidues reports exactly that term.
TEST(Bracket, GeometricDelta)
{
  ParamSpec ps = spec(17);
  MeroEval ev(ps);
  EvalOptions opt{6, 6};

  Mero m;
  m.mulLin(Coef::mono(sym("u1")), 1, -1, -1);
  m.tags.push_back({'w', ExpTag::OneMinusP});
  DeltaSum ds = ev.bracketResidues(m, opt);
  ds.normalize();

  ASSERT_EQ(ds.terms.size(), 1u);
  EXPECT_EQ(ds.terms[0].c, ps.value("u1"));
  EXPECT_EQ(ds.terms[0].cPpow, 0);
  EXPECT_EQ(ds.terms[0].profile.at(0, 0).truncate(opt.np),
            constSeries(opt.np, Rat(-1)));

  // opposite orientation: the pole sits outside the annulus, no delta
  Mero n;
  n.mulLin(Coef::mono(sym("u1")), -1, 1, -1);
  n.tags.push_back({'w', ExpTag::OneMinusP});
  EXPECT_TRUE(ev.bracketResidues(n, opt).terms.empty());
}

// Same for theta(z/w)^-1: only the p^0 zero lands in the annulus, giving
// -delta(z/w), and z-only spectator factors become the profile.
TEST(Bracket, ThetaDeltaWithProfile)
{
  ParamSpec ps = spec(19);
  MeroEval ev(ps);
  EvalOptions opt{6, 6};

  Mero m;
  m.mulTheta(Coef::rational(Rat(1)), 1, -1, -1);
  m.mulTheta(Coef::mono(sym("L1")), 1, 0);
  m.tags.push_back({'w', ExpTag::OneMinusP});
  DeltaSum ds = ev.bracketResidues(m, opt);
  ds.normalize();

  ASSERT_EQ(ds.terms.size(), 1u);
  EXPECT_EQ(ds.terms[0].c, Rat(1));
  EXPECT_EQ(ds.terms[0].cPpow, 0);

  Mero spectator;
  spectator.mulTheta(Coef::mono(sym("L1")), 1, 0);
  spectator.mulCoef(Coef::rational(Rat(-1)));
  BiSeries want = ev.evaluate(spectator, opt);
  EXPECT_TRUE(BiSeries::agree(ds.terms[0].profile, want));
}

// Entire cross factors commute with either expansion order: no delta terms.
TEST(Bracket, EntireExpressionHasNoDelta)
{
  MeroEval ev(spec(23));
  EvalOptions opt{6, 6};

  Mero m;
  m.mulTheta(Coef::mono(sym("u1")), 1, -1, 2);
  m.mulTheta(Coef::mono(sym("L1")), 0, 1);
  m.tags.push_back({'w', ExpTag::OneMinusP});
  EXPECT_TRUE(ev.bracketResidues(m, opt).terms.empty());
}

// Products evaluate multiplicatively.
TEST(Evaluate, Multiplicative)
{
  MeroEval ev(spec(29));
  EvalOptions opt{6, 6};

  Mero a;
  a.mulTheta(Coef::mono(sym("u1")), 1, 1);
  Mero b;
  b.mulLin(Coef::mono(sym("u2")), 0, -1, -1);
  b.mulMono(1, 0, Coef::mono(sym("L1")));
  Mero prod = a;
  prod.mulMero(b);

  BiSeries lhs = ev.evaluate(prod, opt);
  BiSeries rhs = ev.evaluate(a, opt) * ev.evaluate(b, opt);
  EXPECT_TRUE(BiSeries::agree(lhs, rhs));
}

// A plain Circle tag is a no-op for an expression regular on the circle.
TEST(Evaluate, CircleTagMatchesUntagged)
{
  MeroEval ev(spec(31));
  EvalOptions opt{6, 6};

  Mero m;
  m.mulTheta(Coef::mono(sym("u1")), 1, 0);
  m.mulLin(Coef::mono(sym("u2")), -1, 0, -1);
  Mero tagged = m;
  tagged.tags.push_back({'z', ExpTag::Circle});
  EXPECT_TRUE(BiSeries::agree(ev.evalTagged(tagged, opt), ev.evaluate(m, opt)));
}
