#include "ellq/laurent.hpp"
#include "ellq/pseries.hpp"

#include <gtest/gtest.h>
#include <random>

using namespace ellq;

namespace {

LaurentPoly randomPoly(std::mt19937_64& rng, int terms)
{
  static const char* syms[] = {"t1", "t2", "q1", "q2", "L1", "u1"};
  std::uniform_int_distribution<int> dn(-6, 6), ds(0, 5), de(-3, 3), dt(1, terms);
  LaurentPoly p;
  int n = dt(rng);
  for (int i = 0; i < n; ++i) {
    Monomial m;
    int nv = ds(rng) % 3;
    for (int v = 0; v < nv; ++v) {
      int k = de(rng);
      if (k)
        m.mulIn(Monomial::var(syms[ds(rng)], k));
    }
    int c = dn(rng);
    if (c)
      p.addTerm(m, Rat(c));
  }
  return p;
}

} // namespace

TEST(Rational, Canonical)
{
  EXPECT_EQ(rat(2, 4), rat(1, 2));
  EXPECT_EQ(rat(-3, -6), rat(1, 2));
  EXPECT_EQ(ratPow(rat(2, 3), -2), rat(9, 4));
  EXPECT_THROW(rat(1, 0), std::invalid_argument);
}

TEST(Monomial, Basics)
{
  Monomial a = Monomial::var("q1") * Monomial::var("q2", -2);
  EXPECT_EQ(a.deg("q2"), -2);
  EXPECT_EQ((a * a.inv()), Monomial{});
  EXPECT_EQ(a.pow(3).deg("q1"), 3);
  EXPECT_THROW(Monomial::var("q"), std::invalid_argument);
  EXPECT_EQ(L2Mono().str(), "L1^-1*q1*q2");
}

TEST(LaurentPoly, RingAxiomsRandomized)
{
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 200; ++i) {
    LaurentPoly a = randomPoly(rng, 4), b = randomPoly(rng, 4), c = randomPoly(rng, 4);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) * c, a * c + b * c);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a - a, LaurentPoly{});
  }
}

TEST(LaurentPoly, MonomialInverseAndPow)
{
  LaurentPoly m = LaurentPoly::term(rat(3, 2), Monomial::var("q1", 2) * Monomial::var("L1", -1));
  EXPECT_EQ(m * m.inv(), LaurentPoly(1));
  EXPECT_EQ(m.pow(-2) * m.pow(2), LaurentPoly(1));
  LaurentPoly twoTerms = LaurentPoly::var("t1") + LaurentPoly(1);
  EXPECT_THROW(twoTerms.inv(), std::domain_error);
}

TEST(LaurentPoly, Substitution)
{
  // (t1 + t2)^2 with t1 -> 2, t2 -> 1/3
  LaurentPoly s = (LaurentPoly::var("t1") + LaurentPoly::var("t2")).pow(2);
  Rat v = s.substRat("t1", Rat(2)).substRat("t2", rat(1, 3)).constantValue();
  EXPECT_EQ(v, rat(49, 9));
  // eps-style substitution of a polynomial
  LaurentPoly e = LaurentPoly::var("x");
  LaurentPoly sub = LaurentPoly::var("t1") + LaurentPoly(1);
  EXPECT_EQ(e.substPoly("x", sub), sub);
}

TEST(LaurentPoly, ExactDivision)
{
  LaurentPoly d = (LaurentPoly(1) - LaurentPoly::var("q1")) * (LaurentPoly(1) - LaurentPoly::var("q2"));
  LaurentPoly g = LaurentPoly::var("t1") - LaurentPoly::var("q2", -1);
  LaurentPoly prod = d * g;
  auto q = prod.divideExact(d);
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(*q, g);
  auto bad = (prod + LaurentPoly(1)).divideExact(d);
  EXPECT_FALSE(bad.has_value());
}

TEST(PSeries, ArithmeticAndInverse)
{
  // (1 - p)^-1 = sum p^k
  PSeries s(8, LaurentPoly(1));
  s.c[1] = LaurentPoly(-1);
  PSeries inv = s.inv();
  for (int k = 0; k <= 8; ++k)
    EXPECT_EQ(inv.c[static_cast<std::size_t>(k)], LaurentPoly(1));
  EXPECT_EQ(s * inv, PSeries::one(8));

  PSeries t = PSeries::pPow(8, 3, LaurentPoly::var("q1"));
  EXPECT_EQ((t * t).c[6], LaurentPoly::var("q1", 2));
  EXPECT_TRUE((t - t).isZero());
}

TEST(PSeries, EvalAtNumericP)
{
  PSeries s(4, LaurentPoly(2));
  s.c[2] = LaurentPoly(rat(1, 3));
  EXPECT_EQ(s.evalP(rat(1, 2)), Rat(2) + rat(1, 12));
}
