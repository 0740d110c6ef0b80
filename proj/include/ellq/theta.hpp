#pragma once

#include "ellq/kclass.hpp"
#include "ellq/mero.hpp"

namespace ellq {

// Split a weight monomial into its z/w exponents and the spectator part.
inline void splitSpectral(const Monomial& m, Monomial& rest, int& ze, int& we)
{
  rest = {};
  ze = we = 0;
  for (auto& [s, k] : m.e) {
    if (s == "z")
      ze = k;
    else if (s == "w")
      we = k;
    else
      rest.e[s] = k;
  }
}

// Multiplicative extension of theta to a K-class, each weight multiplied by
// the (signed) scale:  theta(scale * K) = prod_i theta(scale * k_i)^{mult_i}.
inline Mero thetaOfClass(const KClass& K, const Coef& scale = Coef{}, int ze = 0,
                         int we = 0)
{
  Mero r;
  for (auto& [m, mult] : K.w) {
    Monomial rest;
    int mz, mw;
    splitSpectral(m, rest, mz, mw);
    Coef A = scale * Coef::mono(rest);
    r.mulTheta(A, ze + mz, we + mw, mult);
  }
  return r;
}

// zeta^Ell(x . z^ze w^we) = theta(-x O_Delta) in the Koszul model:
//   theta(x L1) theta(x L2) / (theta(x) theta(x q))
inline Mero zetaEll(const Coef& x, int ze = 0, int we = 0)
{
  return thetaOfClass(KClass{} - KClass::diagonalKoszul(), x, ze, we);
}

// Automorphy class of a ratio of theta factors in one variable: the ratio is
// a section of the degree-n line bundle twisted by lambda, composing as
// (n, lambda) . (m, mu) = (n + m, lambda mu).  In series terms,
//   F(v p) = lambda^-1 v^-n F(v).
struct AutomorphyFactor {
  int n = 0;
  Coef lambda = Coef::rational(Rat(1));

  friend AutomorphyFactor operator*(const AutomorphyFactor& a, const AutomorphyFactor& b)
  {
    return {a.n + b.n, a.lambda * b.lambda};
  }
  bool operator==(const AutomorphyFactor& o) const = default;
  std::string str() const
  {
    return "(" + std::to_string(n) + ", " + lambda.str() + ")";
  }
};

inline AutomorphyFactor sectionClass(const MeroEval& ev, const Mero& m, char var)
{
  Automorphy a = ev.automorphy(m, var);
  if (a.opow != 0)
    throw std::logic_error("sectionClass: factor mixes both variables");
  return {-a.vpow, a.lam.inv()};
}

} // namespace ellq
