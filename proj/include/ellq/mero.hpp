#pragma once

#include "ellq/bilaurent.hpp"
#include "ellq/params.hpp"

#include <unordered_map>

namespace ellq {

struct AutomorphyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coefficient of a factor argument: c * p^pk * m  with c rational, m a
// symbolic monomial in the parameter alphabet.
struct Coef {
  Rat c = Rat(1);
  int pk = 0;
  Monomial m;

  static Coef rational(const Rat& v) { return {v, 0, {}}; }
  static Coef mono(const Monomial& mm, const Rat& v = Rat(1), int pp = 0)
  {
    return {v, pp, mm};
  }

  bool isZero() const { return ellq::isZero(c); }
  Coef operator*(const Coef& o) const { return {c * o.c, pk + o.pk, m * o.m}; }
  Coef inv() const { return {Rat(1) / c, -pk, m.inv()}; }
  Coef pow(int n) const
  {
    Coef r;
    r.c = ratPow(c, n);
    r.pk = pk * n;
    r.m = m.pow(n);
    return r;
  }
  Coef negated() const { return {-c, pk, m}; }
  bool operator==(const Coef& o) const = default;

  // magnitude with symbols specialized, excluding any z/w content
  Rat mag(const ParamSpec& ps) const
  {
    return ps.magnitude(m, c) * ratPow(ps.p, pk);
  }

  // value with symbols specialized (p stays formal via pk)
  Rat valueNoP(const ParamSpec& ps) const
  {
    Rat v = c;
    for (auto& [s, k] : m.e)
      v *= ratPow(ps.value(s), k);
    return v;
  }

  LaurentPoly poly() const { return LaurentPoly::term(c, m); } // drops pk!

  std::string str() const
  {
    std::ostringstream os;
    os << c.get_str();
    if (pk)
      os << "*p^" << pk;
    if (!m.trivial())
      os << "*" << m.str();
    return os.str();
  }
};

// One multiplicative factor of a meromorphic expression:
//   Lin:   (1 - A z^ze w^we)^e
//   Theta: theta(A z^ze w^we)^e      (A kept p-free by quasi-periodicity)
struct Factor {
  enum Kind { Lin, Theta } kind = Lin;
  Coef A;
  int ze = 0, we = 0;
  int e = 1;

  bool cross() const { return ze != 0 && we != 0; }
  bool sameBase(const Factor& o) const
  {
    return kind == o.kind && A == o.A && ze == o.ze && we == o.we;
  }
  std::string str() const
  {
    std::ostringstream os;
    os << (kind == Theta ? "th(" : "(1-") << A.str();
    if (ze)
      os << "*z^" << ze;
    if (we)
      os << "*w^" << we;
    os << ")";
    if (e != 1)
      os << "^" << e;
    return os.str();
  }
};

// Pending expansion to perform, innermost first.  kind OneMinusP is the
// two-circle difference F|_{1-p}; Circle is a plain Laurent expansion near
// the unit circle (used by the h operators).
struct ExpTag {
  char var = 'z';
  enum Kind { OneMinusP, Circle } kind = OneMinusP;
};

// Product of factors with a monomial prefactor and ordered expansion tags.
struct Mero {
  Coef pre;
  int zp = 0, wp = 0;
  std::vector<Factor> fs;
  std::vector<ExpTag> tags;

  static Mero one() { return Mero{}; }

  Mero& mulCoef(const Coef& a)
  {
    pre = pre * a;
    return *this;
  }
  Mero& mulMono(int dz, int dw, const Coef& a = Coef{})
  {
    zp += dz;
    wp += dw;
    pre = pre * a;
    return *this;
  }

  // push a Lin factor as-is
  Mero& mulLin(const Coef& A, int ze, int we, int e = 1)
  {
    if (e == 0 || A.isZero())
      return mulLinTrivial(A, e);
    mergeFactor({Factor::Lin, A, ze, we, e});
    return *this;
  }

  // push a theta factor; canonicalizes orientation and p-content
  Mero& mulTheta(Coef A, int ze, int we, int e = 1)
  {
    if (e == 0)
      return *this;
    if (A.isZero())
      throw std::invalid_argument("Mero::mulTheta: zero argument");
    // strip p-powers:  th(X p^k) = (-1)^k X^-k p^{-k(k-1)/2} th(X)
    int k = A.pk;
    if (k != 0) {
      A.pk = 0;
      Coef fac = A.pow(-k); // X^-k without z,w part
      if (k % 2)
        fac.c = -fac.c;
      fac.pk += -k * (k - 1) / 2;
      pre = pre * fac.pow(e);
      zp += -k * ze * e;
      wp += -k * we * e;
    }
    // orient the argument: leading variable exponent positive.
    // With u the stored argument and X = u^-1 the oriented one,
    // th(u) = th(X^-1) = -X^-1 th(X) = -u th(X).
    bool flip = (ze < 0) || (ze == 0 && we < 0);
    if (flip) {
      Coef fac = A; // -u = (-A) z^ze w^we
      fac.c = -fac.c;
      pre = pre * fac.pow(e);
      zp += ze * e;
      wp += we * e;
      A = A.inv();
      ze = -ze;
      we = -we;
    }
    mergeFactor({Factor::Theta, A, ze, we, e});
    return *this;
  }

  Mero& mulFactor(const Factor& f)
  {
    if (f.kind == Factor::Theta)
      return mulTheta(f.A, f.ze, f.we, f.e);
    return mulLin(f.A, f.ze, f.we, f.e);
  }

  Mero& mulMero(const Mero& o)
  {
    pre = pre * o.pre;
    zp += o.zp;
    wp += o.wp;
    for (auto& f : o.fs)
      mulFactor(f);
    for (auto& t : o.tags)
      tags.push_back(t);
    return *this;
  }

  Mero inverted() const
  {
    if (!tags.empty())
      throw std::logic_error("Mero::inverted: tagged expression");
    Mero r;
    r.pre = pre.inv();
    r.zp = -zp;
    r.wp = -wp;
    r.fs = fs;
    for (auto& f : r.fs)
      f.e = -f.e;
    return r;
  }

  // substitute v -> v*p at the factored level
  Mero pShift(char var) const
  {
    Mero r;
    r.pre = pre;
    r.zp = zp;
    r.wp = wp;
    r.tags = tags;
    r.pre.pk += (var == 'z') ? zp : wp;
    for (auto f : fs) {
      int a = (var == 'z') ? f.ze : f.we;
      f.A.pk += a;
      if (f.kind == Factor::Theta)
        r.mulTheta(f.A, f.ze, f.we, f.e);
      else
        r.mulLin(f.A, f.ze, f.we, f.e);
    }
    return r;
  }

  // substitute w -> C * z^zdeg (zdeg normally 1); removes all w content
  Mero substW(const Coef& C, int zdeg = 1) const
  {
    Mero r;
    r.pre = pre * C.pow(wp);
    r.zp = zp + wp * zdeg;
    r.wp = 0;
    for (auto& t : tags)
      if (t.var != 'w')
        r.tags.push_back(t);
    for (auto f : fs) {
      Coef A = f.A * C.pow(f.we);
      int ze = f.ze + f.we * zdeg;
      if (f.kind == Factor::Theta)
        r.mulTheta(A, ze, 0, f.e);
      else
        r.mulLin(A, ze, 0, f.e);
    }
    return r;
  }

  // substitute z -> constant C (removes all z content)
  Mero substZConst(const Coef& C) const
  {
    Mero r;
    r.pre = pre * C.pow(zp);
    r.zp = 0;
    r.wp = wp;
    for (auto& t : tags)
      if (t.var != 'z')
        r.tags.push_back(t);
    for (auto f : fs) {
      Coef A = f.A * C.pow(f.ze);
      if (f.kind == Factor::Theta)
        r.mulTheta(A, 0, f.we, f.e);
      else
        r.mulLin(A, 0, f.we, f.e);
    }
    return r;
  }

  Mero withoutFactor(std::size_t idx) const
  {
    Mero r = *this;
    r.fs.erase(r.fs.begin() + static_cast<long>(idx));
    return r;
  }

  bool dependsOn(char var) const
  {
    if ((var == 'z' ? zp : wp) != 0)
      return true;
    for (auto& f : fs)
      if ((var == 'z' ? f.ze : f.we) != 0)
        return true;
    return false;
  }

  std::string str() const
  {
    std::ostringstream os;
    os << pre.str();
    if (zp)
      os << "*z^" << zp;
    if (wp)
      os << "*w^" << wp;
    for (auto& f : fs)
      os << " * " << f.str();
    for (auto& t : tags)
      os << " |_" << (t.kind == ExpTag::OneMinusP ? "1-p" : "circ") << "^" << t.var;
    return os.str();
  }

private:
  Mero& mulLinTrivial(const Coef& A, int e)
  {
    if (A.isZero() && e != 0) {
      // (1-0)^e = 1
    }
    return *this;
  }
  void mergeFactor(const Factor& f)
  {
    for (auto& g : fs)
      if (g.sameBase(f)) {
        g.e += f.e;
        if (g.e == 0) {
          g = fs.back();
          fs.pop_back();
        }
        return;
      }
    fs.push_back(f);
  }
};

// ---- evaluation -----------------------------------------------------------

struct EvalOptions {
  int np = 6;   // p-order
  int W = 8;    // requested validity window per variable
  // lowest p-order carried through evaluation (<= 0).  Coefficient i of a
  // returned PSeries is the order pAnchor+i; tagged evaluation lowers this
  // internally when a single inclusion-exclusion term dips below p^0.
  int pAnchor = 0;
};

// Automorphy of a pure theta/monomial section under v -> v*p:
//   F(..v p..) = lam * p^{lamP} * v^{vpow} * (other var)^{opow} * F
struct Automorphy {
  Coef lam;
  int vpow = 0;
  int opow = 0;
};

class MeroEval {
public:
  MeroEval(const ParamSpec& ps) : ps_(ps) {}

  const ParamSpec& params() const { return ps_; }

  BiSeries evaluate(const Mero& m, const EvalOptions& opt) const;

  // evaluate honoring the 1-p tags by inclusion-exclusion over p-shifts
  BiSeries evalTagged(const Mero& m, const EvalOptions& opt) const;

  // like evalTagged, but instead of insisting the result fits above
  // opt.pAnchor, report the anchor actually used (coefficient i of a returned
  // PSeries is the order anchorOut+i)
  BiSeries evalTaggedAnchored(const Mero& m, const EvalOptions& opt, int& anchorOut) const;

  // Poles and residues of F(v) dv / (2 pi i v) inside the annulus p < |v| <= 1.
  // F must be univariate in `var`; returns (location, residue-series) pairs,
  // residues as univariate BiSeries in the surviving variable (or constants).
  struct Residue {
    Coef v0;
    BiSeries value;
  };
  std::vector<Residue> annulusResidues(const Mero& m, char var, const EvalOptions& opt) const;

  // Difference of the two nested expansion orders of a bivariate tagged
  // expression whose z/w mixing is through ratio factors only: a sum of
  // formal deltas  delta(z x0 / w) * profile(z).
  DeltaSum bracketResidues(const Mero& m, const EvalOptions& opt) const;

  Automorphy automorphy(const Mero& m, char var) const;

private:
  ParamSpec ps_;

  struct FacSeries {
    BiSeries s;
    int pOff = 0; // actual factor = p^pOff * s
  };

  mutable std::unordered_map<std::string, FacSeries> cache_;

  FacSeries expandFactor(const Factor& f, int npWork, int Wwork) const;
  FacSeries expandFactorUncached(const Factor& f, int npWork, int Wwork) const;
  FacSeries expandLin(Coef A, int ze, int we, int e, int npWork, int Wwork) const;
  void checkDirection(const Rat& mag) const;
  BiSeries evalTaggedAt(const std::vector<Mero>& terms, const EvalOptions& opt,
                        int anchor) const;
};

} // namespace ellq
