#include "ellq/mero.hpp"

namespace ellq {

namespace {

constexpr int INFW = BiSeries::INFW;

// (series, pOff) with actual value p^pOff * series
struct Piece {
  BiSeries s;
  int pOff = 0;
};

BiSeries fullOne(int np)
{
  BiSeries s(np, -INFW, INFW, -INFW, INFW);
  s.set(0, 0, PSeries::one(np));
  return s;
}

PSeries applyPOff(const PSeries& s, int off, int np)
{
  PSeries r(np);
  for (int i = 0; i <= np; ++i) {
    int j = i - off;
    if (j >= 0 && j <= s.np)
      r.c[i] = s.c[j];
  }
  // dropping coefficients below p^0 is an automorphy obstruction
  if (off < 0)
    for (int j = 0; j < -off && j <= s.np; ++j)
      if (!s.c[static_cast<std::size_t>(j)].isZero())
        throw AutomorphyError("negative p-order survives evaluation");
  return r;
}

} // namespace

void MeroEval::checkDirection(const Rat& mag) const
{
  if (mag == 1)
    throw GenericityError("expansion direction undecidable: magnitude exactly 1");
}

MeroEval::FacSeries MeroEval::expandLin(Coef A, int ze, int we, int e, int npWork,
                                        int Wwork) const
{
  Rat v = A.valueNoP(ps_);
  int pk = A.pk;
  if (ellq::isZero(v) || e == 0)
    return {fullOne(npWork), 0};

  if (e > 1 || e < -1) {
    FacSeries base = expandLin(A, ze, we, e > 0 ? 1 : -1, npWork, Wwork);
    FacSeries r{fullOne(npWork), 0};
    for (int i = 0; i < std::abs(e); ++i) {
      r.s = r.s * base.s;
      r.pOff += base.pOff;
    }
    return r;
  }

  if (e == 1) {
    // polynomial factor; a negative p-power is parked in pOff
    int off = std::min(pk, 0);
    BiSeries s(npWork, -INFW, INFW, -INFW, INFW);
    s.set(0, 0, PSeries::pPow(npWork, -off));
    if (pk - off <= npWork)
      s.add(ze, we, PSeries::pPow(npWork, pk - off, LaurentPoly(-v)));
    return {s, off};
  }

  // e == -1
  Rat mag = abs(v) * ratPow(ps_.p, pk);
  checkDirection(mag);
  if (mag > 1) {
    // (1-X)^-1 = -X^-1 (1-X^-1)^-1
    FacSeries inner = expandLin(A.inv(), -ze, -we, -1, npWork, Wwork);
    int off = std::min(-pk, 0);
    BiSeries mono(npWork, -INFW, INFW, -INFW, INFW);
    mono.set(-ze, -we, PSeries::pPow(npWork, -pk - off, LaurentPoly(Rat(-1) / v)));
    return {inner.s * mono, inner.pOff + off};
  }

  // |X| < 1: geometric series sum_j X^j
  if (pk < 0)
    throw AutomorphyError("geometric expansion with negative p-step");
  if (pk == 0 && ze == 0 && we == 0) {
    // exact closed form for a constant factor
    BiSeries s(npWork, -INFW, INFW, -INFW, INFW);
    s.set(0, 0, PSeries(npWork, LaurentPoly(Rat(1) / (1 - v))));
    return {s, 0};
  }
  int J = Wwork + npWork + 1;
  if (pk > 0)
    J = std::min(J, npWork / pk);
  // with a positive p-step the dropped tail sits beyond p^npWork, so the
  // expansion is complete everywhere; only a p^0 tail leaves unknown
  // coefficients past the cutoff
  BiSeries s = (pk > 0)
                   ? BiSeries(npWork, -INFW, INFW, -INFW, INFW)
                   : BiSeries(npWork, ze < 0 ? -J * (-ze) : -INFW, ze > 0 ? J * ze : INFW,
                              we < 0 ? -J * (-we) : -INFW, we > 0 ? J * we : INFW);
  Rat vj(1);
  for (int j = 0; j <= J; ++j) {
    if (j * pk <= npWork)
      s.add(j * ze, j * we, PSeries::pPow(npWork, j * pk, LaurentPoly(vj)));
    vj *= v;
  }
  return {s, 0};
}

MeroEval::FacSeries MeroEval::expandFactor(const Factor& f, int npWork, int Wwork) const
{
  std::ostringstream key;
  key << f.kind << "|" << f.A.str() << "|" << f.ze << "," << f.we << "^" << f.e << "@"
      << npWork << ":" << Wwork;
  if (auto it = cache_.find(key.str()); it != cache_.end())
    return it->second;
  FacSeries r = expandFactorUncached(f, npWork, Wwork);
  cache_.emplace(key.str(), r);
  return r;
}

MeroEval::FacSeries MeroEval::expandFactorUncached(const Factor& f, int npWork,
                                                   int Wwork) const
{
  if (f.kind == Factor::Lin)
    return expandLin(f.A, f.ze, f.we, f.e, npWork, Wwork);

  // theta(X)^e = [(1-X) prod_s (1-p^s X)(1-p^s X^-1) / prod_s (1-p^s)^2]^e
  FacSeries r{fullOne(npWork), 0};
  auto mulIn = [&](const FacSeries& g) {
    r.s = r.s * g.s;
    r.pOff += g.pOff;
  };
  mulIn(expandLin(f.A, f.ze, f.we, f.e, npWork, Wwork));
  for (int s = 1; s <= npWork; ++s) {
    Coef Ap = f.A;
    Ap.pk += s;
    mulIn(expandLin(Ap, f.ze, f.we, f.e, npWork, Wwork));
    Coef Am = f.A.inv();
    Am.pk += s;
    mulIn(expandLin(Am, -f.ze, -f.we, f.e, npWork, Wwork));
    Coef Pc = Coef::rational(Rat(1));
    Pc.pk = s;
    mulIn(expandLin(Pc, 0, 0, -2 * f.e, npWork, Wwork));
  }
  return r;
}

BiSeries MeroEval::evaluate(const Mero& m, const EvalOptions& opt) const
{
  // predict the worst-case negative p-offset so we can carry enough p-orders
  int slack = std::max(0, -m.pre.pk);
  for (auto& f : m.fs)
    if (f.kind == Factor::Lin && f.e > 0 && f.A.pk < 0)
      slack += -f.A.pk * f.e;
  int npOut = opt.np - opt.pAnchor;
  int npWork = npOut + slack;
  int Wwork = opt.W + npWork + std::abs(m.zp) + std::abs(m.wp) + 2;

  // group factors so full-rectangle multiplications happen once, not per factor
  std::vector<const Factor*> consts, zonly, wonly, cross;
  for (auto& f : m.fs) {
    if (f.ze == 0 && f.we == 0)
      consts.push_back(&f);
    else if (f.we == 0)
      zonly.push_back(&f);
    else if (f.ze == 0)
      wonly.push_back(&f);
    else
      cross.push_back(&f);
  }
  auto productOf = [&](const std::vector<const Factor*>& group) {
    Piece r{fullOne(npWork), 0};
    for (auto* f : group) {
      FacSeries g = expandFactor(*f, npWork, Wwork);
      r.s = r.s * g.s;
      r.pOff += g.pOff;
    }
    return r;
  };
  Piece pc = productOf(consts);
  Piece pz = productOf(zonly);
  Piece pw = productOf(wonly);
  Piece px = productOf(cross);

  BiSeries acc = (pz.s * pw.s) * px.s;
  acc = acc * pc.s;
  int pOff = pc.pOff + pz.pOff + pw.pOff + px.pOff + m.pre.pk;

  acc = acc.shifted(m.zp, m.wp);
  Rat pv = m.pre.valueNoP(ps_);
  acc = acc.scaledP(PSeries(npWork, LaurentPoly(pv)));

  BiSeries out(npOut, std::max(acc.zlo, -opt.W), std::min(acc.zhi, opt.W),
               std::max(acc.wlo, -opt.W), std::min(acc.whi, opt.W));
  out.zreg = acc.zreg;
  out.wreg = acc.wreg;
  for (auto& [k, v] : acc.t) {
    if (k.first < out.zlo || k.first > out.zhi || k.second < out.wlo || k.second > out.whi)
      continue;
    PSeries sv = applyPOff(v, pOff - opt.pAnchor, npOut);
    if (!sv.isZero())
      out.t[k] = sv;
  }
  if (pOff < 0) {
    // applyPOff already validated every kept coefficient; coefficients outside
    // the window may legitimately carry negative orders (they were cut away)
  }
  return out;
}

BiSeries MeroEval::evalTagged(const Mero& m, const EvalOptions& opt) const
{
  std::vector<char> shiftVars;
  for (auto& t : m.tags)
    if (t.kind == ExpTag::OneMinusP)
      shiftVars.push_back(t.var);
  std::size_t n = shiftVars.size();
  if (n > 2)
    throw std::logic_error("evalTagged: more than two 1-p tags");
  int anchor = 0;
  BiSeries acc = evalTaggedAnchored(m, opt, anchor);
  if (anchor == opt.pAnchor)
    return acc;
  // rebase to the requested anchor; throws if lower orders survive the sum
  BiSeries out(opt.np - opt.pAnchor, acc.zlo, acc.zhi, acc.wlo, acc.whi);
  out.zreg = acc.zreg;
  out.wreg = acc.wreg;
  for (auto& [k, v] : acc.t) {
    PSeries sv = applyPOff(v, anchor - opt.pAnchor, opt.np - opt.pAnchor);
    if (!sv.isZero())
      out.t[k] = sv;
  }
  return out;
}

BiSeries MeroEval::evalTaggedAt(const std::vector<Mero>& terms, const EvalOptions& opt,
                                int anchor) const
{
  EvalOptions sub = opt;
  sub.pAnchor = anchor;
  BiSeries acc;
  bool first = true;
  for (auto& t : terms) {
    BiSeries term = evaluate(t, sub);
    acc = first ? term : acc + term;
    first = false;
  }
  return acc;
}

BiSeries MeroEval::evalTaggedAnchored(const Mero& m, const EvalOptions& opt,
                                      int& anchorOut) const
{
  std::vector<char> shiftVars;
  for (auto& t : m.tags)
    if (t.kind == ExpTag::OneMinusP)
      shiftVars.push_back(t.var);
  std::size_t n = shiftVars.size();
  if (n > 2)
    throw std::logic_error("evalTagged: more than two 1-p tags");

  // alternating inclusion-exclusion terms, signs folded into the prefactors
  std::vector<Mero> terms;
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    Mero cur = m;
    int bits = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        cur = cur.pShift(shiftVars[i]);
        ++bits;
      }
    if (bits % 2)
      cur.pre.c = -cur.pre.c;
    terms.push_back(std::move(cur));
  }

  // a single term can dip below p^0 exactly by its stripped prefactor order,
  // so that is the natural second guess after the requested anchor
  int guess = opt.pAnchor;
  for (auto& t : terms)
    guess = std::min(guess, t.pre.pk);

  int a = opt.pAnchor;
  bool triedGuess = guess >= opt.pAnchor;
  for (;;) {
    try {
      BiSeries acc = evalTaggedAt(terms, opt, a);
      anchorOut = a;
      return acc;
    } catch (const AutomorphyError&) {
      if (!triedGuess) {
        a = guess;
        triedGuess = true;
      } else {
        --a;
        if (a < guess - 12)
          throw;
      }
    }
  }
}

std::vector<MeroEval::Residue> MeroEval::annulusResidues(const Mero& m, char var,
                                                         const EvalOptions& opt) const
{
  char other = var == 'z' ? 'w' : 'z';
  if (m.dependsOn(other) && var == 'w')
    ; // bivariate residues in w keep z as spectator — allowed
  std::vector<Residue> out;
  const Rat pv = ps_.p;
  for (std::size_t i = 0; i < m.fs.size(); ++i) {
    const Factor& f = m.fs[i];
    if (f.e >= 0)
      continue;
    int a = (var == 'z') ? f.ze : f.we;
    if (a == 0)
      continue;
    if (std::abs(a) != 1)
      throw std::logic_error("annulusResidues: |variable exponent| must be 1");
    if ((var == 'z' ? f.we : f.ze) != 0)
      throw std::logic_error("annulusResidues: cross factor pole");
    if (f.e < -1)
      throw std::logic_error("annulusResidues: higher-order pole");

    auto tryPole = [&](const Coef& v0, const Coef& resFactor) {
      Rat mag = v0.mag(ps_);
      if (!(mag > pv && mag <= 1))
        return;
      Mero rest = m.withoutFactor(i);
      Coef coef = resFactor * v0.inv(); // residue of F dv/(2 pi i v)
      Mero sub = (var == 'z') ? rest.substZConst(v0)
                              : rest.substW(v0, 0); // w -> v0 (constant)
      sub.mulCoef(coef);
      Residue r;
      r.v0 = v0;
      r.value = evaluate(sub, opt);
      out.push_back(std::move(r));
    };

    if (f.kind == Factor::Lin) {
      // pole where A v^a = 1; residue of (1-Av^a)^-1 is -v0/a
      Coef v0 = (a == 1) ? f.A.inv() : f.A;
      Coef rf = v0;
      rf.c = -rf.c; // -v0 ; division by a = +-1 via sign
      if (a == -1)
        rf.c = -rf.c;
      tryPole(v0, rf);
    } else {
      // poles where A v^a = p^k; residue of theta(Av^a)^-1 is
      // (-1)^{k+1} p^{k(k-1)/2} v0 / a
      for (int k = -(2 * opt.np + 6); k <= 2 * opt.np + 6; ++k) {
        Coef v0;
        if (a == 1) {
          v0 = f.A.inv();
          v0.pk += k;
        } else {
          v0 = f.A;
          v0.pk -= k;
        }
        Rat mag = v0.mag(ps_);
        if (!(mag > pv && mag <= 1))
          continue;
        Coef rf = v0;
        rf.pk += k * (k - 1) / 2;
        if (k % 2 == 0)
          rf.c = -rf.c;
        if (a == -1)
          rf.c = -rf.c;
        tryPole(v0, rf);
      }
    }
  }
  return out;
}

DeltaSum MeroEval::bracketResidues(const Mero& m, const EvalOptions& opt) const
{
  DeltaSum out;
  const Rat pv = ps_.p;
  for (std::size_t i = 0; i < m.fs.size(); ++i) {
    const Factor& f = m.fs[i];
    if (f.e >= 0 || !f.cross())
      continue;
    if (f.ze != -f.we)
      throw std::logic_error("bracketResidues: cross factor is not a ratio");
    if (f.e < -1)
      throw std::logic_error("bracketResidues: higher-order mixed pole");
    int b = f.we; // argument = A x^b with x = w/z
    if (std::abs(b) != 1)
      throw std::logic_error("bracketResidues: |ratio exponent| must be 1");

    auto addPole = [&](const Coef& x0, const Coef& rho) {
      Rat mag = x0.mag(ps_);
      if (!(mag > pv && mag <= 1))
        return;
      // contribution:  -(rho/x0) * delta(z x0 / w) * rest|_{w = x0 z}
      Mero rest = m.withoutFactor(i).substW(x0, 1);
      Coef kappa = rho * x0.inv();
      kappa.c = -kappa.c;
      rest.mulCoef(kappa);
      DeltaTerm d;
      d.c = x0.valueNoP(ps_);
      d.cPpow = x0.pk;
      d.profile = evalTagged(rest, opt);
      out.terms.push_back(std::move(d));
    };

    if (f.kind == Factor::Lin) {
      // pole of (1 - A x^b)^-1 at x0 with A x0^b = 1; Res_x = -x0/b
      Coef x0 = (b == 1) ? f.A.inv() : f.A;
      Coef rho = x0;
      rho.c = b == 1 ? -rho.c : rho.c;
      addPole(x0, rho);
    } else {
      for (int k = -(2 * opt.np + 6); k <= 2 * opt.np + 6; ++k) {
        Coef x0;
        if (b == 1) {
          x0 = f.A.inv();
          x0.pk += k;
        } else {
          x0 = f.A;
          x0.pk -= k;
        }
        Rat mag = x0.mag(ps_);
        if (!(mag > pv && mag <= 1))
          continue;
        // Res_{x=x0} theta(A x^b)^-1 = (-1)^{k+1} p^{k(k-1)/2} x0 / b
        Coef rho = x0;
        rho.pk += k * (k - 1) / 2;
        if (k % 2 == 0)
          rho.c = -rho.c;
        if (b == -1)
          rho.c = -rho.c;
        addPole(x0, rho);
      }
    }
  }
  out.normalize();
  return out;
}

Automorphy MeroEval::automorphy(const Mero& m, char var) const
{
  Automorphy a;
  a.lam = Coef::rational(Rat(1));
  for (auto& f : m.fs) {
    if (f.kind != Factor::Theta)
      throw std::logic_error("automorphy: expression is not a theta section");
    int av = (var == 'z') ? f.ze : f.we;
    int ao = (var == 'z') ? f.we : f.ze;
    if (av == 0)
      continue;
    // th(X p^av) = (-1)^av X^-av p^{-av(av-1)/2} th(X)
    Coef piece = f.A.pow(-av);
    if (av % 2)
      piece.c = -piece.c;
    piece.pk += -av * (av - 1) / 2;
    a.lam = a.lam * piece.pow(f.e);
    a.vpow += -av * av * f.e;
    a.opow += -av * ao * f.e;
  }
  a.lam.pk += (var == 'z') ? m.zp : m.wp;
  return a;
}

} // namespace ellq
