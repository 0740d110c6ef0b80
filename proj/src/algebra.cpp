#include "ellq/algebra.hpp"

#include <fstream>

namespace ellq {

namespace {

LaurentPoly mono(const std::string& s, int k = 1)
{
  return LaurentPoly::term(Rat(1), Monomial::var(s, k));
}

LaurentPoly qPoly() { return LaurentPoly::term(Rat(1), qMono()); }
LaurentPoly qFactor()
{
  return (LaurentPoly(1) - mono("q1")) * (LaurentPoly(1) - mono("q2"));
}

} // namespace

// ---- noncommutative polynomials -------------------------------------------

std::string Gen::str() const
{
  std::string s(1, kind);
  if (kind == 'h' && sign != 0)
    s += sign > 0 ? '+' : '-';
  return s + "_" + std::to_string(index);
}

NCPoly NCPoly::scalar(const LaurentPoly& c)
{
  NCPoly r;
  if (!c.isZero())
    r.t[{}] = c;
  return r;
}

NCPoly NCPoly::letter(const Gen& g, const LaurentPoly& c)
{
  NCPoly r;
  if (!c.isZero())
    r.t[{g}] = c;
  return r;
}

NCPoly& NCPoly::operator+=(const NCPoly& o)
{
  for (auto& [w, c] : o.t) {
    LaurentPoly& acc = t[w];
    acc += c;
    if (acc.isZero())
      t.erase(w);
  }
  return *this;
}

NCPoly NCPoly::operator+(const NCPoly& o) const
{
  NCPoly r = *this;
  r += o;
  return r;
}

NCPoly NCPoly::operator-(const NCPoly& o) const
{
  return *this + o.scaled(LaurentPoly(Rat(-1)));
}

NCPoly NCPoly::operator*(const NCPoly& o) const
{
  NCPoly r;
  for (auto& [wa, ca] : t)
    for (auto& [wb, cb] : o.t) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      LaurentPoly& acc = r.t[w];
      acc += ca * cb;
      if (acc.isZero())
        r.t.erase(w);
    }
  return r;
}

NCPoly NCPoly::scaled(const LaurentPoly& c) const
{
  NCPoly r;
  if (c.isZero())
    return r;
  for (auto& [w, v] : t)
    r.t[w] = v * c;
  return r;
}

NCPoly NCPoly::mapCoeffs(const std::function<LaurentPoly(const LaurentPoly&)>& f) const
{
  NCPoly r;
  for (auto& [w, v] : t) {
    LaurentPoly c = f(v);
    if (!c.isZero())
      r.t[w] = c;
  }
  return r;
}

bool NCPoly::isZero() const { return t.empty(); }

std::string NCPoly::str() const
{
  if (t.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [w, c] : t) {
    if (!first)
      os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (auto& g : w)
      os << " " << g.str();
  }
  return os.str();
}

// ---- generating-series coefficients ---------------------------------------

namespace {

// A factor of a relation side: a generating series attached to one of the
// two variables, or the constant series 1 (kind '1').
struct Slot {
  char kind; // 'e', 'f', 'h', '1'
  int sign;  // h family at trig/elliptic level
  char var;  // 'z' or 'w'
};

// Coefficient of var^k in the generating series of a slot.
NCPoly slotCoeff(Level lv, const Slot& s, int k)
{
  if (s.kind == '1')
    return k == 0 ? NCPoly::scalar(LaurentPoly(1)) : NCPoly{};
  if (lv == Level::Rational) {
    // e(z) = sum_{n>=0} e_n z^{-n-1}, likewise f; h(z) = 1 + sum h_n z^{-n-1}
    if (s.kind == 'h' && k == 0)
      return NCPoly::scalar(LaurentPoly(1));
    if (k <= -1)
      return NCPoly::letter({s.kind, 0, -k - 1});
    return {};
  }
  if (s.kind == 'e' || s.kind == 'f')
    return NCPoly::letter({s.kind, 0, -k}); // sum over all n of x_n z^{-n}
  if (lv == Level::Trig) {
    // h^+(z) = sum_{m>=0} h^+_m z^{-m}, h^-(z) = sum_{m>=0} h^-_m z^{+m}
    int idx = s.sign > 0 ? -k : k;
    return idx >= 0 ? NCPoly::letter({'h', s.sign, idx}) : NCPoly{};
  }
  return NCPoly::letter({'h', s.sign, -k}); // elliptic: bilateral in z^{-n}
}

using KMap = std::map<std::pair<int, int>, LaurentPoly>;

// Coefficient of z^a w^b in  first(var) * second(var) * K(z, w).
NCPoly convolve(Level lv, const Slot& first, const Slot& second, const KMap& K,
                int a, int b)
{
  NCPoly out;
  for (auto& [ij, c] : K) {
    auto exp = [&](const Slot& s) { return s.var == 'z' ? a - ij.first : b - ij.second; };
    NCPoly p1 = slotCoeff(lv, first, exp(first));
    if (p1.isZero())
      continue;
    NCPoly p2 = slotCoeff(lv, second, exp(second));
    if (p2.isZero())
      continue;
    out += (p1 * p2).scaled(c);
  }
  return out;
}

KMap polyToKMap(const LaurentPoly& p)
{
  KMap k;
  for (auto& [m, c] : p.t) {
    Monomial rest = m;
    int ze = m.deg("z"), we = m.deg("w");
    rest.e.erase("z");
    rest.e.erase("w");
    k[{ze, we}] += LaurentPoly::term(c, rest);
  }
  for (auto it = k.begin(); it != k.end();)
    it = it->second.isZero() ? k.erase(it) : std::next(it);
  return k;
}

KMap unitKernel() { return {{{0, 0}, LaurentPoly(1)}}; }

// ---- truncated elliptic expansions ----------------------------------------

LaurentPoly truncP(const LaurentPoly& p, int np)
{
  LaurentPoly r;
  for (auto& [m, c] : p.t)
    if (m.deg("p") <= np)
      r.addTerm(m, c);
  return r;
}

LaurentPoly truncRatio(const LaurentPoly& p, int lo, int hi)
{
  LaurentPoly r;
  for (auto& [m, c] : p.t) {
    int d = m.deg("x");
    if (d >= lo && d <= hi)
      r.addTerm(m, c);
  }
  return r;
}

// theta(X) for a monomial argument, complete through p^np.  Exponents of the
// expansion symbol are unbounded below only together with powers of p, so
// the p-truncation keeps everything finite.
LaurentPoly thetaOfMonomial(const Monomial& X, int np)
{
  LaurentPoly x = LaurentPoly::term(Rat(1), X);
  LaurentPoly xi = LaurentPoly::term(Rat(1), X.inv());
  LaurentPoly r = LaurentPoly(1) - x;
  for (int s = 1; s <= np; ++s) {
    LaurentPoly ps = mono("p", s);
    // (1 - p^s)^{-2} = (sum_k p^{sk})^2, truncated
    LaurentPoly geo;
    for (int k = 0; s * k <= np; ++k)
      geo += mono("p", s * k);
    r = truncP(r * (LaurentPoly(1) - ps * x) * (LaurentPoly(1) - ps * xi) * geo * geo, np);
  }
  return r;
}

// Geometric inverse of a truncated series 1 + T where every monomial of T
// carries a positive power of p or of the expansion variable "x"; the double
// truncation (p-order and x-window) makes the sum terminate.
LaurentPoly invUnitSeries(const LaurentPoly& d, int np, int rW)
{
  LaurentPoly T = d - LaurentPoly(1);
  LaurentPoly r(1), pw(1);
  int steps = 2 * np + rW + 4;
  for (int k = 1; k <= steps; ++k) {
    pw = truncRatio(truncP(pw * T, np), -rW, rW);
    if (pw.isZero())
      break;
    r += (k % 2 ? -pw : pw);
  }
  return r;
}

// Expansion of zeta^E(z/w) / zeta^E(w/z) in the region where the ratio
// r = w/z (sign +) or r = z/w (sign -) is small.  After flipping the
// large-argument thetas with theta(1/y) = -theta(y)/y, the ratio reads
//   +: theta(r/q1) theta(r/q2) theta(r q) / (theta(r/q) theta(r q1) theta(r q2))
//   -: theta(r q1) theta(r q2) theta(r/q) / (theta(r q) theta(r/q1) theta(r/q2))
// and every argument is small, so each factor is a genuine series.
KMap ellRatioKernel(int sign, int np, int rW)
{
  Monomial r = Monomial::var("x");
  Monomial q1 = Monomial::var("q1"), q2 = Monomial::var("q2"), q = qMono();
  auto th = [&](const Monomial& c) { return thetaOfMonomial(r * c, np); };
  LaurentPoly num, den;
  if (sign > 0) {
    num = th(q1.inv()) * th(q2.inv()) * th(q);
    den = th(q.inv()) * th(q1) * th(q2);
  } else {
    num = th(q1) * th(q2) * th(q.inv());
    den = th(q) * th(q1.inv()) * th(q2.inv());
  }
  num = truncRatio(truncP(num, np), -rW, rW);
  den = truncRatio(truncP(den, np), -rW, rW);
  LaurentPoly ratio = truncRatio(truncP(num * invUnitSeries(den, np, rW), np), -rW, rW);

  KMap k;
  for (auto& [m, c] : ratio.t) {
    Monomial rest = m;
    int d = m.deg("x");
    rest.e.erase("x");
    // r^d is w^d z^-d for sign +, z^d w^-d for sign -
    auto key = sign > 0 ? std::pair{-d, d} : std::pair{d, -d};
    k[key] += LaurentPoly::term(c, rest);
  }
  return k;
}

// Cleared kernels of the quadratic relations.  Trig: both sides of
// e(z)e(w) zt(w/z) = e(w)e(z) zt(z/w) are multiplied by z w (z - w)/q, which
// turns the structure function into a Laurent polynomial on each side.
void trigQuadKernels(KMap& kl, KMap& kr)
{
  LaurentPoly z = mono("z"), w = mono("w"), q1 = mono("q1"), q2 = mono("q2"),
              q = qPoly();
  LaurentPoly qi = LaurentPoly::term(Rat(1), qMono().inv());
  LaurentPoly left = (w * q1 - z) * (w * q2 - z) * (w - z * q) * LaurentPoly(Rat(-1));
  LaurentPoly right = (z * q1 - w) * (z * q2 - w) * (z - w * q);
  kl = polyToKMap(left * qi);
  kr = polyToKMap(right * qi);
}

// Elliptic analogue: both sides are multiplied by theta(w/z) * (-z^2 w / q),
// normalized so the p = 0 reduction is exactly the trigonometric kernel pair.
void ellQuadKernels(KMap& kl, KMap& kr, int np)
{
  Monomial q1 = Monomial::var("q1"), q2 = Monomial::var("q2"), q = qMono();
  Monomial zw = Monomial::var("z") * Monomial::var("w", -1);   // z/w
  Monomial wz = zw.inv();                                      // w/z
  LaurentPoly norm = LaurentPoly::term(
      Rat(-1), Monomial::var("z", 2) * Monomial::var("w") * qMono().inv());
  LaurentPoly left = norm * thetaOfMonomial(wz * q1, np) *
                     thetaOfMonomial(wz * q2, np) * thetaOfMonomial(zw * q, np);
  LaurentPoly right = norm * LaurentPoly::term(Rat(-1), wz) *
                      thetaOfMonomial(zw * q1, np) * thetaOfMonomial(zw * q2, np) *
                      thetaOfMonomial(wz * q, np);
  kl = polyToKMap(truncP(left, np));
  kr = polyToKMap(truncP(right, np));
}

// gamma-table kernels of rel3/rel4: 1 + the expansion of the zeta ratio.
KMap rationalGammaKernel(int maxA)
{
  KMap k = unitKernel();
  LaurentPoly e = mono("t1") * mono("t2");
  for (auto& [ab, g] : gammaRational(maxA))
    k[{-ab.first, ab.second}] += e * g;
  return k;
}

KMap trigGammaKernel(int sign, int maxA)
{
  KMap k = unitKernel();
  LaurentPoly e = qFactor();
  for (auto& [a, g] : gammaTrig(maxA, sign))
    k[sign > 0 ? std::pair{-a, a} : std::pair{a, -a}] += e * g;
  return k;
}

KMap deltaKernel(int lo, int hi)
{
  KMap k;
  for (int j = lo; j <= hi; ++j)
    k[{j, -j}] = LaurentPoly(1);
  return k;
}

} // namespace

LaurentPoly thetaConstSeries(const LaurentPoly& c, int np)
{
  if (!c.isMonomial() || !(c.t.begin()->second == Rat(1)))
    throw std::invalid_argument("thetaConstSeries: argument must be a plain monomial");
  return thetaOfMonomial(c.t.begin()->first, np);
}

// ---- relation extraction ---------------------------------------------------

NCPoly extractRelation(Level lv, RelId id, int sign, int n, int m,
                       const ExtractOptions& opt)
{
  // Target bidegree of the (n, m) row of the explicit identity.
  int za = lv == Level::Rational ? -n - 1 : -n;
  int wb = lv == Level::Rational ? -m - 1 : -m;
  if (lv != Level::Rational && (id == RelId::Rel3 || id == RelId::Rel4) && sign < 0 &&
      lv == Level::Trig)
    za = n; // h^-(z) carries positive powers of z at the trig level

  switch (id) {
  case RelId::Rel1:
  case RelId::Rel2: {
    KMap kl, kr;
    if (lv == Level::Rational) {
      // (z - w) * zt(w - z) = (z-w)^3 - (t1^2+t1t2+t2^2)(z-w) + t1t2 t,
      // and the mirror kernel has the opposite constant term.
      LaurentPoly z = mono("z"), w = mono("w");
      LaurentPoly c = mono("t1") * mono("t1") + mono("t1") * mono("t2") +
                      mono("t2") * mono("t2");
      LaurentPoly cube = (z - w) * (z - w) * (z - w);
      LaurentPoly tail = mono("t1") * mono("t2") * (mono("t1") + mono("t2"));
      kl = polyToKMap(cube - c * (z - w) + tail);
      kr = polyToKMap(cube - c * (z - w) - tail);
    } else if (lv == Level::Trig) {
      trigQuadKernels(kl, kr);
    } else {
      ellQuadKernels(kl, kr, opt.np);
    }
    if (opt.swapTildeArgs)
      std::swap(kl, kr);
    char g = id == RelId::Rel1 ? 'e' : 'f';
    if (id == RelId::Rel1)
      return convolve(lv, {g, 0, 'z'}, {g, 0, 'w'}, kl, za, wb) -
             convolve(lv, {g, 0, 'w'}, {g, 0, 'z'}, kr, za, wb);
    return convolve(lv, {g, 0, 'w'}, {g, 0, 'z'}, kl, za, wb) -
           convolve(lv, {g, 0, 'z'}, {g, 0, 'w'}, kr, za, wb);
  }

  case RelId::Rel3:
  case RelId::Rel4: {
    KMap ratio;
    int hSign = 0;
    if (lv == Level::Rational)
      ratio = rationalGammaKernel(opt.maxA);
    else if (lv == Level::Trig)
      ratio = trigGammaKernel(sign, opt.maxA), hSign = sign;
    else
      ratio = ellRatioKernel(sign, opt.np, opt.rWindow), hSign = sign;
    Slot h{'h', hSign, 'z'};
    Slot x{id == RelId::Rel3 ? 'e' : 'f', 0, 'w'};
    if (id == RelId::Rel3)
      return convolve(lv, h, x, unitKernel(), za, wb) -
             convolve(lv, x, h, ratio, za, wb);
    return convolve(lv, x, h, unitKernel(), za, wb) -
           convolve(lv, h, x, ratio, za, wb);
  }

  case RelId::Rel5: {
    Slot fz{'f', 0, 'z'}, ew{'e', 0, 'w'};
    NCPoly comm = convolve(lv, fz, ew, unitKernel(), za, wb) -
                  convolve(lv, ew, fz, unitKernel(), za, wb);
    if (lv == Level::Rational) {
      // t [f(z), e(w)] = t1t2 (h(z) - h(w))/(z - w); the right-hand side is
      // expanded with 1/(z-w) = sum w^k z^{-k-1}, which is exact on the
      // z^{<0} w^{<0} rows.
      KMap geo;
      for (int k = 0; k <= n + m + 3; ++k)
        geo[{-k - 1, k}] = LaurentPoly(1);
      NCPoly rhs = convolve(lv, {'h', 0, 'z'}, {'1', 0, 'w'}, geo, za, wb) -
                   convolve(lv, {'1', 0, 'z'}, {'h', 0, 'w'}, geo, za, wb);
      return comm.scaled(mono("t1") + mono("t2")) -
             rhs.scaled(mono("t1") * mono("t2"));
    }
    int bound = std::abs(n) + std::abs(m) + 2;
    KMap dk = deltaKernel(-bound, bound);
    NCPoly rhs = convolve(lv, {'h', +1, 'z'}, {'1', 0, 'w'}, dk, za, wb) -
                 convolve(lv, {'1', 0, 'z'}, {'h', -1, 'w'}, dk, za, wb);
    if (lv == Level::Trig)
      return comm.scaled(LaurentPoly(1) - qPoly()) - rhs.scaled(qFactor());
    LaurentPoly thq = thetaConstSeries(qPoly(), opt.np);
    LaurentPoly thq12 =
        truncP(thetaConstSeries(mono("q1"), opt.np) * thetaConstSeries(mono("q2"), opt.np),
               opt.np);
    auto cut = [&](const LaurentPoly& c) { return truncP(c, opt.np); };
    return (comm.scaled(thq) - rhs.scaled(thq12)).mapCoeffs(cut);
  }

  case RelId::HH: {
    // sign >= 0 pairs h^+(z) with h^-(w) and vice versa; the rational level
    // has a single h family.
    int s1 = sign >= 0 ? +1 : -1, s2 = -s1;
    Slot hz{'h', lv == Level::Rational ? 0 : s1, 'z'};
    Slot hw{'h', lv == Level::Rational ? 0 : s2, 'w'};
    if (lv == Level::Trig) {
      za = s1 > 0 ? -n : n; // trig h^- carries positive powers of its variable
      wb = s2 > 0 ? -m : m;
    }
    return convolve(lv, hz, hw, unitKernel(), za, wb) -
           convolve(lv, hw, hz, unitKernel(), za, wb);
  }
  }
  throw std::logic_error("extractRelation: unreachable");
}

// ---- corpus ----------------------------------------------------------------

namespace {

// Minimal recursive-descent parser for coefficient expressions over the
// symbols t1, t2, q1, q2 and the abbreviations t = t1 + t2, q = q1 q2.
struct CoeffParser {
  std::string s;
  size_t i = 0;

  explicit CoeffParser(std::string src) : s(std::move(src)) {}

  void ws()
  {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
  }
  bool eat(char c)
  {
    ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  LaurentPoly expr()
  {
    LaurentPoly v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }

  LaurentPoly term()
  {
    LaurentPoly v = factor();
    for (;;) {
      if (eat('*'))
        v = v * factor();
      else if (eat('/')) {
        LaurentPoly d = factor();
        if (d.isMonomial())
          v = v * d.inv();
        else if (auto q = v.divideExact(d))
          v = *q;
        else
          throw std::invalid_argument("corpus coefficient: inexact division");
      } else
        return v;
    }
  }

  LaurentPoly factor()
  {
    if (eat('-'))
      return LaurentPoly(Rat(-1)) * factor();
    LaurentPoly v = atom();
    if (eat('^')) {
      ws();
      bool neg = eat('-');
      int k = integer();
      v = v.pow(neg ? -k : k);
    }
    return v;
  }

  int integer()
  {
    ws();
    size_t j = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      ++i;
    if (j == i)
      throw std::invalid_argument("corpus coefficient: expected integer at '" +
                                  s.substr(j) + "'");
    return std::stoi(s.substr(j, i - j));
  }

  LaurentPoly atom()
  {
    ws();
    if (eat('(')) {
      LaurentPoly v = expr();
      if (!eat(')'))
        throw std::invalid_argument("corpus coefficient: missing ')'");
      return v;
    }
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      return LaurentPoly(Rat(integer()));
    size_t j = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i]))))
      ++i;
    std::string name = s.substr(j, i - j);
    if (name == "t1" || name == "t2" || name == "q1" || name == "q2")
      return mono(name);
    if (name == "t")
      return mono("t1") + mono("t2");
    if (name == "q")
      return qPoly();
    throw std::invalid_argument("corpus coefficient: unknown symbol '" + name + "'");
  }
};

CorpusLetter parseLetter(const std::string& tok)
{
  size_t br = tok.find('[');
  if (br == std::string::npos || tok.back() != ']')
    throw std::invalid_argument("corpus letter: expected kind[index], got " + tok);
  std::string kind = tok.substr(0, br);
  CorpusLetter g;
  if (kind == "e" || kind == "f" || kind == "h")
    g.kind = kind[0], g.sign = 0;
  else if (kind == "hp")
    g.kind = 'h', g.sign = +1;
  else if (kind == "hm")
    g.kind = 'h', g.sign = -1;
  else
    throw std::invalid_argument("corpus letter: unknown kind " + kind);

  std::string ix = tok.substr(br + 1, tok.size() - br - 2);
  int sgn = 1;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty())
      return;
    if (std::isdigit(static_cast<unsigned char>(cur[0])))
      g.index[""] += sgn * std::stoi(cur);
    else
      g.index[cur] += sgn;
    cur.clear();
  };
  for (char c : ix) {
    if (c == '+') {
      flush();
      sgn = 1;
    } else if (c == '-') {
      flush();
      sgn = -1;
    } else if (!std::isspace(static_cast<unsigned char>(c)))
      cur += c;
  }
  flush();
  return g;
}

Level parseLevel(const std::string& s)
{
  if (s == "rational")
    return Level::Rational;
  if (s == "trig")
    return Level::Trig;
  if (s == "elliptic")
    return Level::Elliptic;
  throw std::invalid_argument("corpus: unknown level " + s);
}

RelId parseRelId(const std::string& s, int& sign)
{
  std::string base = s;
  sign = 0;
  if (!s.empty() && (s.back() == '+' || s.back() == '-')) {
    sign = s.back() == '+' ? +1 : -1;
    base = s.substr(0, s.size() - 1);
  }
  if (base == "rel1")
    return RelId::Rel1;
  if (base == "rel2")
    return RelId::Rel2;
  if (base == "rel3")
    return RelId::Rel3;
  if (base == "rel4")
    return RelId::Rel4;
  if (base == "rel5")
    return RelId::Rel5;
  if (base == "hh")
    return RelId::HH;
  throw std::invalid_argument("corpus: unknown relation id " + s);
}

} // namespace

std::vector<CorpusRelation> loadRelationCorpus(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open relation corpus " + path);

  std::vector<CorpusRelation> out;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    size_t hash = line.find('#');
    if (hash != std::string::npos)
      line.resize(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head))
      continue;
    try {
      if (head == "relation") {
        std::string lv, id;
        ls >> lv >> id;
        CorpusRelation r;
        r.level = parseLevel(lv);
        r.id = parseRelId(id, r.sign);
        r.cases.push_back({});
        out.push_back(std::move(r));
      } else if (head == "case") {
        // e.g. "case m+n>0": linear form in n, m compared with 0
        std::string rest;
        std::getline(ls, rest);
        size_t op = rest.find_first_of("<=>");
        if (op == std::string::npos)
          throw std::invalid_argument("case without comparison");
        CorpusCase c;
        c.conditional = true;
        c.cmp = rest[op];
        CorpusLetter lin = parseLetter("h[" + rest.substr(0, op) + "]");
        c.c0 = lin.index.count("") ? lin.index[""] : 0;
        c.cn = lin.index.count("n") ? lin.index["n"] : 0;
        c.cm = lin.index.count("m") ? lin.index["m"] : 0;
        out.back().cases.push_back(c);
      } else if (head == "term" || head == "gsum") {
        CorpusTerm t;
        if (head == "gsum") {
          ls >> t.table;
          if (t.table != "gammaR" && t.table != "gammaT+" && t.table != "gammaT-")
            throw std::invalid_argument("unknown gamma table " + t.table);
        }
        std::string coeff;
        ls >> std::ws;
        if (ls.peek() != '(')
          throw std::invalid_argument("term coefficient must be parenthesized");
        int depth = 0;
        char ch;
        while (ls.get(ch)) {
          coeff += ch;
          depth += ch == '(' ? 1 : ch == ')' ? -1 : 0;
          if (depth == 0)
            break;
        }
        CoeffParser cp(coeff.substr(1, coeff.size() - 2));
        t.coeff = cp.expr();
        cp.ws();
        if (cp.i != cp.s.size())
          throw std::invalid_argument("trailing junk in coefficient");
        std::string tok;
        while (ls >> tok)
          t.letters.push_back(parseLetter(tok));
        if (out.empty())
          throw std::invalid_argument("term before any relation header");
        out.back().cases.back().terms.push_back(std::move(t));
      } else {
        throw std::invalid_argument("unknown directive " + head);
      }
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineNo) + ": " + e.what());
    }
  }
  return out;
}

namespace {

// Instantiate one corpus term at a window point (and gamma indices a, b),
// applying the index conventions; returns empty on a vanishing letter.
std::optional<NCPoly> instantiateTerm(Level lv, const CorpusTerm& t,
                                      const std::map<std::string, int>& env,
                                      const LaurentPoly& tableCoeff)
{
  NCPoly word = NCPoly::scalar(t.coeff * tableCoeff);
  for (auto& g : t.letters) {
    int idx = 0;
    for (auto& [v, mult] : g.index)
      idx += v.empty() ? mult : mult * env.at(v);
    if (g.kind == 'h' && g.sign == 0 && lv == Level::Rational) {
      if (idx == -1)
        continue; // h_{-1} = 1
      if (idx < -1)
        return std::nullopt; // h_{-2} = h_{-3} = ... = 0
    } else if (g.kind == 'h' && lv == Level::Trig) {
      if (idx < 0)
        return std::nullopt;
    } else if (lv == Level::Rational && idx < 0) {
      return std::nullopt; // rational e_n, f_n, h_n live in degrees n >= 0
    }
    word = word * NCPoly::letter({g.kind, g.sign, idx});
  }
  return word;
}

} // namespace

NCPoly evalCorpus(const CorpusRelation& rel, int n, int m, const ExtractOptions& opt)
{
  NCPoly out;
  for (auto& c : rel.cases) {
    if (c.conditional) {
      int v = c.c0 + c.cn * n + c.cm * m;
      bool ok = c.cmp == '<' ? v < 0 : c.cmp == '>' ? v > 0 : v == 0;
      if (!ok)
        continue;
    }
    for (auto& t : c.terms) {
      if (t.table.empty()) {
        if (auto w = instantiateTerm(rel.level, t, {{"n", n}, {"m", m}}, LaurentPoly(1)))
          out += *w;
      } else if (t.table == "gammaR") {
        for (auto& [ab, g] : gammaRational(opt.maxA))
          if (auto w = instantiateTerm(
                  rel.level, t,
                  {{"n", n}, {"m", m}, {"a", ab.first}, {"b", ab.second}}, g))
            out += *w;
      } else {
        for (auto& [a, g] : gammaTrig(opt.maxA, t.table == "gammaT+" ? +1 : -1))
          if (auto w = instantiateTerm(rel.level, t, {{"n", n}, {"m", m}, {"a", a}}, g))
            out += *w;
      }
    }
  }
  return out;
}

MatchReport matchExplicitCorpus(const CorpusRelation& rel, int window,
                               const ExtractOptions& opt)
{
  int nLo = 0, mLo = 0;
  if (rel.level == Level::Trig) {
    mLo = -window;
    nLo = (rel.id == RelId::Rel3 || rel.id == RelId::Rel4) ? 0 : -window;
  }
  for (int n = nLo; n <= window; ++n)
    for (int m = mLo; m <= window; ++m) {
      NCPoly got = extractRelation(rel.level, rel.id, rel.sign, n, m, opt);
      NCPoly want = evalCorpus(rel, n, m, opt);
      if (!(got == want))
        return {false, n, m,
                "extracted: " + got.str() + "\n  corpus: " + want.str()};
    }
  return {};
}

std::string relationDataFile(Level lv)
{
  std::string base = ELLQ_DATA_DIR;
  switch (lv) {
  case Level::Rational:
    return base + "/relations_rational.txt";
  case Level::Trig:
    return base + "/relations_trig.txt";
  default:
    throw std::invalid_argument("no hard-coded corpus at the elliptic level");
  }
}

} // namespace ellq
