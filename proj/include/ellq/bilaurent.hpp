#pragma once

#include "ellq/pseries.hpp"

#include <array>
#include <map>

namespace ellq {

// Region bookkeeping for bilateral expansions.  A series only remembers where
// it converges; multiplying series attached to incompatible regions is a logic
// error surfaced as IncompatibleRegions.
struct RegionTag {
  enum Kind { Unspecified, UnitCircle, ScaledCircle, InnerExpansion, OuterExpansion, Distribution };
  Kind kind = Unspecified;
  Rat scale = Rat(1); // for ScaledCircle: |v| = scale

  static RegionTag unit() { return {UnitCircle, Rat(1)}; }
  static RegionTag scaled(const Rat& s) { return {ScaledCircle, s}; }
  static RegionTag inner() { return {InnerExpansion, Rat(0)}; }
  static RegionTag outer() { return {OuterExpansion, Rat(0)}; }
  static RegionTag distribution() { return {Distribution, Rat(0)}; }

  bool compatible(const RegionTag& o) const
  {
    if (kind == Unspecified || o.kind == Unspecified)
      return true;
    if (kind == Distribution || o.kind == Distribution)
      return true; // deltas pair against anything on their support
    if (kind != o.kind)
      return false;
    if (kind == ScaledCircle)
      return scale == o.scale;
    return true;
  }
  RegionTag merged(const RegionTag& o) const { return kind == Unspecified ? o : *this; }
  bool operator==(const RegionTag&) const = default;
};

struct IncompatibleRegions : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bilateral truncated Laurent series in z and w over PSeries coefficients.
// Coefficients are trusted only inside the validity window [zlo,zhi]x[wlo,whi];
// multiplication shrinks the window by the factors' bandwidths.
struct BiSeries {
  static constexpr int INFW = 1 << 27; // "valid everywhere" sentinel

  int np = 0;
  int zlo = 0, zhi = 0, wlo = 0, whi = 0; // validity window (inclusive)
  std::map<std::pair<int, int>, PSeries> t;
  RegionTag zreg, wreg;

  BiSeries() = default;
  BiSeries(int np_, int zl, int zh, int wl, int wh)
      : np(np_), zlo(zl), zhi(zh), wlo(wl), whi(wh)
  {
  }
  static BiSeries zero(int np_, int W)
  {
    return BiSeries(np_, -W, W, -W, W);
  }
  static BiSeries one(int np_, int W)
  {
    BiSeries s = zero(np_, W);
    s.set(0, 0, PSeries::one(np_));
    return s;
  }

  bool inWindow(int a, int b) const
  {
    return a >= zlo && a <= zhi && b >= wlo && b <= whi;
  }

  const PSeries& at(int a, int b) const
  {
    static const PSeries zero_;
    auto it = t.find({a, b});
    return it == t.end() ? zero_ : it->second;
  }

  void set(int a, int b, const PSeries& v)
  {
    if (!inWindow(a, b))
      return;
    if (v.isZero())
      t.erase({a, b});
    else
      t[{a, b}] = v.truncate(np);
  }

  void add(int a, int b, const PSeries& v)
  {
    if (!inWindow(a, b) || v.isZero())
      return;
    auto it = t.find({a, b});
    if (it == t.end())
      t[{a, b}] = v.truncate(np);
    else {
      it->second += v;
      if (it->second.isZero())
        t.erase(it);
    }
  }

  // bandwidth of nonzero support (used for window shrinking)
  void support(int& za, int& zb, int& wa, int& wb) const
  {
    za = 0;
    zb = 0;
    wa = 0;
    wb = 0;
    bool first = true;
    for (auto& [k, v] : t) {
      if (first) {
        za = zb = k.first;
        wa = wb = k.second;
        first = false;
      } else {
        za = std::min(za, k.first);
        zb = std::max(zb, k.first);
        wa = std::min(wa, k.second);
        wb = std::max(wb, k.second);
      }
    }
  }

  static void requireCompatible(const BiSeries& a, const BiSeries& b)
  {
    if (!a.zreg.compatible(b.zreg) || !a.wreg.compatible(b.wreg))
      throw IncompatibleRegions("BiSeries: incompatible expansion regions");
  }

  friend BiSeries operator+(const BiSeries& a, const BiSeries& b)
  {
    requireCompatible(a, b);
    BiSeries r(std::min(a.np, b.np), std::max(a.zlo, b.zlo), std::min(a.zhi, b.zhi),
               std::max(a.wlo, b.wlo), std::min(a.whi, b.whi));
    r.zreg = a.zreg.merged(b.zreg);
    r.wreg = a.wreg.merged(b.wreg);
    for (auto& [k, v] : a.t)
      r.add(k.first, k.second, v);
    for (auto& [k, v] : b.t)
      r.add(k.first, k.second, v);
    return r;
  }
  friend BiSeries operator-(const BiSeries& a, const BiSeries& b)
  {
    BiSeries nb = b;
    for (auto& [k, v] : nb.t)
      v = -v;
    return a + nb;
  }

  friend BiSeries operator*(const BiSeries& a, const BiSeries& b)
  {
    requireCompatible(a, b);
    // The product coefficient at (a0,b0) is complete only when every split
    // a0 = i + j with j in b's support has i inside a's validity window (and
    // vice versa); shrink the validity window accordingly.
    int bza, bzb, bwa, bwb, aza, azb, awa, awb;
    a.support(aza, azb, awa, awb);
    b.support(bza, bzb, bwa, bwb);
    // c_n is trusted only when every split n = i + j keeps i inside the
    // partner's validity window whenever j lies in this factor's support
    BiSeries r(std::min(a.np, b.np),
               std::max(a.zlo + bzb, b.zlo + azb), std::min(a.zhi + bza, b.zhi + aza),
               std::max(a.wlo + bwb, b.wlo + awb), std::min(a.whi + bwa, b.whi + awa));
    r.zreg = a.zreg.merged(b.zreg);
    r.wreg = b.wreg.merged(a.wreg);
    for (auto& [ka, va] : a.t)
      for (auto& [kb, vb] : b.t) {
        int az = ka.first + kb.first, bw = ka.second + kb.second;
        if (az < r.zlo || az > r.zhi || bw < r.wlo || bw > r.whi)
          continue;
        r.add(az, bw, va * vb);
      }
    return r;
  }

  BiSeries shifted(int dz, int dw) const
  {
    auto bump = [](int v, int d) {
      if (v >= INFW / 2)
        return INFW;
      if (v <= -INFW / 2)
        return -INFW;
      return v + d;
    };
    BiSeries r(np, bump(zlo, dz), bump(zhi, dz), bump(wlo, dw), bump(whi, dw));
    r.zreg = zreg;
    r.wreg = wreg;
    for (auto& [k, v] : t)
      r.t[{k.first + dz, k.second + dw}] = v;
    return r;
  }

  BiSeries scaledP(const PSeries& s) const
  {
    BiSeries r = *this;
    for (auto it = r.t.begin(); it != r.t.end();) {
      it->second = it->second * s;
      if (it->second.isZero())
        it = r.t.erase(it);
      else
        ++it;
    }
    return r;
  }

  BiSeries shrunkTo(int zl, int zh, int wl, int wh) const
  {
    BiSeries r(np, std::max(zlo, zl), std::min(zhi, zh), std::max(wlo, wl), std::min(whi, wh));
    r.zreg = zreg;
    r.wreg = wreg;
    for (auto& [k, v] : t)
      r.add(k.first, k.second, v);
    return r;
  }

  // equality inside the intersection of validity windows (windows may be
  // unbounded, so only coefficients actually stored by either side are walked)
  static bool agree(const BiSeries& a, const BiSeries& b)
  {
    int zi, wj;
    return !firstMismatch(a, b, zi, wj);
  }

  static bool firstMismatch(const BiSeries& a, const BiSeries& b, int& zi, int& wj)
  {
    int zl = std::max(a.zlo, b.zlo), zh = std::min(a.zhi, b.zhi);
    int wl = std::max(a.wlo, b.wlo), wh = std::min(a.whi, b.whi);
    int order = std::min(a.np, b.np);
    auto check = [&](int i, int j) {
      if (i < zl || i > zh || j < wl || j > wh)
        return true;
      return a.at(i, j).truncate(order) == b.at(i, j).truncate(order);
    };
    for (auto& [k, v] : a.t)
      if (!check(k.first, k.second)) {
        zi = k.first;
        wj = k.second;
        return true;
      }
    for (auto& [k, v] : b.t)
      if (!check(k.first, k.second)) {
        zi = k.first;
        wj = k.second;
        return true;
      }
    return false;
  }

  bool isZero() const
  {
    for (auto& [k, v] : t)
      if (!v.isZero())
        return false;
    return true;
  }

  std::string str(int maxTerms = 50) const
  {
    std::ostringstream os;
    int n = 0;
    for (auto& [k, v] : t) {
      if (n++ >= maxTerms) {
        os << " + ...";
        break;
      }
      if (n > 1)
        os << " + ";
      os << "z^" << k.first << "*w^" << k.second << "*[" << v.str() << "]";
    }
    if (n == 0)
      return "0";
    return os.str();
  }
};

// A formal-delta supported term:  delta(c*z/w) * g(z), with g a univariate
// bilateral series in z.  delta(x) = sum_{n in Z} x^n, so on the support w = c*z.
struct DeltaTerm {
  Rat c;              // support w = c*z; c carries no p-power here
  int cPpow = 0;      // support w = c*p^cPpow*z when nonzero
  BiSeries profile;   // univariate in z (w-exponents all zero)
};

struct DeltaSum {
  std::vector<DeltaTerm> terms;

  // normalize: merge equal supports, drop zero profiles
  void normalize()
  {
    std::vector<DeltaTerm> out;
    for (auto& d : terms) {
      bool merged = false;
      for (auto& o : out)
        if (o.c == d.c && o.cPpow == d.cPpow) {
          o.profile = o.profile + d.profile;
          merged = true;
          break;
        }
      if (!merged)
        out.push_back(d);
    }
    std::erase_if(out, [](const DeltaTerm& d) { return d.profile.isZero(); });
    terms = std::move(out);
  }

  static bool agree(DeltaSum a, DeltaSum b)
  {
    a.normalize();
    b.normalize();
    if (a.terms.size() != b.terms.size())
      return false;
    for (auto& d : a.terms) {
      bool found = false;
      for (auto& o : b.terms)
        if (o.c == d.c && o.cPpow == d.cPpow && BiSeries::agree(o.profile, d.profile)) {
          found = true;
          break;
        }
      if (!found)
        return false;
    }
    return true;
  }
};

} // namespace ellq
