#pragma once

#include "ellq/monomial.hpp"

#include <map>

namespace ellq {

// Formal K-theory class: signed multiset of monomial Chern-root weights.
// Weights may carry the spectral symbols z, w (scaled copies of a class).
struct KClass {
  std::map<Monomial, int> w;

  static KClass weight(const Monomial& m, int mult = 1)
  {
    KClass k;
    if (mult != 0)
      k.w[m] = mult;
    return k;
  }

  // framing class u1 + ... + ur
  static KClass universal(int r)
  {
    KClass k;
    for (int i = 1; i <= r; ++i)
      k.w[Monomial::var("u" + std::to_string(i))] = 1;
    return k;
  }

  // Koszul resolution of the diagonal: 1 - L1 - L2 + q, with L2 = q/L1
  static KClass diagonalKoszul()
  {
    KClass k;
    k.w[Monomial{}] = 1;
    k.w[Monomial::var("L1")] = -1;
    k.w[L2Mono()] = -1;
    k.w[qMono()] = 1;
    return k;
  }

  bool operator==(const KClass& o) const = default;
  bool empty() const { return w.empty(); }

  KClass& addWeight(const Monomial& m, int mult)
  {
    auto it = w.find(m);
    if (it == w.end()) {
      if (mult != 0)
        w[m] = mult;
    } else if ((it->second += mult) == 0) {
      w.erase(it);
    }
    return *this;
  }

  friend KClass operator+(const KClass& a, const KClass& b)
  {
    KClass r = a;
    for (auto& [m, k] : b.w)
      r.addWeight(m, k);
    return r;
  }
  friend KClass operator-(const KClass& a, const KClass& b)
  {
    KClass r = a;
    for (auto& [m, k] : b.w)
      r.addWeight(m, -k);
    return r;
  }

  KClass scaled(const Monomial& s) const
  {
    KClass r;
    for (auto& [m, k] : w)
      r.w[m * s] = k;
    return r;
  }

  // union of *this with o's weights multiplied by scale (sign = +-1)
  KClass addScaled(const KClass& o, const Monomial& scale, int sign = 1) const
  {
    KClass r = *this;
    for (auto& [m, k] : o.w)
      r.addWeight(m * scale, sign * k);
    return r;
  }

  KClass dual() const
  {
    KClass r;
    for (auto& [m, k] : w)
      r.w[m.inv()] = k;
    return r;
  }

  int rank() const
  {
    int s = 0;
    for (auto& [m, k] : w)
      s += k;
    return s;
  }

  Monomial det() const
  {
    Monomial d;
    for (auto& [m, k] : w)
      d.mulIn(m.pow(k));
    return d;
  }

  std::string str() const
  {
    std::ostringstream os;
    bool first = true;
    for (auto& [m, k] : w) {
      if (!first)
        os << " ";
      first = false;
      os << (k >= 0 ? "+" : "") << k << "*" << (m.trivial() ? "1" : m.str());
    }
    return first ? "0" : os.str();
  }
};

} // namespace ellq
