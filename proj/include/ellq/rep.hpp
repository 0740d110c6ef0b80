#pragma once

#include "ellq/kclass.hpp"
#include "ellq/mero.hpp"
#include "ellq/params.hpp"

#include <optional>

namespace ellq {

// ---- universal-class states -----------------------------------------------
//
// A state is an ordered word of series operators applied to a seed class
// Psi(U).  Each e/f application inserts a diagonal Koszul shift of U scaled by
// the operator's slot variable and multiplies by a theta factor built from the
// class *before* that shift; the shift then acts inside every factor that was
// already present.  h+/h- multiply by a theta ratio and shift nothing.
// Expansion tags are recorded in application order (innermost first).

enum class OpKind { E, F, HPlus, HMinus };

struct RepOp {
  OpKind kind;
  char var; // slot: 'z' (red) or 'w' (blue)
};

enum class SeedKind {
  One,            // Psi = 1
  ThetaSpectator, // Psi = th(U / x1)
};

struct RepState {
  int rank = 1;
  SeedKind seed = SeedKind::One;
  std::vector<RepOp> ops; // application order (first entry acts first)

  RepState(int r, SeedKind s = SeedKind::One) : rank(r), seed(s) {}

  RepState& apply(OpKind k, char var)
  {
    ops.push_back({k, var});
    return *this;
  }

  // assemble the factored expression with its pending expansion tags
  Mero build() const;
};

// Diagonal kernel th(x L1) th(x L2) / (th(x) th(x q)) with x = z^ze w^we.
Mero zetaEll(int ze, int we);

// zetaEll(x) * th(x q_red) th(q_blue / x); minus variant swaps the colors.
// With both surface factors specialized to the same numeric parameters the
// two kernels coincide, but the factor bookkeeping keeps them separate.
Mero zetaTildePlus(int ze, int we);
Mero zetaTildeMinus(int ze, int we);

// structural equality of untagged content: same prefactor, same monomial
// degrees, same multiset of canonical factors
bool sameFactored(const Mero& a, const Mero& b);

// ---- verification reports -------------------------------------------------

enum class RelId { Rel1, Rel2, Rel3, Rel4, Rel5, HH };

std::string relName(RelId id);

struct Mismatch {
  int zExp = 0, wExp = 0, pOrd = 0;
  std::string lhs, rhs;
  std::string where; // which comparison produced it
};

struct CheckReport {
  std::string relation;
  std::string level; // "elliptic" or "ktheory"
  std::uint64_t seed = 0;
  int rank = 1;
  int resamples = 0;
  int np = 0, W = 0;
  bool pass = false;
  std::optional<Mismatch> firstMismatch;
  long millis = 0;
};

struct VerifyOptions {
  int np = 6;
  int W = 8;
  SeedKind seed = SeedKind::One;
  // deliberately install the transposed kernel ratio (rel3/rel4 only); the
  // check must then FAIL with a populated mismatch
  bool swapKernels = false;
};

// Check one relation of the elliptic algebra in the universal-class model.
// Throws GenericityError when a pole of the suite lands on a contour; the
// caller is expected to resample the parameters.
CheckReport verifyEllipticRelation(RelId id, const ParamSpec& ps, const VerifyOptions& opt);

// Same checks with the nome truncated away (p-order 0), plus the explicit
// coefficient identities of the surface-level quantum toroidal relations:
// the piecewise h-form of the f/e commutator and the quartic e/e and f/f
// forms, within the mode window |m|,|n| <= modeWindow.
struct DegenerationOptions {
  int W = 10;
  int modeWindow = 4;
  SeedKind seed = SeedKind::One;
};

CheckReport degenerateToKTheory(RelId id, const ParamSpec& ps, const DegenerationOptions& opt);

// resample-on-genericity-failure driver used by tests and the CLI
template <typename Fn>
CheckReport withGenericResample(std::uint64_t seed0, int rank, Fn&& run)
{
  for (int k = 0;; ++k) {
    if (k >= 64)
      throw GenericityError("no generic parameter draw in 64 attempts");
    ParamSpec ps = sampleParamSpec(seed0 + static_cast<std::uint64_t>(k) * 0x10001, rank);
    try {
      CheckReport r = run(ps);
      r.resamples += k;
      return r;
    } catch (const GenericityError&) {
      continue;
    }
  }
}

} // namespace ellq
