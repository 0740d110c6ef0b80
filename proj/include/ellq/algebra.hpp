#pragma once

// Presentations of the three algebra levels as relation schemas over free
// noncommutative words, plus mechanical extraction of explicit coefficient
// identities from the generating-series relations.
//
// The extraction turns a series relation (kernel-cleared, so that every
// coefficient is a Laurent polynomial) into one word identity per target
// bidegree z^.. w^..; the hard-coded explicit forms live in data files and
// are compared against the extracted ones word-for-word.

#include "ellq/kernels.hpp"

#include <optional>

namespace ellq {

enum class Level { Rational, Trig, Elliptic };
enum class RelId { Rel1, Rel2, Rel3, Rel4, Rel5, HH };

// One generator letter.  kind is 'e', 'f' or 'h'; sign distinguishes the two
// h-families at the trigonometric/elliptic levels (+1 / -1) and is 0 for the
// single rational h.
struct Gen {
  char kind = 'e';
  int sign = 0;
  int index = 0;

  auto operator<=>(const Gen&) const = default;
  std::string str() const;
};

using Word = std::vector<Gen>;

// Noncommutative polynomial: Laurent-polynomial coefficients on ordered
// words.  The empty word is the unit.
struct NCPoly {
  std::map<Word, LaurentPoly> t;

  static NCPoly scalar(const LaurentPoly& c);
  static NCPoly letter(const Gen& g, const LaurentPoly& c = LaurentPoly(1));

  NCPoly& operator+=(const NCPoly& o);
  NCPoly operator+(const NCPoly& o) const;
  NCPoly operator-(const NCPoly& o) const;
  NCPoly operator*(const NCPoly& o) const; // word concatenation
  NCPoly scaled(const LaurentPoly& c) const;
  NCPoly mapCoeffs(const std::function<LaurentPoly(const LaurentPoly&)>& f) const;

  bool isZero() const;
  bool operator==(const NCPoly& o) const { return (*this - o).isZero(); }
  std::string str() const;
};

// How deep the kernel expansions are taken.  maxA bounds the gamma tables,
// np/rWindow control the p-order and ratio-window of the elliptic kernels.
struct ExtractOptions {
  int maxA = 10;
  int np = 4;
  int rWindow = 10;
  bool swapTildeArgs = false; // deliberate perturbation of rel1/rel2
};

// Coefficient of the target bidegree in the kernel-cleared relation,
// written as (left-hand side) - (right-hand side).  The target is labeled
// by the generator indices (n, m) of the catalogued explicit forms; sign picks
// the h^+/h^- family for rel3/rel4 (ignored elsewhere).  The rel5 rows are
// cleared of their scalar denominator (t, 1-q, theta(q) respectively), and
// the trig/elliptic rel1/rel2 rows of their z w (z - w) denominator.
NCPoly extractRelation(Level lv, RelId id, int sign, int n, int m,
                       const ExtractOptions& opt = {});

// ---- hard-coded explicit forms ----------------------------------------------

// A term of a corpus identity: coefficient expression times a word whose
// letter indices are affine in the window variables n, m and (for gsum
// blocks) the summation indices a, b.
struct CorpusLetter {
  char kind;
  int sign;
  std::map<std::string, int> index; // e.g. {n:1, a:-1, "":3} ("" = constant)
};

struct CorpusTerm {
  LaurentPoly coeff;      // parsed coefficient expression
  std::string table;      // "", "gammaR", "gammaT+", "gammaT-"
  std::vector<CorpusLetter> letters;
};

struct CorpusCase {
  // condition c0 + cn*n + cm*m  <cmp>  0 with cmp in {<,=,>}; absent = always
  bool conditional = false;
  int c0 = 0, cn = 0, cm = 0;
  char cmp = '=';
  std::vector<CorpusTerm> terms;
};

struct CorpusRelation {
  Level level;
  RelId id;
  int sign = 0;
  std::vector<CorpusCase> cases;
};

std::vector<CorpusRelation> loadRelationCorpus(const std::string& path);

// Evaluate a corpus identity at a concrete window point, applying the index
// conventions (rational h[-1] = 1, h[<=-2] = 0; trig h^±[<0] = 0).
NCPoly evalCorpus(const CorpusRelation& rel, int n, int m,
                  const ExtractOptions& opt = {});

struct MatchReport {
  bool pass = true;
  int n = 0, m = 0;
  std::string detail;
};

// Compare extracted identities against a corpus block over the window
// |n|,|m| <= window (clamped to each level's legal index ranges).
MatchReport matchExplicitCorpus(const CorpusRelation& rel, int window,
                               const ExtractOptions& opt = {});

// Truncated theta expansion of a constant argument: theta(c) as a Laurent
// polynomial in c's symbols and p, complete through p^np.
LaurentPoly thetaConstSeries(const LaurentPoly& c, int np);

std::string relationDataFile(Level lv);

} // namespace ellq
