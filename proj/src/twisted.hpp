#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "weights.hpp"

namespace wk {

// A graded free Z-module on the window [lo, lo + ranks.size() - 1] with coboundaries
// delta[k] : C^{lo+k} -> C^{lo+k+1}. Not validated on construction.
struct HomComplex {
  int lo = 0;
  std::vector<int> ranks;
  std::vector<Matrix> delta;

  int hi() const { return lo + static_cast<int>(ranks.size()) - 1; }
  int rank(int n) const;
  Matrix d(int n) const;  // zero matrix of the right shape outside the window
  bool operator==(const HomComplex& o) const { return lo == o.lo && ranks == o.ranks && delta == o.delta; }
};

// C^a(Q,R) x C^b(P,Q) -> C^{a+b}(P,R)
struct CompositionKey {
  int p = 0, q = 0, r = 0, a = 0, b = 0;
  auto operator<=>(const CompositionKey&) const = default;
};

struct DGCategoryData {
  std::vector<std::string> objects;
  std::map<std::pair<int, int>, HomComplex> homs;  // (P,Q) -> C(P,Q); absent means 0
  // rank C^{a+b}(P,R) x (rank C^a(Q,R) * rank C^b(P,Q)); column g * rank C^b(P,Q) + f.
  std::map<CompositionKey, Matrix> compositions;
  std::vector<Matrix> units;  // columns in C^0(P,P)
  // Quotient data from truncateDG: in degree relationDegree, C(P,Q) is read modulo relations.
  std::map<std::pair<int, int>, Lattice> relations;
  int relationDegree = 0;
  // Nonempty for S(A): object k is Z^{moduleRanks[k]}, C^0(P,Q) = row-major Hom(Z^p, Z^q).
  std::vector<int> moduleRanks;

  int size() const { return static_cast<int>(objects.size()); }
  bool isModuleCategory() const { return !moduleRanks.empty(); }
  const HomComplex& hom(int p, int q) const;
  int rank(int p, int q, int n) const { return hom(p, q).rank(n); }
  Matrix delta(int p, int q, int n, const Matrix& v) const;
  // g in C^a(Q,R), f in C^b(P,Q).
  Matrix compose(int p, int q, int r, int a, const Matrix& g, int b, const Matrix& f) const;
  Matrix unit(int p) const;
  Matrix zero(int p, int q, int n) const { return Matrix(rank(p, q, n), 1); }
  bool isZero(int p, int q, int n, const Matrix& v) const;
  Lattice relationLattice(int p, int q, int n) const;
};

using DGCategory = std::shared_ptr<const DGCategoryData>;

struct AxiomFailure {
  std::string which, where;
};
struct DGReport {
  bool negative = false;
  std::vector<AxiomFailure> failures;
  bool valid() const { return failures.empty(); }
};
// Every axiom on basis elements, all failures collected.
DGReport checkDG(const DGCategoryData& c);
// Throws AxiomViolation naming the first failure.
DGReport validateDG(const DGCategoryData& c);
bool isNegative(const DGCategoryData& c);

// S(A) with objects Z^r for r in ranks, delta = 0.
DGCategoryData moduleCategory(const std::vector<int>& ranks);
// Objects the given complexes; Hom = tau_{<=0} of the Hom complexes (degree 0 in the
// Hermite basis of the cycle lattice). Negative by construction.
DGCategoryData complexCategory(const std::vector<Complex>& xs);

struct TwistedEntry {
  int position = 0;
  int object = 0;
  bool operator==(const TwistedEntry&) const = default;
};

// Arrows q^{ab} between entries, in C^{pos_a - pos_b + 1}(P_a, P_b). Several entries may
// share a position.
struct TwistedComplex {
  DGCategory cat;
  std::vector<TwistedEntry> entries;
  std::map<std::pair<int, int>, Matrix> q;

  int size() const { return static_cast<int>(entries.size()); }
  int pos(int a) const { return entries[a].position; }
  int obj(int a) const { return entries[a].object; }
  int arrowDegree(int a, int b) const { return pos(a) - pos(b) + 1; }
  Matrix arrow(int a, int b) const;
  void setArrow(int a, int b, const Matrix& v);
  bool sameAs(const TwistedComplex& o) const;  // same category, entries, arrows mod relations
};

struct PreTrHomElement {
  TwistedComplex src, tgt;
  int degree = 0;
  std::map<std::pair<int, int>, Matrix> comps;  // f^{ab} in C^{l + pos_a - pos'_b}

  static PreTrHomElement zero(const TwistedComplex& src, const TwistedComplex& tgt, int degree);
  static PreTrHomElement identity(const TwistedComplex& m);
  int componentDegree(int a, int b) const { return degree + src.pos(a) - tgt.pos(b); }
  Matrix at(int a, int b) const;
  void set(int a, int b, const Matrix& v);
  PreTrHomElement operator+(const PreTrHomElement& o) const;
  PreTrHomElement operator-(const PreTrHomElement& o) const;
  PreTrHomElement scaled(const mpz_class& c) const;
  bool isZero() const;  // modulo relations
};

// (delta f)^{ab} = (-1)^{pos'_b} delta f^{ab} + sum_j q'^{jb} f^{aj} - (-1)^l sum_i f^{ib} q^{ai}
PreTrHomElement preTrDifferential(const PreTrHomElement& f);
// (g f)^{ac} = sum_b g^{bc} f^{ab}
PreTrHomElement preTrCompose(const PreTrHomElement& g, const PreTrHomElement& f);
bool isClosed(const PreTrHomElement& f);

struct MCReport {
  std::map<std::pair<int, int>, Matrix> residuals;  // nonzero ones only
  bool valid() const { return residuals.empty(); }
  std::string str() const;
};
// Residual (-1)^{pos_c} delta q^{ac} + sum_b q^{bc} q^{ab} for every pair.
MCReport mcCheck(const TwistedComplex& m);

// Positions move by -n, arrows pick up (-1)^n.
TwistedComplex shiftTwisted(const TwistedComplex& m, int n);

struct TwistedCone {
  TwistedComplex cone;        // source entries (position - 1) first, then target entries
  PreTrHomElement toCone;     // target -> cone
  PreTrHomElement fromCone;   // cone -> source[1]
};
TwistedCone twistedCone(const PreTrHomElement& h);

// ---- the PreTr Hom complex as a complex of finite groups Z^dim / relations

int preTrDim(const TwistedComplex& m, const TwistedComplex& n, int l);
Matrix preTrVec(const PreTrHomElement& f);
PreTrHomElement preTrUnvec(const TwistedComplex& m, const TwistedComplex& n, int l, const Matrix& v);
Matrix preTrDifferentialMatrix(const TwistedComplex& m, const TwistedComplex& n, int l);
Matrix preTrRelations(const TwistedComplex& m, const TwistedComplex& n, int l);  // generators as columns
// f -> g f on PreTr^l(x, src g), and f -> f h on PreTr^l(tgt h, z).
Matrix preTrPostcomposeMatrix(const PreTrHomElement& g, const TwistedComplex& x, int l);
Matrix preTrPrecomposeMatrix(const PreTrHomElement& h, const TwistedComplex& z, int l);

class TrHomGroup {
 public:
  TrHomGroup(const TwistedComplex& m, const TwistedComplex& n);
  const FGAbGroup& group() const { return group_; }
  PreTrHomElement representative(int k) const;
  Matrix classOf(const PreTrHomElement& f) const;
  bool isZeroClass(const PreTrHomElement& f) const;

 private:
  TwistedComplex m_, n_;
  FGAbGroup group_;
};
TrHomGroup trHom(const TwistedComplex& m, const TwistedComplex& n);

// Degree-0 closed f with a two-sided inverse up to PreTr boundaries.
std::optional<PreTrHomElement> trInverse(const PreTrHomElement& f);
// A -f-> B -g-> C -h-> A[1] isomorphic in Tr to the cone triangle of f.
bool isDistinguishedTr(const PreTrHomElement& f, const PreTrHomElement& g, const PreTrHomElement& h);

// ---- S(A)

Complex realizeTr(const TwistedComplex& m);
GradedMap realizeTrMap(const PreTrHomElement& f);
// One entry per degree, or up to two entries per degree when split is set; cat must be
// a module category containing objects of the needed ranks.
TwistedComplex twistedFromComplex(const DGCategory& cat, const Complex& x, bool split = false);
// The element of PreTr(m, n) realizing to f; m, n realize to f.src, f.tgt.
PreTrHomElement twistedFromMap(const TwistedComplex& m, const TwistedComplex& n, const GradedMap& f);

// ---- weight structure on Tr(C), C negative

struct TwistedWeightDecomposition {
  TwistedComplex le, ge;        // positions <= k and >= k + 1
  PreTrHomElement inclusion;    // ge -> m
  PreTrHomElement projection;   // m -> le
  PreTrHomElement connecting;   // le -> ge[1]
  bool partsSatisfyMC = false;
  bool mapsClosed = false;
};
TwistedWeightDecomposition weightTruncTwisted(const TwistedComplex& m, int k);

// ---- t_N

DGCategoryData truncateDG(const DGCategoryData& c, int n);
TwistedComplex applyTN(const TwistedComplex& m, int n, const DGCategory& truncated);
TwistedComplex applyTN(const TwistedComplex& m, int n);
PreTrHomElement applyTNMap(const PreTrHomElement& f, int n, const TwistedComplex& src, const TwistedComplex& tgt);

}  // namespace wk
