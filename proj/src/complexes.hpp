#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "exactlin.hpp"

namespace wk {

// Bounded cochain complex of finite free modules; d^i : X^i -> X^{i+1}.
// The zero complex has an empty window (maxDeg = minDeg - 1).
class Complex {
 public:
  Complex() = default;
  explicit Complex(Ring ring) : ring_(ring) {}
  // diffs[k] is d^{minDeg+k}; there are maxDeg - minDeg of them.
  Complex(Ring ring, int minDeg, std::vector<int> ranks, std::vector<Matrix> diffs);

  static Complex zero(Ring ring = Ring::Z()) { return Complex(ring); }
  static Complex concentrated(int rank, int degree, Ring ring = Ring::Z());

  const Ring& ring() const { return ring_; }
  int minDeg() const { return min_; }
  int maxDeg() const { return min_ + static_cast<int>(ranks_.size()) - 1; }
  bool windowEmpty() const { return ranks_.empty(); }
  int rank(int i) const;
  int totalRank() const;
  Matrix d(int i) const;  // zero matrix of the right shape outside the window
  const std::vector<int>& ranks() const { return ranks_; }
  bool isZeroObject() const { return totalRank() == 0; }

  bool operator==(const Complex& o) const;
  bool operator!=(const Complex& o) const { return !(*this == o); }

 private:
  Ring ring_;
  int min_ = 0;
  std::vector<int> ranks_;
  std::vector<Matrix> diffs_;
};

// A degree-`deg` graded map: components f^i : src^i -> tgt^{i+deg}.
// Chain maps have deg 0 and homotopies deg -1.
struct GradedMap {
  Complex src, tgt;
  int deg = 0;
  std::vector<Matrix> comps;  // indexed over src's window

  static GradedMap zero(const Complex& src, const Complex& tgt, int deg = 0);
  static GradedMap identity(const Complex& x);
  static GradedMap fromComponents(const Complex& src, const Complex& tgt, int deg,
                                  const std::vector<Matrix>& comps);

  Matrix at(int i) const;  // zero outside the window
  void set(int i, const Matrix& m);

  GradedMap operator+(const GradedMap& o) const;
  GradedMap operator-(const GradedMap& o) const;
  GradedMap operator-() const;
  GradedMap scaled(const mpz_class& c) const;
  bool operator==(const GradedMap& o) const;
  bool isZero() const;
};
using ChainMap = GradedMap;
using Homotopy = GradedMap;

// (g o f)^i = g^{i+|f|} f^i, no sign.
GradedMap compose(const GradedMap& g, const GradedMap& f);
// The Hom-complex differential D(f) = d_Y f - (-1)^{|f|} f d_X.
GradedMap homDifferential(const GradedMap& f);
bool isChainMap(const GradedMap& f);
void requireChainMap(const GradedMap& f);
// The differential of X as a degree-1 self map.
GradedMap differentialMap(const Complex& x);

// ---- vectorized Hom complexes

// Dimension of Hom^n(X,Y) = sum_i rank(Y^{i+n}) rank(X^i).
int homDim(const Complex& x, const Complex& y, int n);
Matrix vecOf(const GradedMap& f);
GradedMap unvec(const Complex& x, const Complex& y, int n, const Matrix& v);
// Matrix of D : Hom^n(X,Y) -> Hom^{n+1}(X,Y).
Matrix homDifferentialMatrix(const Complex& x, const Complex& y, int n);
// f -> g o f, Hom^n(X,Y) -> Hom^{n+|g|}(X,Z) where g : Y -> Z.
Matrix postcomposeMatrix(const GradedMap& g, const Complex& x, int n);
// f -> f o h, Hom^n(Y,Z) -> Hom^{n+|h|}(X,Z) where h : X -> Y.
Matrix precomposeMatrix(const GradedMap& h, const Complex& z, int n);

// ker(dOut) / im(dIn) on Z^dim (or its Z/n, Q analogue) as a group.
FGAbGroup homologyGroup(const Matrix& dIn, const Matrix& dOut, int dim, Ring ring);
// Numerator (cycles) and denominator (boundaries) lattices for the same data.
Lattice cycleLattice(const Matrix& dOut, int dim, Ring ring);
Lattice boundaryLattice(const Matrix& dIn, int dim, Ring ring);

// ---- complexes

Complex shift(const Complex& x, int n);
GradedMap shiftMap(const GradedMap& f, int n);
Complex directSum(const Complex& x, const Complex& y);
// Inclusions and projections of X (+) Y.
GradedMap sumInclusion1(const Complex& x, const Complex& y);
GradedMap sumInclusion2(const Complex& x, const Complex& y);
GradedMap sumProjection1(const Complex& x, const Complex& y);
GradedMap sumProjection2(const Complex& x, const Complex& y);
GradedMap directSumMap(const GradedMap& f, const GradedMap& g);

struct Cone {
  Complex c;          // cone^i = X^{i+1} (+) Y^i
  ChainMap toCone;    // Y -> cone
  ChainMap fromCone;  // cone -> X[1]
  Homotopy witness;   // toCone o f = D(witness)
};
Cone cone(const ChainMap& f);

// Cohomology H^n of a complex over Z.
FGAbGroup homology(const Complex& x, int n);
// Same for any ground ring (subquotients of the lifted ambient).
FGAbGroup cohomologyAnyRing(const Complex& x, int n);
GroupHom inducedOnCohomology(const ChainMap& f, int n);

std::optional<Homotopy> isNullHomotopic(const GradedMap& f);

struct ZWitness {
  Homotopy s;  // s^{i+1} : X^{i+1} -> Y^i
  Homotopy t;  // t^i : X^i -> Y^{i-1}
};
// Decides f = s o d_X + d_Y o t.
std::optional<ZWitness> inIdealZ(const ChainMap& f);

class KHomGroup {
 public:
  KHomGroup(const Complex& x, const Complex& y, int n = 0);
  const FGAbGroup& group() const { return group_; }
  const std::vector<ChainMap>& representatives() const { return reps_; }
  Matrix classOf(const GradedMap& f) const;
  bool isZeroClass(const GradedMap& f) const;
  const Complex& source() const { return x_; }
  const Complex& target() const { return y_; }
  int degree() const { return n_; }

 private:
  Complex x_, y_;
  int n_;
  FGAbGroup group_;
  std::vector<ChainMap> reps_;
};

KHomGroup homGroupK(const Complex& x, const Complex& y);

Complex stupidTruncLE(const Complex& x, int k);
Complex stupidTruncGE(const Complex& x, int k);
// sigma_{>=k} X -> X and X -> sigma_{<=k} X.
ChainMap truncGEInclusion(const Complex& x, int k);
ChainMap truncLEProjection(const Complex& x, int k);
// Componentwise truncations of a map.
ChainMap truncLEMap(const ChainMap& f, int k);
ChainMap truncGEMap(const ChainMap& f, int k);
// Restriction of a complex or map to the degree window [lo, hi].
Complex windowTrunc(const Complex& x, int lo, int hi);
ChainMap windowTruncMap(const ChainMap& f, int lo, int hi);
// For lo2 <= lo and hi2 <= hi, the natural map sigma_[lo,hi] X -> sigma_[lo2,hi2] X,
// degreewise the identity on the overlap.
ChainMap windowComparison(const Complex& x, int lo, int hi, int lo2, int hi2);

// Connecting map sigma_{<=k} X -> (sigma_{>=k+1} X)[1] of the split triangle; equals -delta.
ChainMap splitConnecting(const Complex& x, int k);

struct Equivalence {
  ChainMap inverse;
  Homotopy leftWitness;   // inverse o f - id_X = D(leftWitness)
  Homotopy rightWitness;  // f o inverse - id_Y = D(rightWitness)
};
std::optional<Equivalence> isHomotopyEquivalence(const ChainMap& f);
bool isContractible(const Complex& x);

// Block linear system over one ring: unknown blocks, equation blocks, A x = b.
class BlockSystem {
 public:
  explicit BlockSystem(Ring ring) : ring_(ring) {}
  int addVar(int dim);
  int addEq(int dim);
  void add(int eq, int var, const Matrix& m);
  void setRhs(int eq, const Matrix& v);
  std::optional<std::vector<Matrix>> solve() const;

 private:
  Ring ring_;
  std::vector<int> vars_, eqs_;
  std::vector<std::tuple<int, int, Matrix>> blocks_;
  std::vector<std::pair<int, Matrix>> rhs_;
};

// A -f-> B -g-> C -h-> A[1].
struct Triangle {
  ChainMap f, g, h;
};
struct TriangleWitness {
  ChainMap phi;  // cone(f) -> C
  Homotopy u;    // phi o toCone - g = D(u)
  Homotopy v;    // h o phi - fromCone = D(v)
  Equivalence equivalence;
};
// Decides whether the triangle is isomorphic in K to the cone triangle of f.
// Any comparison map solving the two squares is an isomorphism when the
// triangle is distinguished, so one solve plus one equivalence test decides it.
std::optional<TriangleWitness> isDistinguished(const Triangle& t);

// Over Z: a decomposition X = M (+) C into subcomplexes with C contractible and
// M minimal (no unit entries in any Smith-adapted differential).
struct MinimalModel {
  Complex m;
  ChainMap inclusion;   // M -> X
  ChainMap projection;  // X -> M, projection o inclusion = id
};
MinimalModel minimalModel(const Complex& x);

}  // namespace wk
