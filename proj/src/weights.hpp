#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "complexes.hpp"

namespace wk {

// Weight decomposition at cut k for the stupid weight structure:
//   b -> x -> a -> b[1]   with a = sigma_{<=k} x, b = sigma_{>=k+1} x.
// Written B[-1] -> X -> A -> B, this is b = B[-1].
struct WeightDecomposition {
  Complex x;
  int k = 0;
  Complex a, b;
  ChainMap mapXA;        // x -> a
  ChainMap mapBshiftX;   // b -> x
  ChainMap connecting;   // a -> b[1]
  TriangleWitness coherence;
};

WeightDecomposition weightDecompose(const Complex& x, int k);

// X[k] -> X^{w<=k} -> X^{w>=k+1} -> X[k+1] and friends use the shifted objects
// X^{w<=k} = (sigma_{<=k} x)[k], X^{w>=k} = (sigma_{>=k} x)[k].
struct PostnikovTower {
  Complex x;
  int lo = 0, hi = -1;  // support window
  // Indexed by k - lo for k in [lo, hi].
  std::vector<Complex> wLE, wGE, heartPiece;
  // The tower maps, again at k - lo:
  //   s^k : X^{w<=k}[-1] -> X^{w<=k-1},  c^k : X^{w<=k-1} -> X^k,  d^k : X^k -> X^{w<=k}
  //   x^k : X^k[-1] -> X^{w>=k+1}[-1],   q^k : X^{w>=k+1}[-1] -> X^{w>=k}, y^k : X^{w>=k} -> X^k
  std::vector<ChainMap> s, c, d, xm, q, y;
  // f^k : X^{w<=k} -> X^{w>=k+1}
  std::vector<ChainMap> f;

  Complex upperLE(int k) const;  // X^{w<=k}
  Complex upperGE(int k) const;  // X^{w>=k}
  Complex heart(int k) const;
  const ChainMap& sAt(int k) const { return s.at(k - lo); }
  const ChainMap& cAt(int k) const { return c.at(k - lo); }
  const ChainMap& dAt(int k) const { return d.at(k - lo); }
  const ChainMap& xAt(int k) const { return xm.at(k - lo); }
  const ChainMap& qAt(int k) const { return q.at(k - lo); }
  const ChainMap& yAt(int k) const { return y.at(k - lo); }
  const ChainMap& fAt(int k) const { return f.at(k - lo); }
  // The two octahedral triangles through X^k and the decomposition triangle T_k at k.
  Triangle leTriangle(int k) const;
  Triangle geTriangle(int k) const;
  Triangle decompositionTriangle(int k) const;
};

PostnikovTower postnikovTower(const Complex& x);

struct WeightComplexObj {
  Ring ring;
  int lo = 0;
  std::vector<int> heartRanks;
  std::vector<Matrix> boundaries;     // normalized h^i, i in [lo, lo + n - 2]
  std::vector<Matrix> rawBoundaries;  // c^{i+1} o d^i read off the tower
  Complex asComplex() const;
};

// h^i = c^{i+1} o d^i from the tower; the raw value is (-1)^i d^i, so the
// normalized boundaries carry that sign back, giving t(X) = X on the nose.
WeightComplexObj weightComplex(const Complex& x);
// The weight complex of a morphism, as a map of normalized weight complexes.
ChainMap weightComplexMap(const ChainMap& g);

// Weight decomposition of a morphism at cut k: h on the a-parts, i on the b-parts.
struct WDMorphism {
  ChainMap h, i;
};
WDMorphism weightDecomposeMorphism(const ChainMap& g, int k);
// (h, i) completes g to a morphism of the two decomposition triangles in K.
bool isWDMorphismOf(const ChainMap& g, int k, const WDMorphism& m);
// Two choices are identified iff h - h' = s o conn_X and i[1] - i'[1] = conn_X' o s'
// up to homotopy, for some s, s' : b_X[1] -> a_X'.
struct WDEquivalenceWitness {
  ChainMap s, sPrime;
};
std::optional<WDEquivalenceWitness> wdEquivalent(const ChainMap& g, int k, const WDMorphism& m1, const WDMorphism& m2);

// Membership in C^{w<=i} and C^{w>=i}: the inclusion sigma_{>=i+1} X -> X (resp. the
// projection X -> sigma_{<=i-1} X) vanishes in K.
bool inWeightLE(const Complex& x, int i);
bool inWeightGE(const Complex& x, int i);
// If t(x) is homotopy equivalent to a complex supported in degrees <= i, one such complex.
std::optional<MinimalModel> weightComplexBoundedAbove(const Complex& x, int i);

// ---- functors

struct FunctorSpec {
  enum class Kind { CohomologyDegree, CohomologyModM, HomKFrom, HomKInto };
  Kind kind = Kind::CohomologyDegree;
  int n = 0;
  long m = 0;  // CohomologyModM only
  Complex t;   // HomKFrom / HomKInto only

  static FunctorSpec cohomology(int n) { return {Kind::CohomologyDegree, n, 0, {}}; }
  static FunctorSpec cohomologyMod(int n, long m) { return {Kind::CohomologyModM, n, m, {}}; }
  static FunctorSpec homFrom(const Complex& t, int n) { return {Kind::HomKFrom, n, 0, t}; }
  static FunctorSpec homInto(const Complex& t, int n) { return {Kind::HomKInto, n, 0, t}; }

  bool covariant() const { return kind != Kind::HomKInto; }
  std::string str() const;
  // Degrees d such that the value on a free module placed in degree d can be nonzero.
  std::pair<int, int> degreeSupport() const;
};

FGAbGroup evaluate(const FunctorSpec& h, const Complex& x);
// Covariant: ambient(src) -> ambient(tgt). Contravariant: ambient(tgt) -> ambient(src).
Matrix ambientMap(const FunctorSpec& h, const ChainMap& g);
GroupHom applyFunctor(const FunctorSpec& h, const ChainMap& g);

// W_i(H)(X) = im(H(sigma_{>=i} X) -> H(X)) for covariant H and
// W^i(H)(X) = im(H(sigma_{<=i} X) -> H(X)) for contravariant H, as a subgroup of H(X).
Lattice weightFiltration(const FunctorSpec& h, const Complex& x, int i);

enum class TruncSide { Lower, Upper };  // F_1 and F_2
struct VirtualTruncation {
  FGAbGroup group;     // the image, realized inside `ambient`
  FGAbGroup ambient;   // F(sigma_{<=k} X) etc., the target of the image map
  ChainMap defining;   // the chain map whose induced map has the image
};
// Covariant:     F_1 = im(F(w<=k+j X) -> F(w<=k X)),  F_2 = im(F(w>=k+j X) -> F(w>=k X)).
// Contravariant: F_1 = im(F(w<=k X) -> F(w<=k+j X)),  F_2 = im(F(w>=k X) -> F(w>=k+j X)).
VirtualTruncation virtualTruncation(const FunctorSpec& h, const Complex& x, int k, int j, TruncSide side);

// One arrow of the long exact sequence for j = 1, between groups living in ambients.
struct LESNode {
  std::string label;
  FGAbGroup group;
};
struct LESReport {
  std::vector<LESNode> nodes;
  std::vector<GroupHom> maps;  // maps[i] : nodes[i] -> nodes[i+1]
  std::vector<bool> exactAt;   // at interior nodes 1 .. n-2
  bool allExact() const;
};
// F_2 -> F -> F_1 -> F_2[1] -> ... (covariant) or F_1 -> F -> F_2 -> F_1[-1] -> ...
// (contravariant) over the shifts X[s] for s in [s0, s1].
LESReport virtualTruncationLES(const FunctorSpec& h, const Complex& x, int k, int s0, int s1);

// The double truncation: im(F(sigma_[0,1] X) -> F(sigma_[-1,0] X))
// (covariant) or im(F(sigma_[-1,0] X) -> F(sigma_[0,1] X)) (contravariant).
FGAbGroup doubleVirtualTruncation(const FunctorSpec& h, const Complex& x);

// ---- ideals

using IdealTester = std::function<bool(const ChainMap&)>;
struct IdempotentLift {
  ChainMap lifted;           // -2 r^3 + 3 r^2
  bool exactlyIdempotent;    // r'^2 = r' as matrices
  bool idempotentInK;        // r'^2 - r' null-homotopic
  bool congruent;            // r' - r passes the tester
};
// Throws NotAlmostIdempotent if r^2 - r fails the tester.
IdempotentLift idempotentLift(const ChainMap& r, const IdealTester& tester);
IdealTester zIdealTester();
// Scalars: every component entry divisible by m (for the Z/n scalar model).
IdealTester multiplesTester(long m);

struct NilpotencyReport {
  int span = 0;     // j - i + 1
  int samples = 0;
  int passed = 0;
  std::vector<Homotopy> witnesses;
  bool ok() const { return passed == samples; }
};
// For random span-tuples of endomorphisms killed by t (i.e. in Z mod homotopy),
// verifies the composite is null-homotopic.
NilpotencyReport kernelIdealNilpotency(const Complex& x, int samples, unsigned long seed);

}  // namespace wk
