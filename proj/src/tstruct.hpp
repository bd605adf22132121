#pragma once

#include "weights.hpp"

namespace wk {

// Canonical t-structure on K^b(free Z) = D^b(f.g. abelian groups):
// C^{t<=0} = {H^n = 0 for n > 0}, C^{t>=0} = {H^n = 0 for n < 0}.
// X^{t<=i} = (tau_{<=i} X)[i] and X^{t>=i} = (tau_{>=i} X)[i].

// Degrees < i unchanged, X^i replaced by the free lattice ker d^i (Hermite basis),
// nothing above. Throws WrongRing off Z.
Complex canonicalTruncLE(const Complex& x, int i);
ChainMap canonicalTruncLEInclusion(const Complex& x, int i);

// tau_{<=i} X -> X -> cone -> tau_{<=i} X [1]; the cone stands in for tau_{>=i+1} X.
struct TDecomposition {
  Complex x;
  int i = 0;
  Complex tLE, tGE;
  Triangle triangle;
  TriangleWitness witness;
};
TDecomposition tDecompose(const Complex& x, int i);

bool inTLE(const Complex& x, int i);  // H^n = 0 for n > i
bool inTGE(const Complex& x, int i);  // H^n = 0 for n < i

struct AdjacencyReport {
  FGAbGroup lhs, rhs;
  bool isomorphic = false;
  std::string str() const;
};

// C(X, Y^{t<=i}[j]) vs im(C(X^{w<=-j}, Y[i]) -> C(X^{w<=1-j}, Y[i+1])).
AdjacencyReport checkAdjacencyHomFormula7(const Complex& x, const Complex& y, int i, int j);
// C(X, Y^{t>=i}[j]) vs im(C(X^{w>=-1-j}, Y[i-1]) -> C(X^{w>=-j}, Y[i])): the arrow runs
// from the X^{w>=-1-j} term, precomposition with X^{w>=-j}[-1] -> X^{w>=-1-j}.
AdjacencyReport checkAdjacencyHomFormula8(const Complex& x, const Complex& y, int i, int j);

struct FiltrationViaTReport {
  Lattice viaWeights;  // W^i(F)(X), F = Hom_K(-, Y)
  Lattice viaT;        // im(Hom_K(X, tau_{<=i} Y) -> Hom_K(X, Y))
  bool equal() const { return viaWeights == viaT; }
};
FiltrationViaTReport checkWeightFiltViaT(const Complex& x, const Complex& y, int i);

}  // namespace wk
