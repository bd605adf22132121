#pragma once

#include <random>

#include "complexes.hpp"
#include "spectral.hpp"
#include "twisted.hpp"

namespace wk {

using Rng = std::mt19937_64;

long randInt(Rng& rng, long lo, long hi);
Matrix randomMatrix(Rng& rng, int rows, int cols, long bound, Ring ring = Ring::Z());

struct Unimodular {
  Matrix u, inv;
};
// Product of a few elementary operations with small multipliers.
Unimodular randomUnimodular(Rng& rng, int n, Ring ring = Ring::Z(), int steps = -1);

struct ComplexShape {
  int minDeg = 0, maxDeg = 0;
  int maxRank = 3;
  long maxMultiplier = 3;  // elementary pieces Z ->^m Z with |m| <= this
  Ring ring = Ring::Z();
};
// A direct sum of elementary pieces in a random basis; covers every iso class
// of bounded complexes over Z up to the size bounds.
Complex randomComplex(Rng& rng, const ComplexShape& shape);

// A chain map built from small combinations of a cycle basis plus a random boundary.
ChainMap randomChainMap(Rng& rng, const Complex& x, const Complex& y, long bound = 2);
// A random degree-n element of Hom(X,Y).
GradedMap randomGradedMap(Rng& rng, const Complex& x, const Complex& y, int n, long bound = 2);

// A random chain map of the form s o d_X + d_Y o t; d (t - s) d = 0 makes it a chain map.
ChainMap randomIdealZElement(Rng& rng, const Complex& x, const Complex& y, long bound = 2);

// Filtration levels 0..steps: each degree gets a random basis with weights in
// [0, steps] and an occasional multiplier, then F^s is closed under d.
FilteredComplex randomFilteredComplex(Rng& rng, const Complex& x, int steps);

// phi : X -> Y with endomorphisms f, g, h of X, Y, cone(phi) forming an endomorphism of
// the cone triangle up to homotopy. Families: scalars on arbitrary phi; f (+) e on
// X (+) E with phi = (p(f), 0) for a polynomial p; the latter with g moved by a boundary
// and h corrected by the induced homotopy.
struct TriangleEndomorphism {
  ChainMap phi, f, g, h;
};
TriangleEndomorphism randomTriangleEndomorphism(Rng& rng, const ComplexShape& shape);

// A Maurer-Cartan element over a negative category: random degree-0 arrows between
// neighbouring positions (half of them boundaries), longer arrows solved for plus a
// random cycle. Falls back to fewer nonzero arrows when a solve fails.
TwistedComplex randomTwisted(Rng& rng, const DGCategory& cat, int lo, int hi, int maxEntries, long bound = 2);
PreTrHomElement randomPreTr(Rng& rng, const TwistedComplex& m, const TwistedComplex& n, int l, long bound = 2);
// Random combination of a basis of the degree-0 PreTr cycles.
PreTrHomElement randomClosedPreTr(Rng& rng, const TwistedComplex& m, const TwistedComplex& n, long bound = 2);

}  // namespace wk
