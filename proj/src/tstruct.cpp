#include "tstruct.hpp"

#include <climits>

namespace wk {

namespace {

void requireZ(const Complex& x) {
  if (!x.ring().isZ()) throw Error(ErrorCode::WrongRing, "the canonical t-structure is implemented over Z");
}

}  // namespace

Complex canonicalTruncLE(const Complex& x, int i) { return canonicalTruncLEInclusion(x, i).src; }

ChainMap canonicalTruncLEInclusion(const Complex& x, int i) {
  requireZ(x);
  if (x.windowEmpty() || i < x.minDeg()) return ChainMap::zero(Complex::zero(), x);
  if (i >= x.maxDeg()) return ChainMap::identity(x);
  int lo = x.minDeg();
  Matrix k = kernelLattice(x.d(i)).basis;  // X^i x r
  std::vector<int> ranks;
  std::vector<Matrix> diffs;
  for (int n = lo; n <= i; ++n) ranks.push_back(n == i ? k.cols() : x.rank(n));
  for (int n = lo; n < i; ++n) {
    if (n + 1 < i) {
      diffs.push_back(x.d(n));
      continue;
    }
    auto c = solve(k, x.d(n));
    if (!c) throw Error(ErrorCode::NotClosed, "boundaries outside the cycle lattice");
    diffs.push_back(*c);
  }
  Complex t(x.ring(), lo, ranks, diffs);
  ChainMap inc = ChainMap::zero(t, x);
  for (int n = lo; n <= i; ++n) inc.set(n, n == i ? k : Matrix::identity(x.rank(n), x.ring()));
  return inc;
}

TDecomposition tDecompose(const Complex& x, int i) {
  requireZ(x);
  TDecomposition t;
  t.x = x;
  t.i = i;
  ChainMap inc = canonicalTruncLEInclusion(x, i);
  Cone c = cone(inc);
  t.tLE = inc.src;
  t.tGE = c.c;
  t.triangle = {inc, c.toCone, c.fromCone};
  auto w = isDistinguished(t.triangle);
  if (!w) throw Error(ErrorCode::NotExact, "t-decomposition triangle failed the cone comparison");
  t.witness = *w;
  return t;
}

bool inTLE(const Complex& x, int i) {
  if (x.windowEmpty()) return true;
  for (int n = std::max(i + 1, x.minDeg()); n <= x.maxDeg(); ++n)
    if (!homology(x, n).isZero()) return false;
  return true;
}

bool inTGE(const Complex& x, int i) {
  if (x.windowEmpty()) return true;
  for (int n = x.minDeg(); n <= std::min(i - 1, x.maxDeg()); ++n)
    if (!homology(x, n).isZero()) return false;
  return true;
}

std::string AdjacencyReport::str() const {
  return lhs.str() + (isomorphic ? " ~ " : " !~ ") + rhs.str();
}

AdjacencyReport checkAdjacencyHomFormula7(const Complex& x, const Complex& y, int i, int j) {
  requireZ(x);
  requireZ(y);
  AdjacencyReport r;
  r.lhs = KHomGroup(x, canonicalTruncLE(y, i), i + j).group();
  // Shifting both arguments by [j-1]: im(Hom(sigma_{<=-j} X, Y[i+j]) -> Hom(sigma_{<=1-j} X, Y[i+j])).
  r.rhs = virtualTruncation(FunctorSpec::homInto(y, i + j), x, -j, 1, TruncSide::Lower).group;
  r.isomorphic = r.lhs.sameInvariants(r.rhs);
  return r;
}

AdjacencyReport checkAdjacencyHomFormula8(const Complex& x, const Complex& y, int i, int j) {
  requireZ(x);
  requireZ(y);
  AdjacencyReport r;
  r.lhs = KHomGroup(x, tDecompose(y, i - 1).tGE, i + j).group();
  // im(Hom(sigma_{>=-1-j} X, Y[i+j]) -> Hom(sigma_{>=-j} X, Y[i+j]))
  r.rhs = virtualTruncation(FunctorSpec::homInto(y, i + j), x, -1 - j, 1, TruncSide::Upper).group;
  r.isomorphic = r.lhs.sameInvariants(r.rhs);
  return r;
}

FiltrationViaTReport checkWeightFiltViaT(const Complex& x, const Complex& y, int i) {
  requireZ(x);
  requireZ(y);
  FiltrationViaTReport r;
  r.viaWeights = weightFiltration(FunctorSpec::homInto(y, 0), x, i);
  ChainMap inc = canonicalTruncLEInclusion(y, i);
  KHomGroup src(x, inc.src, 0), tgt(x, y, 0);
  GroupHom g = GroupHom::induced(src.group(), tgt.group(), postcomposeMatrix(inc, x, 0));
  r.viaT = subgroupImage(g);
  return r;
}

}  // namespace wk
