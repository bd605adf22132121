#include "weights.hpp"

#include <climits>

#include "randgen.hpp"

namespace wk {

namespace {

constexpr int kLow = INT_MIN / 2;
constexpr int kHigh = INT_MAX / 2;

ChainMap degreeZeroIdentity(const Complex& src, const Complex& tgt, int rank) {
  ChainMap m = ChainMap::zero(src, tgt);
  if (rank > 0) m.set(0, Matrix::identity(rank, src.ring()));
  return m;
}

// f^k : X^{w<=k} -> X^{w>=k+1}. At degree 0 this is the differential of X[k],
// (-1)^k d^k; with this sign y^k, d^k and b^k are plain identities/inclusions.
ChainMap towerF(const Complex& x, int k) {
  ChainMap c = shiftMap(splitConnecting(x, k), k);
  return k % 2 == 0 ? -c : c;
}

int parity(int k) { return k % 2 == 0 ? 1 : -1; }

}  // namespace

WeightDecomposition weightDecompose(const Complex& x, int k) {
  WeightDecomposition w;
  w.x = x;
  w.k = k;
  w.a = stupidTruncLE(x, k);
  w.b = stupidTruncGE(x, k + 1);
  w.mapXA = truncLEProjection(x, k);
  w.mapBshiftX = truncGEInclusion(x, k + 1);
  w.connecting = splitConnecting(x, k);
  auto t = isDistinguished({w.mapBshiftX, w.mapXA, w.connecting});
  if (!t) throw Error(ErrorCode::NotExact, "split triangle failed the cone comparison");
  w.coherence = *t;
  return w;
}

// ---------------------------------------------------------------- tower

Complex PostnikovTower::upperLE(int k) const { return shift(stupidTruncLE(x, k), k); }
Complex PostnikovTower::upperGE(int k) const { return shift(stupidTruncGE(x, k), k); }
Complex PostnikovTower::heart(int k) const { return Complex::concentrated(x.rank(k), 0, x.ring()); }

Triangle PostnikovTower::leTriangle(int k) const { return {sAt(k), cAt(k), dAt(k)}; }
Triangle PostnikovTower::geTriangle(int k) const { return {xAt(k), qAt(k), yAt(k)}; }
Triangle PostnikovTower::decompositionTriangle(int k) const {
  ChainMap a = shiftMap(truncLEProjection(x, k), k);
  ChainMap b = shiftMap(truncGEInclusion(x, k + 1), k + 1);
  return {a, towerF(x, k), b};
}

PostnikovTower postnikovTower(const Complex& x) {
  PostnikovTower t;
  t.x = x;
  t.lo = x.minDeg();
  t.hi = x.maxDeg();
  if (x.windowEmpty()) return t;
  for (int k = t.lo; k <= t.hi; ++k) {
    t.wLE.push_back(stupidTruncLE(x, k));
    t.wGE.push_back(stupidTruncGE(x, k));
    Complex heart = t.heart(k);
    t.heartPiece.push_back(heart);
    ChainMap fk = towerF(x, k);
    ChainMap fk1 = towerF(x, k - 1);
    ChainMap yk = degreeZeroIdentity(t.upperGE(k), heart, x.rank(k));
    ChainMap dk = degreeZeroIdentity(heart, t.upperLE(k), x.rank(k));
    t.f.push_back(fk);
    t.y.push_back(yk);
    t.d.push_back(dk);
    t.s.push_back(shiftMap(windowComparison(x, kLow, k, kLow, k - 1), k - 1));
    t.c.push_back(compose(yk, fk1));
    t.q.push_back(shiftMap(windowComparison(x, k + 1, kHigh, k, kHigh), k));
    t.xm.push_back(shiftMap(compose(fk, dk), -1));
  }
  return t;
}

// ---------------------------------------------------------------- weight complex

Complex WeightComplexObj::asComplex() const {
  if (heartRanks.empty()) return Complex::zero(ring);
  return Complex(ring, lo, heartRanks, boundaries);
}

WeightComplexObj weightComplex(const Complex& x) {
  WeightComplexObj w;
  w.ring = x.ring();
  if (x.windowEmpty()) return w;
  PostnikovTower t = postnikovTower(x);
  w.lo = t.lo;
  for (int k = t.lo; k <= t.hi; ++k) w.heartRanks.push_back(x.rank(k));
  for (int k = t.lo; k < t.hi; ++k) {
    ChainMap h = compose(t.cAt(k + 1), t.dAt(k));
    Matrix raw = h.at(0);
    w.rawBoundaries.push_back(raw);
    w.boundaries.push_back(raw.scaled(parity(k)));
  }
  for (size_t k = 0; k + 1 < w.boundaries.size(); ++k)
    if (!(w.boundaries[k + 1] * w.boundaries[k]).isZero())
      throw Error(ErrorCode::InvalidArgument, "weight complex boundaries do not square to zero");
  return w;
}

ChainMap weightComplexMap(const ChainMap& g) {
  requireChainMap(g);
  Complex a = weightComplex(g.src).asComplex(), b = weightComplex(g.tgt).asComplex();
  ChainMap r = ChainMap::zero(a, b);
  // The heart component of g at k is y'^k o g[k] o d^k read in degree 0.
  for (int k = a.minDeg(); k <= a.maxDeg() && !a.windowEmpty(); ++k) r.set(k, g.at(k));
  requireChainMap(r);
  return r;
}

// ---------------------------------------------------------------- morphisms

WDMorphism weightDecomposeMorphism(const ChainMap& g, int k) {
  requireChainMap(g);
  return {truncLEMap(g, k), truncGEMap(g, k + 1)};
}

bool isWDMorphismOf(const ChainMap& g, int k, const WDMorphism& m) {
  requireChainMap(g);
  requireChainMap(m.h);
  requireChainMap(m.i);
  WeightDecomposition dx = weightDecompose(g.src, k), dy = weightDecompose(g.tgt, k);
  if (m.h.src != dx.a || m.h.tgt != dy.a || m.i.src != dx.b || m.i.tgt != dy.b) return false;
  ChainMap sq1 = compose(m.h, dx.mapXA) - compose(dy.mapXA, g);
  ChainMap sq2 = compose(g, dx.mapBshiftX) - compose(dy.mapBshiftX, m.i);
  ChainMap sq3 = compose(dy.connecting, m.h) - compose(shiftMap(m.i, 1), dx.connecting);
  return isNullHomotopic(sq1) && isNullHomotopic(sq2) && isNullHomotopic(sq3);
}

std::optional<WDEquivalenceWitness> wdEquivalent(const ChainMap& g, int k, const WDMorphism& m1,
                                                 const WDMorphism& m2) {
  WeightDecomposition dx = weightDecompose(g.src, k), dy = weightDecompose(g.tgt, k);
  Complex b1 = shift(dx.b, 1), bp1 = shift(dy.b, 1);
  Ring R = g.src.ring();
  WDEquivalenceWitness w;
  {
    // h1 - h2 = s o conn_X + D e
    BlockSystem sys(R);
    int vs = sys.addVar(homDim(b1, dy.a, 0));
    int ve = sys.addVar(homDim(dx.a, dy.a, -1));
    int e0 = sys.addEq(homDim(b1, dy.a, 1));
    int e1 = sys.addEq(homDim(dx.a, dy.a, 0));
    sys.add(e0, vs, homDifferentialMatrix(b1, dy.a, 0));
    sys.add(e1, vs, precomposeMatrix(dx.connecting, dy.a, 0));
    sys.add(e1, ve, homDifferentialMatrix(dx.a, dy.a, -1));
    sys.setRhs(e1, vecOf(m1.h - m2.h));
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    w.s = unvec(b1, dy.a, 0, (*sol)[vs]);
  }
  {
    // i1[1] - i2[1] = conn_X' o s' + D e
    BlockSystem sys(R);
    int vs = sys.addVar(homDim(b1, dy.a, 0));
    int ve = sys.addVar(homDim(b1, bp1, -1));
    int e0 = sys.addEq(homDim(b1, dy.a, 1));
    int e1 = sys.addEq(homDim(b1, bp1, 0));
    sys.add(e0, vs, homDifferentialMatrix(b1, dy.a, 0));
    sys.add(e1, vs, postcomposeMatrix(dy.connecting, b1, 0));
    sys.add(e1, ve, homDifferentialMatrix(b1, bp1, -1));
    sys.setRhs(e1, vecOf(shiftMap(m1.i - m2.i, 1)));
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    w.sPrime = unvec(b1, dy.a, 0, (*sol)[vs]);
  }
  return w;
}

bool inWeightLE(const Complex& x, int i) { return isNullHomotopic(truncGEInclusion(x, i + 1)).has_value(); }
bool inWeightGE(const Complex& x, int i) { return isNullHomotopic(truncLEProjection(x, i - 1)).has_value(); }

std::optional<MinimalModel> weightComplexBoundedAbove(const Complex& x, int i) {
  MinimalModel mm = minimalModel(weightComplex(x).asComplex());
  for (int n = i + 1; n <= mm.m.maxDeg(); ++n)
    if (mm.m.rank(n) != 0) return std::nullopt;
  return mm;
}

// ---------------------------------------------------------------- functors

std::string FunctorSpec::str() const {
  switch (kind) {
    case Kind::CohomologyDegree:
      return "H^" + std::to_string(n);
    case Kind::CohomologyModM:
      return "H^" + std::to_string(n) + "(-;Z/" + std::to_string(m) + ")";
    case Kind::HomKFrom:
      return "Hom_K(T,-[" + std::to_string(n) + "])";
    case Kind::HomKInto:
      return "Hom_K(-,T[" + std::to_string(n) + "])";
  }
  return "?";
}

std::pair<int, int> FunctorSpec::degreeSupport() const {
  switch (kind) {
    case Kind::CohomologyDegree:
    case Kind::CohomologyModM:
      return {n, n};
    case Kind::HomKFrom:
      if (t.windowEmpty()) return {1, 0};
      return {t.minDeg() + n, t.maxDeg() + n};
    case Kind::HomKInto:
      if (t.windowEmpty()) return {1, 0};
      return {t.minDeg() - n, t.maxDeg() - n};
  }
  return {1, 0};
}

namespace {

FGAbGroup cohomologyModM(const Complex& x, int n, long m) {
  if (!x.ring().isZ()) throw Error(ErrorCode::WrongRing, "mod-m cohomology is defined for complexes over Z");
  int r = x.rank(n);
  Lattice mod = Lattice::multiples(x.rank(n + 1), m);
  Lattice num = latticePreimage(x.d(n), mod);
  Matrix den = Matrix::hstack(x.d(n - 1), Matrix::scalar(r, m));
  return FGAbGroup::subquotient(num.basis, den, r);
}

}  // namespace

FGAbGroup evaluate(const FunctorSpec& h, const Complex& x) {
  switch (h.kind) {
    case FunctorSpec::Kind::CohomologyDegree:
      return cohomologyAnyRing(x, h.n);
    case FunctorSpec::Kind::CohomologyModM:
      return cohomologyModM(x, h.n, h.m);
    case FunctorSpec::Kind::HomKFrom:
      return KHomGroup(h.t, x, h.n).group();
    case FunctorSpec::Kind::HomKInto:
      return KHomGroup(x, h.t, h.n).group();
  }
  throw Error(ErrorCode::InvalidArgument, "unknown functor kind");
}

Matrix ambientMap(const FunctorSpec& h, const ChainMap& g) {
  requireChainMap(g);
  switch (h.kind) {
    case FunctorSpec::Kind::CohomologyDegree:
    case FunctorSpec::Kind::CohomologyModM:
      return g.at(h.n);
    case FunctorSpec::Kind::HomKFrom:
      return postcomposeMatrix(g, h.t, h.n);
    case FunctorSpec::Kind::HomKInto:
      return precomposeMatrix(g, h.t, h.n);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown functor kind");
}

GroupHom applyFunctor(const FunctorSpec& h, const ChainMap& g) {
  FGAbGroup a = evaluate(h, g.src), b = evaluate(h, g.tgt);
  if (h.covariant()) return GroupHom::induced(a, b, ambientMap(h, g));
  return GroupHom::induced(b, a, ambientMap(h, g));
}

Lattice weightFiltration(const FunctorSpec& h, const Complex& x, int i) {
  ChainMap m = h.covariant() ? truncGEInclusion(x, i) : truncLEProjection(x, i);
  return subgroupImage(applyFunctor(h, m));
}

VirtualTruncation virtualTruncation(const FunctorSpec& h, const Complex& x, int k, int j, TruncSide side) {
  if (j < 1) throw Error(ErrorCode::InvalidArgument, "virtual truncation needs j >= 1");
  // The same chain map serves both variances; contravariant F reverses it.
  ChainMap m = side == TruncSide::Lower ? windowComparison(x, kLow, k + j, kLow, k)
                                        : windowComparison(x, k + j, kHigh, k, kHigh);
  GroupHom g = applyFunctor(h, m);
  VirtualTruncation v;
  v.defining = m;
  v.ambient = g.tgt;
  v.group = subgroupAsGroup(g.tgt, subgroupImage(g));
  return v;
}

bool LESReport::allExact() const {
  for (bool b : exactAt)
    if (!b) return false;
  return true;
}

namespace {

// The map induced on ambients, between subquotients realized in those ambients.
GroupHom restricted(const FGAbGroup& src, const FGAbGroup& tgt, const FunctorSpec& h, const ChainMap& m) {
  return GroupHom::induced(src, tgt, ambientMap(h, m));
}

}  // namespace

LESReport virtualTruncationLES(const FunctorSpec& h, const Complex& x, int k, int s0, int s1) {
  LESReport rep;
  for (int s = s0; s <= s1; ++s) {
    Complex y = shift(x, s);
    std::string tag = "X[" + std::to_string(s) + "]";
    if (h.covariant()) {
      // F_2(Y) -> F(Y) -> F_1(Y) -> F_2(Y[1])
      VirtualTruncation f2 = virtualTruncation(h, y, k, 1, TruncSide::Upper);
      VirtualTruncation f1 = virtualTruncation(h, y, k, 1, TruncSide::Lower);
      FGAbGroup fy = evaluate(h, y);
      rep.nodes.push_back({"F2(" + tag + ")", f2.group});
      rep.nodes.push_back({"F(" + tag + ")", fy});
      rep.nodes.push_back({"F1(" + tag + ")", f1.group});
      rep.maps.push_back(restricted(f2.group, fy, h, truncGEInclusion(y, k)));
      rep.maps.push_back(restricted(fy, f1.group, h, truncLEProjection(y, k)));
      if (s < s1) {
        VirtualTruncation n2 = virtualTruncation(h, shift(y, 1), k, 1, TruncSide::Upper);
        rep.maps.push_back(restricted(f1.group, n2.group, h, splitConnecting(y, k)));
      }
    } else {
      // F_1(Y) -> F(Y) -> F_2(Y) -> F_1(Y[-1]); walk the shifts downwards.
      Complex yd = shift(x, s1 - (s - s0));
      std::string tg = "X[" + std::to_string(s1 - (s - s0)) + "]";
      VirtualTruncation f1 = virtualTruncation(h, yd, k, 1, TruncSide::Lower);
      VirtualTruncation f2 = virtualTruncation(h, yd, k, 1, TruncSide::Upper);
      FGAbGroup fy = evaluate(h, yd);
      rep.nodes.push_back({"F1(" + tg + ")", f1.group});
      rep.nodes.push_back({"F(" + tg + ")", fy});
      rep.nodes.push_back({"F2(" + tg + ")", f2.group});
      rep.maps.push_back(restricted(f1.group, fy, h, truncLEProjection(yd, k + 1)));
      rep.maps.push_back(restricted(fy, f2.group, h, truncGEInclusion(yd, k + 1)));
      if (s < s1) {
        Complex ydn = shift(yd, -1);
        VirtualTruncation n1 = virtualTruncation(h, ydn, k, 1, TruncSide::Lower);
        // (sigma_{<=k} Y)[-1] -> sigma_{>=k+1} Y is the connecting map shifted by -1.
        ChainMap conn = shiftMap(splitConnecting(yd, k), -1);
        rep.maps.push_back(restricted(f2.group, n1.group, h, conn));
      }
    }
  }
  for (size_t i = 1; i + 1 < rep.nodes.size(); ++i) {
    Lattice im = subgroupImage(rep.maps[i - 1]);
    Lattice ker = subgroupKernel(rep.maps[i]);
    rep.exactAt.push_back(im == ker);
  }
  return rep;
}

FGAbGroup doubleVirtualTruncation(const FunctorSpec& h, const Complex& x) {
  ChainMap m = windowComparison(x, 0, 1, -1, 0);
  GroupHom g = applyFunctor(h, m);
  return subgroupAsGroup(g.tgt, subgroupImage(g));
}

// ---------------------------------------------------------------- ideals

IdealTester zIdealTester() {
  return [](const ChainMap& f) { return inIdealZ(f).has_value(); };
}

IdealTester multiplesTester(long m) {
  return [m](const ChainMap& f) {
    for (const Matrix& c : f.comps)
      for (int i = 0; i < c.rows(); ++i)
        for (int j = 0; j < c.cols(); ++j)
          if (c(i, j) % m != 0) return false;
    return true;
  };
}

IdempotentLift idempotentLift(const ChainMap& r, const IdealTester& tester) {
  requireChainMap(r);
  if (r.src != r.tgt) throw Error(ErrorCode::NotEndomorphism, "idempotent lift needs an endomorphism");
  ChainMap r2 = compose(r, r);
  if (!tester(r2 - r)) throw Error(ErrorCode::NotAlmostIdempotent, "r^2 - r is not in the ideal");
  ChainMap r3 = compose(r2, r);
  IdempotentLift out;
  out.lifted = r2.scaled(3) - r3.scaled(2);
  ChainMap sq = compose(out.lifted, out.lifted);
  out.exactlyIdempotent = sq == out.lifted;
  out.idempotentInK = isNullHomotopic(sq - out.lifted).has_value();
  out.congruent = tester(out.lifted - r);
  return out;
}

NilpotencyReport kernelIdealNilpotency(const Complex& x, int samples, unsigned long seed) {
  NilpotencyReport rep;
  rep.span = x.windowEmpty() ? 0 : x.maxDeg() - x.minDeg() + 1;
  rep.samples = samples;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    ChainMap prod = ChainMap::identity(x);
    for (int l = 0; l < std::max(rep.span, 1); ++l) {
      // t(g) = 0 in K_w: g lies in Z up to homotopy.
      ChainMap g = randomIdealZElement(rng, x, x, 2);
      if (randInt(rng, 0, 1)) g = g + homDifferential(randomGradedMap(rng, x, x, -1, 1));
      prod = compose(g, prod);
    }
    auto w = isNullHomotopic(prod);
    if (w) {
      ++rep.passed;
      rep.witnesses.push_back(*w);
    }
  }
  return rep;
}

}  // namespace wk
