#include "randgen.hpp"

#include <algorithm>
#include <cstdint>

namespace wk {

// Rejection sampling on raw 64-bit draws: the same stream on every standard library.
long randInt(Rng& rng, long lo, long hi) {
  uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
  if (span == 0) return static_cast<long>(rng());
  uint64_t limit = span * (UINT64_MAX / span);
  uint64_t x = rng();
  while (x >= limit) x = rng();
  return lo + static_cast<long>(x % span);
}

Matrix randomMatrix(Rng& rng, int rows, int cols, long bound, Ring ring) {
  Matrix m(rows, cols, ring);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = randInt(rng, -bound, bound);
  m.normalize();
  return m;
}

Unimodular randomUnimodular(Rng& rng, int n, Ring ring, int steps) {
  Unimodular r{Matrix::identity(n, ring), Matrix::identity(n, ring)};
  if (n <= 1) {
    if (n == 1 && randInt(rng, 0, 1)) r.u = r.inv = Matrix::scalar(1, -1, ring);
    return r;
  }
  if (steps < 0) steps = 2 * n;
  for (int s = 0; s < steps; ++s) {
    int i = static_cast<int>(randInt(rng, 0, n - 1));
    int j = static_cast<int>(randInt(rng, 0, n - 2));
    if (j >= i) ++j;
    long q = randInt(rng, -2, 2);
    if (q == 0) q = 1;
    // u <- E u with E = I + q e_ij, inv <- inv E^{-1}
    Matrix e = Matrix::identity(n, ring), einv = Matrix::identity(n, ring);
    e(i, j) = q;
    einv(i, j) = -q;
    e.normalize();
    einv.normalize();
    r.u = e * r.u;
    r.inv = r.inv * einv;
  }
  return r;
}

Complex randomComplex(Rng& rng, const ComplexShape& shape) {
  int lo = shape.minDeg, hi = shape.maxDeg;
  if (lo > hi) return Complex::zero(shape.ring);
  int len = hi - lo + 1;
  std::vector<int> ranks(len);
  for (auto& r : ranks) r = static_cast<int>(randInt(rng, 0, shape.maxRank));
  // Elementary pieces: k[i] arrows from degree lo+i to lo+i+1.
  std::vector<int> used(len, 0);  // basis vectors of degree i already targets
  std::vector<Matrix> diffs;
  for (int i = 0; i + 1 < len; ++i) {
    int avail = ranks[i] - used[i];
    int k = static_cast<int>(randInt(rng, 0, std::min(avail, ranks[i + 1])));
    Matrix d(ranks[i + 1], ranks[i], shape.ring);
    for (int a = 0; a < k; ++a) {
      long m = randInt(rng, 1, shape.maxMultiplier);
      if (randInt(rng, 0, 1)) m = -m;
      d(a, used[i] + a) = m;
    }
    used[i + 1] = k;
    d.normalize();
    diffs.push_back(d);
  }
  std::vector<Unimodular> basis;
  for (int i = 0; i < len; ++i) basis.push_back(randomUnimodular(rng, ranks[i], shape.ring));
  for (int i = 0; i + 1 < len; ++i) diffs[i] = basis[i + 1].u * diffs[i] * basis[i].inv;
  return Complex(shape.ring, lo, ranks, diffs);
}

GradedMap randomGradedMap(Rng& rng, const Complex& x, const Complex& y, int n, long bound) {
  GradedMap f = GradedMap::zero(x, y, n);
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i) f.set(i, randomMatrix(rng, y.rank(i + n), x.rank(i), bound, x.ring()));
  return f;
}

ChainMap randomChainMap(Rng& rng, const Complex& x, const Complex& y, long bound) {
  Lattice z = cycleLattice(homDifferentialMatrix(x, y, 0), homDim(x, y, 0), x.ring());
  Matrix v(homDim(x, y, 0), 1);
  for (int k = 0; k < z.rank(); ++k) {
    long c = randInt(rng, -bound, bound);
    if (c != 0) v = v + z.basis.colsRange(k, 1).scaled(c);
  }
  ChainMap f = unvec(x, y, 0, v.withRing(x.ring()));
  if (x.ring().isMod() || randInt(rng, 0, 1)) f = f + homDifferential(randomGradedMap(rng, x, y, -1, 1));
  return f;
}

ChainMap randomIdealZElement(Rng& rng, const Complex& x, const Complex& y, long bound) {
  GradedMap dx = differentialMap(x), dy = differentialMap(y);
  Matrix sandwich = postcomposeMatrix(dy, x, 0) * precomposeMatrix(dx, y, -1);
  Lattice k = kernelLattice(sandwich);
  Matrix u(homDim(x, y, -1), 1, x.ring());
  for (int c = 0; c < k.rank(); ++c) u = u + k.basis.colsRange(c, 1).withRing(x.ring()).scaled(randInt(rng, -bound, bound));
  GradedMap s = randomGradedMap(rng, x, y, -1, bound);
  GradedMap t = s + unvec(x, y, -1, u);
  return compose(s, dx) + compose(dy, t);
}

FilteredComplex randomFilteredComplex(Rng& rng, const Complex& x, int steps) {
  if (x.windowEmpty()) return FilteredComplex::trivial(x);
  int lo = x.minDeg(), hi = x.maxDeg();
  std::vector<std::vector<Lattice>> lv;
  std::vector<Lattice> prev;
  for (int n = lo; n <= hi; ++n) {
    int r = x.rank(n);
    Matrix u = randomUnimodular(rng, r).u;
    std::vector<long> w(r);
    for (int c = 0; c < r; ++c) w[c] = randInt(rng, 0, steps);
    std::vector<Lattice> row;
    for (int s = 0; s <= steps; ++s) {
      Matrix gens(r, 0);
      for (int c = 0; c < r; ++c) {
        if (w[c] < s) continue;
        long mult = (s > 0 && randInt(rng, 0, 3) == 0) ? randInt(rng, 2, 3) : 1;
        gens = Matrix::hstack(gens, u.colsRange(c, 1).scaled(mult));
      }
      Lattice l = s == 0 ? Lattice::full(r) : Lattice::fromGenerators(gens);
      if (s > 0) l = latticeIntersect(l, row.back());
      if (n > lo) l = latticeSum(l, latticeImage(x.d(n - 1), prev[s]));
      row.push_back(l);
    }
    prev = row;
    lv.push_back(row);
  }
  return FilteredComplex(x, 0, steps, lv);
}

}  // namespace wk

namespace wk {

namespace {

Matrix randomCombination(Rng& rng, const Matrix& gens, long bound) {
  return gens * randomMatrix(rng, gens.cols(), 1, bound);
}

std::optional<TwistedComplex> tryTwisted(Rng& rng, TwistedComplex m, long bound, bool allowArrows, int boundaryBias) {
  const DGCategoryData& c = *m.cat;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < m.size(); ++a)
    for (int b = 0; b < m.size(); ++b)
      if (m.pos(b) > m.pos(a)) pairs.push_back({a, b});
  std::stable_sort(pairs.begin(), pairs.end(), [&](auto x, auto y) {
    return m.pos(x.second) - m.pos(x.first) < m.pos(y.second) - m.pos(y.first);
  });
  for (auto [a, b] : pairs) {
    int deg = m.arrowDegree(a, b);
    int pa = m.obj(a), pb = m.obj(b);
    int r = c.rank(pa, pb, deg);
    if (deg == 0) {
      if (r == 0) continue;
      if (!allowArrows || randInt(rng, 0, 2) == 0) continue;
      Matrix v;
      if (randInt(rng, 0, 3) < boundaryBias && c.rank(pa, pb, -1) > 0)
        v = c.delta(pa, pb, -1, randomMatrix(rng, c.rank(pa, pb, -1), 1, bound));
      else
        v = randomMatrix(rng, r, 1, bound);
      m.setArrow(a, b, v);
      continue;
    }
    // (-1)^{pos_b} delta q^{ab} = -sum_x q^{xb} q^{ax}
    Matrix rhs = c.zero(pa, pb, deg + 1);
    for (int x = 0; x < m.size(); ++x) {
      Matrix qxb = m.arrow(x, b), qax = m.arrow(a, x);
      if (qxb.isZero() || qax.isZero()) continue;
      rhs = rhs - c.compose(pa, m.obj(x), pb, m.arrowDegree(x, b), qxb, m.arrowDegree(a, x), qax);
    }
    if (m.pos(b) & 1) rhs = -rhs;
    Matrix d = c.hom(pa, pb).d(deg);
    Matrix v(r, 1);
    if (!rhs.isZero()) {
      if (r == 0) return std::nullopt;
      auto s = solve(d, rhs);
      if (!s) return std::nullopt;
      v = *s;
    }
    if (allowArrows && randInt(rng, 0, 1)) v = v + randomCombination(rng, integerKernel(d), 1);
    m.setArrow(a, b, v);
  }
  return m;
}

}  // namespace

TwistedComplex randomTwisted(Rng& rng, const DGCategory& cat, int lo, int hi, int maxEntries, long bound) {
  TwistedComplex m;
  m.cat = cat;
  int n = static_cast<int>(randInt(rng, std::min(2, maxEntries), maxEntries));
  // positions in small steps so that neighbouring entries are common
  int p = static_cast<int>(randInt(rng, lo, hi));
  for (int k = 0; k < n; ++k) {
    m.entries.push_back({p, static_cast<int>(randInt(rng, 0, cat->size() - 1))});
    p = std::min(hi, p + static_cast<int>(randInt(rng, 0, 1)));
  }
  for (int attempt = 0; attempt < 8; ++attempt)
    if (auto r = tryTwisted(rng, m, bound, true, 2 + attempt / 2)) return *r;
  return *tryTwisted(rng, m, bound, false, 0);
}

PreTrHomElement randomPreTr(Rng& rng, const TwistedComplex& m, const TwistedComplex& n, int l, long bound) {
  return preTrUnvec(m, n, l, randomMatrix(rng, preTrDim(m, n, l), 1, bound));
}

PreTrHomElement randomClosedPreTr(Rng& rng, const TwistedComplex& m, const TwistedComplex& n, long bound) {
  Matrix k = integerKernel(preTrDifferentialMatrix(m, n, 0));
  return preTrUnvec(m, n, 0, randomCombination(rng, k, bound));
}

}  // namespace wk

namespace wk {

namespace {

ChainMap scalarEndo(const Complex& x, long a) {
  ChainMap f = ChainMap::zero(x, x);
  for (int i = x.minDeg(); i <= x.maxDeg() && !x.windowEmpty(); ++i) f.set(i, Matrix::scalar(x.rank(i), a));
  return f;
}

// [[f[1], 0], [s, g]] on cone^i = X^{i+1} (+) Y^i, s : X^{i+1} -> Y^i.
ChainMap coneEndo(const Cone& c, const ChainMap& f, const ChainMap& g, const Homotopy& s) {
  ChainMap h = ChainMap::zero(c.c, c.c);
  for (int i = c.c.minDeg(); i <= c.c.maxDeg() && !c.c.windowEmpty(); ++i) {
    int a = f.src.rank(i + 1), b = g.src.rank(i);
    Matrix m(a + b, a + b);
    m.setBlock(0, 0, f.at(i + 1));
    m.setBlock(a, a, g.at(i));
    m.setBlock(a, 0, s.at(i + 1));
    h.set(i, m);
  }
  return h;
}

}  // namespace

TriangleEndomorphism randomTriangleEndomorphism(Rng& rng, const ComplexShape& shape) {
  TriangleEndomorphism t;
  int family = static_cast<int>(randInt(rng, 0, 2));
  if (family == 0) {
    Complex x = randomComplex(rng, shape), y = randomComplex(rng, shape);
    long a = randInt(rng, -3, 3);
    t.phi = randomChainMap(rng, x, y);
    Cone c = cone(t.phi);
    t.f = scalarEndo(x, a);
    t.g = scalarEndo(y, a);
    t.h = scalarEndo(c.c, a);
    return t;
  }
  Complex x = randomComplex(rng, shape), e = randomComplex(rng, shape);
  ChainMap f = randomChainMap(rng, x, x), ee = randomChainMap(rng, e, e);
  ChainMap p = scalarEndo(x, randInt(rng, -2, 2)) + f.scaled(randInt(rng, -1, 1)) +
               compose(f, f).scaled(randInt(rng, -1, 1));
  Complex y = directSum(x, e);
  t.phi = compose(sumInclusion1(x, e), p);
  t.f = f;
  t.g = directSumMap(f, ee);
  Homotopy s = Homotopy::zero(x, y, -1);
  if (family == 2) {
    Homotopy k = randomGradedMap(rng, y, y, -1);
    t.g = t.g + homDifferential(k);
    s = compose(k, t.phi);  // g phi - phi f = D(k phi)
  }
  // chain map iff g phi - phi f = D(s)
  t.h = coneEndo(cone(t.phi), t.f, t.g, s);
  return t;
}

}  // namespace wk
