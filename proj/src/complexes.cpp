#include "complexes.hpp"

#include <algorithm>
#include <climits>
#include <functional>

namespace wk {

namespace {

int sgn(int n) { return (n % 2 == 0) ? 1 : -1; }

Complex buildComplex(Ring ring, int lo, int hi, const std::function<int(int)>& rankAt,
                     const std::function<Matrix(int)>& dAt) {
  if (lo > hi) return Complex::zero(ring);
  std::vector<int> ranks;
  std::vector<Matrix> diffs;
  for (int i = lo; i <= hi; ++i) ranks.push_back(rankAt(i));
  for (int i = lo; i < hi; ++i) diffs.push_back(dAt(i));
  return Complex(ring, lo, ranks, diffs);
}

void requireSameRing(const Complex& a, const Complex& b) {
  if (!(a.ring() == b.ring())) throw Error(ErrorCode::RingMismatch, "complexes over different rings");
}

}  // namespace

Complex::Complex(Ring ring, int minDeg, std::vector<int> ranks, std::vector<Matrix> diffs)
    : ring_(ring), min_(minDeg), ranks_(std::move(ranks)), diffs_(std::move(diffs)) {
  if (ranks_.empty()) {
    min_ = 0;
    if (!diffs_.empty()) throw Error(ErrorCode::DimensionMismatch, "differentials on an empty window");
    return;
  }
  if (diffs_.size() + 1 != ranks_.size())
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(ranks_.size() - 1) + " differentials");
  for (int r : ranks_)
    if (r < 0) throw Error(ErrorCode::DimensionMismatch, "negative rank");
  for (size_t k = 0; k < diffs_.size(); ++k) {
    const Matrix& m = diffs_[k];
    int deg = min_ + static_cast<int>(k);
    if (!(m.ring() == ring_))
      throw Error(ErrorCode::RingMismatch, "differential d^" + std::to_string(deg) + " has the wrong ring");
    if (m.rows() != ranks_[k + 1] || m.cols() != ranks_[k])
      throw Error(ErrorCode::DimensionMismatch, "differential d^" + std::to_string(deg) + " has the wrong shape");
  }
  for (size_t k = 0; k + 1 < diffs_.size(); ++k) {
    if (!(diffs_[k + 1] * diffs_[k]).isZero())
      throw Error(ErrorCode::InvalidArgument,
                  "d^" + std::to_string(min_ + static_cast<int>(k) + 1) + " d^" +
                      std::to_string(min_ + static_cast<int>(k)) + " != 0 at degree " +
                      std::to_string(min_ + static_cast<int>(k)));
  }
}

Complex Complex::concentrated(int rank, int degree, Ring ring) { return Complex(ring, degree, {rank}, {}); }

int Complex::rank(int i) const {
  if (ranks_.empty() || i < min_ || i > maxDeg()) return 0;
  return ranks_[i - min_];
}

int Complex::totalRank() const {
  int s = 0;
  for (int r : ranks_) s += r;
  return s;
}

Matrix Complex::d(int i) const {
  if (!ranks_.empty() && i >= min_ && i < maxDeg()) return diffs_[i - min_];
  return Matrix(rank(i + 1), rank(i), ring_);
}

bool Complex::operator==(const Complex& o) const {
  return ring_ == o.ring_ && min_ == o.min_ && ranks_ == o.ranks_ && diffs_ == o.diffs_;
}

// ---------------------------------------------------------------- graded maps

GradedMap GradedMap::zero(const Complex& src, const Complex& tgt, int deg) {
  requireSameRing(src, tgt);
  GradedMap f;
  f.src = src;
  f.tgt = tgt;
  f.deg = deg;
  for (int i = src.minDeg(); i <= src.maxDeg(); ++i) f.comps.emplace_back(tgt.rank(i + deg), src.rank(i), src.ring());
  return f;
}

GradedMap GradedMap::identity(const Complex& x) {
  GradedMap f = zero(x, x, 0);
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i) f.set(i, Matrix::identity(x.rank(i), x.ring()));
  return f;
}

GradedMap GradedMap::fromComponents(const Complex& src, const Complex& tgt, int deg, const std::vector<Matrix>& comps) {
  GradedMap f = zero(src, tgt, deg);
  if (comps.size() != f.comps.size()) throw Error(ErrorCode::DimensionMismatch, "component count mismatch");
  for (size_t k = 0; k < comps.size(); ++k) f.set(src.minDeg() + static_cast<int>(k), comps[k]);
  return f;
}

Matrix GradedMap::at(int i) const {
  if (!src.windowEmpty() && i >= src.minDeg() && i <= src.maxDeg()) return comps[i - src.minDeg()];
  return Matrix(tgt.rank(i + deg), src.rank(i), src.ring());
}

void GradedMap::set(int i, const Matrix& m) {
  if (m.rows() != tgt.rank(i + deg) || m.cols() != src.rank(i))
    throw Error(ErrorCode::DimensionMismatch, "component " + std::to_string(i) + " has the wrong shape");
  if (!(m.ring() == src.ring())) throw Error(ErrorCode::RingMismatch, "component ring mismatch");
  if (src.rank(i) == 0 && (src.windowEmpty() || i < src.minDeg() || i > src.maxDeg())) return;
  comps[i - src.minDeg()] = m;
}

static void requireParallel(const GradedMap& a, const GradedMap& b) {
  if (a.src != b.src || a.tgt != b.tgt || a.deg != b.deg)
    throw Error(ErrorCode::DimensionMismatch, "graded maps are not parallel");
}

GradedMap GradedMap::operator+(const GradedMap& o) const {
  requireParallel(*this, o);
  GradedMap r = *this;
  for (size_t k = 0; k < comps.size(); ++k) r.comps[k] = comps[k] + o.comps[k];
  return r;
}

GradedMap GradedMap::operator-() const {
  GradedMap r = *this;
  for (auto& m : r.comps) m = -m;
  return r;
}

GradedMap GradedMap::operator-(const GradedMap& o) const { return *this + (-o); }

GradedMap GradedMap::scaled(const mpz_class& c) const {
  GradedMap r = *this;
  for (auto& m : r.comps) m = m.scaled(c);
  return r;
}

bool GradedMap::operator==(const GradedMap& o) const {
  return src == o.src && tgt == o.tgt && deg == o.deg && comps == o.comps;
}

bool GradedMap::isZero() const {
  for (const auto& m : comps)
    if (!m.isZero()) return false;
  return true;
}

GradedMap compose(const GradedMap& g, const GradedMap& f) {
  if (f.tgt != g.src) throw Error(ErrorCode::DimensionMismatch, "maps are not composable");
  GradedMap r = GradedMap::zero(f.src, g.tgt, f.deg + g.deg);
  for (int i = f.src.minDeg(); i <= f.src.maxDeg(); ++i) r.set(i, g.at(i + f.deg) * f.at(i));
  return r;
}

GradedMap differentialMap(const Complex& x) {
  GradedMap d = GradedMap::zero(x, x, 1);
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i) d.set(i, x.d(i));
  return d;
}

GradedMap homDifferential(const GradedMap& f) {
  GradedMap r = GradedMap::zero(f.src, f.tgt, f.deg + 1);
  int s = sgn(f.deg);
  for (int i = f.src.minDeg(); i <= f.src.maxDeg(); ++i) {
    Matrix m = f.tgt.d(i + f.deg) * f.at(i) - (f.at(i + 1) * f.src.d(i)).scaled(s);
    r.set(i, m);
  }
  return r;
}

bool isChainMap(const GradedMap& f) { return homDifferential(f).isZero(); }

void requireChainMap(const GradedMap& f) {
  if (f.deg != 0) throw Error(ErrorCode::InvalidChainMap, "expected a degree-0 map");
  GradedMap df = homDifferential(f);
  for (int i = f.src.minDeg(); i <= f.src.maxDeg(); ++i)
    if (!df.at(i).isZero())
      throw Error(ErrorCode::InvalidChainMap, "chain map condition fails at degree " + std::to_string(i));
}

// ---------------------------------------------------------------- vectorization

namespace {

// Offsets of the blocks Hom(X^i, Y^{i+n}) for i over X's window.
std::vector<int> blockOffsets(const Complex& x, const Complex& y, int n) {
  std::vector<int> off;
  int acc = 0;
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i) {
    off.push_back(acc);
    acc += y.rank(i + n) * x.rank(i);
  }
  off.push_back(acc);
  return off;
}

int offsetOf(const Complex& x, const std::vector<int>& off, int i) { return off[i - x.minDeg()]; }

bool inWindow(const Complex& x, int i) { return !x.windowEmpty() && i >= x.minDeg() && i <= x.maxDeg(); }

}  // namespace

int homDim(const Complex& x, const Complex& y, int n) { return blockOffsets(x, y, n).back(); }

Matrix vecOf(const GradedMap& f) {
  std::vector<int> off = blockOffsets(f.src, f.tgt, f.deg);
  Matrix v(off.back(), 1, f.src.ring());
  for (int i = f.src.minDeg(); i <= f.src.maxDeg(); ++i) {
    Matrix m = f.at(i);
    int o = offsetOf(f.src, off, i);
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) v.set(o + r * m.cols() + c, 0, m.at(r, c));
  }
  return v;
}

GradedMap unvec(const Complex& x, const Complex& y, int n, const Matrix& v) {
  std::vector<int> off = blockOffsets(x, y, n);
  if (v.rows() != off.back() || v.cols() != 1) throw Error(ErrorCode::DimensionMismatch, "unvec: wrong length");
  GradedMap f = GradedMap::zero(x, y, n);
  Matrix vv = v.ring() == x.ring() ? v : v.withRing(x.ring());
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i) {
    Matrix m(y.rank(i + n), x.rank(i), x.ring());
    int o = offsetOf(x, off, i);
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) m.set(r, c, vv.at(o + r * m.cols() + c, 0));
    f.set(i, m);
  }
  return f;
}

Matrix homDifferentialMatrix(const Complex& x, const Complex& y, int n) {
  requireSameRing(x, y);
  std::vector<int> src = blockOffsets(x, y, n), dst = blockOffsets(x, y, n + 1);
  Matrix out(dst.back(), src.back(), x.ring());
  int s = sgn(n);
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i) {
    int cols = x.rank(i), rows = y.rank(i + n);
    if (cols * rows == 0) continue;
    int so = offsetOf(x, src, i);
    // d_Y F lands in block i
    Matrix post = Matrix::kron(y.d(i + n), Matrix::identity(cols, x.ring()));
    if (!post.empty()) out.setBlock(offsetOf(x, dst, i), so, post);
    // -(-1)^n F d_X lands in block i-1
    if (inWindow(x, i - 1) && x.rank(i - 1) > 0) {
      Matrix pre = Matrix::kron(Matrix::identity(rows, x.ring()), x.d(i - 1).transpose()).scaled(-s);
      out.setBlock(offsetOf(x, dst, i - 1), so, pre);
    }
  }
  return out;
}

Matrix postcomposeMatrix(const GradedMap& g, const Complex& x, int n) {
  const Complex& y = g.src;
  const Complex& z = g.tgt;
  requireSameRing(x, y);
  std::vector<int> src = blockOffsets(x, y, n), dst = blockOffsets(x, z, n + g.deg);
  Matrix out(dst.back(), src.back(), x.ring());
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i) {
    int cols = x.rank(i);
    if (cols == 0 || y.rank(i + n) == 0 || z.rank(i + n + g.deg) == 0) continue;
    Matrix b = Matrix::kron(g.at(i + n), Matrix::identity(cols, x.ring()));
    out.setBlock(offsetOf(x, dst, i), offsetOf(x, src, i), b);
  }
  return out;
}

Matrix precomposeMatrix(const GradedMap& h, const Complex& z, int n) {
  const Complex& x = h.src;
  const Complex& y = h.tgt;
  requireSameRing(x, z);
  std::vector<int> src = blockOffsets(y, z, n), dst = blockOffsets(x, z, n + h.deg);
  Matrix out(dst.back(), src.back(), x.ring());
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i) {
    int j = i + h.deg;
    int rows = z.rank(j + n);
    if (rows == 0 || x.rank(i) == 0 || y.rank(j) == 0) continue;
    Matrix b = Matrix::kron(Matrix::identity(rows, x.ring()), h.at(i).transpose());
    out.setBlock(offsetOf(x, dst, i), offsetOf(y, src, j), b);
  }
  return out;
}

// ---------------------------------------------------------------- homology

Lattice cycleLattice(const Matrix& dOut, int dim, Ring ring) {
  if (dOut.cols() != dim) throw Error(ErrorCode::DimensionMismatch, "cycle lattice shape");
  if (ring.isQ()) return Lattice::fromGenerators(integerKernel(dOut.numerator()));
  return kernelLattice(dOut);
}

Lattice boundaryLattice(const Matrix& dIn, int dim, Ring ring) {
  if (dIn.rows() != dim) throw Error(ErrorCode::DimensionMismatch, "boundary lattice shape");
  Lattice b = Lattice::fromGenerators(dIn.numerator());
  if (ring.isMod()) b = latticeSum(b, Lattice::multiples(dim, ring.modulus));
  if (ring.isQ()) b = latticeSaturate(b);
  return b;
}

FGAbGroup homologyGroup(const Matrix& dIn, const Matrix& dOut, int dim, Ring ring) {
  Lattice z = cycleLattice(dOut, dim, ring);
  Lattice b = boundaryLattice(dIn, dim, ring);
  return FGAbGroup::subquotient(z.basis, b.basis, dim, ring.isQ());
}

FGAbGroup cohomologyAnyRing(const Complex& x, int n) {
  return homologyGroup(x.d(n - 1), x.d(n), x.rank(n), x.ring());
}

FGAbGroup homology(const Complex& x, int n) {
  if (!x.ring().isZ()) throw Error(ErrorCode::WrongRing, "homology requires ring Z");
  return cohomologyAnyRing(x, n);
}

GroupHom inducedOnCohomology(const ChainMap& f, int n) {
  requireChainMap(f);
  FGAbGroup a = cohomologyAnyRing(f.src, n), b = cohomologyAnyRing(f.tgt, n);
  return GroupHom::induced(a, b, f.src.ring().isQ() ? f.at(n) : f.at(n).numerator());
}

// ---------------------------------------------------------------- shift, sum, cone

Complex shift(const Complex& x, int n) {
  if (x.windowEmpty()) return x;
  int s = sgn(n);
  return buildComplex(
      x.ring(), x.minDeg() - n, x.maxDeg() - n, [&](int i) { return x.rank(i + n); },
      [&](int i) { return x.d(i + n).scaled(s); });
}

GradedMap shiftMap(const GradedMap& f, int n) {
  GradedMap r = GradedMap::zero(shift(f.src, n), shift(f.tgt, n), f.deg);
  for (int i = r.src.minDeg(); i <= r.src.maxDeg(); ++i) r.set(i, f.at(i + n));
  return r;
}

namespace {

std::pair<int, int> unionWindow(const Complex& a, const Complex& b) {
  if (a.windowEmpty() && b.windowEmpty()) return {0, -1};
  if (a.windowEmpty()) return {b.minDeg(), b.maxDeg()};
  if (b.windowEmpty()) return {a.minDeg(), a.maxDeg()};
  return {std::min(a.minDeg(), b.minDeg()), std::max(a.maxDeg(), b.maxDeg())};
}

}  // namespace

Complex directSum(const Complex& x, const Complex& y) {
  requireSameRing(x, y);
  auto [lo, hi] = unionWindow(x, y);
  return buildComplex(
      x.ring(), lo, hi, [&](int i) { return x.rank(i) + y.rank(i); },
      [&](int i) { return Matrix::blockDiag(x.d(i), y.d(i)); });
}

GradedMap sumInclusion1(const Complex& x, const Complex& y) {
  Complex s = directSum(x, y);
  GradedMap f = GradedMap::zero(x, s);
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i)
    f.set(i, Matrix::vstack(Matrix::identity(x.rank(i), x.ring()), Matrix(y.rank(i), x.rank(i), x.ring())));
  return f;
}

GradedMap sumInclusion2(const Complex& x, const Complex& y) {
  Complex s = directSum(x, y);
  GradedMap f = GradedMap::zero(y, s);
  for (int i = y.minDeg(); i <= y.maxDeg(); ++i)
    f.set(i, Matrix::vstack(Matrix(x.rank(i), y.rank(i), x.ring()), Matrix::identity(y.rank(i), x.ring())));
  return f;
}

GradedMap sumProjection1(const Complex& x, const Complex& y) {
  Complex s = directSum(x, y);
  GradedMap f = GradedMap::zero(s, x);
  for (int i = s.minDeg(); i <= s.maxDeg(); ++i)
    f.set(i, Matrix::hstack(Matrix::identity(x.rank(i), x.ring()), Matrix(x.rank(i), y.rank(i), x.ring())));
  return f;
}

GradedMap sumProjection2(const Complex& x, const Complex& y) {
  Complex s = directSum(x, y);
  GradedMap f = GradedMap::zero(s, y);
  for (int i = s.minDeg(); i <= s.maxDeg(); ++i)
    f.set(i, Matrix::hstack(Matrix(y.rank(i), x.rank(i), x.ring()), Matrix::identity(y.rank(i), x.ring())));
  return f;
}

GradedMap directSumMap(const GradedMap& f, const GradedMap& g) {
  if (f.deg != g.deg) throw Error(ErrorCode::DimensionMismatch, "direct sum of maps of different degrees");
  Complex s = directSum(f.src, g.src), t = directSum(f.tgt, g.tgt);
  GradedMap r = GradedMap::zero(s, t, f.deg);
  for (int i = s.minDeg(); i <= s.maxDeg(); ++i) r.set(i, Matrix::blockDiag(f.at(i), g.at(i)));
  return r;
}

Cone cone(const ChainMap& f) {
  requireChainMap(f);
  const Complex& x = f.src;
  const Complex& y = f.tgt;
  Complex x1 = shift(x, 1);
  auto [lo, hi] = unionWindow(x1, y);
  Ring R = x.ring();
  Cone out;
  out.c = buildComplex(
      R, lo, hi, [&](int i) { return x.rank(i + 1) + y.rank(i); },
      [&](int i) {
        Matrix top = Matrix::hstack(-x.d(i + 1), Matrix(x.rank(i + 2), y.rank(i), R));
        Matrix bot = Matrix::hstack(f.at(i + 1), y.d(i));
        return Matrix::vstack(top, bot);
      });
  out.toCone = GradedMap::zero(y, out.c);
  for (int i = y.minDeg(); i <= y.maxDeg(); ++i)
    out.toCone.set(i, Matrix::vstack(Matrix(x.rank(i + 1), y.rank(i), R), Matrix::identity(y.rank(i), R)));
  out.fromCone = GradedMap::zero(out.c, x1);
  for (int i = out.c.minDeg(); i <= out.c.maxDeg(); ++i)
    out.fromCone.set(i, Matrix::hstack(Matrix::identity(x.rank(i + 1), R), Matrix(x.rank(i + 1), y.rank(i), R)));
  out.witness = GradedMap::zero(x, out.c, -1);
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i)
    out.witness.set(i, Matrix::vstack(Matrix::identity(x.rank(i), R), Matrix(y.rank(i - 1), x.rank(i), R)));
  return out;
}

// ---------------------------------------------------------------- homotopy decisions

std::optional<Homotopy> isNullHomotopic(const GradedMap& f) {
  if (!isChainMap(f)) throw Error(ErrorCode::InvalidChainMap, "map does not commute with the differentials");
  Matrix d = homDifferentialMatrix(f.src, f.tgt, f.deg - 1);
  auto s = solve(d, vecOf(f));
  if (!s) return std::nullopt;
  return unvec(f.src, f.tgt, f.deg - 1, *s);
}

std::optional<ZWitness> inIdealZ(const ChainMap& f) {
  requireChainMap(f);
  Matrix pre = precomposeMatrix(differentialMap(f.src), f.tgt, -1);
  Matrix post = postcomposeMatrix(differentialMap(f.tgt), f.src, -1);
  auto sol = solve(Matrix::hstack(pre, post), vecOf(f));
  if (!sol) return std::nullopt;
  int n = pre.cols();
  ZWitness w;
  w.s = unvec(f.src, f.tgt, -1, sol->rowsRange(0, n));
  w.t = unvec(f.src, f.tgt, -1, sol->rowsRange(n, sol->rows() - n));
  return w;
}

KHomGroup::KHomGroup(const Complex& x, const Complex& y, int n) : x_(x), y_(y), n_(n) {
  requireSameRing(x, y);
  group_ = homologyGroup(homDifferentialMatrix(x, y, n - 1), homDifferentialMatrix(x, y, n), homDim(x, y, n), x.ring());
  Matrix lift = group_.lift();
  for (int k = 0; k < lift.cols(); ++k) {
    Matrix col = lift.colsRange(k, 1);
    reps_.push_back(unvec(x, y, n, x.ring().isQ() ? col.withRing(Ring::Q()) : col.withRing(x.ring())));
  }
}

Matrix KHomGroup::classOf(const GradedMap& f) const {
  if (f.src != x_ || f.tgt != y_ || f.deg != n_) throw Error(ErrorCode::DimensionMismatch, "map not in this Hom group");
  Matrix v = vecOf(f);
  return group_.project(x_.ring().isQ() ? v : v.numerator());
}

bool KHomGroup::isZeroClass(const GradedMap& f) const { return classOf(f).isZero(); }

KHomGroup homGroupK(const Complex& x, const Complex& y) { return KHomGroup(x, y, 0); }

// ---------------------------------------------------------------- truncations

Complex windowTrunc(const Complex& x, int lo, int hi) {
  if (x.windowEmpty()) return x;
  int a = std::max(lo, x.minDeg()), b = std::min(hi, x.maxDeg());
  return buildComplex(x.ring(), a, b, [&](int i) { return x.rank(i); }, [&](int i) { return x.d(i); });
}

Complex stupidTruncLE(const Complex& x, int k) { return windowTrunc(x, INT_MIN / 2, k); }
Complex stupidTruncGE(const Complex& x, int k) { return windowTrunc(x, k, INT_MAX / 2); }

ChainMap windowTruncMap(const ChainMap& f, int lo, int hi) {
  requireChainMap(f);
  GradedMap r = GradedMap::zero(windowTrunc(f.src, lo, hi), windowTrunc(f.tgt, lo, hi));
  for (int i = r.src.minDeg(); i <= r.src.maxDeg(); ++i) r.set(i, f.at(i));
  return r;
}

ChainMap truncLEMap(const ChainMap& f, int k) { return windowTruncMap(f, INT_MIN / 2, k); }
ChainMap truncGEMap(const ChainMap& f, int k) { return windowTruncMap(f, k, INT_MAX / 2); }

ChainMap windowComparison(const Complex& x, int lo, int hi, int lo2, int hi2) {
  if (lo2 > lo || hi2 > hi) throw Error(ErrorCode::InvalidArgument, "window comparison needs lo2 <= lo and hi2 <= hi");
  Complex a = windowTrunc(x, lo, hi), b = windowTrunc(x, lo2, hi2);
  GradedMap r = GradedMap::zero(a, b);
  for (int i = a.minDeg(); i <= a.maxDeg(); ++i)
    if (inWindow(b, i)) r.set(i, Matrix::identity(x.rank(i), x.ring()));
  return r;
}

ChainMap truncGEInclusion(const Complex& x, int k) {
  return windowComparison(x, k, INT_MAX / 2, INT_MIN / 2, INT_MAX / 2);
}

ChainMap truncLEProjection(const Complex& x, int k) {
  return windowComparison(x, INT_MIN / 2, INT_MAX / 2, INT_MIN / 2, k);
}

ChainMap splitConnecting(const Complex& x, int k) {
  Complex a = stupidTruncLE(x, k);
  Complex b1 = shift(stupidTruncGE(x, k + 1), 1);
  GradedMap r = GradedMap::zero(a, b1);
  if (inWindow(a, k) && inWindow(b1, k)) r.set(k, -x.d(k));
  return r;
}

std::optional<Equivalence> isHomotopyEquivalence(const ChainMap& f) {
  requireChainMap(f);
  const Complex& x = f.src;
  const Complex& y = f.tgt;
  Ring R = x.ring();
  // Unknowns (g, h1, h2): D g = 0, g f - D h1 = id_X, f g - D h2 = id_Y.
  Matrix dg = homDifferentialMatrix(y, x, 0);
  Matrix pre = precomposeMatrix(f, x, 0);
  Matrix post = postcomposeMatrix(f, y, 0);
  Matrix dh1 = homDifferentialMatrix(x, x, -1);
  Matrix dh2 = homDifferentialMatrix(y, y, -1);
  int ng = dg.cols(), n1 = dh1.cols(), n2 = dh2.cols();
  int r0 = dg.rows(), r1 = pre.rows(), r2 = post.rows();
  Matrix a(r0 + r1 + r2, ng + n1 + n2, R);
  a.setBlock(0, 0, dg);
  a.setBlock(r0, 0, pre);
  a.setBlock(r0, ng, -dh1);
  a.setBlock(r0 + r1, 0, post);
  a.setBlock(r0 + r1, ng + n1, -dh2);
  Matrix b(a.rows(), 1, R);
  b.setBlock(r0, 0, vecOf(GradedMap::identity(x)));
  b.setBlock(r0 + r1, 0, vecOf(GradedMap::identity(y)));
  auto sol = solve(a, b);
  if (!sol) return std::nullopt;
  Equivalence e;
  e.inverse = unvec(y, x, 0, sol->rowsRange(0, ng));
  e.leftWitness = unvec(x, x, -1, sol->rowsRange(ng, n1));
  e.rightWitness = unvec(y, y, -1, sol->rowsRange(ng + n1, n2));
  return e;
}

bool isContractible(const Complex& x) { return isNullHomotopic(GradedMap::identity(x)).has_value(); }

}  // namespace wk

namespace wk {

int BlockSystem::addVar(int dim) {
  vars_.push_back(dim);
  return static_cast<int>(vars_.size()) - 1;
}

int BlockSystem::addEq(int dim) {
  eqs_.push_back(dim);
  return static_cast<int>(eqs_.size()) - 1;
}

void BlockSystem::add(int eq, int var, const Matrix& m) {
  if (m.rows() != eqs_.at(eq) || m.cols() != vars_.at(var))
    throw Error(ErrorCode::DimensionMismatch, "block has the wrong shape");
  blocks_.emplace_back(eq, var, m);
}

void BlockSystem::setRhs(int eq, const Matrix& v) {
  if (v.rows() != eqs_.at(eq) || v.cols() != 1) throw Error(ErrorCode::DimensionMismatch, "rhs has the wrong shape");
  rhs_.emplace_back(eq, v);
}

std::optional<std::vector<Matrix>> BlockSystem::solve() const {
  std::vector<int> vo{0}, eo{0};
  for (int d : vars_) vo.push_back(vo.back() + d);
  for (int d : eqs_) eo.push_back(eo.back() + d);
  Matrix a(eo.back(), vo.back(), ring_), b(eo.back(), 1, ring_);
  for (const auto& [e, v, m] : blocks_) {
    Matrix cur = a.block(eo[e], vo[v], m.rows(), m.cols());
    a.setBlock(eo[e], vo[v], cur + m.withRing(ring_));
  }
  for (const auto& [e, v] : rhs_) b.setBlock(eo[e], 0, b.block(eo[e], 0, v.rows(), 1) + v.withRing(ring_));
  auto x = wk::solve(a, b);
  if (!x) return std::nullopt;
  std::vector<Matrix> out;
  for (size_t k = 0; k < vars_.size(); ++k) out.push_back(x->rowsRange(vo[k], vars_[k]));
  return out;
}

std::optional<TriangleWitness> isDistinguished(const Triangle& t) {
  requireChainMap(t.f);
  requireChainMap(t.g);
  requireChainMap(t.h);
  const Complex& a = t.f.src;
  const Complex& b = t.f.tgt;
  const Complex& c = t.g.tgt;
  if (t.g.src != b || t.h.src != c || t.h.tgt != shift(a, 1))
    throw Error(ErrorCode::DimensionMismatch, "triangle maps are not composable");
  Cone k = cone(t.f);
  const Complex& a1 = t.h.tgt;
  BlockSystem sys(a.ring());
  int vphi = sys.addVar(homDim(k.c, c, 0));
  int vu = sys.addVar(homDim(b, c, -1));
  int vv = sys.addVar(homDim(k.c, a1, -1));
  int e0 = sys.addEq(homDim(k.c, c, 1));
  int e1 = sys.addEq(homDim(b, c, 0));
  int e2 = sys.addEq(homDim(k.c, a1, 0));
  sys.add(e0, vphi, homDifferentialMatrix(k.c, c, 0));
  sys.add(e1, vphi, precomposeMatrix(k.toCone, c, 0));
  sys.add(e1, vu, -homDifferentialMatrix(b, c, -1));
  sys.setRhs(e1, vecOf(t.g));
  sys.add(e2, vphi, postcomposeMatrix(t.h, k.c, 0));
  sys.add(e2, vv, -homDifferentialMatrix(k.c, a1, -1));
  sys.setRhs(e2, vecOf(k.fromCone));
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  TriangleWitness w;
  w.phi = unvec(k.c, c, 0, (*sol)[vphi]);
  w.u = unvec(b, c, -1, (*sol)[vu]);
  w.v = unvec(k.c, a1, -1, (*sol)[vv]);
  auto e = isHomotopyEquivalence(w.phi);
  if (!e) return std::nullopt;
  w.equivalence = *e;
  return w;
}

namespace {

Matrix inverseUnimodular(const Matrix& u) {
  auto inv = solve(u, Matrix::identity(u.rows(), u.ring()));
  if (!inv) throw Error(ErrorCode::InvalidArgument, "matrix is not invertible");
  return *inv;
}

}  // namespace

MinimalModel minimalModel(const Complex& x) {
  if (!x.ring().isZ()) throw Error(ErrorCode::WrongRing, "minimal models are computed over Z");
  if (x.windowEmpty()) return {x, ChainMap::identity(x), ChainMap::identity(x)};
  int lo = x.minDeg(), hi = x.maxDeg(), len = hi - lo + 1;
  // Per degree: kernel basis K and complement C, columns of a unimodular matrix.
  std::vector<Matrix> kb(len), cb(len);
  for (int n = lo; n <= hi; ++n) {
    int r = x.rank(n);
    Matrix ker = integerKernel(x.d(n));
    int z = ker.cols();
    Matrix basis = Matrix::identity(r);
    if (z > 0 && z < r) basis = inverseUnimodular(smithNormalForm(ker).u);
    kb[n - lo] = basis.colsRange(0, z);
    cb[n - lo] = basis.colsRange(z, r - z);
  }
  // Adapt K^n and C^{n-1} so that d sends the i-th complement vector to e_i times the i-th kernel vector.
  std::vector<std::vector<mpz_class>> mult(len);
  for (int n = lo + 1; n <= hi; ++n) {
    Matrix& c = cb[n - 1 - lo];
    Matrix& k = kb[n - lo];
    if (c.cols() == 0) continue;
    auto coords = solve(k, x.d(n - 1) * c);
    if (!coords) throw Error(ErrorCode::InvalidArgument, "boundary outside the kernel");
    SmithForm sf = smithNormalForm(*coords);
    c = c * sf.v;
    k = k * inverseUnimodular(sf.u);
    for (int i = 0; i < c.cols(); ++i) mult[n - lo].push_back(sf.s(i, i));
  }
  // Kept basis vectors per degree, in the order [sources of pieces | targets of pieces | free].
  std::vector<Matrix> kept(len);
  std::vector<Matrix> fullInv(len);
  std::vector<std::vector<int>> keptIdx(len);
  std::vector<int> nsrc(len, 0), ntgt(len, 0);
  for (int n = lo; n <= hi; ++n) {
    const Matrix& c = cb[n - lo];
    const Matrix& k = kb[n - lo];
    Matrix full = Matrix::hstack(c, k);
    fullInv[n - lo] = inverseUnimodular(full);
    std::vector<int> idx;
    if (n < hi)
      for (int i = 0; i < c.cols(); ++i)
        if (abs(mult[n + 1 - lo][i]) != 1) idx.push_back(i);
    nsrc[n - lo] = static_cast<int>(idx.size());
    int hit = static_cast<int>(mult[n - lo].size());
    for (int i = 0; i < hit; ++i)
      if (abs(mult[n - lo][i]) != 1) idx.push_back(c.cols() + i);
    ntgt[n - lo] = static_cast<int>(idx.size()) - nsrc[n - lo];
    for (int i = hit; i < k.cols(); ++i) idx.push_back(c.cols() + i);
    keptIdx[n - lo] = idx;
    kept[n - lo] = full.selectCols(idx);
  }
  std::vector<int> ranks;
  std::vector<Matrix> diffs;
  for (int n = lo; n <= hi; ++n) ranks.push_back(static_cast<int>(keptIdx[n - lo].size()));
  for (int n = lo; n < hi; ++n) {
    Matrix d(ranks[n + 1 - lo], ranks[n - lo]);
    int t = nsrc[n + 1 - lo];
    int j = 0;
    for (int i = 0; i < static_cast<int>(mult[n + 1 - lo].size()); ++i) {
      if (abs(mult[n + 1 - lo][i]) == 1) continue;
      d(t + j, j) = mult[n + 1 - lo][i];
      ++j;
    }
    diffs.push_back(d);
  }
  MinimalModel out;
  out.m = Complex(Ring::Z(), lo, ranks, diffs);
  out.inclusion = GradedMap::zero(out.m, x);
  out.projection = GradedMap::zero(x, out.m);
  for (int n = lo; n <= hi; ++n) {
    out.inclusion.set(n, kept[n - lo]);
    out.projection.set(n, fullInv[n - lo].selectRows(keptIdx[n - lo]));
  }
  return out;
}

}  // namespace wk
