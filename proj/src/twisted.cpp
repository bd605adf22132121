#include "twisted.hpp"

#include <algorithm>
#include <sstream>

namespace wk {

namespace {

int sgn(int n) { return (n & 1) ? -1 : 1; }

Matrix basisVector(int n, int k) {
  Matrix v(n, 1);
  v(k, 0) = 1;
  return v;
}

std::string objName(const DGCategoryData& c, int p) {
  return p >= 0 && p < c.size() ? c.objects[p] : std::to_string(p);
}

// Rows: C^{a+b}(P,R); columns: C^a(Q,R) (x) C^b(P,Q).
Matrix tensor(const DGCategoryData& c, int p, int q, int r, int a, int b) {
  auto it = c.compositions.find({p, q, r, a, b});
  if (it != c.compositions.end()) return it->second;
  return Matrix(c.rank(p, r, a + b), c.rank(q, r, a) * c.rank(p, q, b));
}

// First column of m that is not zero modulo the relations of C^n(P,Q), or -1.
int firstBadColumn(const DGCategoryData& c, int p, int q, int n, const Matrix& m) {
  for (int k = 0; k < m.cols(); ++k)
    if (!c.isZero(p, q, n, m.colsRange(k, 1))) return k;
  return -1;
}

void requireSameCategory(const TwistedComplex& a, const TwistedComplex& b) {
  if (!a.cat || a.cat != b.cat) throw Error(ErrorCode::ShapeMismatch, "twisted complexes over different categories");
}

void requireShape(const TwistedComplex& m) {
  if (!m.cat) throw Error(ErrorCode::ShapeMismatch, "twisted complex without a category");
  for (const auto& e : m.entries)
    if (e.object < 0 || e.object >= m.cat->size())
      throw Error(ErrorCode::ShapeMismatch, "entry refers to unknown object " + std::to_string(e.object));
  for (const auto& [ab, v] : m.q) {
    auto [a, b] = ab;
    if (a < 0 || b < 0 || a >= m.size() || b >= m.size())
      throw Error(ErrorCode::ShapeMismatch, "arrow between unknown entries");
    if (v.cols() != 1 || v.rows() != m.cat->rank(m.obj(a), m.obj(b), m.arrowDegree(a, b)))
      throw Error(ErrorCode::ShapeMismatch,
                  "arrow q^{" + std::to_string(a) + "," + std::to_string(b) + "} has the wrong rank");
  }
}

void requireShape(const PreTrHomElement& f) {
  requireShape(f.src);
  requireShape(f.tgt);
  requireSameCategory(f.src, f.tgt);
  for (const auto& [ab, v] : f.comps) {
    auto [a, b] = ab;
    if (a < 0 || b < 0 || a >= f.src.size() || b >= f.tgt.size())
      throw Error(ErrorCode::ShapeMismatch, "component between unknown entries");
    if (v.cols() != 1 || v.rows() != f.src.cat->rank(f.src.obj(a), f.tgt.obj(b), f.componentDegree(a, b)))
      throw Error(ErrorCode::ShapeMismatch,
                  "component f^{" + std::to_string(a) + "," + std::to_string(b) + "} has the wrong rank");
  }
}

bool sameShape(const TwistedComplex& a, const TwistedComplex& b) {
  return a.cat == b.cat && a.entries == b.entries;
}

// Offsets of each entry inside its position, for realizations.
std::vector<int> entryOffsets(const TwistedComplex& m) {
  std::map<int, int> used;
  std::vector<int> off;
  for (const auto& e : m.entries) {
    off.push_back(used[e.position]);
    used[e.position] += m.cat->moduleRanks.at(e.object);
  }
  return off;
}

Matrix reshapeRowMajor(const Matrix& v, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v(i * cols + j, 0);
  return m;
}

Matrix flattenRowMajor(const Matrix& m) {
  Matrix v(m.rows() * m.cols(), 1);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v(i * m.cols() + j, 0) = m(i, j);
  return v;
}

void requireModuleCategory(const TwistedComplex& m) {
  if (!m.cat || !m.cat->isModuleCategory())
    throw Error(ErrorCode::WrongCategory, "realization needs a category of the form S(A)");
}

}  // namespace

// ---------------------------------------------------------------- DG data

int HomComplex::rank(int n) const {
  if (ranks.empty() || n < lo || n > hi()) return 0;
  return ranks[n - lo];
}

Matrix HomComplex::d(int n) const {
  if (n >= lo && n < hi() && static_cast<size_t>(n - lo) < delta.size()) return delta[n - lo];
  return Matrix(rank(n + 1), rank(n));
}

const HomComplex& DGCategoryData::hom(int p, int q) const {
  static const HomComplex empty;
  auto it = homs.find({p, q});
  return it == homs.end() ? empty : it->second;
}

Matrix DGCategoryData::delta(int p, int q, int n, const Matrix& v) const { return hom(p, q).d(n) * v; }

Matrix DGCategoryData::compose(int p, int q, int r, int a, const Matrix& g, int b, const Matrix& f) const {
  auto it = compositions.find({p, q, r, a, b});
  if (it == compositions.end() || g.isZero() || f.isZero()) return zero(p, r, a + b);
  return it->second * Matrix::kron(g, f);
}

Matrix DGCategoryData::unit(int p) const {
  if (p >= 0 && p < static_cast<int>(units.size())) return units[p];
  return zero(p, p, 0);
}

Lattice DGCategoryData::relationLattice(int p, int q, int n) const {
  if (n == relationDegree) {
    auto it = relations.find({p, q});
    if (it != relations.end()) return it->second;
  }
  return Lattice::zero(rank(p, q, n));
}

bool DGCategoryData::isZero(int p, int q, int n, const Matrix& v) const {
  if (v.isZero()) return true;
  if (n != relationDegree) return false;
  auto it = relations.find({p, q});
  return it != relations.end() && it->second.contains(v);
}

bool isNegative(const DGCategoryData& c) {
  for (const auto& [pq, h] : c.homs)
    for (int n = std::max(1, h.lo); n <= h.hi(); ++n)
      if (h.rank(n) > 0) return false;
  return true;
}

DGReport checkDG(const DGCategoryData& c) {
  DGReport rep;
  auto fail = [&](const std::string& which, const std::string& where) { rep.failures.push_back({which, where}); };
  int no = c.size();
  auto pair = [&](int p, int q) { return "(" + objName(c, p) + "," + objName(c, q) + ")"; };

  for (const auto& [pq, h] : c.homs) {
    auto [p, q] = pq;
    if (p < 0 || q < 0 || p >= no || q >= no) {
      fail("shape", "Hom between unknown objects " + pair(p, q));
      continue;
    }
    if (!h.ranks.empty() && h.delta.size() + 1 != h.ranks.size()) {
      fail("shape", "Hom" + pair(p, q) + " has " + std::to_string(h.delta.size()) + " coboundaries");
      continue;
    }
    bool ok = true;
    for (size_t k = 0; k < h.delta.size(); ++k)
      if (h.delta[k].rows() != h.ranks[k + 1] || h.delta[k].cols() != h.ranks[k]) {
        fail("shape", "delta^" + std::to_string(h.lo + static_cast<int>(k)) + " of Hom" + pair(p, q));
        ok = false;
      }
    if (!ok) continue;
    for (int n = h.lo; n + 2 <= h.hi(); ++n) {
      int bad = firstBadColumn(c, p, q, n + 2, h.d(n + 1) * h.d(n));
      if (bad >= 0)
        fail("delta^2 = 0", "Hom" + pair(p, q) + " degree " + std::to_string(n) + " basis " + std::to_string(bad));
    }
  }
  for (const auto& [key, t] : c.compositions) {
    if (std::min({key.p, key.q, key.r}) < 0 || std::max({key.p, key.q, key.r}) >= no) {
      fail("shape", "composition tensor on unknown objects");
      continue;
    }
    if (t.rows() != c.rank(key.p, key.r, key.a + key.b) ||
        t.cols() != c.rank(key.q, key.r, key.a) * c.rank(key.p, key.q, key.b))
      fail("shape", "composition tensor " + pair(key.q, key.r) + "x" + pair(key.p, key.q) + " degrees (" +
                        std::to_string(key.a) + "," + std::to_string(key.b) + ")");
  }
  if (static_cast<int>(c.units.size()) != no) fail("shape", "expected one unit per object");
  for (int p = 0; p < std::min(no, static_cast<int>(c.units.size())); ++p)
    if (c.units[p].cols() != 1 || c.units[p].rows() != c.rank(p, p, 0))
      fail("shape", "unit of " + objName(c, p));
  rep.negative = isNegative(c);
  if (!rep.valid()) return rep;

  for (int p = 0; p < no; ++p)
    if (!c.isZero(p, p, 1, c.delta(p, p, 0, c.unit(p)))) fail("unit closed", "delta(id_" + objName(c, p) + ") != 0");

  for (int p = 0; p < no; ++p)
    for (int q = 0; q < no; ++q) {
      const HomComplex& h = c.hom(p, q);
      for (int n = h.lo; n <= h.hi(); ++n) {
        int r = h.rank(n);
        if (r == 0) continue;
        Matrix id = Matrix::identity(r);
        Matrix left = tensor(c, p, q, q, 0, n) * Matrix::kron(c.unit(q), id);
        Matrix right = tensor(c, p, p, q, n, 0) * Matrix::kron(id, c.unit(p));
        int bad = firstBadColumn(c, p, q, n, left - id);
        if (bad >= 0) fail("left unit", "id_" + objName(c, q) + " o basis " + std::to_string(bad) + " of Hom^" +
                                            std::to_string(n) + pair(p, q));
        bad = firstBadColumn(c, p, q, n, right - id);
        if (bad >= 0) fail("right unit", "basis " + std::to_string(bad) + " of Hom^" + std::to_string(n) + pair(p, q) +
                                             " o id_" + objName(c, p));
      }
    }

  // Leibniz: delta(g f) = delta g f + (-1)^a g delta f on basis pairs.
  for (int p = 0; p < no; ++p)
    for (int q = 0; q < no; ++q)
      for (int r = 0; r < no; ++r) {
        const HomComplex &hqr = c.hom(q, r), &hpq = c.hom(p, q);
        for (int a = hqr.lo; a <= hqr.hi(); ++a)
          for (int b = hpq.lo; b <= hpq.hi(); ++b) {
            int ra = hqr.rank(a), rb = hpq.rank(b);
            if (ra == 0 || rb == 0 || c.rank(p, r, a + b + 1) == 0) continue;
            Matrix lhs = c.hom(p, r).d(a + b) * tensor(c, p, q, r, a, b);
            Matrix rhs = tensor(c, p, q, r, a + 1, b) * Matrix::kron(hqr.d(a), Matrix::identity(rb)) +
                         (tensor(c, p, q, r, a, b + 1) * Matrix::kron(Matrix::identity(ra), hpq.d(b))).scaled(sgn(a));
            int bad = firstBadColumn(c, p, r, a + b + 1, lhs - rhs);
            if (bad >= 0)
              fail("Leibniz", "objects " + objName(c, p) + "," + objName(c, q) + "," + objName(c, r) + " degrees (" +
                                  std::to_string(a) + "," + std::to_string(b) + ") basis pair (" +
                                  std::to_string(bad / rb) + "," + std::to_string(bad % rb) + ")");
          }
      }

  // (h g) f = h (g f) on basis triples.
  for (int p = 0; p < no; ++p)
    for (int q = 0; q < no; ++q)
      for (int r = 0; r < no; ++r)
        for (int s = 0; s < no; ++s) {
          const HomComplex &hrs = c.hom(r, s), &hqr = c.hom(q, r), &hpq = c.hom(p, q);
          for (int a = hrs.lo; a <= hrs.hi(); ++a)
            for (int b = hqr.lo; b <= hqr.hi(); ++b)
              for (int e = hpq.lo; e <= hpq.hi(); ++e) {
                int ra = hrs.rank(a), rb = hqr.rank(b), re = hpq.rank(e);
                if (ra == 0 || rb == 0 || re == 0 || c.rank(p, s, a + b + e) == 0) continue;
                Matrix left = tensor(c, p, r, s, a, b + e) *
                              Matrix::kron(Matrix::identity(ra), tensor(c, p, q, r, b, e));
                Matrix right = tensor(c, p, q, s, a + b, e) *
                               Matrix::kron(tensor(c, q, r, s, a, b), Matrix::identity(re));
                int bad = firstBadColumn(c, p, s, a + b + e, left - right);
                if (bad >= 0)
                  fail("associativity", "objects " + objName(c, p) + "," + objName(c, q) + "," + objName(c, r) + "," +
                                            objName(c, s) + " degrees (" + std::to_string(a) + "," +
                                            std::to_string(b) + "," + std::to_string(e) + ") basis triple (" +
                                            std::to_string(bad / (rb * re)) + "," + std::to_string(bad / re % rb) +
                                            "," + std::to_string(bad % re) + ")");
              }
        }
  return rep;
}

DGReport validateDG(const DGCategoryData& c) {
  DGReport rep = checkDG(c);
  if (!rep.valid())
    throw Error(ErrorCode::AxiomViolation, rep.failures.front().which + " fails at " + rep.failures.front().where);
  return rep;
}

DGCategoryData moduleCategory(const std::vector<int>& ranks) {
  DGCategoryData c;
  c.moduleRanks = ranks;
  int no = static_cast<int>(ranks.size());
  for (int p = 0; p < no; ++p) c.objects.push_back("Z^" + std::to_string(ranks[p]));
  for (int p = 0; p < no; ++p)
    for (int q = 0; q < no; ++q) c.homs[{p, q}] = HomComplex{0, {ranks[p] * ranks[q]}, {}};
  for (int p = 0; p < no; ++p)
    for (int q = 0; q < no; ++q)
      for (int r = 0; r < no; ++r) {
        int rp = ranks[p], rq = ranks[q], rr = ranks[r];
        Matrix t(rr * rp, rr * rq * rq * rp);
        for (int i = 0; i < rr; ++i)
          for (int j = 0; j < rp; ++j)
            for (int k = 0; k < rq; ++k) t(i * rp + j, (i * rq + k) * (rq * rp) + k * rp + j) = 1;
        if (!t.empty()) c.compositions[{p, q, r, 0, 0}] = t;
      }
  for (int p = 0; p < no; ++p) c.units.push_back(flattenRowMajor(Matrix::identity(ranks[p])));
  return c;
}

DGCategoryData complexCategory(const std::vector<Complex>& xs) {
  DGCategoryData c;
  int no = static_cast<int>(xs.size());
  for (int p = 0; p < no; ++p) c.objects.push_back("X" + std::to_string(p));
  // Ambient coordinates of the chosen basis of Hom^n, n <= 0.
  std::map<std::pair<int, int>, std::map<int, Matrix>> basis;
  for (int p = 0; p < no; ++p)
    for (int q = 0; q < no; ++q) {
      const Complex &x = xs[p], &y = xs[q];
      HomComplex h;
      h.lo = 0;
      if (!x.windowEmpty() && !y.windowEmpty()) h.lo = std::min(0, y.minDeg() - x.maxDeg());
      for (int n = h.lo; n <= 0; ++n) {
        Matrix b = n < 0 ? Matrix::identity(homDim(x, y, n))
                         : kernelLattice(homDifferentialMatrix(x, y, 0)).basis;
        basis[{p, q}][n] = b;
        h.ranks.push_back(b.cols());
      }
      for (int n = h.lo; n < 0; ++n) {
        Matrix d = homDifferentialMatrix(x, y, n);
        if (n < -1) {
          h.delta.push_back(d);
        } else {
          auto s = solve(basis[{p, q}][0], d);
          if (!s) throw Error(ErrorCode::NotClosed, "boundaries outside the cycle lattice");
          h.delta.push_back(*s);
        }
      }
      c.homs[{p, q}] = h;
    }
  for (int p = 0; p < no; ++p)
    for (int q = 0; q < no; ++q)
      for (int r = 0; r < no; ++r) {
        const HomComplex &hqr = c.homs[{q, r}], &hpq = c.homs[{p, q}], &hpr = c.homs[{p, r}];
        for (int a = hqr.lo; a <= 0; ++a)
          for (int b = hpq.lo; b <= 0; ++b) {
            int n = a + b;
            if (n < hpr.lo || hpr.rank(n) == 0 || hqr.rank(a) == 0 || hpq.rank(b) == 0) continue;
            const Matrix &bg = basis[{q, r}][a], &bf = basis[{p, q}][b], &bt = basis[{p, r}][n];
            Matrix t(hpr.rank(n), bg.cols() * bf.cols());
            for (int i = 0; i < bg.cols(); ++i) {
              GradedMap g = unvec(xs[q], xs[r], a, bg.colsRange(i, 1));
              for (int j = 0; j < bf.cols(); ++j) {
                GradedMap f = unvec(xs[p], xs[q], b, bf.colsRange(j, 1));
                Matrix v = vecOf(wk::compose(g, f));
                if (n == 0) {
                  auto s = solve(bt, v);
                  if (!s) throw Error(ErrorCode::NotClosed, "composite of cycles is not a cycle");
                  v = *s;
                }
                t.setBlock(0, i * bf.cols() + j, v);
              }
            }
            c.compositions[{p, q, r, a, b}] = t;
          }
      }
  for (int p = 0; p < no; ++p) {
    auto s = solve(basis[{p, p}][0], vecOf(GradedMap::identity(xs[p])));
    c.units.push_back(*s);
  }
  return c;
}

// ---------------------------------------------------------------- twisted complexes

Matrix TwistedComplex::arrow(int a, int b) const {
  auto it = q.find({a, b});
  if (it != q.end()) return it->second;
  return cat->zero(obj(a), obj(b), arrowDegree(a, b));
}

void TwistedComplex::setArrow(int a, int b, const Matrix& v) {
  if (v.isZero()) q.erase({a, b});
  else q[{a, b}] = v;
}

bool TwistedComplex::sameAs(const TwistedComplex& o) const {
  if (!sameShape(*this, o)) return false;
  for (int a = 0; a < size(); ++a)
    for (int b = 0; b < size(); ++b)
      if (!cat->isZero(obj(a), obj(b), arrowDegree(a, b), arrow(a, b) - o.arrow(a, b))) return false;
  return true;
}

PreTrHomElement PreTrHomElement::zero(const TwistedComplex& src, const TwistedComplex& tgt, int degree) {
  requireSameCategory(src, tgt);
  PreTrHomElement f;
  f.src = src;
  f.tgt = tgt;
  f.degree = degree;
  return f;
}

PreTrHomElement PreTrHomElement::identity(const TwistedComplex& m) {
  PreTrHomElement f = zero(m, m, 0);
  for (int a = 0; a < m.size(); ++a) f.set(a, a, m.cat->unit(m.obj(a)));
  return f;
}

Matrix PreTrHomElement::at(int a, int b) const {
  auto it = comps.find({a, b});
  if (it != comps.end()) return it->second;
  return src.cat->zero(src.obj(a), tgt.obj(b), componentDegree(a, b));
}

void PreTrHomElement::set(int a, int b, const Matrix& v) {
  if (v.isZero()) comps.erase({a, b});
  else comps[{a, b}] = v;
}

PreTrHomElement PreTrHomElement::operator+(const PreTrHomElement& o) const {
  if (!sameShape(src, o.src) || !sameShape(tgt, o.tgt) || degree != o.degree)
    throw Error(ErrorCode::ShapeMismatch, "adding PreTr elements of different shapes");
  PreTrHomElement r = *this;
  for (const auto& [ab, v] : o.comps) r.set(ab.first, ab.second, at(ab.first, ab.second) + v);
  return r;
}

PreTrHomElement PreTrHomElement::scaled(const mpz_class& c) const {
  PreTrHomElement r = zero(src, tgt, degree);
  for (const auto& [ab, v] : comps) r.set(ab.first, ab.second, v.scaled(c));
  return r;
}

PreTrHomElement PreTrHomElement::operator-(const PreTrHomElement& o) const { return *this + o.scaled(-1); }

bool PreTrHomElement::isZero() const {
  for (const auto& [ab, v] : comps)
    if (!src.cat->isZero(src.obj(ab.first), tgt.obj(ab.second), componentDegree(ab.first, ab.second), v))
      return false;
  return true;
}

PreTrHomElement preTrDifferential(const PreTrHomElement& f) {
  requireShape(f);
  const DGCategoryData& c = *f.src.cat;
  const TwistedComplex &m = f.src, &n = f.tgt;
  int l = f.degree;
  PreTrHomElement r = PreTrHomElement::zero(m, n, l + 1);
  for (int a = 0; a < m.size(); ++a)
    for (int b = 0; b < n.size(); ++b) {
      int deg = r.componentDegree(a, b);
      Matrix v = c.zero(m.obj(a), n.obj(b), deg);
      Matrix fab = f.at(a, b);
      if (!fab.isZero()) v = v + c.delta(m.obj(a), n.obj(b), deg - 1, fab).scaled(sgn(n.pos(b)));
      for (int j = 0; j < n.size(); ++j) {
        Matrix qjb = n.arrow(j, b), faj = f.at(a, j);
        if (qjb.isZero() || faj.isZero()) continue;
        v = v + c.compose(m.obj(a), n.obj(j), n.obj(b), n.arrowDegree(j, b), qjb, f.componentDegree(a, j), faj);
      }
      for (int i = 0; i < m.size(); ++i) {
        Matrix fib = f.at(i, b), qai = m.arrow(a, i);
        if (fib.isZero() || qai.isZero()) continue;
        v = v - c.compose(m.obj(a), m.obj(i), n.obj(b), f.componentDegree(i, b), fib, m.arrowDegree(a, i), qai)
                    .scaled(sgn(l));
      }
      r.set(a, b, v);
    }
  return r;
}

PreTrHomElement preTrCompose(const PreTrHomElement& g, const PreTrHomElement& f) {
  requireShape(f);
  requireShape(g);
  if (!sameShape(f.tgt, g.src)) throw Error(ErrorCode::ShapeMismatch, "PreTr elements are not composable");
  const DGCategoryData& c = *f.src.cat;
  PreTrHomElement r = PreTrHomElement::zero(f.src, g.tgt, f.degree + g.degree);
  for (const auto& [ab, fv] : f.comps)
    for (int cc = 0; cc < g.tgt.size(); ++cc) {
      auto [a, b] = ab;
      Matrix gv = g.at(b, cc);
      if (gv.isZero()) continue;
      Matrix v = c.compose(f.src.obj(a), f.tgt.obj(b), g.tgt.obj(cc), g.componentDegree(b, cc), gv,
                           f.componentDegree(a, b), fv);
      r.set(a, cc, r.at(a, cc) + v);
    }
  return r;
}

bool isClosed(const PreTrHomElement& f) { return preTrDifferential(f).isZero(); }

std::string MCReport::str() const {
  if (valid()) return "Maurer-Cartan holds";
  std::ostringstream os;
  os << "Maurer-Cartan fails at";
  for (const auto& [ac, v] : residuals) os << " (" << ac.first << "," << ac.second << ")";
  return os.str();
}

MCReport mcCheck(const TwistedComplex& m) {
  requireShape(m);
  const DGCategoryData& c = *m.cat;
  MCReport rep;
  for (int a = 0; a < m.size(); ++a)
    for (int cc = 0; cc < m.size(); ++cc) {
      int deg = m.arrowDegree(a, cc) + 1;
      Matrix v = c.delta(m.obj(a), m.obj(cc), deg - 1, m.arrow(a, cc)).scaled(sgn(m.pos(cc)));
      for (int b = 0; b < m.size(); ++b) {
        Matrix qbc = m.arrow(b, cc), qab = m.arrow(a, b);
        if (qbc.isZero() || qab.isZero()) continue;
        v = v + c.compose(m.obj(a), m.obj(b), m.obj(cc), m.arrowDegree(b, cc), qbc, m.arrowDegree(a, b), qab);
      }
      if (!c.isZero(m.obj(a), m.obj(cc), deg, v)) rep.residuals[{a, cc}] = v;
    }
  return rep;
}

TwistedComplex shiftTwisted(const TwistedComplex& m, int n) {
  TwistedComplex r = m;
  for (auto& e : r.entries) e.position -= n;
  for (auto& [ab, v] : r.q) v = v.scaled(sgn(n));
  return r;
}

TwistedCone twistedCone(const PreTrHomElement& h) {
  requireShape(h);
  if (h.degree != 0) throw Error(ErrorCode::ShapeMismatch, "cones need a degree-0 element");
  if (!isClosed(h)) throw Error(ErrorCode::NotClosed, "the cone of a non-closed element");
  const TwistedComplex &a = h.src, &b = h.tgt;
  int na = a.size();
  TwistedCone out;
  TwistedComplex& c = out.cone;
  c.cat = a.cat;
  for (const auto& e : a.entries) c.entries.push_back({e.position - 1, e.object});
  for (const auto& e : b.entries) c.entries.push_back(e);
  for (const auto& [ij, v] : a.q) c.setArrow(ij.first, ij.second, -v);
  for (const auto& [ij, v] : b.q) c.setArrow(na + ij.first, na + ij.second, v);
  for (const auto& [ij, v] : h.comps) c.setArrow(ij.first, na + ij.second, v);

  out.toCone = PreTrHomElement::zero(b, c, 0);
  for (int j = 0; j < b.size(); ++j) out.toCone.set(j, na + j, c.cat->unit(b.obj(j)));
  out.fromCone = PreTrHomElement::zero(c, shiftTwisted(a, 1), 0);
  for (int i = 0; i < na; ++i) out.fromCone.set(i, i, c.cat->unit(a.obj(i)));
  return out;
}

// ---------------------------------------------------------------- PreTr Hom complexes

namespace {

struct Layout {
  std::vector<std::vector<int>> offset;  // [a][b]
  int dim = 0;
};

Layout layoutOf(const TwistedComplex& m, const TwistedComplex& n, int l) {
  Layout L;
  L.offset.assign(m.size(), std::vector<int>(n.size(), 0));
  for (int a = 0; a < m.size(); ++a)
    for (int b = 0; b < n.size(); ++b) {
      L.offset[a][b] = L.dim;
      L.dim += m.cat->rank(m.obj(a), n.obj(b), l + m.pos(a) - n.pos(b));
    }
  return L;
}

template <class F>
Matrix matrixOf(const TwistedComplex& m, const TwistedComplex& n, int l, int rows, F apply) {
  int dim = preTrDim(m, n, l);
  Matrix out(rows, dim);
  for (int k = 0; k < dim; ++k) out.setBlock(0, k, preTrVec(apply(preTrUnvec(m, n, l, basisVector(dim, k)))));
  return out;
}

}  // namespace

int preTrDim(const TwistedComplex& m, const TwistedComplex& n, int l) { return layoutOf(m, n, l).dim; }

Matrix preTrVec(const PreTrHomElement& f) {
  Layout L = layoutOf(f.src, f.tgt, f.degree);
  Matrix v(L.dim, 1);
  for (const auto& [ab, c] : f.comps) v.setBlock(L.offset[ab.first][ab.second], 0, c);
  return v;
}

PreTrHomElement preTrUnvec(const TwistedComplex& m, const TwistedComplex& n, int l, const Matrix& v) {
  Layout L = layoutOf(m, n, l);
  if (v.rows() != L.dim || v.cols() != 1) throw Error(ErrorCode::ShapeMismatch, "PreTr vector has the wrong length");
  PreTrHomElement f = PreTrHomElement::zero(m, n, l);
  for (int a = 0; a < m.size(); ++a)
    for (int b = 0; b < n.size(); ++b) {
      int r = m.cat->rank(m.obj(a), n.obj(b), f.componentDegree(a, b));
      if (r > 0) f.set(a, b, v.block(L.offset[a][b], 0, r, 1));
    }
  return f;
}

Matrix preTrDifferentialMatrix(const TwistedComplex& m, const TwistedComplex& n, int l) {
  return matrixOf(m, n, l, preTrDim(m, n, l + 1), [](const PreTrHomElement& f) { return preTrDifferential(f); });
}

Matrix preTrRelations(const TwistedComplex& m, const TwistedComplex& n, int l) {
  Layout L = layoutOf(m, n, l);
  Matrix out(L.dim, 0);
  for (int a = 0; a < m.size(); ++a)
    for (int b = 0; b < n.size(); ++b) {
      Lattice rel = m.cat->relationLattice(m.obj(a), n.obj(b), l + m.pos(a) - n.pos(b));
      if (rel.rank() == 0) continue;
      Matrix g(L.dim, rel.rank());
      g.setBlock(L.offset[a][b], 0, rel.basis);
      out = Matrix::hstack(out, g);
    }
  return out;
}

Matrix preTrPostcomposeMatrix(const PreTrHomElement& g, const TwistedComplex& x, int l) {
  return matrixOf(x, g.src, l, preTrDim(x, g.tgt, l + g.degree),
                  [&](const PreTrHomElement& f) { return preTrCompose(g, f); });
}

Matrix preTrPrecomposeMatrix(const PreTrHomElement& h, const TwistedComplex& z, int l) {
  return matrixOf(h.tgt, z, l, preTrDim(h.src, z, l + h.degree),
                  [&](const PreTrHomElement& f) { return preTrCompose(f, h); });
}

TrHomGroup::TrHomGroup(const TwistedComplex& m, const TwistedComplex& n) : m_(m), n_(n) {
  requireShape(m);
  requireShape(n);
  requireSameCategory(m, n);
  int dim = preTrDim(m, n, 0);
  Matrix d0 = preTrDifferentialMatrix(m, n, 0), dm1 = preTrDifferentialMatrix(m, n, -1);
  Lattice cycles = latticePreimage(d0, Lattice::fromGenerators(preTrRelations(m, n, 1)));
  group_ = FGAbGroup::subquotient(cycles.basis, Matrix::hstack(dm1, preTrRelations(m, n, 0)), dim);
}

PreTrHomElement TrHomGroup::representative(int k) const { return preTrUnvec(m_, n_, 0, group_.lift().colsRange(k, 1)); }

Matrix TrHomGroup::classOf(const PreTrHomElement& f) const {
  if (!sameShape(f.src, m_) || !sameShape(f.tgt, n_) || f.degree != 0)
    throw Error(ErrorCode::ShapeMismatch, "element of a different Hom group");
  Matrix v = preTrVec(f);
  if (!group_.containsAmbient(v)) throw Error(ErrorCode::NotClosed, "class of a non-closed element");
  return group_.project(v);
}

bool TrHomGroup::isZeroClass(const PreTrHomElement& f) const {
  classOf(f);
  return group_.isZeroClass(preTrVec(f));
}

TrHomGroup trHom(const TwistedComplex& m, const TwistedComplex& n) { return TrHomGroup(m, n); }

namespace {

// Adds Z-slack for the relations of PreTr^l(m,n) to equation eq.
void addSlack(BlockSystem& sys, int eq, const TwistedComplex& m, const TwistedComplex& n, int l) {
  Matrix r = preTrRelations(m, n, l);
  if (r.cols() == 0) return;
  sys.add(eq, sys.addVar(r.cols()), r);
}

}  // namespace

std::optional<PreTrHomElement> trInverse(const PreTrHomElement& f) {
  requireShape(f);
  if (f.degree != 0 || !isClosed(f)) return std::nullopt;
  const TwistedComplex &a = f.src, &b = f.tgt;
  BlockSystem sys(Ring::Z());
  int vg = sys.addVar(preTrDim(b, a, 0));
  int vu = sys.addVar(preTrDim(a, a, -1));
  int vv = sys.addVar(preTrDim(b, b, -1));
  int e1 = sys.addEq(preTrDim(b, a, 1));
  sys.add(e1, vg, preTrDifferentialMatrix(b, a, 0));
  addSlack(sys, e1, b, a, 1);
  int e2 = sys.addEq(preTrDim(a, a, 0));
  sys.add(e2, vg, preTrPrecomposeMatrix(f, a, 0));
  sys.add(e2, vu, -preTrDifferentialMatrix(a, a, -1));
  addSlack(sys, e2, a, a, 0);
  sys.setRhs(e2, preTrVec(PreTrHomElement::identity(a)));
  int e3 = sys.addEq(preTrDim(b, b, 0));
  sys.add(e3, vg, preTrPostcomposeMatrix(f, b, 0));
  sys.add(e3, vv, -preTrDifferentialMatrix(b, b, -1));
  addSlack(sys, e3, b, b, 0);
  sys.setRhs(e3, preTrVec(PreTrHomElement::identity(b)));
  auto x = sys.solve();
  if (!x) return std::nullopt;
  return preTrUnvec(b, a, 0, (*x)[vg]);
}

bool isDistinguishedTr(const PreTrHomElement& f, const PreTrHomElement& g, const PreTrHomElement& h) {
  for (const auto* e : {&f, &g, &h})
    if (e->degree != 0 || !isClosed(*e)) return false;
  TwistedCone k = twistedCone(f);
  if (!sameShape(g.src, f.tgt) || !sameShape(h.src, g.tgt) || !h.tgt.sameAs(k.fromCone.tgt) ||
      !g.src.sameAs(f.tgt) || !h.src.sameAs(g.tgt))
    throw Error(ErrorCode::ShapeMismatch, "triangle maps are not composable");
  PreTrHomElement hh = h;
  hh.tgt = k.fromCone.tgt;
  const TwistedComplex &b = f.tgt, &c = g.tgt, &a1 = k.fromCone.tgt;
  BlockSystem sys(Ring::Z());
  int vphi = sys.addVar(preTrDim(k.cone, c, 0));
  int vu = sys.addVar(preTrDim(b, c, -1));
  int vv = sys.addVar(preTrDim(k.cone, a1, -1));
  int e1 = sys.addEq(preTrDim(k.cone, c, 1));
  sys.add(e1, vphi, preTrDifferentialMatrix(k.cone, c, 0));
  addSlack(sys, e1, k.cone, c, 1);
  int e2 = sys.addEq(preTrDim(b, c, 0));
  sys.add(e2, vphi, preTrPrecomposeMatrix(k.toCone, c, 0));
  sys.add(e2, vu, -preTrDifferentialMatrix(b, c, -1));
  addSlack(sys, e2, b, c, 0);
  PreTrHomElement gg = g;
  gg.src = b;
  sys.setRhs(e2, preTrVec(gg));
  int e3 = sys.addEq(preTrDim(k.cone, a1, 0));
  sys.add(e3, vphi, preTrPostcomposeMatrix(hh, k.cone, 0));
  sys.add(e3, vv, -preTrDifferentialMatrix(k.cone, a1, -1));
  addSlack(sys, e3, k.cone, a1, 0);
  sys.setRhs(e3, preTrVec(k.fromCone));
  auto x = sys.solve();
  if (!x) return false;
  return trInverse(preTrUnvec(k.cone, c, 0, (*x)[vphi])).has_value();
}

// ---------------------------------------------------------------- S(A)

Complex realizeTr(const TwistedComplex& m) {
  requireModuleCategory(m);
  requireShape(m);
  if (m.entries.empty()) return Complex::zero();
  const auto& rk = m.cat->moduleRanks;
  int lo = m.pos(0), hi = m.pos(0);
  for (const auto& e : m.entries) lo = std::min(lo, e.position), hi = std::max(hi, e.position);
  std::vector<int> ranks(hi - lo + 1, 0);
  for (const auto& e : m.entries) ranks[e.position - lo] += rk.at(e.object);
  std::vector<int> off = entryOffsets(m);
  std::vector<Matrix> diffs;
  for (int i = lo; i < hi; ++i) diffs.emplace_back(ranks[i + 1 - lo], ranks[i - lo]);
  for (int a = 0; a < m.size(); ++a)
    for (int b = 0; b < m.size(); ++b) {
      if (m.pos(b) != m.pos(a) + 1) continue;
      Matrix v = m.arrow(a, b);
      if (v.isZero()) continue;
      diffs[m.pos(a) - lo].setBlock(off[b], off[a], reshapeRowMajor(v, rk[m.obj(b)], rk[m.obj(a)]));
    }
  return Complex(Ring::Z(), lo, ranks, diffs);
}

GradedMap realizeTrMap(const PreTrHomElement& f) {
  requireModuleCategory(f.src);
  requireShape(f);
  const auto& rk = f.src.cat->moduleRanks;
  GradedMap g = GradedMap::zero(realizeTr(f.src), realizeTr(f.tgt), f.degree);
  std::vector<int> os = entryOffsets(f.src), ot = entryOffsets(f.tgt);
  std::map<int, Matrix> blocks;
  for (const auto& [ab, v] : f.comps) {
    auto [a, b] = ab;
    if (f.componentDegree(a, b) != 0) continue;
    int i = f.src.pos(a);
    if (!blocks.count(i)) blocks[i] = g.at(i);
    blocks[i].setBlock(ot[b], os[a], reshapeRowMajor(v, rk[f.tgt.obj(b)], rk[f.src.obj(a)]));
  }
  for (const auto& [i, mat] : blocks) g.set(i, mat);
  return g;
}

TwistedComplex twistedFromComplex(const DGCategory& cat, const Complex& x, bool split) {
  if (!cat || !cat->isModuleCategory()) throw Error(ErrorCode::WrongCategory, "expected a category of the form S(A)");
  if (!x.ring().isZ()) throw Error(ErrorCode::WrongRing, "S(A) realizations are over Z");
  const auto& rk = cat->moduleRanks;
  auto objectOfRank = [&](int r) {
    auto it = std::find(rk.begin(), rk.end(), r);
    if (it == rk.end()) throw Error(ErrorCode::WrongCategory, "no object of rank " + std::to_string(r));
    return static_cast<int>(it - rk.begin());
  };
  TwistedComplex m;
  m.cat = cat;
  if (x.windowEmpty()) return m;
  // (entry index, row offset inside its degree) per degree
  std::map<int, std::vector<std::pair<int, int>>> at;
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i) {
    int r = x.rank(i);
    std::vector<int> pieces;
    if (split && r > 1) pieces.assign(r, 1);
    else if (r > 0 || std::find(rk.begin(), rk.end(), 0) != rk.end()) pieces.push_back(r);
    int o = 0;
    for (int p : pieces) {
      at[i].push_back({m.size(), o});
      m.entries.push_back({i, objectOfRank(p)});
      o += p;
    }
  }
  for (int i = x.minDeg(); i < x.maxDeg(); ++i) {
    Matrix d = x.d(i);
    for (auto [a, oa] : at[i])
      for (auto [b, ob] : at[i + 1])
        m.setArrow(a, b, flattenRowMajor(d.block(ob, oa, rk[m.obj(b)], rk[m.obj(a)])));
  }
  return m;
}

PreTrHomElement twistedFromMap(const TwistedComplex& m, const TwistedComplex& n, const GradedMap& f) {
  requireModuleCategory(m);
  requireSameCategory(m, n);
  const auto& rk = m.cat->moduleRanks;
  std::vector<int> om = entryOffsets(m), on = entryOffsets(n);
  PreTrHomElement e = PreTrHomElement::zero(m, n, f.deg);
  for (int a = 0; a < m.size(); ++a)
    for (int b = 0; b < n.size(); ++b) {
      if (n.pos(b) != m.pos(a) + f.deg) continue;
      Matrix blk = f.at(m.pos(a));
      if (blk.rows() < on[b] + rk[n.obj(b)] || blk.cols() < om[a] + rk[m.obj(a)])
        throw Error(ErrorCode::ShapeMismatch, "map does not fit the twisted complexes");
      e.set(a, b, flattenRowMajor(blk.block(on[b], om[a], rk[n.obj(b)], rk[m.obj(a)])));
    }
  return e;
}

// ---------------------------------------------------------------- weight structure

TwistedWeightDecomposition weightTruncTwisted(const TwistedComplex& m, int k) {
  requireShape(m);
  if (!isNegative(*m.cat)) throw Error(ErrorCode::NotNegative, "weight truncation needs a negative category");
  TwistedWeightDecomposition w;
  w.le.cat = w.ge.cat = m.cat;
  std::vector<int> idx(m.size());
  for (int a = 0; a < m.size(); ++a) {
    TwistedComplex& part = m.pos(a) <= k ? w.le : w.ge;
    idx[a] = part.size();
    part.entries.push_back(m.entries[a]);
  }
  auto low = [&](int a) { return m.pos(a) <= k; };
  for (const auto& [ab, v] : m.q) {
    auto [a, b] = ab;
    if (low(a) && low(b)) w.le.setArrow(idx[a], idx[b], v);
    if (!low(a) && !low(b)) w.ge.setArrow(idx[a], idx[b], v);
  }
  w.inclusion = PreTrHomElement::zero(w.ge, m, 0);
  w.projection = PreTrHomElement::zero(m, w.le, 0);
  w.connecting = PreTrHomElement::zero(w.le, shiftTwisted(w.ge, 1), 0);
  for (int a = 0; a < m.size(); ++a) {
    Matrix u = m.cat->unit(m.obj(a));
    if (low(a)) w.projection.set(a, idx[a], u);
    else w.inclusion.set(idx[a], a, u);
  }
  for (const auto& [ab, v] : m.q)
    if (low(ab.first) && !low(ab.second)) w.connecting.set(idx[ab.first], idx[ab.second], -v);
  w.partsSatisfyMC = mcCheck(w.le).valid() && mcCheck(w.ge).valid();
  w.mapsClosed = isClosed(w.inclusion) && isClosed(w.projection) && isClosed(w.connecting);
  return w;
}

// ---------------------------------------------------------------- t_N

DGCategoryData truncateDG(const DGCategoryData& c, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "truncation level must be non-negative");
  if (!isNegative(c)) throw Error(ErrorCode::NotNegative, "t_N needs a negative category");
  DGCategoryData t;
  t.objects = c.objects;
  t.units = c.units;
  t.moduleRanks = c.moduleRanks;
  bool keepOld = !c.relations.empty() && c.relationDegree > -n;
  t.relationDegree = keepOld ? c.relationDegree : -n;
  if (keepOld) t.relations = c.relations;
  for (const auto& [pq, h] : c.homs) {
    if (h.ranks.empty() || h.hi() < -n) continue;
    int lo = std::max(h.lo, -n);
    HomComplex r;
    r.lo = lo;
    for (int d = lo; d <= h.hi(); ++d) r.ranks.push_back(h.rank(d));
    for (int d = lo; d < h.hi(); ++d) r.delta.push_back(h.d(d));
    t.homs[pq] = r;
    if (!keepOld && h.lo <= -n - 1 && h.rank(-n) > 0) {
      Lattice rel = Lattice::fromGenerators(h.d(-n - 1));
      if (c.relationDegree == -n && c.relations.count(pq)) rel = latticeSum(rel, c.relations.at(pq));
      if (rel.rank() > 0) t.relations[pq] = rel;
    } else if (!keepOld && c.relationDegree == -n && c.relations.count(pq)) {
      t.relations[pq] = c.relations.at(pq);
    }
  }
  for (const auto& [key, m] : c.compositions)
    if (key.a >= -n && key.b >= -n && key.a + key.b >= -n) t.compositions[key] = m;
  return t;
}

TwistedComplex applyTN(const TwistedComplex& m, int n, const DGCategory& truncated) {
  requireShape(m);
  TwistedComplex r;
  r.cat = truncated;
  r.entries = m.entries;
  for (const auto& [ab, v] : m.q)
    if (m.arrowDegree(ab.first, ab.second) >= -n) r.setArrow(ab.first, ab.second, v);
  return r;
}

TwistedComplex applyTN(const TwistedComplex& m, int n) {
  requireShape(m);
  return applyTN(m, n, std::make_shared<const DGCategoryData>(truncateDG(*m.cat, n)));
}

PreTrHomElement applyTNMap(const PreTrHomElement& f, int n, const TwistedComplex& src, const TwistedComplex& tgt) {
  requireShape(f);
  if (src.entries != f.src.entries || tgt.entries != f.tgt.entries)
    throw Error(ErrorCode::ShapeMismatch, "t_N of a map between different complexes");
  PreTrHomElement r = PreTrHomElement::zero(src, tgt, f.degree);
  for (const auto& [ab, v] : f.comps)
    if (f.componentDegree(ab.first, ab.second) >= -n) r.set(ab.first, ab.second, v);
  return r;
}

}  // namespace wk
