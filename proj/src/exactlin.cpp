#include "exactlin.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace wk {

const char* errorCodeName(ErrorCode c) {
  switch (c) {
    case ErrorCode::WrongRing: return "WrongRing";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::InvalidChainMap: return "InvalidChainMap";
    case ErrorCode::NotEndomorphism: return "NotEndomorphism";
    case ErrorCode::NotAlmostIdempotent: return "NotAlmostIdempotent";
    case ErrorCode::FiltrationNotPreserved: return "FiltrationNotPreserved";
    case ErrorCode::NotExact: return "NotExact";
    case ErrorCode::AxiomViolation: return "AxiomViolation";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::WrongCategory: return "WrongCategory";
    case ErrorCode::NotNegative: return "NotNegative";
    case ErrorCode::NotATriangleEndomorphism: return "NotATriangleEndomorphism";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Ring Ring::Zmod(long n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "modulus must be at least 2");
  return {Kind::IntegersMod, n};
}

Ring Ring::parse(const std::string& s) {
  if (s == "Z") return Z();
  if (s == "Q") return Q();
  if (s.size() > 2 && s[0] == 'Z' && s[1] == '/') {
    long n = 0;
    try {
      size_t pos = 0;
      n = std::stol(s.substr(2), &pos);
      if (pos != s.size() - 2) n = 0;
    } catch (...) {
      n = 0;
    }
    if (n >= 2) return Zmod(n);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown ring '" + s + "'");
}

std::string Ring::name() const {
  switch (kind) {
    case Kind::Integers: return "Z";
    case Kind::Rationals: return "Q";
    case Kind::IntegersMod: return "Z/" + std::to_string(modulus);
  }
  return "?";
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(int rows, int cols, Ring ring)
    : ring_(ring), r_(rows), c_(cols), num_(static_cast<size_t>(rows) * cols) {
  if (rows < 0 || cols < 0) throw Error(ErrorCode::DimensionMismatch, "negative matrix shape");
}

Matrix Matrix::identity(int n, Ring ring) { return scalar(n, 1, ring); }

Matrix Matrix::scalar(int n, const mpz_class& c, Ring ring) {
  Matrix m(n, n, ring);
  for (int i = 0; i < n; ++i) m(i, i) = c;
  m.normalize();
  return m;
}

Matrix Matrix::fromRows(const std::vector<std::vector<long>>& rows, Ring ring) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  Matrix m(r, c, ring);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  m.normalize();
  return m;
}

Matrix Matrix::column(const std::vector<mpz_class>& v, Ring ring) {
  Matrix m(static_cast<int>(v.size()), 1, ring);
  for (size_t i = 0; i < v.size(); ++i) m(static_cast<int>(i), 0) = v[i];
  m.normalize();
  return m;
}

mpq_class Matrix::at(int i, int j) const {
  mpq_class q((*this)(i, j), den_);
  q.canonicalize();
  return q;
}

void Matrix::set(int i, int j, const mpq_class& v) {
  if (!ring_.isQ()) {
    if (v.get_den() != 1) throw Error(ErrorCode::WrongRing, "fraction in integer matrix");
    (*this)(i, j) = v.get_num();
    normalize();
    return;
  }
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), den_.get_mpz_t(), v.get_den_mpz_t());
  if (l != den_) {
    mpz_class f = l / den_;
    for (auto& x : num_) x *= f;
    den_ = l;
  }
  (*this)(i, j) = v.get_num() * (l / v.get_den());
  normalize();
}

void Matrix::normalize() {
  if (ring_.isMod()) {
    mpz_class n = ring_.modulus;
    for (auto& x : num_) {
      if (x < 0 || x >= n) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
    }
  } else if (ring_.isQ()) {
    if (den_ < 0) {
      den_ = -den_;
      for (auto& x : num_) x = -x;
    }
    if (den_ == 1) return;
    mpz_class g = den_;
    for (const auto& x : num_) {
      if (g == 1) break;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    }
    if (g != 1) {
      for (auto& x : num_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
  }
}

Matrix Matrix::withRing(Ring r) const {
  Matrix m = *this;
  if (ring_.isQ() && !r.isQ() && den_ != 1)
    throw Error(ErrorCode::WrongRing, "cannot move a fractional matrix to an integer ring");
  m.ring_ = r;
  if (!r.isQ()) m.den_ = 1;
  m.normalize();
  return m;
}

Matrix Matrix::numerator() const {
  Matrix m = *this;
  m.ring_ = Ring::Z();
  m.den_ = 1;
  return m;
}

static void requireSameRing(const Matrix& a, const Matrix& b) {
  if (!(a.ring() == b.ring())) throw Error(ErrorCode::RingMismatch, "ring mismatch");
}

Matrix Matrix::operator+(const Matrix& o) const {
  requireSameRing(*this, o);
  if (r_ != o.r_ || c_ != o.c_) throw Error(ErrorCode::DimensionMismatch, "sum shape mismatch");
  Matrix m(r_, c_, ring_);
  if (den_ == 1 && o.den_ == 1) {
    for (size_t k = 0; k < num_.size(); ++k) m.num_[k] = num_[k] + o.num_[k];
  } else {
    for (size_t k = 0; k < num_.size(); ++k) m.num_[k] = num_[k] * o.den_ + o.num_[k] * den_;
    m.den_ = den_ * o.den_;
  }
  m.normalize();
  return m;
}

Matrix Matrix::operator-() const {
  Matrix m = *this;
  for (auto& x : m.num_) x = -x;
  m.normalize();
  return m;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + (-o); }

Matrix Matrix::operator*(const Matrix& o) const {
  requireSameRing(*this, o);
  if (c_ != o.r_) throw Error(ErrorCode::DimensionMismatch, "product shape mismatch");
  Matrix m(r_, o.c_, ring_);
  for (int i = 0; i < r_; ++i) {
    for (int k = 0; k < c_; ++k) {
      const mpz_class& a = (*this)(i, k);
      if (a == 0) continue;
      const mpz_class* brow = &o.num_[static_cast<size_t>(k) * o.c_];
      mpz_class* mrow = &m.num_[static_cast<size_t>(i) * o.c_];
      for (int j = 0; j < o.c_; ++j) {
        if (brow[j] != 0) mpz_addmul(mrow[j].get_mpz_t(), a.get_mpz_t(), brow[j].get_mpz_t());
      }
    }
  }
  m.den_ = den_ * o.den_;
  m.normalize();
  return m;
}

Matrix Matrix::scaled(const mpz_class& c) const {
  Matrix m = *this;
  for (auto& x : m.num_) x *= c;
  m.normalize();
  return m;
}

bool Matrix::operator==(const Matrix& o) const {
  return ring_ == o.ring_ && r_ == o.r_ && c_ == o.c_ && den_ == o.den_ && num_ == o.num_;
}

bool Matrix::isZero() const {
  for (const auto& x : num_)
    if (x != 0) return false;
  return true;
}

Matrix Matrix::transpose() const {
  Matrix m(c_, r_, ring_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
  m.den_ = den_;
  return m;
}

Matrix Matrix::block(int r0, int c0, int nr, int nc) const {
  if (r0 < 0 || c0 < 0 || nr < 0 || nc < 0 || r0 + nr > r_ || c0 + nc > c_)
    throw Error(ErrorCode::DimensionMismatch, "block out of range");
  Matrix m(nr, nc, ring_);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  m.den_ = den_;
  m.normalize();
  return m;
}

Matrix Matrix::selectCols(const std::vector<int>& idx) const {
  Matrix m(r_, static_cast<int>(idx.size()), ring_);
  for (int i = 0; i < r_; ++i)
    for (size_t j = 0; j < idx.size(); ++j) m(i, static_cast<int>(j)) = (*this)(i, idx[j]);
  m.den_ = den_;
  m.normalize();
  return m;
}

Matrix Matrix::selectRows(const std::vector<int>& idx) const {
  Matrix m(static_cast<int>(idx.size()), c_, ring_);
  for (size_t i = 0; i < idx.size(); ++i)
    for (int j = 0; j < c_; ++j) m(static_cast<int>(i), j) = (*this)(idx[i], j);
  m.den_ = den_;
  m.normalize();
  return m;
}

void Matrix::setBlock(int r0, int c0, const Matrix& b) {
  if (r0 + b.r_ > r_ || c0 + b.c_ > c_) throw Error(ErrorCode::DimensionMismatch, "setBlock out of range");
  if (ring_.isQ()) {
    for (int i = 0; i < b.r_; ++i)
      for (int j = 0; j < b.c_; ++j) set(r0 + i, c0 + j, b.at(i, j));
    return;
  }
  if (b.den_ != 1) throw Error(ErrorCode::WrongRing, "fractional block");
  for (int i = 0; i < b.r_; ++i)
    for (int j = 0; j < b.c_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  normalize();
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b) {
  requireSameRing(a, b);
  if (a.r_ != b.r_) throw Error(ErrorCode::DimensionMismatch, "hstack row mismatch");
  Matrix m(a.r_, a.c_ + b.c_, a.ring_);
  m.setBlock(0, 0, a);
  m.setBlock(0, a.c_, b);
  return m;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
  requireSameRing(a, b);
  if (a.c_ != b.c_) throw Error(ErrorCode::DimensionMismatch, "vstack column mismatch");
  Matrix m(a.r_ + b.r_, a.c_, a.ring_);
  m.setBlock(0, 0, a);
  m.setBlock(a.r_, 0, b);
  return m;
}

Matrix Matrix::blockDiag(const Matrix& a, const Matrix& b) {
  requireSameRing(a, b);
  Matrix m(a.r_ + b.r_, a.c_ + b.c_, a.ring_);
  m.setBlock(0, 0, a);
  m.setBlock(a.r_, a.c_, b);
  return m;
}

Matrix Matrix::kron(const Matrix& a, const Matrix& b) {
  requireSameRing(a, b);
  Matrix m(a.r_ * b.r_, a.c_ * b.c_, a.ring_);
  for (int i = 0; i < a.r_; ++i)
    for (int j = 0; j < a.c_; ++j) {
      const mpz_class& x = a(i, j);
      if (x == 0) continue;
      for (int k = 0; k < b.r_; ++k)
        for (int l = 0; l < b.c_; ++l) m(i * b.r_ + k, j * b.c_ + l) = x * b(k, l);
    }
  m.den_ = a.den_ * b.den_;
  m.normalize();
  return m;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < r_; ++i) {
    os << (i ? ",[" : "[");
    for (int j = 0; j < c_; ++j) os << (j ? "," : "") << at(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- integer kernels

namespace {

// Dense integer workspace with row operations mirrored onto an optional companion.
struct IntMat {
  int r = 0, c = 0;
  std::vector<mpz_class> a;
  IntMat() = default;
  IntMat(int rr, int cc) : r(rr), c(cc), a(static_cast<size_t>(rr) * cc) {}
  explicit IntMat(const Matrix& m) : IntMat(m.rows(), m.cols()) {
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) at(i, j) = m(i, j);
  }
  static IntMat identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  mpz_class& at(int i, int j) { return a[static_cast<size_t>(i) * c + j]; }
  const mpz_class& at(int i, int j) const { return a[static_cast<size_t>(i) * c + j]; }
  Matrix toMatrix() const {
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = at(i, j);
    return m;
  }
  void swapRows(int i, int k) {
    if (i == k) return;
    for (int j = 0; j < c; ++j) mpz_swap(at(i, j).get_mpz_t(), at(k, j).get_mpz_t());
  }
  void swapCols(int j, int l) {
    if (j == l) return;
    for (int i = 0; i < r; ++i) mpz_swap(at(i, j).get_mpz_t(), at(i, l).get_mpz_t());
  }
  // row_i -= q * row_k
  void rowSub(int i, int k, const mpz_class& q, int from = 0) {
    if (q == 0) return;
    for (int j = from; j < c; ++j)
      if (at(k, j) != 0) mpz_submul(at(i, j).get_mpz_t(), q.get_mpz_t(), at(k, j).get_mpz_t());
  }
  void colSub(int j, int l, const mpz_class& q, int from = 0) {
    if (q == 0) return;
    for (int i = from; i < r; ++i)
      if (at(i, l) != 0) mpz_submul(at(i, j).get_mpz_t(), q.get_mpz_t(), at(i, l).get_mpz_t());
  }
  void negateRow(int i) {
    for (int j = 0; j < c; ++j) mpz_neg(at(i, j).get_mpz_t(), at(i, j).get_mpz_t());
  }
  void negateCol(int j) {
    for (int i = 0; i < r; ++i) mpz_neg(at(i, j).get_mpz_t(), at(i, j).get_mpz_t());
  }
};

void requireInteger(const Matrix& a, const char* what) {
  if (!a.ring().isZ()) throw Error(ErrorCode::WrongRing, std::string(what) + " requires ring Z");
}

}  // namespace

Matrix rowHermite(const Matrix& a, Matrix* u, std::vector<int>* pivots) {
  IntMat h(a);
  IntMat t;
  if (u) t = IntMat::identity(h.r);
  std::vector<int> piv;
  int row = 0;
  mpz_class q;
  for (int col = 0; col < h.c && row < h.r; ++col) {
    while (true) {
      int best = -1;
      for (int i = row; i < h.r; ++i) {
        if (h.at(i, col) == 0) continue;
        if (best < 0 || mpz_cmpabs(h.at(i, col).get_mpz_t(), h.at(best, col).get_mpz_t()) < 0) best = i;
      }
      if (best < 0) break;
      h.swapRows(row, best);
      if (u) t.swapRows(row, best);
      bool clean = true;
      for (int i = row + 1; i < h.r; ++i) {
        if (h.at(i, col) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), h.at(i, col).get_mpz_t(), h.at(row, col).get_mpz_t());
        h.rowSub(i, row, q, col);
        if (u) t.rowSub(i, row, q);
        if (h.at(i, col) != 0) clean = false;
      }
      if (clean) break;
    }
    if (row < h.r && h.at(row, col) != 0) {
      if (h.at(row, col) < 0) {
        h.negateRow(row);
        if (u) t.negateRow(row);
      }
      for (int i = 0; i < row; ++i) {
        if (h.at(i, col) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), h.at(i, col).get_mpz_t(), h.at(row, col).get_mpz_t());
        h.rowSub(i, row, q, col);
        if (u) t.rowSub(i, row, q);
      }
      piv.push_back(col);
      ++row;
    }
  }
  if (u) *u = t.toMatrix();
  if (pivots) *pivots = piv;
  return h.toMatrix();
}

int rankOf(const Matrix& a) {
  if (a.ring().isMod()) throw Error(ErrorCode::WrongRing, "rank over Z/n is not defined");
  std::vector<int> piv;
  rowHermite(a.numerator(), nullptr, &piv);
  return static_cast<int>(piv.size());
}

namespace {

struct SmithWork {
  IntMat s, u, uinv, v;
  bool wantU = false, wantV = false;
};

void smithCore(SmithWork& w) {
  IntMat& s = w.s;
  int m = s.r, n = s.c;
  mpz_class q;
  int t = 0;
  while (t < std::min(m, n)) {
    int bi = -1, bj = -1;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j) {
        if (s.at(i, j) == 0) continue;
        if (bi < 0 || mpz_cmpabs(s.at(i, j).get_mpz_t(), s.at(bi, bj).get_mpz_t()) < 0) {
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) break;
    s.swapRows(t, bi);
    if (w.wantU) {
      w.u.swapRows(t, bi);
      w.uinv.swapCols(t, bi);
    }
    s.swapCols(t, bj);
    if (w.wantV) w.v.swapCols(t, bj);
    bool dirty = false;
    for (int i = t + 1; i < m; ++i) {
      if (s.at(i, t) == 0) continue;
      mpz_tdiv_q(q.get_mpz_t(), s.at(i, t).get_mpz_t(), s.at(t, t).get_mpz_t());
      s.rowSub(i, t, q, t);
      if (w.wantU) {
        w.u.rowSub(i, t, q);
        mpz_class nq = -q;
        w.uinv.colSub(t, i, nq);
      }
      if (s.at(i, t) != 0) dirty = true;
    }
    for (int j = t + 1; j < n; ++j) {
      if (s.at(t, j) == 0) continue;
      mpz_tdiv_q(q.get_mpz_t(), s.at(t, j).get_mpz_t(), s.at(t, t).get_mpz_t());
      s.colSub(j, t, q, t);
      if (w.wantV) w.v.colSub(j, t, q);
      if (s.at(t, j) != 0) dirty = true;
    }
    if (dirty) continue;
    int bad = -1;
    for (int i = t + 1; i < m && bad < 0; ++i)
      for (int j = t + 1; j < n; ++j)
        if (s.at(i, j) != 0 && !mpz_divisible_p(s.at(i, j).get_mpz_t(), s.at(t, t).get_mpz_t())) {
          bad = i;
          break;
        }
    if (bad >= 0) {
      // row_t += row_bad
      mpz_class mone = -1;
      s.rowSub(t, bad, mone);
      if (w.wantU) {
        w.u.rowSub(t, bad, mone);
        w.uinv.colSub(bad, t, 1);
      }
      continue;
    }
    if (s.at(t, t) < 0) {
      s.negateRow(t);
      if (w.wantU) {
        w.u.negateRow(t);
        w.uinv.negateCol(t);
      }
    }
    ++t;
  }
}

}  // namespace

SmithForm smithNormalForm(const Matrix& a) {
  requireInteger(a, "smithNormalForm");
  SmithWork w;
  w.s = IntMat(a);
  w.wantU = w.wantV = true;
  w.u = IntMat::identity(a.rows());
  w.uinv = IntMat::identity(a.rows());
  w.v = IntMat::identity(a.cols());
  smithCore(w);
  SmithForm f;
  f.u = w.u.toMatrix();
  f.s = w.s.toMatrix();
  f.v = w.v.toMatrix();
  for (int i = 0; i < std::min(a.rows(), a.cols()); ++i)
    if (w.s.at(i, i) != 0) f.invariantFactors.push_back(w.s.at(i, i));
  return f;
}

std::vector<mpz_class> smithInvariants(const Matrix& a) {
  requireInteger(a, "smithInvariants");
  SmithWork w;
  w.s = IntMat(a);
  smithCore(w);
  std::vector<mpz_class> out;
  for (int i = 0; i < std::min(a.rows(), a.cols()); ++i)
    if (w.s.at(i, i) != 0) out.push_back(w.s.at(i, i));
  return out;
}

namespace {

// Smith form of r with U and U^{-1}; used for subquotient generators.
void smithWithInverse(const Matrix& r, IntMat& s, IntMat& u, IntMat& uinv) {
  SmithWork w;
  w.s = IntMat(r);
  w.wantU = true;
  w.u = IntMat::identity(r.rows());
  w.uinv = IntMat::identity(r.rows());
  smithCore(w);
  s = std::move(w.s);
  u = std::move(w.u);
  uinv = std::move(w.uinv);
}

std::optional<Matrix> solveHermite(const Matrix& a, const Matrix& b) {
  // U a^T = R (row echelon), so a U^T = R^T is column echelon.
  Matrix u;
  std::vector<int> piv;
  Matrix r = rowHermite(a.transpose(), &u, &piv);
  int n = a.cols(), k = b.cols();
  int rk = static_cast<int>(piv.size());
  IntMat y(n, k);
  mpz_class acc;
  for (int col = 0; col < k; ++col) {
    for (int t = 0; t < rk; ++t) {
      acc = b(piv[t], col);
      for (int s = 0; s < t; ++s)
        if (r(s, piv[t]) != 0) mpz_submul(acc.get_mpz_t(), r(s, piv[t]).get_mpz_t(), y.at(s, col).get_mpz_t());
      if (!mpz_divisible_p(acc.get_mpz_t(), r(t, piv[t]).get_mpz_t())) return std::nullopt;
      mpz_divexact(y.at(t, col).get_mpz_t(), acc.get_mpz_t(), r(t, piv[t]).get_mpz_t());
    }
  }
  Matrix x = u.transpose() * y.toMatrix();
  if (a * x != b) return std::nullopt;
  return x;
}

// Eliminates unit pivots first (sparsest first), which keeps the large, mostly +-1
// systems from the Hom-complex solvers small before the Hermite step.
std::optional<Matrix> solveInteger(const Matrix& a, const Matrix& b) {
  int m = a.rows(), n = a.cols(), k = b.cols();
  IntMat w(m, n + k);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) w.at(i, j) = a(i, j);
    for (int j = 0; j < k; ++j) w.at(i, n + j) = b(i, j);
  }
  std::vector<char> rowLive(m, 1), colLive(n, 1);
  std::vector<std::pair<int, int>> elim;
  while (true) {
    std::vector<int> rowCount(m, 0), colCount(n, 0);
    for (int i = 0; i < m; ++i) {
      if (!rowLive[i]) continue;
      for (int j = 0; j < n; ++j)
        if (colLive[j] && w.at(i, j) != 0) ++rowCount[i], ++colCount[j];
    }
    int bi = -1, bj = -1;
    long best = -1;
    for (int i = 0; i < m; ++i) {
      if (!rowLive[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (!colLive[j] || mpz_cmpabs_ui(w.at(i, j).get_mpz_t(), 1) != 0) continue;
        long cost = static_cast<long>(rowCount[i] - 1) * (colCount[j] - 1);
        if (best < 0 || cost < best) best = cost, bi = i, bj = j;
      }
    }
    if (bi < 0) break;
    if (w.at(bi, bj) < 0) w.negateRow(bi);
    for (int i = 0; i < m; ++i) {
      if (i == bi || !rowLive[i] || w.at(i, bj) == 0) continue;
      mpz_class q = w.at(i, bj);
      w.rowSub(i, bi, q);
    }
    rowLive[bi] = 0;
    colLive[bj] = 0;
    elim.push_back({bi, bj});
  }
  std::vector<int> rows, cols;
  for (int i = 0; i < m; ++i)
    if (rowLive[i]) rows.push_back(i);
  for (int j = 0; j < n; ++j)
    if (colLive[j]) cols.push_back(j);
  IntMat x(n, k);
  if (!rows.empty() || !cols.empty()) {
    Matrix ar(static_cast<int>(rows.size()), static_cast<int>(cols.size())), br(static_cast<int>(rows.size()), k);
    for (size_t s = 0; s < rows.size(); ++s) {
      for (size_t t = 0; t < cols.size(); ++t) ar(static_cast<int>(s), static_cast<int>(t)) = w.at(rows[s], cols[t]);
      for (int j = 0; j < k; ++j) br(static_cast<int>(s), j) = w.at(rows[s], n + j);
    }
    auto y = solveHermite(ar, br);
    if (!y) return std::nullopt;
    for (size_t t = 0; t < cols.size(); ++t)
      for (int j = 0; j < k; ++j) x.at(cols[t], j) = (*y)(static_cast<int>(t), j);
  }
  for (auto it = elim.rbegin(); it != elim.rend(); ++it) {
    auto [i, jp] = *it;
    for (int j = 0; j < k; ++j) {
      mpz_class acc = w.at(i, n + j);
      for (int c = 0; c < n; ++c)
        if (c != jp && w.at(i, c) != 0) mpz_submul(acc.get_mpz_t(), w.at(i, c).get_mpz_t(), x.at(c, j).get_mpz_t());
      x.at(jp, j) = acc;
    }
  }
  Matrix xm = x.toMatrix();
  if (a * xm != b) return std::nullopt;
  return xm;
}

std::optional<Matrix> solveRational(const Matrix& a, const Matrix& b) {
  int m = a.rows(), n = a.cols(), k = b.cols();
  std::vector<std::vector<mpq_class>> w(m, std::vector<mpq_class>(n + k));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) w[i][j] = a.at(i, j);
    for (int j = 0; j < k; ++j) w[i][n + j] = b.at(i, j);
  }
  std::vector<int> piv;
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int p = -1;
    for (int i = row; i < m; ++i)
      if (w[i][col] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(w[row], w[p]);
    mpq_class inv = 1 / w[row][col];
    for (auto& x : w[row]) x *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == row || w[i][col] == 0) continue;
      mpq_class f = w[i][col];
      for (int j = col; j < n + k; ++j) w[i][j] -= f * w[row][j];
    }
    piv.push_back(col);
    ++row;
  }
  for (int i = row; i < m; ++i)
    for (int j = 0; j < k; ++j)
      if (w[i][n + j] != 0) return std::nullopt;
  Matrix x(n, k, Ring::Q());
  for (size_t t = 0; t < piv.size(); ++t)
    for (int j = 0; j < k; ++j) x.set(piv[t], j, w[t][n + j]);
  return x;
}

}  // namespace

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (!(a.ring() == b.ring())) throw Error(ErrorCode::RingMismatch, "solve: ring mismatch");
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "solve: row mismatch");
  const Ring& R = a.ring();
  if (R.isQ()) return solveRational(a, b);
  if (R.isZ()) return solveInteger(a, b);
  Matrix az = a.withRing(Ring::Z());
  Matrix ext = Matrix::hstack(az, Matrix::scalar(a.rows(), R.modulus));
  auto x = solveInteger(ext, b.withRing(Ring::Z()));
  if (!x) return std::nullopt;
  return x->rowsRange(0, a.cols()).withRing(R);
}

Matrix howellForm(const Matrix& a) {
  if (!a.ring().isMod()) throw Error(ErrorCode::WrongRing, "howellForm requires ring Z/n");
  long n = a.ring().modulus;
  Matrix lifted = Matrix::vstack(a.withRing(Ring::Z()), Matrix::scalar(a.cols(), n));
  std::vector<int> piv;
  Matrix h = rowHermite(lifted, nullptr, &piv);
  std::vector<int> keep;
  for (size_t t = 0; t < piv.size(); ++t)
    if (h(static_cast<int>(t), piv[t]) != n) keep.push_back(static_cast<int>(t));
  int outRows = std::max<int>(a.rows(), static_cast<int>(keep.size()));
  Matrix out(outRows, a.cols(), a.ring());
  for (size_t i = 0; i < keep.size(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(static_cast<int>(i), j) = h(keep[i], j);
  out.normalize();
  return out;
}

Matrix integerKernel(const Matrix& a) {
  Matrix u;
  std::vector<int> piv;
  rowHermite(a.numerator().transpose(), &u, &piv);
  int rk = static_cast<int>(piv.size());
  return u.rowsRange(rk, a.cols() - rk).transpose();
}

// ---------------------------------------------------------------- lattices

Lattice Lattice::fromGenerators(const Matrix& gens) {
  Lattice l;
  l.ambient = gens.rows();
  std::vector<int> piv;
  Matrix h = rowHermite(gens.numerator().transpose(), nullptr, &piv);
  l.basis = h.rowsRange(0, static_cast<int>(piv.size())).transpose();
  return l;
}

Lattice Lattice::zero(int n) { return {n, Matrix(n, 0)}; }
Lattice Lattice::full(int n) { return {n, Matrix::identity(n)}; }
Lattice Lattice::multiples(int n, const mpz_class& m) {
  if (m == 0) return zero(n);
  return {n, Matrix::scalar(n, abs(m))};
}

bool Lattice::contains(const Matrix& v) const {
  if (v.rows() != ambient) throw Error(ErrorCode::DimensionMismatch, "lattice membership shape");
  if (v.cols() == 0) return true;
  if (rank() == 0) return v.isZero();
  return solveInteger(basis, v.numerator()).has_value();
}

bool Lattice::containsLattice(const Lattice& o) const { return contains(o.basis); }

Lattice kernelLattice(const Matrix& a) {
  if (a.ring().isMod()) {
    Matrix ext = Matrix::hstack(a.withRing(Ring::Z()), Matrix::scalar(a.rows(), a.ring().modulus));
    Matrix k = integerKernel(ext);
    return Lattice::fromGenerators(k.rowsRange(0, a.cols()));
  }
  return Lattice::fromGenerators(integerKernel(a));
}

Lattice latticeSum(const Lattice& l1, const Lattice& l2) {
  if (l1.ambient != l2.ambient) throw Error(ErrorCode::DimensionMismatch, "lattice ambient mismatch");
  return Lattice::fromGenerators(Matrix::hstack(l1.basis, l2.basis));
}

Lattice latticeIntersect(const Lattice& l1, const Lattice& l2) {
  if (l1.ambient != l2.ambient) throw Error(ErrorCode::DimensionMismatch, "lattice ambient mismatch");
  if (l1.rank() == 0 || l2.rank() == 0) return Lattice::zero(l1.ambient);
  Matrix k = integerKernel(Matrix::hstack(l1.basis, -l2.basis));
  return Lattice::fromGenerators(l1.basis * k.rowsRange(0, l1.rank()));
}

Lattice latticePreimage(const Matrix& a, const Lattice& l) {
  if (a.rows() != l.ambient) throw Error(ErrorCode::DimensionMismatch, "preimage shape mismatch");
  Matrix az = a.numerator();
  if (l.rank() == 0) return Lattice::fromGenerators(integerKernel(az));
  Matrix k = integerKernel(Matrix::hstack(az, -l.basis));
  return Lattice::fromGenerators(k.rowsRange(0, a.cols()));
}

Lattice latticeImage(const Matrix& a, const Lattice& l) {
  if (a.cols() != l.ambient) throw Error(ErrorCode::DimensionMismatch, "image shape mismatch");
  return Lattice::fromGenerators(a.numerator() * l.basis);
}

Lattice latticeSaturate(const Lattice& l) {
  Matrix w = integerKernel(l.basis.transpose());
  return Lattice::fromGenerators(integerKernel(w.transpose()));
}

// ---------------------------------------------------------------- polynomials

Poly charPolyRational(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::NotSquare, "charPolyRational needs a square matrix");
  int n = a.rows();
  std::vector<std::vector<mpq_class>> A(n, std::vector<mpq_class>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A[i][j] = a.at(i, j);
  // Faddeev-LeVerrier: c[k] is the coefficient of lambda^k in det(lambda - A).
  std::vector<mpq_class> c(n + 1);
  c[n] = 1;
  std::vector<std::vector<mpq_class>> M(n, std::vector<mpq_class>(n)), AM(n, std::vector<mpq_class>(n));
  for (int k = 1; k <= n; ++k) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        mpq_class s = 0;
        for (int l = 0; l < n; ++l) s += A[i][l] * M[l][j];
        AM[i][j] = s;
      }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) M[i][j] = AM[i][j];
      M[i][i] += c[n - k + 1];
    }
    mpq_class tr = 0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) tr += A[i][l] * M[l][i];
    c[n - k] = -tr / k;
  }
  Poly p(n + 1);
  for (int i = 0; i <= n; ++i) p[i] = c[n - i];
  while (p.size() > 1 && p.back() == 0) p.pop_back();
  return p;
}

std::string polyString(const Poly& p) {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    mpq_class c = p[i];
    bool neg = c < 0;
    if (neg) c = -c;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    if (i == 0 || c != 1) os << c.get_str();
    if (i >= 1) os << "t";
    if (i >= 2) os << "^" << i;
  }
  if (first) os << "0";
  return os.str();
}

// ---------------------------------------------------------------- groups

FGAbGroup FGAbGroup::trivial(int ambient) {
  FGAbGroup g;
  g.ambient_ = ambient;
  g.num_ = Lattice::zero(ambient);
  g.den_ = Lattice::zero(ambient);
  g.lift_ = Matrix(ambient, 0);
  g.projNum_ = Matrix(0, ambient);
  return g;
}

FGAbGroup FGAbGroup::subquotient(const Matrix& numGens, const Matrix& denGens, int ambient, bool field) {
  if (numGens.rows() != ambient || denGens.rows() != ambient)
    throw Error(ErrorCode::DimensionMismatch, "subquotient generator shape");
  FGAbGroup g;
  g.ambient_ = ambient;
  g.field_ = field;
  g.den_ = Lattice::fromGenerators(denGens);
  g.num_ = latticeSum(Lattice::fromGenerators(numGens), g.den_);
  if (field) {
    g.den_ = latticeSaturate(g.den_);
    g.num_ = latticeSaturate(g.num_);
  }
  const Matrix& B = g.num_.basis;
  int r = B.cols();
  if (r == 0) {
    g.lift_ = Matrix(ambient, 0);
    g.projNum_ = Matrix(0, ambient);
    return g;
  }
  auto rel = solveInteger(B, g.den_.basis);
  if (!rel) throw Error(ErrorCode::DimensionMismatch, "denominator not contained in numerator");
  IntMat s, u, uinv;
  smithWithInverse(*rel, s, u, uinv);
  int t = 0;
  while (t < std::min(s.r, s.c) && s.at(t, t) != 0) ++t;
  std::vector<int> keep;
  for (int i = 0; i < r; ++i) {
    if (i < t) {
      if (s.at(i, i) != 1) {
        keep.push_back(i);
        g.torsion_.push_back(s.at(i, i));
      }
    } else {
      keep.push_back(i);
    }
  }
  g.freeRank_ = r - t;
  g.lift_ = B * uinv.toMatrix().selectCols(keep);
  // Left inverse of B on L: B is in column echelon form with pivot rows p_s.
  std::vector<int> prow(r);
  for (int sidx = 0; sidx < r; ++sidx) {
    int i = 0;
    while (B(i, sidx) == 0) ++i;
    prow[sidx] = i;
  }
  // Bsq (r x r) lower triangular; invert over Q by forward substitution.
  std::vector<std::vector<mpq_class>> inv(r, std::vector<mpq_class>(r));
  for (int col = 0; col < r; ++col) {
    for (int i = 0; i < r; ++i) {
      mpq_class acc = (i == col) ? 1 : 0;
      for (int k = 0; k < i; ++k) acc -= mpq_class(B(prow[i], k)) * inv[k][col];
      inv[i][col] = acc / mpq_class(B(prow[i], i));
    }
  }
  mpz_class D = 1;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), inv[i][j].get_den_mpz_t());
  Matrix P(r, ambient);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      mpq_class v = inv[i][j] * D;
      P(i, prow[j]) = v.get_num();
    }
  g.projNum_ = u.toMatrix().selectRows(keep) * P;
  g.projDen_ = D;
  mpz_class gg = D;
  for (int i = 0; i < g.projNum_.rows(); ++i)
    for (int j = 0; j < g.projNum_.cols(); ++j) mpz_gcd(gg.get_mpz_t(), gg.get_mpz_t(), g.projNum_(i, j).get_mpz_t());
  if (gg > 1) {
    for (int i = 0; i < g.projNum_.rows(); ++i)
      for (int j = 0; j < g.projNum_.cols(); ++j)
        mpz_divexact(g.projNum_(i, j).get_mpz_t(), g.projNum_(i, j).get_mpz_t(), gg.get_mpz_t());
    g.projDen_ /= gg;
  }
  return g;
}

FGAbGroup FGAbGroup::cokernel(const Matrix& a) {
  requireInteger(a, "cokernelGroup");
  return subquotient(Matrix::identity(a.rows()), a, a.rows());
}

Matrix FGAbGroup::presentation() const {
  Matrix p(ngens(), static_cast<int>(torsion_.size()));
  for (size_t i = 0; i < torsion_.size(); ++i) p(static_cast<int>(i), static_cast<int>(i)) = torsion_[i];
  return p;
}

Matrix FGAbGroup::reduce(const Matrix& coords) const {
  if (field_) return coords.ring().isQ() ? coords : coords.withRing(Ring::Z()).withRing(Ring::Q());
  Matrix c = coords.numerator();
  for (size_t i = 0; i < torsion_.size(); ++i)
    for (int j = 0; j < c.cols(); ++j)
      mpz_fdiv_r(c(static_cast<int>(i), j).get_mpz_t(), c(static_cast<int>(i), j).get_mpz_t(), torsion_[i].get_mpz_t());
  return c;
}

Matrix FGAbGroup::project(const Matrix& v) const {
  if (v.rows() != ambient_) throw Error(ErrorCode::DimensionMismatch, "project: ambient mismatch");
  if (field_) {
    Matrix vq = v.ring().isQ() ? v : v.withRing(Ring::Z()).withRing(Ring::Q());
    Matrix c = projNum_.withRing(Ring::Q()) * vq;
    Matrix out(c.rows(), c.cols(), Ring::Q());
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j) out.set(i, j, c.at(i, j) / mpq_class(projDen_));
    return out;
  }
  if (v.ring().isQ() && v.den() != 1) throw Error(ErrorCode::WrongRing, "fractional vector in integer group");
  Matrix vz = v.numerator();
  Matrix c = projNum_ * vz;
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j) {
      if (!mpz_divisible_p(c(i, j).get_mpz_t(), projDen_.get_mpz_t()))
        throw Error(ErrorCode::DimensionMismatch, "project: vector not in the numerator lattice");
      mpz_divexact(c(i, j).get_mpz_t(), c(i, j).get_mpz_t(), projDen_.get_mpz_t());
    }
  return reduce(c);
}

Lattice FGAbGroup::relationLattice() const {
  return Lattice::fromGenerators(presentation());
}

bool FGAbGroup::sameInvariants(const FGAbGroup& o) const {
  return freeRank_ == o.freeRank_ && torsion_ == o.torsion_;
}

std::string FGAbGroup::str() const {
  if (isZero()) return "0";
  std::vector<std::string> parts;
  const char* base = field_ ? "Q" : "Z";
  if (freeRank_ == 1) parts.push_back(base);
  if (freeRank_ > 1) parts.push_back(std::string(base) + "^" + std::to_string(freeRank_));
  for (const auto& d : torsion_) parts.push_back("Z/" + d.get_str());
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i) s += (i ? " (+) " : "") + parts[i];
  return s;
}

GroupHom GroupHom::induced(const FGAbGroup& a, const FGAbGroup& b, const Matrix& ambientMap) {
  GroupHom h;
  h.src = a;
  h.tgt = b;
  if (ambientMap.rows() != b.ambient() || ambientMap.cols() != a.ambient())
    throw Error(ErrorCode::DimensionMismatch, "induced map shape");
  if (b.isField()) {
    Matrix am = ambientMap.ring().isQ() ? ambientMap : ambientMap.withRing(Ring::Z()).withRing(Ring::Q());
    h.m = b.project(am * a.lift().withRing(Ring::Q()));
  } else {
    h.m = b.project(ambientMap.numerator() * a.lift());
  }
  return h;
}

bool GroupHom::isZero() const { return tgt.reduce(m).isZero(); }

GroupHom GroupHom::compose(const GroupHom& before) const {
  GroupHom h;
  h.src = before.src;
  h.tgt = tgt;
  h.m = tgt.reduce(m * before.m);
  return h;
}

Lattice subgroupFull(const FGAbGroup& g) { return Lattice::full(g.ngens()); }
Lattice subgroupZero(const FGAbGroup& g) { return g.relationLattice(); }

Lattice subgroupImage(const GroupHom& f) {
  return Lattice::fromGenerators(Matrix::hstack(f.m, f.tgt.presentation()));
}

Lattice subgroupKernel(const GroupHom& f) { return latticePreimage(f.m, f.tgt.relationLattice()); }

FGAbGroup subgroupQuotient(const FGAbGroup& g, const Lattice& s1, const Lattice& s2) {
  Matrix den = Matrix::hstack(g.lift() * s2.basis, g.denominator().basis);
  Matrix num = Matrix::hstack(g.lift() * s1.basis, den);
  return FGAbGroup::subquotient(num, den, g.ambient(), g.isField());
}

FGAbGroup subgroupAsGroup(const FGAbGroup& g, const Lattice& s) {
  return subgroupQuotient(g, s, g.relationLattice());
}

bool isInjective(const GroupHom& f) { return subgroupKernel(f) == f.src.relationLattice(); }
bool isSurjective(const GroupHom& f) { return subgroupImage(f) == Lattice::full(f.tgt.ngens()); }

}  // namespace wk
