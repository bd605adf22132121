#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wk {

enum class ErrorCode {
  WrongRing,
  DimensionMismatch,
  RingMismatch,
  NotSquare,
  InvalidChainMap,
  NotEndomorphism,
  NotAlmostIdempotent,
  FiltrationNotPreserved,
  NotExact,
  AxiomViolation,
  ShapeMismatch,
  NotClosed,
  WrongCategory,
  NotNegative,
  NotATriangleEndomorphism,
  ParseError,
  SchemaError,
  InvalidArgument,
};

const char* errorCodeName(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct Ring {
  enum class Kind { Integers, IntegersMod, Rationals };
  Kind kind = Kind::Integers;
  long modulus = 0;

  static Ring Z() { return {}; }
  static Ring Zmod(long n);
  static Ring Q() { return {Kind::Rationals, 0}; }
  static Ring parse(const std::string& s);

  bool isZ() const { return kind == Kind::Integers; }
  bool isMod() const { return kind == Kind::IntegersMod; }
  bool isQ() const { return kind == Kind::Rationals; }
  std::string name() const;
  bool operator==(const Ring& o) const { return kind == o.kind && modulus == o.modulus; }
};

// Dense row-major matrix. Integer rings keep entries in num_ with den_ == 1;
// over Q the entries are num_/den_ with gcd(num_, den_) = 1 overall.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, Ring ring = Ring::Z());

  static Matrix identity(int n, Ring ring = Ring::Z());
  static Matrix fromRows(const std::vector<std::vector<long>>& rows, Ring ring = Ring::Z());
  static Matrix scalar(int n, const mpz_class& c, Ring ring = Ring::Z());
  static Matrix column(const std::vector<mpz_class>& v, Ring ring = Ring::Z());

  int rows() const { return r_; }
  int cols() const { return c_; }
  const Ring& ring() const { return ring_; }
  bool empty() const { return r_ == 0 || c_ == 0; }

  // Raw numerator access; callers over Q must call normalize() after writes.
  mpz_class& operator()(int i, int j) { return num_[static_cast<size_t>(i) * c_ + j]; }
  const mpz_class& operator()(int i, int j) const { return num_[static_cast<size_t>(i) * c_ + j]; }
  const mpz_class& den() const { return den_; }
  mpq_class at(int i, int j) const;
  void set(int i, int j, const mpq_class& v);

  void normalize();
  Matrix withRing(Ring r) const;
  Matrix numerator() const;

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  Matrix operator*(const Matrix& o) const;
  Matrix scaled(const mpz_class& c) const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool isZero() const;
  Matrix transpose() const;
  Matrix block(int r0, int c0, int nr, int nc) const;
  Matrix rowsRange(int r0, int nr) const { return block(r0, 0, nr, c_); }
  Matrix colsRange(int c0, int nc) const { return block(0, c0, r_, nc); }
  Matrix selectCols(const std::vector<int>& idx) const;
  Matrix selectRows(const std::vector<int>& idx) const;
  void setBlock(int r0, int c0, const Matrix& b);

  static Matrix hstack(const Matrix& a, const Matrix& b);
  static Matrix vstack(const Matrix& a, const Matrix& b);
  static Matrix blockDiag(const Matrix& a, const Matrix& b);
  static Matrix kron(const Matrix& a, const Matrix& b);

  std::string str() const;

 private:
  Ring ring_;
  int r_ = 0, c_ = 0;
  std::vector<mpz_class> num_;
  mpz_class den_ = 1;
};

struct SmithForm {
  Matrix u, s, v;
  std::vector<mpz_class> invariantFactors;
};

SmithForm smithNormalForm(const Matrix& a);
// Invariant factors only (no transforms); cheaper.
std::vector<mpz_class> smithInvariants(const Matrix& a);

// Integer row echelon (Hermite) form. If u is given it receives a unimodular
// matrix with u * a = result. Zero rows are kept at the bottom.
Matrix rowHermite(const Matrix& a, Matrix* u = nullptr, std::vector<int>* pivots = nullptr);
int rankOf(const Matrix& a);

Matrix howellForm(const Matrix& a);

std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

struct Lattice {
  int ambient = 0;
  Matrix basis;  // ambient x rank, canonical column Hermite form

  static Lattice fromGenerators(const Matrix& gens);
  static Lattice zero(int n);
  static Lattice full(int n);
  static Lattice multiples(int n, const mpz_class& m);

  int rank() const { return basis.cols(); }
  bool contains(const Matrix& v) const;
  bool containsLattice(const Lattice& o) const;
  bool operator==(const Lattice& o) const { return ambient == o.ambient && basis == o.basis; }
  bool operator!=(const Lattice& o) const { return !(*this == o); }
};

Lattice kernelLattice(const Matrix& a);
Lattice latticeIntersect(const Lattice& l1, const Lattice& l2);
Lattice latticeSum(const Lattice& l1, const Lattice& l2);
Lattice latticePreimage(const Matrix& a, const Lattice& l);
Lattice latticeImage(const Matrix& a, const Lattice& l);
Lattice latticeSaturate(const Lattice& l);

// Integer kernel basis (columns), saturated, not canonicalized.
Matrix integerKernel(const Matrix& a);

using Poly = std::vector<mpq_class>;  // ascending coefficients
Poly charPolyRational(const Matrix& a);
std::string polyString(const Poly& p);

// Finitely generated abelian group realized as a subquotient L/M of Z^ambient.
class FGAbGroup {
 public:
  FGAbGroup() = default;
  static FGAbGroup subquotient(const Matrix& numGens, const Matrix& denGens, int ambient,
                               bool field = false);
  static FGAbGroup cokernel(const Matrix& a);
  static FGAbGroup trivial(int ambient = 0);

  int ambient() const { return ambient_; }
  int freeRank() const { return freeRank_; }
  const std::vector<mpz_class>& torsion() const { return torsion_; }
  int ngens() const { return static_cast<int>(torsion_.size()) + freeRank_; }
  bool isZero() const { return ngens() == 0; }
  bool isField() const { return field_; }

  const Matrix& lift() const { return lift_; }
  const Lattice& numerator() const { return num_; }
  const Lattice& denominator() const { return den_; }
  Matrix presentation() const;

  // ambient vectors (columns, must lie in L) to reduced generator coordinates
  Matrix project(const Matrix& v) const;
  Matrix reduce(const Matrix& coords) const;
  bool containsAmbient(const Matrix& v) const { return num_.contains(v); }
  bool isZeroClass(const Matrix& v) const { return den_.contains(v); }

  // Relation lattice of the generator coordinates: torsion rows scaled.
  Lattice relationLattice() const;
  bool sameInvariants(const FGAbGroup& o) const;
  std::string str() const;

 private:
  int ambient_ = 0;
  bool field_ = false;
  int freeRank_ = 0;
  std::vector<mpz_class> torsion_;
  Lattice num_, den_;
  Matrix lift_;
  Matrix projNum_;
  mpz_class projDen_ = 1;
};

// Homomorphism between groups in generator coordinates.
struct GroupHom {
  FGAbGroup src, tgt;
  Matrix m;  // tgt.ngens x src.ngens

  static GroupHom induced(const FGAbGroup& a, const FGAbGroup& b, const Matrix& ambientMap);
  Matrix apply(const Matrix& coords) const { return tgt.reduce(m * coords); }
  bool isZero() const;
  GroupHom compose(const GroupHom& before) const;  // this o before
};

// Subgroups of G as lattices in Z^{ngens} containing the relation lattice.
Lattice subgroupImage(const GroupHom& f);
Lattice subgroupKernel(const GroupHom& f);
Lattice subgroupFull(const FGAbGroup& g);
Lattice subgroupZero(const FGAbGroup& g);
// The subquotient S1/S2 of g (S2 inside S1) realized in g's ambient.
FGAbGroup subgroupQuotient(const FGAbGroup& g, const Lattice& s1, const Lattice& s2);
FGAbGroup subgroupAsGroup(const FGAbGroup& g, const Lattice& s);
bool isInjective(const GroupHom& f);
bool isSurjective(const GroupHom& f);

}  // namespace wk
