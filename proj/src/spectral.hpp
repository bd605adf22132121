#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weights.hpp"

namespace wk {

using Bidegree = std::pair<int, int>;  // (p, q)

inline Bidegree operator+(Bidegree a, Bidegree b) { return {a.first + b.first, a.second + b.second}; }
inline Bidegree operator-(Bidegree a, Bidegree b) { return {a.first - b.first, a.second - b.second}; }
inline Bidegree operator*(int c, Bidegree a) { return {c * a.first, c * a.second}; }

// Finitely many nonzero entries; anything not stored is zero.
struct BigradedGroup {
  std::map<Bidegree, FGAbGroup> entries;

  bool has(Bidegree b) const { return entries.count(b) > 0; }
  FGAbGroup at(Bidegree b) const;
  void set(Bidegree b, const FGAbGroup& g) { entries[b] = g; }
  // Entrywise isomorphism, treating absent entries as zero.
  bool sameInvariants(const BigradedGroup& o) const;
  std::vector<Bidegree> nonzero() const;
  std::string str() const;
};

// D -i-> D -j-> E -k-> D with declared bidegrees. E is complete (zero outside its
// entries); D is only known on dWindow, and maps touching D outside it are unknown.
struct ExactCouple {
  BigradedGroup d, e;
  std::map<Bidegree, GroupHom> i, j, k;  // keyed by source bidegree
  Bidegree degI{-1, 1}, degJ{0, 0}, degK{1, 0};
  int pMin = 0, pMax = -1;  // D window in p
  int nMin = 0, nMax = -1;  // D window in p + q

  bool inDWindow(Bidegree b) const;
  // i^m out of D^{b}; nullopt if the chain leaves the D window.
  std::optional<GroupHom> iPower(Bidegree b, int m) const;
  FGAbGroup eAt(Bidegree b) const { return e.at(b); }
  // Nodes where exactness could not be verified (all neighbours known but kernel != image).
  std::vector<std::string> exactnessFailures() const;
  Bidegree dBidegree() const { return degK + degJ; }
};

enum class CoupleKind { Standard, Dual };

// Covariant H: E_1^{pq} = H((sigma_p X)[p+q]), D_1^{pq} = H((sigma_{>=p} X)[p+q]).
// Contravariant H: E_1^{pq} = H((sigma_{-p} X)[-p-q]), D_1^{pq} = H((sigma_{<=-p} X)[-p-q]).
// Dual (covariant only): D_1^{pq} = H((sigma_{<=p-1} X)[p+q]) with the same E_1.
// Throws NotExact if exactness fails on the verified nodes.
ExactCouple coupleFromTower(const FunctorSpec& h, const PostnikovTower& tower, CoupleKind kind = CoupleKind::Standard);

// D' = im i, E' = ker(jk)/im(jk); i' restricted, j'(i a) = j a, k' restricted.
ExactCouple deriveCouple(const ExactCouple& c);

struct Page {
  int r = 1;
  BigradedGroup e;
  std::map<Bidegree, GroupHom> diff;  // d_r out of each nonzero entry
  Bidegree degree{1, 0};
};

struct AbutmentDegree {
  FGAbGroup group;
  // Decreasing filtration of subgroups of `group` (generator coordinates), by p.
  std::map<int, Lattice> filtration;
  FGAbGroup graded(int p) const;  // F^p / F^{p+1}
};

struct SpectralSequence {
  std::vector<Page> pages;  // pages[r-1] is E_r
  BigradedGroup eInfinity;
  std::map<int, AbutmentDegree> abutment;  // by total degree n = p + q
  int stabilizationPage = 1;
  // Per-page checks gathered while computing.
  bool squareZero = true;
  bool pageIsHomology = true;
  bool convergent = true;  // E_infinity^{pq} ~ gr^p of the abutment in degree p+q
  std::vector<std::string> problems;

  const Page& page(int r) const { return pages.at(r - 1); }
};

// Pages of an exact couple by the Z_r / B_r formulas inside E_1.
// Only the first `maxPage` pages are computed.
std::vector<Page> couplePages(const ExactCouple& c, int maxPage);

SpectralSequence weightSS(const FunctorSpec& h, const Complex& x, int maxPage = 0);

// The map E_r(X) -> E_r(X') induced by the componentwise action of g on the
// stupid truncations (reversed for contravariant h).
std::map<Bidegree, GroupHom> inducedPageMap(const FunctorSpec& h, const ChainMap& g, const SpectralSequence& ssX,
                                            const SpectralSequence& ssY, int r);

// ---- filtered complexes

// Decreasing filtration F^p of a complex over Z: F^p = everything for p <= pLo,
// zero for p > pHi, levels[n - total.minDeg()][p - pLo] in between.
class FilteredComplex {
 public:
  FilteredComplex() = default;
  FilteredComplex(Complex total, int pLo, int pHi, std::vector<std::vector<Lattice>> levels);

  static FilteredComplex stupid(const Complex& x);
  static FilteredComplex trivial(const Complex& x, int p = 0);

  const Complex& total() const { return total_; }
  int pLo() const { return pLo_; }
  int pHi() const { return pHi_; }
  Lattice level(int n, int p) const;

 private:
  Complex total_;
  int pLo_ = 0, pHi_ = 0;
  std::vector<std::vector<Lattice>> levels_;
};

// Throws FiltrationNotPreserved if some d(F^p) is not inside F^p, or the
// filtration is not decreasing.
void validateFiltration(const FilteredComplex& fc);

SpectralSequence filteredSS(const FilteredComplex& fc, int maxPage = 0);

// (Dec F)^p K^n = { x in F^{p+n} K^n : dx in F^{p+n+1} K^{n+1} }.
FilteredComplex decalage(const FilteredComplex& fc);

struct DecalageReport {
  int compared = 0;
  std::vector<std::string> mismatches;
  bool abutmentShiftOk = true;
  bool ok() const { return mismatches.empty() && abutmentShiftOk; }
};
// T = filteredSS(fc), S = filteredSS(decalage(fc)): T_{n+1}^{pq} ~ S_n^{-q, p+2q} for
// n in [1, maxPage], and (Dec F)^p H^m = F^{p+m} H^m.
DecalageReport compareDecalageIndices(const FilteredComplex& fc, int maxPage);

}  // namespace wk
