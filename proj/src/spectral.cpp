#include "spectral.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <set>
#include <sstream>

namespace wk {

namespace {

constexpr int kLow = INT_MIN / 2;
constexpr int kHigh = INT_MAX / 2;

std::string bideg(Bidegree b) { return "(" + std::to_string(b.first) + "," + std::to_string(b.second) + ")"; }

void requireIntegral(const FGAbGroup& g) {
  if (g.isField()) throw Error(ErrorCode::WrongRing, "spectral sequences are computed over Z");
}

// a with f.m a = y modulo the relations of f.tgt.
Matrix preimageCoords(const GroupHom& f, const Matrix& y) {
  Matrix sys = Matrix::hstack(f.m, f.tgt.presentation());
  auto sol = solve(sys, f.tgt.reduce(y));
  if (!sol) throw Error(ErrorCode::NotExact, "element has no preimage");
  return sol->rowsRange(0, f.m.cols());
}

// f restricted to subquotients a2 of f.src and b2 of f.tgt, realized in the same ambients.
GroupHom restrictHom(const GroupHom& f, const FGAbGroup& a2, const FGAbGroup& b2) {
  GroupHom h;
  h.src = a2;
  h.tgt = b2;
  Matrix coords = f.src.project(a2.lift());
  h.m = b2.project(f.tgt.lift() * (f.m * coords));
  return h;
}

GroupHom zeroHom(const FGAbGroup& a, const FGAbGroup& b) {
  GroupHom h;
  h.src = a;
  h.tgt = b;
  h.m = Matrix(b.ngens(), a.ngens());
  return h;
}

GroupHom identityHom(const FGAbGroup& a) {
  GroupHom h;
  h.src = a;
  h.tgt = a;
  h.m = Matrix::identity(a.ngens(), Ring::Z());
  return h;
}

}  // namespace

// ---------------------------------------------------------------- bigraded groups

FGAbGroup BigradedGroup::at(Bidegree b) const {
  auto it = entries.find(b);
  return it == entries.end() ? FGAbGroup::trivial() : it->second;
}

bool BigradedGroup::sameInvariants(const BigradedGroup& o) const {
  for (const auto& [b, g] : entries)
    if (!g.sameInvariants(o.at(b))) return false;
  for (const auto& [b, g] : o.entries)
    if (!g.sameInvariants(at(b))) return false;
  return true;
}

std::vector<Bidegree> BigradedGroup::nonzero() const {
  std::vector<Bidegree> out;
  for (const auto& [b, g] : entries)
    if (!g.isZero()) out.push_back(b);
  return out;
}

std::string BigradedGroup::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [b, g] : entries) {
    if (g.isZero()) continue;
    if (!first) os << ", ";
    first = false;
    os << bideg(b) << ": " << g.str();
  }
  return first ? "0" : os.str();
}

// ---------------------------------------------------------------- exact couples

bool ExactCouple::inDWindow(Bidegree b) const {
  int n = b.first + b.second;
  return b.first >= pMin && b.first <= pMax && n >= nMin && n <= nMax;
}

std::optional<GroupHom> ExactCouple::iPower(Bidegree b, int m) const {
  if (!inDWindow(b)) return std::nullopt;
  GroupHom acc = identityHom(d.at(b));
  Bidegree cur = b;
  for (int t = 0; t < m; ++t) {
    auto it = i.find(cur);
    if (it == i.end()) return std::nullopt;
    acc = it->second.compose(acc);
    cur = cur + degI;
  }
  return acc;
}

std::vector<std::string> ExactCouple::exactnessFailures() const {
  std::vector<std::string> bad;
  auto kernelOf = [](const std::map<Bidegree, GroupHom>& maps, Bidegree b, const FGAbGroup& g) {
    auto it = maps.find(b);
    return it == maps.end() ? subgroupFull(g) : subgroupKernel(it->second);
  };
  auto imageOf = [](const std::map<Bidegree, GroupHom>& maps, Bidegree b, const FGAbGroup& g) {
    auto it = maps.find(b);
    return it == maps.end() ? subgroupZero(g) : subgroupImage(it->second);
  };
  for (const auto& [b, g] : d.entries) {
    if (!inDWindow(b)) continue;
    if (inDWindow(b - degI) && kernelOf(j, b, g) != imageOf(i, b - degI, g)) bad.push_back("D" + bideg(b) + " at i/j");
    if (inDWindow(b + degI) && kernelOf(i, b, g) != imageOf(k, b - degK, g)) bad.push_back("D" + bideg(b) + " at k/i");
  }
  for (const auto& [b, g] : e.entries) {
    if (!inDWindow(b + degK) || !inDWindow(b - degJ)) continue;
    if (kernelOf(k, b, g) != imageOf(j, b - degJ, g)) bad.push_back("E" + bideg(b) + " at j/k");
  }
  return bad;
}

namespace {

// Complexes and chain maps realizing one of the couples of a bounded complex.
class CoupleBuilder {
 public:
  CoupleBuilder(const FunctorSpec& h, const Complex& x) : h_(h), x_(x) {}

  // H of sigma_[a,b] X [n], cached on the effective window.
  FGAbGroup group(int a, int b, int n) {
    auto key = normalize(a, b, n);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    FGAbGroup g = evaluate(h_, complexFor(a, b, n));
    requireIntegral(g);
    cache_.emplace(key, g);
    return g;
  }
  Complex complexFor(int a, int b, int n) const { return shift(windowTrunc(x_, a, b), n); }

  // The group map H(m) for a chain map m : sigma_[a,b] X [n] -> sigma_[a2,b2] X [n2],
  // oriented by variance.
  GroupHom induced(const ChainMap& m, std::tuple<int, int, int> src, std::tuple<int, int, int> tgt) {
    auto [a, b, n] = src;
    auto [a2, b2, n2] = tgt;
    FGAbGroup gs = group(a, b, n), gt = group(a2, b2, n2);
    if (h_.covariant()) return GroupHom::induced(gs, gt, ambientMap(h_, m));
    return GroupHom::induced(gt, gs, ambientMap(h_, m));
  }

 private:
  std::tuple<int, int, int> normalize(int a, int b, int n) const {
    int lo = std::max(a, x_.minDeg()), hi = std::min(b, x_.maxDeg());
    if (lo > hi) return {1, 0, n};
    return {lo, hi, n};
  }
  FunctorSpec h_;
  Complex x_;
  std::map<std::tuple<int, int, int>, FGAbGroup> cache_;
};

}  // namespace

ExactCouple coupleFromTower(const FunctorSpec& h, const PostnikovTower& tower, CoupleKind kind) {
  const Complex& x = tower.x;
  if (!x.ring().isZ()) throw Error(ErrorCode::WrongRing, "weight spectral sequences are computed over Z");
  bool cov = h.covariant();
  if (kind == CoupleKind::Dual && !cov) throw Error(ErrorCode::InvalidArgument, "the dual couple is built for covariant functors");
  ExactCouple c;
  if (kind == CoupleKind::Dual) c.degJ = {0, 1}, c.degK = {1, -1};
  if (x.windowEmpty()) return c;

  int lo = x.minDeg(), hi = x.maxDeg();
  int P0 = cov ? lo : -hi, P1 = cov ? hi : -lo;
  auto [s0, s1] = h.degreeSupport();
  int q0 = cov ? -s1 : s0, q1 = cov ? -s0 : s1;
  int L = P1 - P0 + 2;
  c.pMin = P0 - L;
  c.pMax = P1 + L;
  c.nMin = P0 + q0 - 1;
  c.nMax = P1 + q1 + 1;
  CoupleBuilder B(h, x);

  // Windows [a,b] and shift for D^{pq}, E^{pq}.
  auto dWin = [&](int p, int q) -> std::tuple<int, int, int> {
    int n = p + q;
    if (kind == CoupleKind::Dual) return {kLow, p - 1, n};
    if (cov) return {p, kHigh, n};
    return {kLow, -p, -n};
  };
  auto eWin = [&](int p, int q) -> std::tuple<int, int, int> {
    int n = p + q;
    return cov ? std::tuple<int, int, int>{p, p, n} : std::tuple<int, int, int>{-p, -p, -n};
  };
  auto grp = [&](std::tuple<int, int, int> w) { return B.group(std::get<0>(w), std::get<1>(w), std::get<2>(w)); };
  auto cmp = [&](std::tuple<int, int, int> from, std::tuple<int, int, int> to) {
    return shiftMap(windowComparison(x, std::get<0>(from), std::get<1>(from), std::get<0>(to), std::get<1>(to)),
                    std::get<2>(from));
  };

  for (int p = c.pMin; p <= c.pMax; ++p)
    for (int n = c.nMin; n <= c.nMax; ++n) c.d.set({p, n - p}, grp(dWin(p, n - p)));
  if (P0 <= P1 && q0 <= q1)
    for (int p = P0; p <= P1; ++p)
      for (int q = q0; q <= q1; ++q) c.e.set({p, q}, grp(eWin(p, q)));

  // i : D^{p+1,q-1} -> D^{pq}.
  for (const auto& [b, g] : c.d.entries) {
    Bidegree t = b + c.degI;
    if (!c.inDWindow(t)) continue;
    auto ws = dWin(b.first, b.second), wt = dWin(t.first, t.second);
    ChainMap m = cov ? cmp(ws, wt) : cmp(wt, ws);
    c.i[b] = B.induced(m, cov ? ws : wt, cov ? wt : ws);
  }
  for (const auto& [b, g] : c.e.entries) {
    int p = b.first, q = b.second;
    auto we = eWin(p, q);
    // j into E^{b} comes from D^{b - degJ}.
    Bidegree js = b - c.degJ;
    if (c.inDWindow(js)) {
      auto wd = dWin(js.first, js.second);
      ChainMap m;
      if (kind == CoupleKind::Dual) {
        // sigma_{<=p-1} X[n] -> sigma_p X[n+1]
        m = shiftMap(splitConnecting(windowTrunc(x, kLow, p), p - 1), std::get<2>(wd));
      } else if (cov) {
        m = cmp(wd, we);
      } else {
        m = cmp(we, wd);
      }
      c.j[js] = cov ? B.induced(m, wd, we) : B.induced(m, we, wd);
    }
    // k out of E^{b}.
    Bidegree kt = b + c.degK;
    if (c.inDWindow(kt)) {
      auto wd = dWin(kt.first, kt.second);
      ChainMap m;
      if (kind == CoupleKind::Dual) {
        m = cmp(we, wd);
      } else if (cov) {
        // sigma_p X[n] -> sigma_{>=p+1} X[n+1]
        m = shiftMap(splitConnecting(windowTrunc(x, p, kHigh), p), std::get<2>(we));
      } else {
        // sigma_{<=-p-1} X[m-1] -> sigma_{-p} X[m]
        m = shiftMap(splitConnecting(windowTrunc(x, kLow, -p), -p - 1), std::get<2>(wd));
      }
      c.k[b] = cov ? B.induced(m, we, wd) : B.induced(m, wd, we);
    }
  }
  auto bad = c.exactnessFailures();
  if (!bad.empty()) throw Error(ErrorCode::NotExact, "couple is not exact at " + bad.front());
  return c;
}

ExactCouple deriveCouple(const ExactCouple& c) {
  ExactCouple out;
  out.degI = c.degI;
  out.degJ = c.degJ - c.degI;
  out.degK = c.degK;
  out.pMin = c.pMin;
  out.pMax = c.pMax;
  out.nMin = c.nMin;
  out.nMax = c.nMax;
  int di = c.degI.first, dn = c.degI.first + c.degI.second;
  if (di < 0) out.pMax += di; else out.pMin += di;
  if (dn < 0) out.nMax += dn; else out.nMin += dn;

  for (const auto& [b, g] : c.d.entries) {
    if (!out.inDWindow(b) || !c.inDWindow(b - c.degI)) continue;
    out.d.set(b, subgroupAsGroup(g, subgroupImage(c.i.at(b - c.degI))));
  }
  for (const auto& [b, g] : c.e.entries) {
    Lattice ker = subgroupFull(g), im = subgroupZero(g);
    auto kt = c.k.find(b);
    if (kt != c.k.end()) {
      auto jt = c.j.find(b + c.degK);
      if (jt != c.j.end()) ker = subgroupKernel(jt->second.compose(kt->second));
      else if (!c.inDWindow(b + c.degK)) throw Error(ErrorCode::InvalidArgument, "derived couple leaves the D window");
    }
    Bidegree src = b - c.dBidegree();
    auto ks = c.k.find(src);
    if (ks != c.k.end()) {
      auto jt = c.j.find(src + c.degK);
      if (jt != c.j.end()) im = subgroupImage(jt->second.compose(ks->second));
    }
    out.e.set(b, subgroupQuotient(g, ker, im));
  }
  for (const auto& [b, g] : out.d.entries) {
    Bidegree t = b + c.degI;
    if (out.d.has(t)) out.i[b] = restrictHom(c.i.at(b), g, out.d.at(t));
    // j'(i a) = [j a]
    Bidegree a = b - c.degI;
    Bidegree et = a + c.degJ;
    if (!out.e.has(et)) continue;
    const FGAbGroup& eNew = out.e.entries.at(et);
    const FGAbGroup& eOld = c.e.entries.at(et);
    auto jt = c.j.find(a);
    GroupHom h = zeroHom(g, eNew);
    if (jt != c.j.end() && g.ngens() > 0) {
      Matrix coords = c.d.at(b).project(g.lift());
      Matrix pre = preimageCoords(c.i.at(a), coords);
      h.m = eNew.project(eOld.lift() * (jt->second.m * pre));
    }
    out.j[b] = h;
  }
  for (const auto& [b, g] : out.e.entries) {
    Bidegree t = b + c.degK;
    if (!out.d.has(t)) continue;
    auto kt = c.k.find(b);
    out.k[b] = kt == c.k.end() ? zeroHom(g, out.d.at(t)) : restrictHom(kt->second, g, out.d.at(t));
  }
  return out;
}

// ---------------------------------------------------------------- pages

namespace {

struct PageCheck {
  bool squareZero = true;
  bool isHomology = true;
  std::vector<std::string> problems;
};

// d_r o d_r = 0 and page r+1 = H(page r), entrywise.
void checkPages(const std::vector<Page>& pages, PageCheck& pc) {
  for (size_t r = 0; r < pages.size(); ++r) {
    const Page& pg = pages[r];
    for (const auto& [b, f] : pg.diff) {
      auto it = pg.diff.find(b + pg.degree);
      if (it != pg.diff.end() && !it->second.compose(f).isZero()) {
        pc.squareZero = false;
        pc.problems.push_back("d_" + std::to_string(pg.r) + "^2 != 0 at " + bideg(b));
      }
    }
    if (r + 1 >= pages.size()) continue;
    const Page& next = pages[r + 1];
    for (const auto& [b, g] : pg.e.entries) {
      auto out = pg.diff.find(b);
      Lattice ker = out == pg.diff.end() ? subgroupFull(g) : subgroupKernel(out->second);
      auto in = pg.diff.find(b - pg.degree);
      Lattice im = in == pg.diff.end() ? subgroupZero(g) : subgroupImage(in->second);
      if (!subgroupQuotient(g, ker, im).sameInvariants(next.e.at(b))) {
        pc.isHomology = false;
        pc.problems.push_back("E_" + std::to_string(next.r) + bideg(b) + " is not the homology of the previous page");
      }
    }
  }
}

int stabilization(const std::vector<Page>& pages) {
  int s = static_cast<int>(pages.size());
  while (s > 1) {
    const Page& pg = pages[s - 2];
    bool zero = true;
    for (const auto& [b, f] : pg.diff)
      if (!f.isZero()) zero = false;
    if (!zero) break;
    --s;
  }
  return s;
}

}  // namespace

std::vector<Page> couplePages(const ExactCouple& c, int maxPage) {
  std::vector<Page> pages;
  for (int r = 1; r <= maxPage; ++r) {
    Page pg;
    pg.r = r;
    pg.degree = c.degK + c.degJ - (r - 1) * c.degI;
    std::map<Bidegree, Lattice> zs;
    for (const auto& [b, g] : c.e.entries) {
      Lattice z = subgroupFull(g), bd = subgroupZero(g);
      auto kt = c.k.find(b);
      if (kt != c.k.end()) {
        Bidegree s = b + c.degK - (r - 1) * c.degI;
        auto ip = c.iPower(s, r - 1);
        if (!ip) throw Error(ErrorCode::InvalidArgument, "page " + std::to_string(r) + " leaves the couple's window");
        z = latticePreimage(kt->second.m, subgroupImage(*ip));
      }
      Bidegree js = b - c.degJ;
      auto jt = c.j.find(js);
      if (jt != c.j.end()) {
        auto ip = c.iPower(js, r - 1);
        if (!ip) throw Error(ErrorCode::InvalidArgument, "page " + std::to_string(r) + " leaves the couple's window");
        bd = latticeSum(latticeImage(jt->second.m, subgroupKernel(*ip)), subgroupZero(g));
      }
      zs[b] = z;
      pg.e.set(b, subgroupQuotient(g, z, bd));
    }
    for (const auto& [b, er] : pg.e.entries) {
      Bidegree t = b + pg.degree;
      FGAbGroup tgt = pg.e.at(t);
      GroupHom dr = zeroHom(er, tgt);
      auto kt = c.k.find(b);
      if (pg.e.has(t) && kt != c.k.end() && er.ngens() > 0) {
        Bidegree s = b + c.degK - (r - 1) * c.degI;
        const FGAbGroup& e1 = c.e.entries.at(b);
        const FGAbGroup& e1t = c.e.entries.at(t);
        Matrix coords = e1.project(er.lift());
        Matrix a = preimageCoords(*c.iPower(s, r - 1), kt->second.m * coords);
        auto jt = c.j.find(s);
        if (jt != c.j.end()) dr.m = tgt.project(e1t.lift() * (jt->second.m * a));
      }
      pg.diff[b] = dr;
    }
    pages.push_back(std::move(pg));
  }
  return pages;
}

FGAbGroup AbutmentDegree::graded(int p) const {
  auto level = [&](int s) {
    if (filtration.empty()) return subgroupZero(group);
    if (s <= filtration.begin()->first) return filtration.begin()->second;
    if (s > filtration.rbegin()->first) return subgroupZero(group);
    return filtration.at(s);
  };
  return subgroupQuotient(group, level(p), level(p + 1));
}

namespace {

void finish(SpectralSequence& ss) {
  PageCheck pc;
  checkPages(ss.pages, pc);
  ss.squareZero = pc.squareZero;
  ss.pageIsHomology = pc.isHomology;
  ss.problems = pc.problems;
  if (ss.pages.empty()) return;
  ss.stabilizationPage = stabilization(ss.pages);
  ss.eInfinity = ss.pages.back().e;
  for (const auto& [b, g] : ss.eInfinity.entries) {
    auto it = ss.abutment.find(b.first + b.second);
    FGAbGroup gr = it == ss.abutment.end() ? FGAbGroup::trivial() : it->second.graded(b.first);
    if (!g.sameInvariants(gr)) {
      ss.convergent = false;
      ss.problems.push_back("E_inf" + bideg(b) + " = " + g.str() + " but gr = " + gr.str());
    }
  }
  for (const auto& [n, ab] : ss.abutment)
    for (const auto& [p, l] : ab.filtration) {
      if (ss.eInfinity.has({p, n - p})) continue;
      if (!ab.graded(p).isZero()) {
        ss.convergent = false;
        ss.problems.push_back("gr^" + std::to_string(p) + " H^" + std::to_string(n) + " has no E_inf entry");
      }
    }
}

}  // namespace

SpectralSequence weightSS(const FunctorSpec& h, const Complex& x, int maxPage) {
  SpectralSequence ss;
  if (x.windowEmpty()) return ss;
  PostnikovTower tower = postnikovTower(x);
  ExactCouple c = coupleFromTower(h, tower);
  int width = x.maxDeg() - x.minDeg();
  int pages = maxPage > 0 ? maxPage : width + 2;
  pages = std::min(pages, width + 3);
  ss.pages = couplePages(c, pages);

  bool cov = h.covariant();
  int P0 = cov ? x.minDeg() : -x.maxDeg(), P1 = cov ? x.maxDeg() : -x.minDeg();
  std::set<int> degrees;
  for (const auto& [b, g] : c.e.entries) degrees.insert(b.first + b.second);
  for (int n : degrees) {
    AbutmentDegree ab;
    Complex y = shift(x, cov ? n : -n);
    ab.group = evaluate(h, y);
    requireIntegral(ab.group);
    for (int p = P0; p <= P1 + 1; ++p) ab.filtration[p] = weightFiltration(h, y, cov ? p - n : -p + n);
    ss.abutment[n] = ab;
  }
  finish(ss);
  return ss;
}

std::map<Bidegree, GroupHom> inducedPageMap(const FunctorSpec& h, const ChainMap& g, const SpectralSequence& ssX,
                                            const SpectralSequence& ssY, int r) {
  requireChainMap(g);
  bool cov = h.covariant();
  const Page& px = ssX.page(r);
  const Page& py = ssY.page(r);
  std::set<Bidegree> keys;
  for (const auto& [b, e] : px.e.entries) keys.insert(b);
  for (const auto& [b, e] : py.e.entries) keys.insert(b);
  std::map<Bidegree, GroupHom> out;
  for (Bidegree b : keys) {
    FGAbGroup a = px.e.at(b), t = py.e.at(b);
    if (!cov) std::swap(a, t);
    if (!px.e.has(b) || !py.e.has(b) || a.ngens() == 0 || t.ngens() == 0) {
      out[b] = zeroHom(a, t);
      continue;
    }
    int n = b.first + b.second;
    ChainMap m = cov ? shiftMap(windowTruncMap(g, b.first, b.first), n)
                     : shiftMap(windowTruncMap(g, -b.first, -b.first), -n);
    out[b] = GroupHom::induced(a, t, ambientMap(h, m));
  }
  return out;
}

// ---------------------------------------------------------------- filtered complexes

FilteredComplex::FilteredComplex(Complex total, int pLo, int pHi, std::vector<std::vector<Lattice>> levels)
    : total_(std::move(total)), pLo_(pLo), pHi_(pHi), levels_(std::move(levels)) {
  if (!total_.ring().isZ()) throw Error(ErrorCode::WrongRing, "filtered complexes are over Z");
  if (pHi_ < pLo_) throw Error(ErrorCode::InvalidArgument, "filtration range is empty");
  int degs = total_.windowEmpty() ? 0 : total_.maxDeg() - total_.minDeg() + 1;
  if (static_cast<int>(levels_.size()) != degs)
    throw Error(ErrorCode::DimensionMismatch, "one list of filtration levels per degree");
  for (int t = 0; t < degs; ++t) {
    if (static_cast<int>(levels_[t].size()) != pHi_ - pLo_ + 1)
      throw Error(ErrorCode::DimensionMismatch, "filtration levels must cover [pLo, pHi]");
    for (const Lattice& l : levels_[t])
      if (l.ambient != total_.rank(total_.minDeg() + t))
        throw Error(ErrorCode::DimensionMismatch, "filtration level in the wrong ambient");
  }
}

Lattice FilteredComplex::level(int n, int p) const {
  int r = total_.rank(n);
  if (total_.windowEmpty() || n < total_.minDeg() || n > total_.maxDeg()) return Lattice::zero(0);
  if (p < pLo_) return Lattice::full(r);
  if (p > pHi_) return Lattice::zero(r);
  return levels_[n - total_.minDeg()][p - pLo_];
}

FilteredComplex FilteredComplex::stupid(const Complex& x) {
  if (x.windowEmpty()) return FilteredComplex(x, 0, 0, {});
  int lo = x.minDeg(), hi = x.maxDeg();
  std::vector<std::vector<Lattice>> lv;
  for (int n = lo; n <= hi; ++n) {
    std::vector<Lattice> row;
    for (int p = lo; p <= hi; ++p) row.push_back(n >= p ? Lattice::full(x.rank(n)) : Lattice::zero(x.rank(n)));
    lv.push_back(row);
  }
  return FilteredComplex(x, lo, hi, lv);
}

FilteredComplex FilteredComplex::trivial(const Complex& x, int p) {
  std::vector<std::vector<Lattice>> lv;
  if (!x.windowEmpty())
    for (int n = x.minDeg(); n <= x.maxDeg(); ++n) lv.push_back({Lattice::full(x.rank(n))});
  return FilteredComplex(x, p, p, lv);
}

void validateFiltration(const FilteredComplex& fc) {
  const Complex& k = fc.total();
  if (k.windowEmpty()) return;
  for (int n = k.minDeg(); n <= k.maxDeg(); ++n) {
    if (fc.level(n, fc.pLo()) != Lattice::full(k.rank(n)))
      throw Error(ErrorCode::FiltrationNotPreserved, "filtration is not exhaustive in degree " + std::to_string(n));
    for (int p = fc.pLo(); p <= fc.pHi() + 1; ++p) {
      Lattice f = fc.level(n, p);
      if (!fc.level(n, p - 1).containsLattice(f))
        throw Error(ErrorCode::FiltrationNotPreserved,
                    "F^" + std::to_string(p) + " is not inside F^" + std::to_string(p - 1) + " in degree " + std::to_string(n));
      if (!latticePreimage(k.d(n), fc.level(n + 1, p)).containsLattice(f))
        throw Error(ErrorCode::FiltrationNotPreserved,
                    "d does not preserve F^" + std::to_string(p) + " in degree " + std::to_string(n));
    }
  }
}

namespace {

struct FilteredLattices {
  const FilteredComplex& fc;
  Lattice z(int r, int p, int n) const {
    if (r <= 0) return fc.level(n, p);
    return latticeIntersect(fc.level(n, p), latticePreimage(fc.total().d(n), fc.level(n + 1, p + r)));
  }
  Lattice b(int r, int p, int n) const {
    int rk = fc.total().rank(n);
    if (r < 0) return Lattice::zero(rk);
    return latticeIntersect(fc.level(n, p), latticeImage(fc.total().d(n - 1), fc.level(n - 1, p - r)));
  }
};

}  // namespace

SpectralSequence filteredSS(const FilteredComplex& fc, int maxPage) {
  validateFiltration(fc);
  SpectralSequence ss;
  const Complex& k = fc.total();
  if (k.windowEmpty()) return ss;
  int pages = maxPage > 0 ? maxPage : fc.pHi() - fc.pLo() + 2;
  FilteredLattices fl{fc};
  for (int r = 1; r <= pages; ++r) {
    Page pg;
    pg.r = r;
    pg.degree = {r, 1 - r};
    for (int p = fc.pLo(); p <= fc.pHi(); ++p)
      for (int n = k.minDeg(); n <= k.maxDeg(); ++n) {
        Lattice num = fl.z(r, p, n);
        Lattice den = latticeSum(fl.z(r - 1, p + 1, n), fl.b(r - 1, p, n));
        pg.e.set({p, n - p}, FGAbGroup::subquotient(num.basis, den.basis, k.rank(n)));
      }
    for (const auto& [b, g] : pg.e.entries) {
      Bidegree t = b + pg.degree;
      int n = b.first + b.second;
      if (pg.e.has(t)) pg.diff[b] = GroupHom::induced(g, pg.e.at(t), k.d(n));
      else pg.diff[b] = zeroHom(g, FGAbGroup::trivial());
    }
    ss.pages.push_back(std::move(pg));
  }
  for (int n = k.minDeg(); n <= k.maxDeg(); ++n) {
    AbutmentDegree ab;
    Lattice cyc = kernelLattice(k.d(n));
    ab.group = FGAbGroup::subquotient(cyc.basis, k.d(n - 1), k.rank(n));
    for (int p = fc.pLo(); p <= fc.pHi() + 1; ++p) {
      Lattice zp = latticeIntersect(cyc, fc.level(n, p));
      Matrix coords = ab.group.project(zp.basis);
      ab.filtration[p] = latticeSum(Lattice::fromGenerators(coords), subgroupZero(ab.group));
    }
    ss.abutment[n] = ab;
  }
  finish(ss);
  return ss;
}

FilteredComplex decalage(const FilteredComplex& fc) {
  validateFiltration(fc);
  const Complex& k = fc.total();
  if (k.windowEmpty()) return fc;
  int lo = fc.pLo() - k.maxDeg() - 1, hi = fc.pHi() - k.minDeg();
  std::vector<std::vector<Lattice>> lv;
  for (int n = k.minDeg(); n <= k.maxDeg(); ++n) {
    std::vector<Lattice> row;
    for (int p = lo; p <= hi; ++p)
      row.push_back(latticeIntersect(fc.level(n, p + n), latticePreimage(k.d(n), fc.level(n + 1, p + n + 1))));
    lv.push_back(row);
  }
  return FilteredComplex(k, lo, hi, lv);
}

DecalageReport compareDecalageIndices(const FilteredComplex& fc, int maxPage) {
  DecalageReport rep;
  FilteredComplex dec = decalage(fc);
  SpectralSequence t = filteredSS(fc, maxPage + 1);
  SpectralSequence s = filteredSS(dec, maxPage);
  for (int n = 1; n <= maxPage; ++n) {
    const BigradedGroup& tn = t.page(n + 1).e;
    const BigradedGroup& sn = s.page(n).e;
    std::set<Bidegree> keys;
    for (Bidegree b : tn.nonzero()) keys.insert(b);
    for (Bidegree b : sn.nonzero()) keys.insert({2 * b.first + b.second, -b.first});
    for (Bidegree b : keys) {
      Bidegree sb{-b.second, b.first + 2 * b.second};
      ++rep.compared;
      if (!tn.at(b).sameInvariants(sn.at(sb)))
        rep.mismatches.push_back("T_" + std::to_string(n + 1) + bideg(b) + " = " + tn.at(b).str() + " but S_" +
                                 std::to_string(n) + bideg(sb) + " = " + sn.at(sb).str());
    }
  }
  for (const auto& [m, ab] : s.abutment) {
    const AbutmentDegree& ta = t.abutment.at(m);
    for (int p = dec.pLo() - 1; p <= dec.pHi() + 1; ++p) {
      auto lvl = [](const AbutmentDegree& a, int q) {
        if (q <= a.filtration.begin()->first) return a.filtration.begin()->second;
        if (q > a.filtration.rbegin()->first) return subgroupZero(a.group);
        return a.filtration.at(q);
      };
      if (lvl(ab, p) != lvl(ta, p + m)) rep.abutmentShiftOk = false;
    }
  }
  return rep;
}

}  // namespace wk
