#include "commands.hpp"

#include <future>
#include <regex>
#include <sstream>

#include "kzero.hpp"
#include "tstruct.hpp"
#include "verify.hpp"

namespace wk {

namespace {

std::string bideg(Bidegree b) { return "(" + std::to_string(b.first) + "," + std::to_string(b.second) + ")"; }

std::string ranksStr(const Complex& x) {
  if (x.windowEmpty()) return "0";
  std::ostringstream os;
  os << "ranks";
  for (int r : x.ranks()) os << " " << r;
  os << " in degrees [" << x.minDeg() << ", " << x.maxDeg() << "]";
  return os.str();
}

CommandResult document(const Document& d) { return {true, serializeDocument(d)}; }

// Both arguments over one category object, as the PreTr operations compare pointers.
TwistedComplex rebind(const TwistedComplex& m, const TwistedComplex& n) {
  if (!sameCategoryData(*m.cat, *n.cat))
    throw Error(ErrorCode::WrongCategory, "the two twisted complexes live over different DG categories");
  TwistedComplex out = n;
  out.cat = m.cat;
  return out;
}

void printSS(std::ostringstream& os, const SpectralSequence& ss, int pages) {
  int shown = std::min<int>(pages, static_cast<int>(ss.pages.size()));
  for (int r = 1; r <= shown; ++r) {
    const Page& pg = ss.page(r);
    os << "E_" << r << ": " << pg.e.str() << "\n";
    std::vector<std::string> live;
    for (const auto& [b, d] : pg.diff)
      if (!d.isZero()) live.push_back(bideg(b) + " -> " + bideg(b + pg.degree));
    if (!live.empty()) {
      os << "d_" << r << " nonzero:";
      for (size_t k = 0; k < live.size(); ++k) os << (k ? ", " : " ") << live[k];
      os << "\n";
    }
  }
  os << "E_inf: " << ss.eInfinity.str() << " (from E_" << ss.stabilizationPage << ")\n";
  for (const auto& [n, ab] : ss.abutment) {
    os << "abutment n = " << n << ": " << ab.group.str();
    std::vector<std::string> gr;
    for (const auto& [p, l] : ab.filtration) {
      if (!ab.filtration.count(p + 1)) continue;
      FGAbGroup g = ab.graded(p);
      if (!g.isZero()) gr.push_back("gr^" + std::to_string(p) + " = " + g.str());
    }
    for (size_t k = 0; k < gr.size(); ++k) os << (k ? ", " : "; ") << gr[k];
    os << "\n";
  }
  for (const auto& p : ss.problems) os << "problem: " << p << "\n";
}

bool ssOk(const SpectralSequence& ss) { return ss.squareZero && ss.pageIsHomology && ss.convergent; }

}  // namespace

FunctorSpec parseFunctorSpec(const std::string& s, const Complex* t) {
  static const std::regex coh(R"(H\^(-?\d+))"), cohMod(R"(H\^(-?\d+)\(-;Z/(\d+)\))"),
      from(R"(Hom_K\(T,-\[(-?\d+)\]\))"), into(R"(Hom_K\(-,T\[(-?\d+)\]\))");
  std::smatch m;
  auto needT = [&]() -> const Complex& {
    if (!t) throw Error(ErrorCode::InvalidArgument, "functor " + s + " needs the object T (--with)");
    if (!t->ring().isZ()) throw Error(ErrorCode::WrongRing, "T must be a complex over Z");
    return *t;
  };
  if (std::regex_match(s, m, coh)) return FunctorSpec::cohomology(std::stoi(m[1]));
  if (std::regex_match(s, m, cohMod)) {
    long mod = std::stol(m[2]);
    if (mod < 2) throw Error(ErrorCode::InvalidArgument, "coefficients Z/m need m >= 2");
    return FunctorSpec::cohomologyMod(std::stoi(m[1]), mod);
  }
  if (std::regex_match(s, m, from)) return FunctorSpec::homFrom(needT(), std::stoi(m[1]));
  if (std::regex_match(s, m, into)) return FunctorSpec::homInto(needT(), std::stoi(m[1]));
  throw Error(ErrorCode::InvalidArgument,
              "unknown functor '" + s + "'; expected H^n, H^n(-;Z/m), Hom_K(T,-[n]) or Hom_K(-,T[n])");
}

CommandResult cmdHomology(const Complex& x) {
  if (x.windowEmpty()) return {true, "0\n"};
  std::ostringstream os;
  for (int n = x.minDeg(); n <= x.maxDeg(); ++n)
    os << (n > x.minDeg() ? ", " : "") << "H^" << n << " = " << cohomologyAnyRing(x, n).str();
  os << "\n";
  return {true, os.str()};
}

CommandResult cmdHomK(const Complex& x, const Complex& y, int degree) {
  KHomGroup g(x, y, degree);
  std::string target = degree == 0 ? "Y" : "Y[" + std::to_string(degree) + "]";
  return {true, "Hom_K(X, " + target + ") = " + g.group().str() + "\n"};
}

CommandResult cmdCone(const ChainMap& f) { return document(makeDocument(cone(f).c)); }

CommandResult cmdWeightComplex(const Complex& x) { return document(makeDocument(weightComplex(x).asComplex())); }

CommandResult cmdWeightComplexMap(const ChainMap& g) { return document(makeDocument(weightComplexMap(g))); }

CommandResult cmdPostnikov(const Complex& x) {
  if (!x.ring().isZ()) throw Error(ErrorCode::WrongRing, "the weight Postnikov tower is built over Z");
  PostnikovTower t = postnikovTower(x);
  std::ostringstream os;
  if (t.hi < t.lo) {
    os << "empty tower\n";
    return {true, os.str()};
  }
  bool ok = true;
  os << "weights " << t.lo << " .. " << t.hi << "\n";
  for (int k = t.lo; k <= t.hi; ++k) {
    bool d3 = isDistinguished(t.leTriangle(k)).has_value();
    bool d4 = isDistinguished(t.geTriangle(k)).has_value();
    bool dk = isDistinguished(t.decompositionTriangle(k)).has_value();
    ok = ok && d3 && d4 && dk;
    os << "k = " << k << ": X^k " << ranksStr(t.heart(k)) << "; X^{w<=k} " << ranksStr(t.upperLE(k))
       << "; X^{w>=k} " << ranksStr(t.upperGE(k)) << "; triangles " << (d3 && d4 && dk ? "distinguished" : "NOT distinguished")
       << "\n";
  }
  WeightComplexObj w = weightComplex(x);
  os << "t(X): " << ranksStr(w.asComplex()) << "\n";
  return {ok, os.str()};
}

CommandResult cmdWeightSS(const FunctorSpec& h, const Complex& x, int pages) {
  SpectralSequence ss = weightSS(h, x);
  std::ostringstream os;
  os << "functor " << h.str() << "\n";
  printSS(os, ss, pages);
  return {ssOk(ss), os.str()};
}

CommandResult cmdFilteredSS(const FilteredComplex& fc, int pages) {
  SpectralSequence ss = filteredSS(fc);
  std::ostringstream os;
  printSS(os, ss, pages);
  return {ssOk(ss), os.str()};
}

CommandResult cmdDecalage(const FilteredComplex& fc) { return document(makeDocument(decalage(fc))); }

CommandResult cmdDecalageCompare(const FilteredComplex& fc, int pages) {
  DecalageReport r = compareDecalageIndices(fc, pages);
  std::ostringstream os;
  os << "compared " << r.compared << " bidegrees on pages 1.." << pages << ": "
     << (r.mismatches.empty() ? "all match" : std::to_string(r.mismatches.size()) + " mismatches") << "\n";
  for (const auto& m : r.mismatches) os << "mismatch: " << m << "\n";
  os << "abutment shift " << (r.abutmentShiftOk ? "holds" : "FAILS") << "\n";
  return {r.ok(), os.str()};
}

CommandResult cmdTruncateT(const Complex& x, int level, bool upper) {
  if (!upper) return document(makeDocument(canonicalTruncLE(x, level)));
  return document(makeDocument(tDecompose(x, level - 1).tGE));
}

CommandResult cmdAdjacencyCheck(const Complex& x, const Complex& y, int formula, int i, int j) {
  std::ostringstream os;
  bool ok = false;
  if (formula == 6) {
    FiltrationViaTReport r = checkWeightFiltViaT(x, y, i);
    FGAbGroup ambient = KHomGroup(x, y).group();
    ok = r.equal();
    os << "W^" << i << " Hom_K(X, Y): " << subgroupAsGroup(ambient, r.viaWeights).str() << (ok ? " = " : " != ")
       << subgroupAsGroup(ambient, r.viaT).str() << " via tau_{<=" << i << "} Y\n";
  } else if (formula == 7 || formula == 8) {
    AdjacencyReport r = formula == 7 ? checkAdjacencyHomFormula7(x, y, i, j) : checkAdjacencyHomFormula8(x, y, i, j);
    ok = r.isomorphic;
    os << "formula " << formula << " (i = " << i << ", j = " << j << "): " << r.str() << "\n";
  } else {
    throw Error(ErrorCode::InvalidArgument, "formula must be 6, 7 or 8");
  }
  return {ok, os.str()};
}

CommandResult cmdDGValidate(const DGCategoryData& c) {
  DGReport r = checkDG(c);
  std::ostringstream os;
  if (r.valid()) {
    os << "valid DG category, " << c.size() << " objects, " << (r.negative ? "negative" : "not negative") << "\n";
  } else {
    os << r.failures.size() << " axiom failures\n";
    for (const auto& f : r.failures) os << f.which << " at " << f.where << "\n";
  }
  return {r.valid(), os.str()};
}

CommandResult cmdMCCheck(const TwistedComplex& m) {
  MCReport r = mcCheck(m);
  return {r.valid(), r.str() + "\n"};
}

CommandResult cmdTrHom(const TwistedComplex& m, const TwistedComplex& n) {
  return {true, "Hom_Tr(M, N) = " + trHom(m, rebind(m, n)).group().str() + "\n"};
}

CommandResult cmdTwistedCone(const TwistedComplex& m, const TwistedComplex& n, const std::string& mapJson) {
  TwistedComplex nn = rebind(m, n);
  PreTrHomElement h = mapJson.empty() ? PreTrHomElement::zero(m, nn, 0) : parsePreTrComponents(mapJson, m, nn);
  if (!isClosed(h)) return {false, "the map is not closed in PreTr\n"};
  return document(makeDocument(twistedCone(h).cone));
}

CommandResult cmdTN(const TwistedComplex& m, int level) { return document(makeDocument(applyTN(m, level))); }

CommandResult cmdRealize(const TwistedComplex& m) {
  MCReport r = mcCheck(m);
  if (!r.valid()) return {false, r.str() + "\n"};
  return document(makeDocument(realizeTr(m)));
}

CommandResult cmdK0(const Complex& x) { return {true, "[X] = " + eulerClass(x).value.get_str() + " in K_0 = Z\n"}; }

CommandResult cmdEndK0(const ChainMap& g) {
  if (!(g.src == g.tgt)) throw Error(ErrorCode::NotEndomorphism, "end-k0 needs an endomorphism");
  return {true, endClass(g).str() + "\n"};
}

CommandResult cmdVerify(const std::string& suite, unsigned long seed, int cases) {
  std::vector<std::string> names;
  if (suite.empty())
    for (const auto& s : verifySuites()) names.push_back(s.name);
  else
    names.push_back(suite);
  // suites share no state; reports are joined in suite order
  std::vector<std::future<SuiteReport>> running;
  for (const auto& name : names) running.push_back(std::async(std::launch::async, runSuite, name, seed, cases));
  CommandResult out;
  for (auto& f : running) {
    SuiteReport r = f.get();
    out.ok = out.ok && r.passed();
    out.text += r.str();
  }
  return out;
}

bool isCheckFailure(ErrorCode c) {
  switch (c) {
    case ErrorCode::AxiomViolation:
    case ErrorCode::NotClosed:
    case ErrorCode::NotExact:
    case ErrorCode::NotAlmostIdempotent:
    case ErrorCode::NotATriangleEndomorphism:
      return true;
    default:
      return false;
  }
}

}  // namespace wk
