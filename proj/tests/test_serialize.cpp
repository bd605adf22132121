#include <gtest/gtest.h>

#include "serialize.hpp"
#include "support.hpp"
#include "verify.hpp"

using namespace wk;
using namespace wk::testing;

namespace {

DGCategory share(DGCategoryData c) { return std::make_shared<const DGCategoryData>(std::move(c)); }

std::string roundTrip(const Document& d) {
  std::string s = serializeDocument(d);
  std::string again = serializeDocument(parseDocument(s));
  EXPECT_EQ(s, again);
  return s;
}

std::string errorOf(const std::string& text, ErrorCode code) {
  try {
    parseDocument(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << text;
  return "";
}

const char* kMinimal = R"({"kind": "complex", "ring": "Z", "minDeg": 0, "maxDeg": 0, "ranks": [1], "diffs": []})";

}  // namespace

TEST(Serialize, MinimalComplex) {
  Document d = parseDocument(kMinimal);
  ASSERT_EQ(d.kind(), DocKind::Complex);
  const Complex& x = d.as<Complex>();
  EXPECT_EQ(x.ranks(), std::vector<int>{1});
  EXPECT_EQ(x.minDeg(), 0);
  EXPECT_EQ(homology(x, 0).str(), "Z");
  EXPECT_EQ(d.formatVersion, "1");
}

TEST(Serialize, CanonicalLayout) {
  Document d = makeDocument(twoTerm(2));
  EXPECT_EQ(serializeDocument(d),
            "{\n  \"formatVersion\": \"1\",\n  \"kind\": \"complex\",\n  \"ring\": \"Z\",\n  \"minDeg\": 0,\n"
            "  \"maxDeg\": 1,\n  \"ranks\": [1, 1],\n  \"diffs\": [[[\"2\"]]]\n}\n");
}

TEST(Serialize, ComplexesRoundTrip) {
  Rng rng(11);
  for (Ring r : {Ring::Z(), Ring::Zmod(4), Ring::Zmod(9), Ring::Q()}) {
    for (int k = 0; k < 25; ++k) {
      int lo = static_cast<int>(randInt(rng, -3, 2));
      Complex x = randomComplex(rng, ComplexShape{lo, lo + static_cast<int>(randInt(rng, 0, 3)), 3, 4, r});
      std::string s = roundTrip(makeDocument(x));
      EXPECT_TRUE(parseDocument(s).as<Complex>() == x);
    }
  }
  roundTrip(makeDocument(Complex::zero(Ring::Z())));
}

TEST(Serialize, RationalEntries) {
  Document d = parseDocument(
      R"({"kind": "complex", "ring": "Q", "minDeg": 0, "maxDeg": 1, "ranks": [1, 1], "diffs": [[["-6/4"]]]})");
  EXPECT_NE(serializeDocument(d).find("\"-3/2\""), std::string::npos);
  errorOf(R"({"kind": "complex", "ring": "Z", "minDeg": 0, "maxDeg": 1, "ranks": [1, 1], "diffs": [[["1/2"]]]})",
          ErrorCode::SchemaError);
}

TEST(Serialize, ModularEntriesAreReduced) {
  Document d = parseDocument(
      R"({"kind": "complex", "ring": "Z/4", "minDeg": 0, "maxDeg": 1, "ranks": [1, 1], "diffs": [[[6]]]})");
  EXPECT_NE(serializeDocument(d).find("[[[\"2\"]]]"), std::string::npos);
}

TEST(Serialize, ChainMapsRoundTrip) {
  Rng rng(12);
  for (int k = 0; k < 30; ++k) {
    Complex x = randomComplex(rng, ComplexShape{-1, 1, 2, 3});
    Complex y = randomComplex(rng, ComplexShape{-1, 2, 2, 3});
    ChainMap f = randomChainMap(rng, x, y);
    std::string s = roundTrip(makeDocument(f));
    ChainMap g = parseDocument(s).as<ChainMap>();
    EXPECT_TRUE(g.src == x);
    EXPECT_TRUE(g.tgt == y);
    EXPECT_TRUE(g == f);
  }
}

TEST(Serialize, CategoriesAndTwistedRoundTrip) {
  Rng rng(13);
  DGCategory mods = share(moduleCategory({0, 1, 2}));
  for (int k = 0; k < 12; ++k) {
    std::vector<Complex> xs;
    for (int i = 0; i < 2; ++i) xs.push_back(randomComplex(rng, ComplexShape{-1, 0, 2, 3}));
    DGCategory cc = share(complexCategory(xs));
    for (const DGCategory& c : {mods, cc}) {
      std::string s = roundTrip(makeDocument(*c));
      EXPECT_TRUE(sameCategoryData(parseDocument(s).as<DGCategoryData>(), *c));
      TwistedComplex m = randomTwisted(rng, c, -1, 1, 3);
      s = roundTrip(makeDocument(m));
      TwistedComplex back = parseDocument(s).as<TwistedComplex>();
      EXPECT_TRUE(sameCategoryData(*back.cat, *c));
      EXPECT_EQ(back.entries, m.entries);
      EXPECT_TRUE(mcCheck(back).valid());
    }
  }
}

TEST(Serialize, TruncatedCategoryKeepsRelations) {
  Rng rng(14);
  int withRelations = 0;
  for (int k = 0; k < 20; ++k) {
    std::vector<Complex> xs;
    for (int i = 0; i < 2; ++i) xs.push_back(randomComplex(rng, ComplexShape{-2, 0, 2, 3}));
    DGCategoryData c = truncateDG(complexCategory(xs), 0);
    withRelations += !c.relations.empty();
    std::string s = roundTrip(makeDocument(c));
    DGCategoryData back = parseDocument(s).as<DGCategoryData>();
    EXPECT_TRUE(sameCategoryData(back, c));
    EXPECT_EQ(back.relations.size(), c.relations.size());
  }
  EXPECT_GT(withRelations, 0);
}

TEST(Serialize, FilteredComplexesRoundTrip) {
  Rng rng(15);
  for (int k = 0; k < 25; ++k) {
    Complex x = randomComplex(rng, ComplexShape{0, 2, 3, 3});
    FilteredComplex fc = randomFilteredComplex(rng, x, 3);
    std::string s = roundTrip(makeDocument(fc));
    FilteredComplex back = parseDocument(s).as<FilteredComplex>();
    EXPECT_TRUE(back.total() == x);
    EXPECT_EQ(back.pLo(), fc.pLo());
    EXPECT_EQ(back.pHi(), fc.pHi());
  }
}

TEST(SerializeErrors, SquareOfDifferentialNamesDegree) {
  std::string e = errorOf(R"({"kind": "complex", "ring": "Z", "minDeg": 3, "maxDeg": 5, "ranks": [1, 1, 1],
    "diffs": [[["1"]], [["2"]]]})",
                          ErrorCode::SchemaError);
  EXPECT_NE(e.find("$.diffs[1]"), std::string::npos) << e;
  EXPECT_NE(e.find("degree 3"), std::string::npos) << e;
}

TEST(SerializeErrors, MalformedJsonHasLine) {
  std::string e = errorOf("{\n  \"kind\": \"complex\",\n  \"ring\": \"Z\"\n  \"minDeg\": 0\n}", ErrorCode::ParseError);
  EXPECT_EQ(e.rfind("line 4:", 0), 0u) << e;
  e = errorOf("", ErrorCode::ParseError);
  EXPECT_EQ(e.rfind("line 1:", 0), 0u) << e;
}

TEST(SerializeErrors, SchemaPaths) {
  struct Case {
    const char* text;
    const char* path;
  };
  const Case cases[] = {
      {R"([1, 2])", "at $:"},
      {R"({"ring": "Z"})", "at $: missing key 'kind'"},
      {R"({"kind": "simplicial"})", "at $.kind:"},
      {R"({"kind": "complex", "formatVersion": "2", "ring": "Z"})", "at $.formatVersion:"},
      {R"({"kind": "complex", "ring": "Z/0", "minDeg": 0, "maxDeg": 0, "ranks": [1], "diffs": []})", "at $.ring:"},
      {R"({"kind": "complex", "ring": "Z", "minDeg": 0, "maxDeg": 0, "ranks": [1], "diffs": [], "extra": 1})",
       "unknown key 'extra'"},
      {R"({"kind": "complex", "ring": "Z", "minDeg": 0, "maxDeg": 1, "ranks": [1], "diffs": []})", "at $.ranks:"},
      {R"({"kind": "complex", "ring": "Z", "minDeg": 0, "maxDeg": 1, "ranks": [1, 2], "diffs": [[["1"]]]})",
       "at $.diffs[0]:"},
      {R"({"kind": "complex", "ring": "Z", "minDeg": 0, "maxDeg": 1, "ranks": [1, 1], "diffs": [[[true]]]})",
       "at $.diffs[0][0][0]:"},
      {R"({"kind": "chainMap",
           "source": {"ring": "Z", "minDeg": 0, "maxDeg": 1, "ranks": [1, 1], "diffs": [[["2"]]]},
           "target": {"ring": "Z", "minDeg": 0, "maxDeg": 1, "ranks": [1, 1], "diffs": [[["2"]]]},
           "components": [[["1"]], [["3"]]]})",
       "at $.components:"},
      {R"({"kind": "chainMap",
           "source": {"ring": "Z", "minDeg": 0, "maxDeg": 0, "ranks": [1], "diffs": []},
           "target": {"ring": "Z/2", "minDeg": 0, "maxDeg": 0, "ranks": [1], "diffs": []},
           "components": [[["1"]]]})",
       "at $.target.ring:"},
      {R"({"kind": "dgCategory", "objects": ["P"], "homs": [{"source": 1, "target": 0, "lo": 0, "ranks": [1],
           "delta": []}], "compositions": [], "units": [[]]})",
       "at $.homs[0].source:"},
      {R"({"kind": "twistedComplex", "category": {"objects": ["P"], "homs": [], "compositions": [],
           "units": [[]]}, "entries": [{"position": 0, "object": 2}], "arrows": []})",
       "at $.entries[0].object:"},
  };
  for (const auto& c : cases) {
    std::string e = errorOf(c.text, ErrorCode::SchemaError);
    EXPECT_NE(e.find(c.path), std::string::npos) << e << " / expected " << c.path;
  }
}

TEST(SerializeErrors, FiltrationMustBeSubcomplexes) {
  std::string text = R"({"kind": "filteredComplex",
    "complex": {"ring": "Z", "minDeg": 0, "maxDeg": 1, "ranks": [1, 1], "diffs": [[["1"]]]},
    "pLo": 0, "pHi": 1,
    "levels": [[[["1"]], [["1"]]], [[["1"]], []]]})";
  std::string e = errorOf(text, ErrorCode::SchemaError);
  EXPECT_NE(e.find("at $.levels"), std::string::npos) << e;
}

TEST(SerializeErrors, PreTrComponents) {
  DGCategory c = share(moduleCategory({0, 1, 2}));
  TwistedComplex m = twistedFromComplex(c, twoTerm(2));
  PreTrHomElement f = parsePreTrComponents(R"([{"from": 0, "to": 0, "value": ["3"]}])", m, m);
  EXPECT_EQ(f.at(0, 0), Matrix::fromRows({{3}}));
  EXPECT_TRUE(f.at(1, 1).isZero());
  EXPECT_THROW(parsePreTrComponents(R"([{"from": 5, "to": 0, "value": ["3"]}])", m, m), Error);
  EXPECT_THROW(parsePreTrComponents(R"([{"from": 0, "to": 0, "value": ["3", "1"]}])", m, m), Error);
}

TEST(Verify, SuitesPassAtSmallSizes) {
  ASSERT_EQ(verifySuites().size(), 9u);
  for (const auto& s : verifySuites()) {
    SuiteReport r = runSuite(s.name, 3, 8);
    EXPECT_TRUE(r.passed()) << r.str();
    EXPECT_EQ(r.criterion, s.criterion);
  }
  EXPECT_THROW(runSuite("no-such-suite", 1), Error);
}

TEST(Verify, ReportIsDeterministic) {
  EXPECT_EQ(runSuite("z-ideal", 7, 20).str(), runSuite("z-ideal", 7, 20).str());
}
