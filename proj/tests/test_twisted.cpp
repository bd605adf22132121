#include <gtest/gtest.h>

#include "twisted.hpp"
#include "support.hpp"

using namespace wk;
using namespace wk::testing;

namespace {

DGCategory share(DGCategoryData c) { return std::make_shared<const DGCategoryData>(std::move(c)); }

DGCategory modules() {
  static DGCategory c = share(moduleCategory({0, 1, 2, 3}));
  return c;
}

ComplexShape shape(int lo, int hi, int rank) { return ComplexShape{lo, hi, rank, 3}; }

DGCategory randomComplexCategory(Rng& rng) {
  std::vector<Complex> xs;
  int n = static_cast<int>(randInt(rng, 2, 3));
  for (int k = 0; k < n; ++k) {
    int lo = static_cast<int>(randInt(rng, -1, 0));
    Complex x = randomComplex(rng, shape(lo, lo + 1, 2));
    if (x.isZeroObject()) --k;
    else xs.push_back(x);
  }
  return share(complexCategory(xs));
}

// One object, C^{-1} = Z u, C^0 = Z id, delta = 0.
DGCategoryData oneGenerator() {
  DGCategoryData c;
  c.objects = {"P"};
  c.homs[{0, 0}] = HomComplex{-1, {1, 1}, {Matrix(1, 1)}};
  c.compositions[{0, 0, 0, 0, 0}] = Matrix::fromRows({{1}});
  c.compositions[{0, 0, 0, 0, -1}] = Matrix::fromRows({{1}});
  c.compositions[{0, 0, 0, -1, 0}] = Matrix::fromRows({{1}});
  c.units = {Matrix::fromRows({{1}})};
  return c;
}

// Three copies of the contractible X = (Z -1-> Z) at positions 0, 1, 2 with
// q01 = delta t, q12 = id and the length-two arrow q02 = -t forced by Maurer-Cartan.
TwistedComplex lengthTwo() {
  auto c = share(complexCategory({twoTerm(1)}));
  TwistedComplex m;
  m.cat = c;
  m.entries = {{0, 0}, {1, 0}, {2, 0}};
  Matrix t = Matrix::fromRows({{1}});
  m.setArrow(0, 1, c->delta(0, 0, -1, t));
  m.setArrow(1, 2, c->unit(0));
  m.setArrow(0, 2, -t);
  return m;
}

bool hasFailure(const DGReport& r, const std::string& which) {
  for (const auto& f : r.failures)
    if (f.which == which && !f.where.empty()) return true;
  return false;
}

}  // namespace

TEST(DGCategory, ModuleCategory) {
  DGReport r = validateDG(*modules());
  EXPECT_TRUE(r.valid());
  EXPECT_TRUE(r.negative);
  for (const auto& [pq, h] : modules()->homs) EXPECT_TRUE(h.delta.empty());
}

TEST(DGCategory, OneNegativeGenerator) {
  DGReport r = validateDG(oneGenerator());
  EXPECT_TRUE(r.valid());
  EXPECT_TRUE(r.negative);
  DGCategoryData c = oneGenerator();
  c.homs[{0, 0}] = HomComplex{-1, {1, 1, 1}, {Matrix(1, 1), Matrix(1, 1)}};
  EXPECT_FALSE(checkDG(c).negative);
}

TEST(DGCategory, ViolationsAreLocated) {
  DGCategoryData c = oneGenerator();
  c.compositions[{0, 0, 0, 0, -1}] = Matrix::fromRows({{2}});
  DGReport r = checkDG(c);
  EXPECT_TRUE(hasFailure(r, "left unit"));
  EXPECT_THROW(validateDG(c), Error);

  c = oneGenerator();
  c.homs[{0, 0}].delta[0] = Matrix::fromRows({{1}});  // delta u = id: still a DG category
  EXPECT_TRUE(checkDG(c).valid());

  Rng rng(401);
  int located = 0;
  for (int trial = 0; trial < 20 && located < 5; ++trial) {
    DGCategoryData d = *randomComplexCategory(rng);
    for (auto& [key, t] : d.compositions) {
      if (key.a != -1 || key.b != 0 || key.p == key.q || t.empty()) continue;
      t(0, 0) += 1;
      DGReport bad = checkDG(d);
      ASSERT_FALSE(bad.valid());
      located += hasFailure(bad, "Leibniz") || hasFailure(bad, "associativity");
      try {
        validateDG(d);
        ADD_FAILURE();
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AxiomViolation);
        EXPECT_NE(std::string(e.what()).find("objects"), std::string::npos) << e.what();
      }
      break;
    }
  }
  EXPECT_GT(located, 0);
}

TEST(DGCategory, ComplexCategoriesAreValid) {
  Rng rng(409);
  int withDelta = 0;
  for (int trial = 0; trial < 15; ++trial) {
    DGCategory c = randomComplexCategory(rng);
    DGReport r = checkDG(*c);
    ASSERT_TRUE(r.valid()) << r.failures.front().which << " " << r.failures.front().where;
    ASSERT_TRUE(r.negative);
    for (const auto& [pq, h] : c->homs)
      for (const auto& d : h.delta) withDelta += !d.isZero();
  }
  EXPECT_GT(withDelta, 0);
}

TEST(PreTr, DifferentialSquaresToZero) {
  Rng rng(419);
  int nonzero = 0;
  for (int trial = 0; trial < 60; ++trial) {
    DGCategory c = trial % 3 == 0 ? modules() : randomComplexCategory(rng);
    TwistedComplex m = randomTwisted(rng, c, -1, 2, 4), n = randomTwisted(rng, c, -1, 2, 4);
    ASSERT_TRUE(mcCheck(m).valid()) << mcCheck(m).str();
    for (int k = 0; k < 5; ++k) {
      int l = static_cast<int>(randInt(rng, -2, 1));
      PreTrHomElement f = randomPreTr(rng, m, n, l);
      PreTrHomElement df = preTrDifferential(f);
      nonzero += !df.isZero();
      ASSERT_TRUE(preTrDifferential(df).isZero()) << "trial " << trial << " degree " << l;
    }
  }
  EXPECT_GT(nonzero, 50);
}

TEST(PreTr, UntwistedComponentMap) {
  Rng rng(421);
  DGCategory c = randomComplexCategory(rng);
  TwistedComplex m, n;
  m.cat = n.cat = c;
  m.entries = {{0, 0}};
  n.entries = {{0, 1}};
  for (int l = -2; l <= 0; ++l) {
    PreTrHomElement f = randomPreTr(rng, m, n, l);
    EXPECT_EQ(preTrDifferential(f).at(0, 0), c->delta(0, 1, l, f.at(0, 0)));
  }
}

TEST(PreTr, ModuleCoboundary) {
  Rng rng(431);
  for (int trial = 0; trial < 40; ++trial) {
    Complex x = randomComplex(rng, shape(-1, 2, 3)), y = randomComplex(rng, shape(-1, 2, 3));
    TwistedComplex m = twistedFromComplex(modules(), x, trial % 2), n = twistedFromComplex(modules(), y);
    ASSERT_EQ(realizeTr(m), x);
    int l = static_cast<int>(randInt(rng, -2, 2));
    PreTrHomElement f = randomPreTr(rng, m, n, l);
    GradedMap g = realizeTrMap(f);
    ASSERT_EQ(realizeTrMap(preTrDifferential(f)), homDifferential(g));
    ASSERT_EQ(preTrVec(twistedFromMap(m, n, g)), preTrVec(f));
  }
}

TEST(PreTr, CompositionLeibnizAndAssociativity) {
  Rng rng(433);
  for (int trial = 0; trial < 25; ++trial) {
    DGCategory c = trial % 4 == 0 ? modules() : randomComplexCategory(rng);
    TwistedComplex a = randomTwisted(rng, c, -1, 1, 3), b = randomTwisted(rng, c, -1, 1, 3);
    TwistedComplex d = randomTwisted(rng, c, -1, 1, 3), e = randomTwisted(rng, c, -1, 1, 3);
    int l1 = static_cast<int>(randInt(rng, -1, 0)), l2 = static_cast<int>(randInt(rng, -1, 0));
    PreTrHomElement f = randomPreTr(rng, a, b, l1), g = randomPreTr(rng, b, d, l2), h = randomPreTr(rng, d, e, 0);
    PreTrHomElement lhs = preTrDifferential(preTrCompose(g, f));
    PreTrHomElement rhs = preTrCompose(preTrDifferential(g), f) +
                          preTrCompose(g, preTrDifferential(f)).scaled(l2 % 2 ? -1 : 1);
    ASSERT_TRUE((lhs - rhs).isZero());
    ASSERT_TRUE((preTrCompose(h, preTrCompose(g, f)) - preTrCompose(preTrCompose(h, g), f)).isZero());
    PreTrHomElement id = PreTrHomElement::identity(b);
    ASSERT_TRUE(isClosed(id));
    ASSERT_TRUE((preTrCompose(id, f) - f).isZero());
  }
}

TEST(MaurerCartan, Examples) {
  TwistedComplex m;
  m.cat = modules();
  m.entries = {{0, 1}, {1, 1}, {2, 1}};
  EXPECT_TRUE(mcCheck(m).valid());
  m.setArrow(0, 1, Matrix::fromRows({{2}}));
  EXPECT_TRUE(mcCheck(m).valid());
  m.setArrow(1, 2, Matrix::fromRows({{3}}));
  MCReport r = mcCheck(m);
  ASSERT_EQ(r.residuals.size(), 1u);
  EXPECT_EQ(r.residuals.begin()->first, std::make_pair(0, 2));
  EXPECT_EQ(r.residuals.begin()->second, Matrix::fromRows({{6}}));

  TwistedComplex g;
  g.cat = share(oneGenerator());
  g.entries = {{0, 0}, {2, 0}};
  g.setArrow(0, 1, Matrix::fromRows({{5}}));  // degree -1, delta u = 0
  EXPECT_TRUE(mcCheck(g).valid());
}

TEST(Realize, Examples) {
  TwistedComplex m;
  m.cat = modules();
  m.entries = {{0, 2}};
  EXPECT_EQ(realizeTr(m), Complex::concentrated(2, 0));
  m.entries = {{0, 1}, {1, 1}};
  m.setArrow(0, 1, Matrix::fromRows({{2}}));
  EXPECT_EQ(realizeTr(m), twoTerm(2));
  TwistedComplex g;
  g.cat = share(oneGenerator());
  EXPECT_THROW(realizeTr(g), Error);
}

TEST(TwistedCone, Properties) {
  Rng rng(439);
  for (int trial = 0; trial < 30; ++trial) {
    DGCategory c = trial % 2 ? modules() : randomComplexCategory(rng);
    TwistedComplex a = randomTwisted(rng, c, -1, 1, 3), b = randomTwisted(rng, c, -1, 1, 3);
    PreTrHomElement h = randomClosedPreTr(rng, a, b);
    TwistedCone k = twistedCone(h);
    ASSERT_TRUE(mcCheck(k.cone).valid()) << mcCheck(k.cone).str();
    ASSERT_TRUE(isClosed(k.toCone));
    ASSERT_TRUE(isClosed(k.fromCone));
    ASSERT_TRUE(isDistinguishedTr(h, k.toCone, k.fromCone));
    if (c == modules()) {
      Cone cc = cone(realizeTrMap(h));
      ASSERT_EQ(realizeTr(k.cone), cc.c);
      ASSERT_EQ(realizeTrMap(k.toCone), cc.toCone);
      ASSERT_EQ(realizeTrMap(k.fromCone), cc.fromCone);
    }
  }
}

TEST(TwistedCone, Examples) {
  Rng rng(443);
  DGCategory c = randomComplexCategory(rng);
  TwistedComplex m = randomTwisted(rng, c, 0, 1, 3);
  TwistedCone k = twistedCone(PreTrHomElement::identity(m));
  EXPECT_TRUE(trHom(k.cone, k.cone).isZeroClass(PreTrHomElement::identity(k.cone)));

  TwistedComplex n = randomTwisted(rng, c, 0, 1, 3);
  TwistedCone z = twistedCone(PreTrHomElement::zero(m, n, 0));
  TwistedComplex sum = shiftTwisted(m, 1);
  for (const auto& e : n.entries) sum.entries.push_back(e);
  for (const auto& [ab, v] : n.q) sum.setArrow(m.size() + ab.first, m.size() + ab.second, v);
  EXPECT_TRUE(z.cone.sameAs(sum));

  PreTrHomElement bad = randomPreTr(rng, m, n, 0);
  if (!isClosed(bad)) EXPECT_THROW(twistedCone(bad), Error);
}

TEST(TrHom, MatchesHomotopyClasses) {
  Rng rng(449);
  int nonzero = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Complex x = randomComplex(rng, shape(-1, 1, 2)), y = randomComplex(rng, shape(-1, 1, 2));
    TwistedComplex m = twistedFromComplex(modules(), x, trial % 2), n = twistedFromComplex(modules(), y, trial % 3 == 0);
    TrHomGroup t = trHom(m, n);
    KHomGroup k(x, y, 0);
    ASSERT_TRUE(t.group().sameInvariants(k.group())) << t.group().str() << " vs " << k.group().str();
    nonzero += !k.group().isZero();
    for (int s = 0; s < 3; ++s) {
      ChainMap f = randomChainMap(rng, x, y);
      PreTrHomElement e = twistedFromMap(m, n, f);
      ASSERT_TRUE(isClosed(e));
      ASSERT_EQ(t.isZeroClass(e), k.isZeroClass(f));
    }
  }
  EXPECT_GT(nonzero, 10);
}

TEST(TrHom, IdentityAndOrthogonality) {
  Rng rng(457);
  int idNonzero = 0;
  for (int trial = 0; trial < 25; ++trial) {
    DGCategory c = randomComplexCategory(rng);
    TwistedComplex m = randomTwisted(rng, c, -1, 1, 3);
    TrHomGroup t = trHom(m, m);
    PreTrHomElement id = PreTrHomElement::identity(m);
    t.classOf(id);
    idNonzero += !t.isZeroClass(id);
    TwistedComplex hi = randomTwisted(rng, c, 1, 2, 3), lo = randomTwisted(rng, c, -1, 0, 3);
    ASSERT_TRUE(trHom(hi, lo).group().isZero());
  }
  EXPECT_GT(idNonzero, 0);
}

TEST(WeightTrunc, Examples) {
  Rng rng(461);
  Complex x = randomComplex(rng, shape(-2, 0, 2));
  TwistedComplex m = twistedFromComplex(modules(), x);
  TwistedWeightDecomposition w = weightTruncTwisted(m, 0);
  EXPECT_TRUE(w.le.sameAs(m));
  EXPECT_TRUE(w.ge.entries.empty());

  Complex y = twoTerm(3);
  TwistedComplex n = twistedFromComplex(modules(), y);
  w = weightTruncTwisted(n, 0);
  EXPECT_EQ(realizeTr(w.le), stupidTruncLE(y, 0));
  EXPECT_EQ(realizeTr(w.ge), stupidTruncGE(y, 1));
  EXPECT_EQ(realizeTrMap(w.connecting), splitConnecting(y, 0));

  TwistedComplex g;
  g.cat = share(oneGenerator());
  EXPECT_NO_THROW(weightTruncTwisted(g, 0));
  DGCategoryData pos = oneGenerator();
  pos.homs[{0, 0}] = HomComplex{0, {1, 1}, {Matrix(1, 1)}};
  g.cat = share(pos);
  EXPECT_THROW(weightTruncTwisted(g, 0), Error);
}

TEST(WeightTrunc, RandomTriangles) {
  Rng rng(463);
  for (int trial = 0; trial < 40; ++trial) {
    DGCategory c = trial % 4 == 0 ? modules() : randomComplexCategory(rng);
    TwistedComplex m = randomTwisted(rng, c, -1, 2, 4);
    int k = static_cast<int>(randInt(rng, -1, 1));
    TwistedWeightDecomposition w = weightTruncTwisted(m, k);
    ASSERT_TRUE(w.partsSatisfyMC);
    ASSERT_TRUE(w.mapsClosed);
    ASSERT_TRUE(isDistinguishedTr(w.inclusion, w.projection, w.connecting)) << "trial " << trial;
    if (c == modules()) {
      Complex x = realizeTr(m);
      Complex le = realizeTr(w.le), ge = realizeTr(w.ge);
      for (int i = -1; i <= 2; ++i) {
        ASSERT_EQ(le.rank(i), i <= k ? x.rank(i) : 0);
        ASSERT_EQ(ge.rank(i), i > k ? x.rank(i) : 0);
      }
    }
  }
}

TEST(WeightTrunc, LengthTwoArrowIsDropped) {
  TwistedComplex m = lengthTwo();
  ASSERT_TRUE(mcCheck(m).valid()) << mcCheck(m).str();
  ASSERT_EQ(m.arrowDegree(0, 2), -1);
  for (int k = 0; k <= 1; ++k) {
    TwistedWeightDecomposition w = weightTruncTwisted(m, k);
    EXPECT_TRUE(w.partsSatisfyMC);
    EXPECT_TRUE(w.mapsClosed);
    EXPECT_EQ(w.le.q.size() + w.ge.q.size(), 1u);
    EXPECT_TRUE(isDistinguishedTr(w.inclusion, w.projection, w.connecting));
  }
}

TEST(TruncationFunctors, DeepTruncationLosesNothing) {
  Rng rng(467);
  for (int trial = 0; trial < 10; ++trial) {
    DGCategory c = randomComplexCategory(rng);
    int depth = 0;
    for (const auto& [pq, h] : c->homs) depth = std::max(depth, -h.lo);
    DGCategoryData t = truncateDG(*c, depth);
    EXPECT_TRUE(t.relations.empty());
    EXPECT_EQ(t.compositions, c->compositions);
    for (const auto& [pq, h] : c->homs) EXPECT_EQ(t.hom(pq.first, pq.second), h);
    TwistedComplex m = randomTwisted(rng, c, -1, 2, 4);
    EXPECT_EQ(applyTN(m, depth).q, m.q);
  }
}

TEST(TruncationFunctors, TruncatedCategoriesAreValid) {
  Rng rng(479);
  int relations = 0;
  for (int trial = 0; trial < 10; ++trial) {
    DGCategory c = randomComplexCategory(rng);
    for (int n = 0; n <= 1; ++n) {
      DGCategoryData t = truncateDG(*c, n);
      DGReport r = checkDG(t);
      ASSERT_TRUE(r.valid()) << r.failures.front().which << " " << r.failures.front().where;
      relations += !t.relations.empty();
    }
  }
  EXPECT_GT(relations, 0);
  EXPECT_THROW(truncateDG(*modules(), -1), Error);
}

TEST(TruncationFunctors, StrongWeightComplex) {
  Rng rng(487);
  int notContractible = 0;
  for (int trial = 0; trial < 40; ++trial) {
    DGCategory c = randomComplexCategory(rng);
    auto t0cat = share(truncateDG(*c, 0));
    TwistedComplex m = randomTwisted(rng, c, -1, 2, 4);
    TwistedComplex t0 = applyTN(m, 0, t0cat);
    ASSERT_TRUE(mcCheck(t0).valid());
    for (const auto& [ab, v] : t0.q) ASSERT_EQ(t0.arrowDegree(ab.first, ab.second), 0);
    // conservativity in the decidable direction
    if (!trHom(m, m).isZeroClass(PreTrHomElement::identity(m))) {
      ASSERT_FALSE(trHom(t0, t0).isZeroClass(PreTrHomElement::identity(t0)));
      ++notContractible;
    }
    TwistedComplex n = randomTwisted(rng, c, -1, 2, 3);
    PreTrHomElement f = randomClosedPreTr(rng, m, n);
    ASSERT_TRUE(isClosed(applyTNMap(f, 0, t0, applyTN(n, 0, t0cat))));
  }
  EXPECT_GT(notContractible, 0);
}

TEST(TruncationFunctors, ForgetsNegativeArrows) {
  TwistedComplex m = lengthTwo();
  TwistedComplex t0 = applyTN(m, 0);
  EXPECT_EQ(t0.q.size(), 2u);
  EXPECT_FALSE(t0.q.count({0, 2}));
  EXPECT_TRUE(mcCheck(t0).valid());
  // q12 q01 = delta t is zero in H(C), so t_0(m) is a complex over H(C)
  EXPECT_EQ(applyTN(m, 1).q.size(), 3u);
  // X is contractible, so m and t_0(m) are both zero in Tr
  EXPECT_TRUE(trHom(m, m).isZeroClass(PreTrHomElement::identity(m)));
  EXPECT_TRUE(trHom(t0, t0).isZeroClass(PreTrHomElement::identity(t0)));
}

TEST(TruncationFunctors, ModuleCase) {
  Rng rng(491);
  auto t0cat = share(truncateDG(*modules(), 0));
  for (int trial = 0; trial < 30; ++trial) {
    Complex x = randomComplex(rng, shape(-1, 2, 3)), y = randomComplex(rng, shape(-1, 2, 3));
    TwistedComplex m = twistedFromComplex(modules(), x, trial % 2), n = twistedFromComplex(modules(), y);
    TwistedComplex tm = applyTN(m, 0, t0cat), tn = applyTN(n, 0, t0cat);
    ASSERT_EQ(realizeTr(tm), x);
    ChainMap g = randomChainMap(rng, x, y);
    ChainMap t0g = realizeTrMap(applyTNMap(twistedFromMap(m, n, g), 0, tm, tn));
    ChainMap wg = weightComplexMap(g);
    ASSERT_EQ(wg.src, t0g.src);
    ASSERT_EQ(wg.tgt, t0g.tgt);
    ASSERT_TRUE(inIdealZ(t0g - wg).has_value());
  }
}
