#include <gtest/gtest.h>

#include "spectral.hpp"
#include "support.hpp"

using namespace wk;
using namespace wk::testing;

namespace {

ComplexShape shape(int lo, int hi, int rank, long mult = 3) { return ComplexShape{lo, hi, rank, mult}; }

FunctorSpec randomFunctor(Rng& rng) {
  Complex t = randomComplex(rng, shape(-1, 1, 2, 3));
  int n = static_cast<int>(randInt(rng, -1, 1));
  switch (randInt(rng, 0, 3)) {
    case 0:
      return FunctorSpec::cohomology(n);
    case 1:
      return FunctorSpec::cohomologyMod(n, randInt(rng, 2, 4));
    case 2:
      return FunctorSpec::homFrom(t, n);
    default:
      return FunctorSpec::homInto(t, n);
  }
}

}  // namespace

TEST(ExactCouple, HeartIsOneColumn) {
  Complex x = Complex::concentrated(2, 1);
  FunctorSpec h = FunctorSpec::cohomology(0);
  ExactCouple c = coupleFromTower(h, postnikovTower(x));
  EXPECT_TRUE(c.exactnessFailures().empty());
  std::vector<Bidegree> nz = c.e.nonzero();
  ASSERT_EQ(nz.size(), 1u);
  EXPECT_EQ(nz[0], Bidegree(1, 0));
  EXPECT_EQ(c.e.at({1, 0}).str(), "Z^2");
}

TEST(ExactCouple, MultiplicationByTwo) {
  Complex x = twoTerm(2);
  FunctorSpec h = FunctorSpec::cohomology(0);
  ExactCouple c = coupleFromTower(h, postnikovTower(x));
  EXPECT_EQ(c.e.at({0, 0}).str(), "Z");
  EXPECT_EQ(c.e.at({1, 0}).str(), "Z");
  GroupHom d1 = c.j.at({1, 0}).compose(c.k.at({0, 0}));
  ASSERT_EQ(d1.m.rows(), 1);
  EXPECT_EQ(abs(d1.m(0, 0)), 2);

  ExactCouple dual = coupleFromTower(h, postnikovTower(x), CoupleKind::Dual);
  EXPECT_TRUE(dual.exactnessFailures().empty());
  EXPECT_TRUE(dual.e.sameInvariants(c.e));
}

TEST(ExactCouple, DerivedCouple) {
  Complex x = twoTerm(2);
  FunctorSpec h = FunctorSpec::cohomology(0);
  ExactCouple c = coupleFromTower(h, postnikovTower(x));
  ExactCouple c2 = deriveCouple(c);
  EXPECT_TRUE(c2.exactnessFailures().empty());
  EXPECT_TRUE(c2.e.at({0, 0}).isZero());
  EXPECT_EQ(c2.e.at({1, 0}).str(), "Z/2");

  // mapI = id: nothing changes
  ExactCouple idc;
  idc.pMin = 0, idc.pMax = 3, idc.nMin = 0, idc.nMax = 0;
  FGAbGroup z = FGAbGroup::cokernel(Matrix(1, 0));
  for (int p = 0; p <= 3; ++p) idc.d.set({p, -p}, z);
  for (int p = 1; p <= 3; ++p) idc.i[{p, -p}] = GroupHom::induced(z, z, Matrix::identity(1, Ring::Z()));
  ExactCouple idd = deriveCouple(idc);
  EXPECT_TRUE(idd.exactnessFailures().empty());
  EXPECT_TRUE(idd.e.nonzero().empty());
  for (int p = 0; p <= 2; ++p) EXPECT_EQ(idd.d.at({p, -p}).str(), "Z");
}

TEST(ExactCouple, RandomCouplesExactAndDerived) {
  Rng rng(211);
  for (int trial = 0; trial < 25; ++trial) {
    Complex x = randomComplex(rng, shape(-1, 1, 2));
    FunctorSpec h = randomFunctor(rng);
    ExactCouple c = coupleFromTower(h, postnikovTower(x));
    ExactCouple c2 = deriveCouple(c);
    ASSERT_TRUE(c2.exactnessFailures().empty()) << h.str();
    std::vector<Page> pages = couplePages(c, 2);
    ASSERT_TRUE(c2.e.sameInvariants(pages[1].e)) << h.str();
    ExactCouple c3 = deriveCouple(c2);
    ASSERT_TRUE(c3.exactnessFailures().empty());
    ASSERT_TRUE(c3.e.sameInvariants(couplePages(c, 3)[2].e)) << h.str();
    if (h.covariant()) {
      ExactCouple dual = coupleFromTower(h, postnikovTower(x), CoupleKind::Dual);
      ASSERT_TRUE(dual.e.sameInvariants(c.e));
      ASSERT_TRUE(couplePages(dual, 3)[2].e.sameInvariants(couplePages(c, 3)[2].e)) << h.str();
    }
  }
}

TEST(ExactCouple, D2IsVirtualTruncation) {
  Rng rng(223);
  for (int trial = 0; trial < 25; ++trial) {
    Complex x = randomComplex(rng, shape(-1, 1, 2));
    FunctorSpec h = randomFunctor(rng);
    ExactCouple c2 = deriveCouple(coupleFromTower(h, postnikovTower(x)));
    for (int p = -2; p <= 2; ++p)
      for (int q = -2; q <= 2; ++q) {
        if (!c2.d.has({p, q})) continue;
        FGAbGroup v = h.covariant() ? virtualTruncation(h, shift(x, p + q), -q, 1, TruncSide::Upper).group
                                    : virtualTruncation(h, shift(x, -p - q), q - 1, 1, TruncSide::Lower).group;
        ASSERT_TRUE(c2.d.at({p, q}).sameInvariants(v)) << h.str() << " at " << p << "," << q;
      }
  }
}

TEST(WeightSS, HeartDegenerates) {
  Complex x = Complex::concentrated(3, 0);
  FunctorSpec h = FunctorSpec::cohomology(0);
  SpectralSequence ss = weightSS(h, x);
  EXPECT_EQ(ss.stabilizationPage, 1);
  EXPECT_TRUE(ss.convergent);
  EXPECT_TRUE(ss.abutment.at(0).group.sameInvariants(evaluate(h, x)));
  EXPECT_EQ(ss.eInfinity.str(), "(0,0): Z^3");
}

TEST(WeightSS, MultiplicationByTwo) {
  Complex x = twoTerm(2);
  SpectralSequence ss = weightSS(FunctorSpec::cohomology(0), x);
  EXPECT_EQ(ss.page(1).e.str(), "(0,0): Z, (1,0): Z");
  EXPECT_EQ(ss.page(2).e.str(), "(1,0): Z/2");
  EXPECT_EQ(ss.stabilizationPage, 2);
  EXPECT_TRUE(ss.squareZero);
  EXPECT_TRUE(ss.pageIsHomology);
  EXPECT_TRUE(ss.convergent);
  EXPECT_TRUE(ss.abutment.at(0).group.isZero());
  EXPECT_EQ(ss.abutment.at(1).group.str(), "Z/2");
  EXPECT_TRUE(ss.page(2).e.sameInvariants(ss.eInfinity));
}

TEST(WeightSS, E2ZeroZeroIsDoubleVirtualTruncation) {
  Complex model = twoTerm(2);
  FunctorSpec h = FunctorSpec::homInto(model, 0);
  Complex x = Complex(Ring::Z(), -1, {1, 2, 1}, {Matrix::fromRows({{2}, {0}}), Matrix::fromRows({{0, 3}})});
  SpectralSequence ss = weightSS(h, x);
  EXPECT_TRUE(ss.page(2).e.at({0, 0}).sameInvariants(doubleVirtualTruncation(h, x)));
  EXPECT_TRUE(ss.convergent) << ss.problems.front();
}

TEST(WeightSS, RandomPairs) {
  Rng rng(227);
  for (int trial = 0; trial < 40; ++trial) {
    Complex x = randomComplex(rng, shape(-1, 2, 2));
    FunctorSpec h = randomFunctor(rng);
    SpectralSequence ss = weightSS(h, x);
    ASSERT_TRUE(ss.problems.empty()) << h.str() << ": " << ss.problems.front();
    ASSERT_LT(ss.stabilizationPage, static_cast<int>(ss.pages.size()) + 1);
    ASSERT_TRUE(ss.page(2).e.at({0, 0}).sameInvariants(doubleVirtualTruncation(h, x))) << h.str();
  }
}

TEST(WeightSS, AgreesWithStupidFiltration) {
  Rng rng(229);
  for (int trial = 0; trial < 20; ++trial) {
    Complex x = randomComplex(rng, shape(-1, 2, 3));
    SpectralSequence a = weightSS(FunctorSpec::cohomology(0), x, 4);
    SpectralSequence b = filteredSS(FilteredComplex::stupid(x), 4);
    for (int r = 1; r <= 4; ++r) ASSERT_TRUE(a.page(r).e.sameInvariants(b.page(r).e)) << "page " << r;
  }
}

TEST(WeightSS, FunctorialFromE2) {
  Rng rng(233);
  int differedOnE1 = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Complex x = randomComplex(rng, shape(-1, 1, 2));
    Complex y = randomComplex(rng, shape(-1, 1, 2));
    FunctorSpec h = randomFunctor(rng);
    ChainMap g = randomChainMap(rng, x, y);
    ChainMap g2 = g + homDifferential(randomGradedMap(rng, x, y, -1));
    SpectralSequence sx = weightSS(h, x), sy = weightSS(h, y);
    for (int r = 1; r <= 2; ++r) {
      auto m1 = inducedPageMap(h, g, sx, sy, r);
      auto m2 = inducedPageMap(h, g2, sx, sy, r);
      for (const auto& [b, f] : m1) {
        GroupHom diff = f;
        diff.m = f.m - m2.at(b).m;
        if (r == 1 && !diff.isZero()) ++differedOnE1;
        if (r == 2) ASSERT_TRUE(diff.isZero()) << h.str() << " at " << b.first << "," << b.second;
      }
    }
  }
  EXPECT_GT(differedOnE1, 0);
}

TEST(FilteredSS, TrivialFiltration) {
  Complex x = twoTerm(2);
  SpectralSequence ss = filteredSS(FilteredComplex::trivial(x));
  EXPECT_EQ(ss.page(1).e.str(), "(0,1): Z/2");
  EXPECT_EQ(ss.stabilizationPage, 1);
  EXPECT_TRUE(ss.convergent);
}

TEST(FilteredSS, TwoStepCone) {
  Complex z = Complex::concentrated(1, 0);
  Complex x = cone(scalarMap(z, {2})).c;  // Z -2-> Z in degrees -1, 0
  SpectralSequence ss = filteredSS(FilteredComplex::stupid(x));
  const GroupHom& d1 = ss.page(1).diff.at({-1, 0});
  EXPECT_EQ(abs(d1.m(0, 0)), 2);
  EXPECT_EQ(ss.page(2).e.str(), "(0,0): Z/2");
  EXPECT_TRUE(ss.convergent);
}

TEST(FilteredSS, RejectsBadFiltration) {
  Complex x = twoTerm(2);
  // F^1 = Z in degree 0 but 0 in degree 1: d leaves F^1
  FilteredComplex bad(x, 0, 1, {{Lattice::full(1), Lattice::full(1)}, {Lattice::full(1), Lattice::zero(1)}});
  try {
    filteredSS(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FiltrationNotPreserved);
  }
}

TEST(FilteredSS, RandomFiltrations) {
  Rng rng(239);
  for (int trial = 0; trial < 40; ++trial) {
    Complex x = randomComplex(rng, shape(-1, 2, 3));
    FilteredComplex fc = randomFilteredComplex(rng, x, static_cast<int>(randInt(rng, 1, 2)));
    SpectralSequence ss = filteredSS(fc);
    ASSERT_TRUE(ss.problems.empty()) << ss.problems.front();
  }
}

TEST(Decalage, Examples) {
  // Trivial filtration: the decalage is the canonical filtration, with the
  // cycles of degree -p as the one new level.
  Complex y(Ring::Z(), 0, {2, 1}, {Matrix::fromRows({{2, 0}})});
  FilteredComplex dt = decalage(FilteredComplex::trivial(y));
  EXPECT_EQ(dt.level(0, -1), Lattice::full(2));
  EXPECT_EQ(dt.level(0, 0), Lattice::fromGenerators(Matrix::fromRows({{0}, {1}})));
  EXPECT_EQ(dt.level(0, 1), Lattice::zero(2));
  EXPECT_EQ(dt.level(1, -2), Lattice::full(1));
  EXPECT_EQ(dt.level(1, -1), Lattice::full(1));
  EXPECT_EQ(dt.level(1, 0), Lattice::zero(1));

  // Stupid filtration: F^{p+n} K^n is everything exactly when p <= 0, so the
  // decalage is the one-jump filtration at 0.
  Complex x = twoTerm(2);
  FilteredComplex dec = decalage(FilteredComplex::stupid(x));
  for (int n = 0; n <= 1; ++n) {
    EXPECT_EQ(dec.level(n, 0), Lattice::full(1));
    EXPECT_EQ(dec.level(n, 1), Lattice::zero(1));
  }
  DecalageReport rep = compareDecalageIndices(FilteredComplex::stupid(x), 3);
  EXPECT_TRUE(rep.ok());
  EXPECT_GT(rep.compared, 0);

  DecalageReport triv = compareDecalageIndices(FilteredComplex::trivial(x), 3);
  EXPECT_TRUE(triv.ok());

  FilteredComplex twice = decalage(decalage(FilteredComplex::stupid(x)));
  FilteredComplex again = decalage(decalage(FilteredComplex::stupid(x)));
  for (int p = twice.pLo() - 1; p <= twice.pHi() + 1; ++p)
    for (int n = 0; n <= 1; ++n) EXPECT_EQ(twice.level(n, p), again.level(n, p));
}

TEST(Decalage, RandomIndexIdentity) {
  Rng rng(241);
  for (int trial = 0; trial < 40; ++trial) {
    Complex x = randomComplex(rng, shape(-1, 1, 4));
    FilteredComplex fc = randomFilteredComplex(rng, x, static_cast<int>(randInt(rng, 1, 2)));
    DecalageReport rep = compareDecalageIndices(fc, 3);
    ASSERT_TRUE(rep.ok()) << (rep.mismatches.empty() ? "abutment shift" : rep.mismatches.front());
  }
}
