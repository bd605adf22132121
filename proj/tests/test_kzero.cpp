#include <gtest/gtest.h>

#include "kzero.hpp"
#include "support.hpp"

using namespace wk;
using namespace wk::testing;

namespace {

ComplexShape shape(int lo, int hi, int rank) { return ComplexShape{lo, hi, rank, 3}; }

IntPoly poly(std::initializer_list<long> c) {
  IntPoly p;
  for (long x : c) p.push_back(x);
  return p;
}

// det of an integer matrix by fraction-free elimination
mpz_class bareiss(Matrix a) {
  int n = a.rows();
  if (n == 0) return 1;
  mpz_class prev = 1, sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(r, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

mpq_class evalPoly(const IntPoly& p, long t) {
  mpq_class v = 0, w = 1;
  for (const auto& c : p) v += c * w, w *= t;
  return v;
}

}  // namespace

TEST(EulerClass, Examples) {
  EXPECT_EQ(eulerClass(Complex::concentrated(1, 0)).value, 1);
  EXPECT_EQ(eulerClass(twoTerm(2)).value, 0);
  EXPECT_EQ(eulerClass(Complex::concentrated(3, -1)).value, -3);
  EXPECT_EQ(eulerClass(Complex::zero()).value, 0);
  EXPECT_THROW(eulerClass(twoTerm(2, Ring::Zmod(4))), Error);
}

TEST(EulerClass, HomotopyInvariantAndAdditive) {
  Rng rng(503);
  for (int trial = 0; trial < 80; ++trial) {
    Complex x = randomComplex(rng, shape(-2, 2, 3)), y = randomComplex(rng, shape(-2, 2, 3));
    ASSERT_EQ(eulerClass(minimalModel(x).m), eulerClass(x));
    Cone c = cone(randomChainMap(rng, x, y));
    ASSERT_EQ(eulerClass(y).value - eulerClass(x).value, eulerClass(c.c).value);
  }
}

TEST(Lambda, Arithmetic) {
  LambdaElement a = LambdaElement::fromPoly(poly({1, -1})), b = LambdaElement::fromPoly(poly({1, 1}));
  EXPECT_EQ(lambdaMul(a, b).str(), "1 - t^2");
  EXPECT_EQ(lambdaMul(a, LambdaElement::one()), a);
  EXPECT_EQ(lambdaMul(a, a.inverse()), LambdaElement::one());
  LambdaElement r = LambdaElement::ratio(poly({1, 0, -1}), poly({1, -1}));
  EXPECT_EQ(r, b);
  LambdaElement q = LambdaElement::ratio(poly({1, -2}), poly({1, -3}));
  EXPECT_EQ(q.str(), "(1 - 2t)/(1 - 3t)");
  EXPECT_THROW(LambdaElement::fromPoly(poly({2, 1})), Error);
}

TEST(EndClass, Examples) {
  Complex x = twoTerm(2);
  EXPECT_EQ(endClass(ChainMap::zero(x, x)), (EndK0Class{0, LambdaElement::one()}));
  Complex z = Complex::concentrated(1, 0);
  EndK0Class id = endClass(ChainMap::identity(z));
  EXPECT_EQ(id.rankPart, 1);
  EXPECT_EQ(id.lambdaPart.str(), "1 - t");
  Complex s(Ring::Z(), 0, {1, 1}, {Matrix(1, 1)});
  EndK0Class e = endClass(scalarMap(s, {2, 3}));
  EXPECT_EQ(e.rankPart, 0);
  EXPECT_EQ(e.lambdaPart, LambdaElement::ratio(poly({1, -2}), poly({1, -3})));
  // torsion is invisible
  EXPECT_EQ(endClass(scalarMap(x, {5, 5})).lambdaPart, LambdaElement::one());
  EXPECT_THROW(endClass(ChainMap::zero(x, z)), Error);
}

TEST(EndClass, DeterminantOracle) {
  Rng rng(509);
  for (int trial = 0; trial < 60; ++trial) {
    // zero differential: H^i = X^i
    std::vector<int> ranks;
    for (int i = 0; i < 3; ++i) ranks.push_back(static_cast<int>(randInt(rng, 0, 3)));
    std::vector<Matrix> d;
    for (int i = 0; i < 2; ++i) d.emplace_back(ranks[i + 1], ranks[i]);
    Complex x(Ring::Z(), -1, ranks, d);
    ChainMap g = ChainMap::zero(x, x);
    for (int i = -1; i <= 1; ++i) g.set(i, randomMatrix(rng, x.rank(i), x.rank(i), 3));
    EndK0Class e = endClass(g);
    for (long t = -2; t <= 2; ++t) {
      mpq_class expect = 1;
      for (int i = -1; i <= 1; ++i) {
        mpz_class dt = bareiss(Matrix::identity(x.rank(i)) - g.at(i).scaled(t));
        if (dt == 0) goto next;
        if (i % 2) expect /= dt;
        else expect *= dt;
      }
      ASSERT_EQ(evalPoly(e.lambdaPart.numerator, t) / evalPoly(e.lambdaPart.denominator, t), expect);
    next:;
    }
  }
}

TEST(EndClass, SumsAndHomotopies) {
  Rng rng(521);
  for (int trial = 0; trial < 60; ++trial) {
    Complex x = randomComplex(rng, shape(-1, 2, 3)), y = randomComplex(rng, shape(-1, 2, 3));
    ChainMap g = randomChainMap(rng, x, x), h = randomChainMap(rng, y, y);
    ASSERT_EQ(endClass(directSumMap(g, h)), endClassAdd(endClass(g), endClass(h)));
    ChainMap g2 = g + homDifferential(randomGradedMap(rng, x, x, -1));
    ASSERT_EQ(endClass(g2), endClass(g));
  }
}

TEST(TriangleRelation, Examples) {
  Complex x = twoTerm(3);
  ChainMap phi = ChainMap::identity(x);
  Cone c = cone(phi);
  TriangleRelationReport r =
      triangleRelationCheck(phi, ChainMap::zero(x, x), ChainMap::zero(x, x), ChainMap::zero(c.c, c.c));
  EXPECT_TRUE(r.holds());
  EXPECT_EQ(r.middle, (EndK0Class{0, LambdaElement::one()}));

  // split X -> X (+) Z -> Z with diagonal endomorphisms
  Complex a = Complex::concentrated(2, 0), z = Complex::concentrated(1, 1);
  ChainMap inc = sumInclusion1(a, z);
  Cone k = cone(inc);
  ChainMap fa = ChainMap::zero(a, a);
  fa.set(0, Matrix::fromRows({{1, 1}, {0, 2}}));
  ChainMap fz = scalarMap(z, {3});
  ChainMap g = directSumMap(fa, fz);
  ChainMap h = ChainMap::zero(k.c, k.c);
  for (int i = k.c.minDeg(); i <= k.c.maxDeg(); ++i)
    h.set(i, Matrix::blockDiag(fa.at(i + 1), g.at(i)));
  r = triangleRelationCheck(inc, fa, g, h);
  EXPECT_TRUE(r.holds()) << r.middle.str() << " vs " << r.sum.str();
  EXPECT_EQ(r.middle.lambdaPart.str(), "(1 - 3t + 2t^2)/(1 - 3t)");

  EXPECT_THROW(triangleRelationCheck(inc, fa, directSumMap(ChainMap::identity(a), fz), h), Error);
}

TEST(TriangleRelation, RandomTriples) {
  Rng rng(523);
  int nontrivial = 0;
  for (int trial = 0; trial < 80; ++trial) {
    TriangleEndomorphism t = randomTriangleEndomorphism(rng, shape(-1, 1, 2));
    ASSERT_TRUE(isChainMap(t.h));
    TriangleRelationReport r = triangleRelationCheck(t.phi, t.f, t.g, t.h);
    ASSERT_TRUE(r.holds()) << r.middle.str() << " vs " << r.sum.str();
    nontrivial += r.middle.lambdaPart != LambdaElement::one();
  }
  EXPECT_GT(nontrivial, 20);
}
