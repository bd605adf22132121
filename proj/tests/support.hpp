#pragma once

#include <set>

#include "complexes.hpp"
#include "randgen.hpp"

namespace wk::testing {

inline Complex twoTerm(long m, Ring R = Ring::Z(), int lo = 0) {
  return Complex(R, lo, {1, 1}, {Matrix::fromRows({{m}}, R)});
}

inline ChainMap scalarMap(const Complex& x, const std::vector<long>& s) {
  ChainMap f = ChainMap::zero(x, x);
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i) f.set(i, Matrix::scalar(x.rank(i), s[i - x.minDeg()], x.ring()));
  return f;
}

inline Complex withRing(const Complex& x, Ring r) {
  if (x.windowEmpty()) return Complex::zero(r);
  std::vector<Matrix> d;
  for (int i = x.minDeg(); i < x.maxDeg(); ++i) d.push_back(x.d(i).withRing(r));
  return Complex(r, x.minDeg(), x.ranks(), d);
}

// Pads the window with zero-rank terms on both sides.
inline Complex padded(const Complex& x, int below, int above) {
  if (x.windowEmpty()) return x;
  std::vector<int> ranks(below, 0);
  for (int r : x.ranks()) ranks.push_back(r);
  for (int k = 0; k < above; ++k) ranks.push_back(0);
  std::vector<Matrix> d;
  int lo = x.minDeg() - below;
  for (int i = lo; i < lo + static_cast<int>(ranks.size()) - 1; ++i) d.push_back(x.d(i));
  return Complex(x.ring(), lo, ranks, d);
}

inline std::multiset<long> cyclicOrders(const FGAbGroup& g) {
  std::multiset<long> out;
  for (int k = 0; k < g.freeRank(); ++k) out.insert(0);
  for (const auto& t : g.torsion()) out.insert(t.get_si());
  return out;
}

}  // namespace wk::testing
