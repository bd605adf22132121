#pragma once

#include <string>
#include <vector>

#include "complexes.hpp"

namespace wk {

struct K0Class {
  mpz_class value = 0;
  bool operator==(const K0Class&) const = default;
};

using IntPoly = std::vector<mpz_class>;  // ascending coefficients, trimmed

// numerator / denominator, both with constant term 1 and coprime.
struct LambdaElement {
  IntPoly numerator{1}, denominator{1};

  static LambdaElement one() { return {}; }
  static LambdaElement fromPoly(const IntPoly& p);  // constant term must be 1
  static LambdaElement ratio(const IntPoly& num, const IntPoly& den);
  LambdaElement inverse() const { return ratio(denominator, numerator); }
  bool operator==(const LambdaElement&) const = default;
  std::string str() const;
};

struct EndK0Class {
  mpz_class rankPart = 0;
  LambdaElement lambdaPart;
  bool operator==(const EndK0Class&) const = default;
  std::string str() const;
};

K0Class eulerClass(const Complex& x);
// det(1 - t g_*) on H^i(x) (x) Q, alternating over i.
EndK0Class endClass(const ChainMap& g);
LambdaElement lambdaMul(const LambdaElement& a, const LambdaElement& b);
EndK0Class endClassAdd(const EndK0Class& a, const EndK0Class& b);

struct TriangleRelationReport {
  EndK0Class middle;  // [g] on Y
  EndK0Class sum;     // [f] + [h]
  bool holds() const { return middle == sum; }
};
// phi : X -> Y; f, g, h endomorphisms of X, Y and cone(phi) commuting with the cone
// triangle up to homotopy. Throws NotATriangleEndomorphism otherwise.
TriangleRelationReport triangleRelationCheck(const ChainMap& phi, const ChainMap& f, const ChainMap& g,
                                             const ChainMap& h);

}  // namespace wk
