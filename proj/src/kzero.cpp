#include "kzero.hpp"

#include <sstream>

namespace wk {

namespace {

using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

QPoly toQ(const IntPoly& p) { return QPoly(p.begin(), p.end()); }

bool isZeroPoly(const QPoly& p) { return p.size() == 1 && p[0] == 0; }

QPoly mul(const QPoly& a, const QPoly& b) {
  QPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

// a = q b + r
void divmod(QPoly a, const QPoly& b, QPoly& q, QPoly& r) {
  trim(a);
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 1, 0);
  while (!isZeroPoly(a) && a.size() >= b.size()) {
    size_t s = a.size() - b.size();
    mpq_class c = a.back() / b.back();
    q[s] = c;
    for (size_t i = 0; i < b.size(); ++i) a[s + i] -= c * b[i];
    a.pop_back();
    if (a.empty()) a.push_back(0);
    trim(a);
  }
  r = a;
  trim(q);
}

QPoly gcdPoly(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  while (!isZeroPoly(b)) {
    QPoly q, r;
    divmod(a, b, q, r);
    a = b;
    b = r;
  }
  return a;
}

IntPoly toInt(QPoly p) {
  trim(p);
  IntPoly r;
  for (auto& c : p) {
    c.canonicalize();
    if (c.get_den() != 1) throw Error(ErrorCode::InvalidArgument, "polynomial with non-integer coefficients");
    r.push_back(c.get_num());
  }
  return r;
}

IntPoly mulInt(const IntPoly& a, const IntPoly& b) { return toInt(mul(toQ(a), toQ(b))); }

std::string polyStr(const IntPoly& p) { return polyString(toQ(p)); }

QPoly reversedCharPoly(const Matrix& a) { return charPolyRational(a.withRing(Ring::Q())); }

}  // namespace

LambdaElement LambdaElement::fromPoly(const IntPoly& p) { return ratio(p, {1}); }

LambdaElement LambdaElement::ratio(const IntPoly& num, const IntPoly& den) {
  if (num.empty() || den.empty() || num[0] != 1 || den[0] != 1)
    throw Error(ErrorCode::InvalidArgument, "lambda elements need constant term 1");
  QPoly g = gcdPoly(toQ(num), toQ(den));
  mpq_class c = g[0];
  for (auto& x : g) x /= c;
  QPoly qn, qd, r;
  divmod(toQ(num), g, qn, r);
  divmod(toQ(den), g, qd, r);
  LambdaElement e;
  e.numerator = toInt(qn);
  e.denominator = toInt(qd);
  return e;
}

std::string LambdaElement::str() const {
  if (denominator == IntPoly{1}) return polyStr(numerator);
  auto wrap = [](const IntPoly& p) { return p.size() > 1 ? "(" + polyStr(p) + ")" : polyStr(p); };
  return wrap(numerator) + "/" + wrap(denominator);
}

std::string EndK0Class::str() const { return "rank " + rankPart.get_str() + ", lambda " + lambdaPart.str(); }

K0Class eulerClass(const Complex& x) {
  if (!x.ring().isZ()) throw Error(ErrorCode::WrongRing, "eulerClass is defined over Z");
  K0Class k;
  for (int i = x.minDeg(); i <= x.maxDeg() && !x.windowEmpty(); ++i) k.value += (i % 2 ? -1 : 1) * x.rank(i);
  return k;
}

EndK0Class endClass(const ChainMap& g) {
  if (g.src != g.tgt || g.deg != 0) throw Error(ErrorCode::NotEndomorphism, "endClass needs an endomorphism");
  requireChainMap(g);
  const Complex& x = g.src;
  EndK0Class e;
  e.rankPart = eulerClass(x).value;
  if (x.windowEmpty()) return e;
  IntPoly num{1}, den{1};
  for (int i = x.minDeg(); i <= x.maxDeg(); ++i) {
    GroupHom h = inducedOnCohomology(g, i);
    int t = static_cast<int>(h.src.torsion().size()), r = h.src.freeRank();
    if (r == 0) continue;
    // torsion is preserved, so the free block is the map on H^i (x) Q
    IntPoly p = toInt(reversedCharPoly(h.m.block(t, t, r, r)));
    if (i % 2) den = mulInt(den, p);
    else num = mulInt(num, p);
  }
  e.lambdaPart = LambdaElement::ratio(num, den);
  return e;
}

LambdaElement lambdaMul(const LambdaElement& a, const LambdaElement& b) {
  return LambdaElement::ratio(mulInt(a.numerator, b.numerator), mulInt(a.denominator, b.denominator));
}

EndK0Class endClassAdd(const EndK0Class& a, const EndK0Class& b) {
  return {a.rankPart + b.rankPart, lambdaMul(a.lambdaPart, b.lambdaPart)};
}

TriangleRelationReport triangleRelationCheck(const ChainMap& phi, const ChainMap& f, const ChainMap& g,
                                             const ChainMap& h) {
  requireChainMap(phi);
  Cone c = cone(phi);
  for (const auto* e : {&f, &g, &h}) requireChainMap(*e);
  if (f.src != phi.src || f.tgt != phi.src || g.src != phi.tgt || g.tgt != phi.tgt || h.src != c.c || h.tgt != c.c)
    throw Error(ErrorCode::NotATriangleEndomorphism, "endomorphisms do not match the triangle objects");
  if (!isNullHomotopic(compose(g, phi) - compose(phi, f)))
    throw Error(ErrorCode::NotATriangleEndomorphism, "first square does not commute up to homotopy");
  if (!isNullHomotopic(compose(h, c.toCone) - compose(c.toCone, g)))
    throw Error(ErrorCode::NotATriangleEndomorphism, "second square does not commute up to homotopy");
  if (!isNullHomotopic(compose(shiftMap(f, 1), c.fromCone) - compose(c.fromCone, h)))
    throw Error(ErrorCode::NotATriangleEndomorphism, "third square does not commute up to homotopy");
  TriangleRelationReport r;
  r.middle = endClass(g);
  r.sum = endClassAdd(endClass(f), endClass(h));
  return r;
}

}  // namespace wk
