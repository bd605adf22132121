#include "serialize.hpp"

#include <json.hpp>

namespace wk {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const char* docKindName(DocKind k) {
  switch (k) {
    case DocKind::Complex: return "complex";
    case DocKind::ChainMap: return "chainMap";
    case DocKind::DGCategory: return "dgCategory";
    case DocKind::TwistedComplex: return "twistedComplex";
    case DocKind::FilteredComplex: return "filteredComplex";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------- writing

std::string entryString(const Matrix& m, int i, int j) {
  if (m.ring().isQ()) return m.at(i, j).get_str();
  return m(i, j).get_str();
}

ojson matrixJson(const Matrix& m) {
  ojson rows = ojson::array();
  for (int i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(entryString(m, i, j));
    rows.push_back(row);
  }
  return rows;
}

// A column vector as a flat array.
ojson vectorJson(const Matrix& v) {
  ojson out = ojson::array();
  for (int i = 0; i < v.rows(); ++i) out.push_back(entryString(v, i, 0));
  return out;
}

ojson complexJson(const Complex& x) {
  ojson j;
  j["ring"] = x.ring().name();
  j["minDeg"] = x.minDeg();
  j["maxDeg"] = x.maxDeg();
  j["ranks"] = x.ranks();
  ojson d = ojson::array();
  for (int i = x.minDeg(); i < x.maxDeg(); ++i) d.push_back(matrixJson(x.d(i)));
  j["diffs"] = d;
  return j;
}

ojson chainMapJson(const ChainMap& f) {
  ojson j;
  j["source"] = complexJson(f.src);
  j["target"] = complexJson(f.tgt);
  ojson comps = ojson::array();
  for (int i = f.src.minDeg(); i <= f.src.maxDeg() && !f.src.windowEmpty(); ++i) comps.push_back(matrixJson(f.at(i)));
  j["components"] = comps;
  return j;
}

ojson categoryJson(const DGCategoryData& c) {
  ojson j;
  j["objects"] = c.objects;
  ojson homs = ojson::array();
  for (const auto& [pq, h] : c.homs) {
    ojson e;
    e["source"] = pq.first;
    e["target"] = pq.second;
    e["lo"] = h.lo;
    e["ranks"] = h.ranks;
    ojson d = ojson::array();
    for (const auto& m : h.delta) d.push_back(matrixJson(m));
    e["delta"] = d;
    homs.push_back(e);
  }
  j["homs"] = homs;
  ojson comps = ojson::array();
  for (const auto& [k, m] : c.compositions) {
    ojson e;
    e["p"] = k.p;
    e["q"] = k.q;
    e["r"] = k.r;
    e["a"] = k.a;
    e["b"] = k.b;
    e["matrix"] = matrixJson(m);
    comps.push_back(e);
  }
  j["compositions"] = comps;
  ojson units = ojson::array();
  for (const auto& u : c.units) units.push_back(vectorJson(u));
  j["units"] = units;
  if (c.isModuleCategory()) j["moduleRanks"] = c.moduleRanks;
  if (!c.relations.empty()) {
    j["relationDegree"] = c.relationDegree;
    ojson rel = ojson::array();
    for (const auto& [pq, l] : c.relations) {
      ojson e;
      e["source"] = pq.first;
      e["target"] = pq.second;
      e["basis"] = matrixJson(l.basis);
      rel.push_back(e);
    }
    j["relations"] = rel;
  }
  return j;
}

ojson twistedJson(const TwistedComplex& m) {
  ojson j;
  j["category"] = categoryJson(*m.cat);
  ojson entries = ojson::array();
  for (const auto& e : m.entries) entries.push_back(ojson{{"position", e.position}, {"object", e.object}});
  j["entries"] = entries;
  ojson arrows = ojson::array();
  for (const auto& [ab, v] : m.q) {
    ojson e;
    e["from"] = ab.first;
    e["to"] = ab.second;
    e["value"] = vectorJson(v);
    arrows.push_back(e);
  }
  j["arrows"] = arrows;
  return j;
}

ojson filteredJson(const FilteredComplex& fc) {
  ojson j;
  j["complex"] = complexJson(fc.total());
  j["pLo"] = fc.pLo();
  j["pHi"] = fc.pHi();
  ojson levels = ojson::array();
  const Complex& x = fc.total();
  for (int n = x.minDeg(); n <= x.maxDeg() && !x.windowEmpty(); ++n) {
    ojson row = ojson::array();
    for (int p = fc.pLo(); p <= fc.pHi(); ++p) row.push_back(matrixJson(fc.level(n, p).basis));
    levels.push_back(row);
  }
  j["levels"] = levels;
  return j;
}

bool containsObject(const ojson& j) {
  if (j.is_object()) return true;
  if (j.is_array())
    for (const auto& e : j)
      if (containsObject(e)) return true;
  return false;
}

// Objects one key per line; arrays without objects inside stay on one line.
void emit(const ojson& j, int indent, std::string& out) {
  std::string pad(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(k).dump() + ": ";
      emit(v, indent + 2, out);
    }
    out += "\n" + std::string(indent, ' ') + "}";
  } else if (j.is_array() && containsObject(j)) {
    out += "[\n";
    for (size_t i = 0; i < j.size(); ++i) {
      out += pad;
      emit(j[i], indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(indent, ' ') + "]";
  } else if (j.is_array()) {
    out += "[";
    for (size_t i = 0; i < j.size(); ++i) {
      if (i) out += ", ";
      emit(j[i], indent, out);
    }
    out += "]";
  } else {
    out += j.dump();
  }
}

ojson payloadJson(const Document& d) {
  switch (d.kind()) {
    case DocKind::Complex: return complexJson(d.as<Complex>());
    case DocKind::ChainMap: return chainMapJson(d.as<ChainMap>());
    case DocKind::DGCategory: return categoryJson(d.as<DGCategoryData>());
    case DocKind::TwistedComplex: return twistedJson(d.as<TwistedComplex>());
    case DocKind::FilteredComplex: return filteredJson(d.as<FilteredComplex>());
  }
  return {};
}

// ---------------------------------------------------------------- reading

[[noreturn]] void schemaError(const std::string& path, const std::string& reason) {
  throw Error(ErrorCode::SchemaError, "at " + path + ": " + reason);
}

struct Node {
  const json& j;
  std::string path;

  Node at(const std::string& key) const {
    if (!j.is_object()) schemaError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schemaError(path, "missing key '" + key + "'");
    return {*it, path + "." + key};
  }
  bool has(const std::string& key) const { return j.is_object() && j.contains(key); }
  Node operator[](size_t i) const { return {j[i], path + "[" + std::to_string(i) + "]"}; }

  void onlyKeys(std::initializer_list<const char*> keys) const {
    if (!j.is_object()) schemaError(path, "expected an object");
    for (const auto& [k, v] : j.items()) {
      bool known = false;
      for (const char* s : keys) known = known || k == s;
      if (!known) schemaError(path, "unknown key '" + k + "'");
    }
  }
  size_t arraySize() const {
    if (!j.is_array()) schemaError(path, "expected an array");
    return j.size();
  }
  size_t arraySize(size_t expect, const std::string& what) const {
    size_t n = arraySize();
    if (n != expect) schemaError(path, "expected " + std::to_string(expect) + " " + what + ", got " + std::to_string(n));
    return n;
  }
  int integer() const {
    if (!j.is_number_integer()) schemaError(path, "expected an integer");
    long long v = j.get<long long>();
    if (v < -1000000 || v > 1000000) schemaError(path, "integer out of range");
    return static_cast<int>(v);
  }
  int index(int bound, const std::string& what) const {
    int v = integer();
    if (v < 0 || v >= bound) schemaError(path, what + " index " + std::to_string(v) + " out of range");
    return v;
  }
  std::string string() const {
    if (!j.is_string()) schemaError(path, "expected a string");
    return j.get<std::string>();
  }
  std::vector<int> intList() const {
    std::vector<int> out;
    for (size_t i = 0; i < arraySize(); ++i) out.push_back((*this)[i].integer());
    return out;
  }
};

Ring ringOf(const Node& n) {
  try {
    return Ring::parse(n.string());
  } catch (const Error& e) {
    schemaError(n.path, e.what());
  }
}

// Decimal integer strings; over Q also "p/q". Plain JSON integers are accepted too.
mpq_class entry(const Node& n, Ring ring) {
  std::string s;
  if (n.j.is_number_integer()) s = std::to_string(n.j.get<long long>());
  else if (n.j.is_string()) s = n.j.get<std::string>();
  else schemaError(n.path, "matrix entries are decimal strings");
  size_t slash = s.find('/');
  auto digits = [&](const std::string& t, bool allowSign) {
    size_t k = allowSign && !t.empty() && t[0] == '-' ? 1 : 0;
    if (k == t.size()) return false;
    for (; k < t.size(); ++k)
      if (t[k] < '0' || t[k] > '9') return false;
    return true;
  };
  if (slash == std::string::npos ? !digits(s, true)
                                 : !ring.isQ() || !digits(s.substr(0, slash), true) || !digits(s.substr(slash + 1), false))
    schemaError(n.path, "'" + s + "' is not " + (ring.isQ() ? "a rational number" : "an integer"));
  mpq_class v(s);
  if (v.get_den() == 0) schemaError(n.path, "zero denominator");
  v.canonicalize();
  return v;
}

Matrix matrixOf(const Node& n, int rows, int cols, Ring ring) {
  n.arraySize(static_cast<size_t>(rows), "rows");
  Matrix m(rows, cols, ring);
  for (int i = 0; i < rows; ++i) {
    Node row = n[i];
    row.arraySize(static_cast<size_t>(cols), "columns");
    for (int k = 0; k < cols; ++k) m.set(i, k, entry(row[k], ring));
  }
  m.normalize();
  return m;
}

// Rows fixed, columns read off the data (lattice bases).
Matrix matrixOfWidth(const Node& n, int rows, Ring ring) {
  n.arraySize(static_cast<size_t>(rows), "rows");
  int cols = rows == 0 ? 0 : static_cast<int>(n[0].arraySize());
  return matrixOf(n, rows, cols, ring);
}

Matrix vectorOf(const Node& n, int len, Ring ring) {
  n.arraySize(static_cast<size_t>(len), "entries");
  Matrix v(len, 1, ring);
  for (int i = 0; i < len; ++i) v.set(i, 0, entry(n[i], ring));
  v.normalize();
  return v;
}

Complex complexOf(const Node& n) {
  n.onlyKeys({"ring", "minDeg", "maxDeg", "ranks", "diffs", "kind", "formatVersion"});
  Ring ring = ringOf(n.at("ring"));
  int lo = n.at("minDeg").integer(), hi = n.at("maxDeg").integer();
  if (hi < lo - 1) schemaError(n.path + ".maxDeg", "maxDeg below minDeg - 1");
  Node rk = n.at("ranks");
  rk.arraySize(static_cast<size_t>(hi - lo + 1), "ranks");
  std::vector<int> ranks = rk.intList();
  for (size_t k = 0; k < ranks.size(); ++k)
    if (ranks[k] < 0 || ranks[k] > 4096) schemaError(rk[k].path, "rank out of range");
  Node ds = n.at("diffs");
  ds.arraySize(ranks.empty() ? 0 : ranks.size() - 1, "differentials");
  std::vector<Matrix> diffs;
  for (size_t k = 0; k + 1 < ranks.size(); ++k) diffs.push_back(matrixOf(ds[k], ranks[k + 1], ranks[k], ring));
  for (size_t k = 0; k + 1 < diffs.size(); ++k)
    if (!(diffs[k + 1] * diffs[k]).isZero())
      schemaError(ds[k + 1].path, "d^" + std::to_string(lo + k + 1) + " d^" + std::to_string(lo + k) +
                                      " != 0 at degree " + std::to_string(lo + k));
  return Complex(ring, lo, ranks, diffs);
}

ChainMap chainMapOf(const Node& n) {
  n.onlyKeys({"source", "target", "components", "kind", "formatVersion"});
  Complex x = complexOf(n.at("source")), y = complexOf(n.at("target"));
  if (!(x.ring() == y.ring())) schemaError(n.at("target").path + ".ring", "source and target rings differ");
  Node cs = n.at("components");
  cs.arraySize(x.windowEmpty() ? 0 : x.ranks().size(), "components");
  ChainMap f = ChainMap::zero(x, y);
  for (int i = x.minDeg(); i <= x.maxDeg() && !x.windowEmpty(); ++i)
    f.set(i, matrixOf(cs[i - x.minDeg()], y.rank(i), x.rank(i), x.ring()));
  ChainMap df = homDifferential(f);
  for (int i = x.minDeg(); i <= x.maxDeg() && !x.windowEmpty(); ++i)
    if (!df.at(i).isZero()) schemaError(cs.path, "not a chain map: d f != f d at degree " + std::to_string(i));
  return f;
}

DGCategoryData categoryOf(const Node& n) {
  n.onlyKeys({"objects", "homs", "compositions", "units", "moduleRanks", "relationDegree", "relations", "kind",
              "formatVersion"});
  DGCategoryData c;
  Node objs = n.at("objects");
  for (size_t i = 0; i < objs.arraySize(); ++i) c.objects.push_back(objs[i].string());
  int no = c.size();
  Node homs = n.at("homs");
  for (size_t i = 0; i < homs.arraySize(); ++i) {
    Node h = homs[i];
    h.onlyKeys({"source", "target", "lo", "ranks", "delta"});
    int p = h.at("source").index(no, "object"), q = h.at("target").index(no, "object");
    if (c.homs.count({p, q})) schemaError(h.path, "duplicate Hom complex");
    HomComplex hc;
    hc.lo = h.at("lo").integer();
    hc.ranks = h.at("ranks").intList();
    for (size_t k = 0; k < hc.ranks.size(); ++k)
      if (hc.ranks[k] < 0 || hc.ranks[k] > 4096) schemaError(h.at("ranks")[k].path, "rank out of range");
    Node d = h.at("delta");
    d.arraySize(hc.ranks.empty() ? 0 : hc.ranks.size() - 1, "coboundaries");
    for (size_t k = 0; k + 1 < hc.ranks.size(); ++k) hc.delta.push_back(matrixOf(d[k], hc.ranks[k + 1], hc.ranks[k], Ring::Z()));
    c.homs[{p, q}] = hc;
  }
  Node comps = n.at("compositions");
  for (size_t i = 0; i < comps.arraySize(); ++i) {
    Node e = comps[i];
    e.onlyKeys({"p", "q", "r", "a", "b", "matrix"});
    CompositionKey k{e.at("p").index(no, "object"), e.at("q").index(no, "object"), e.at("r").index(no, "object"),
                     e.at("a").integer(), e.at("b").integer()};
    if (c.compositions.count(k)) schemaError(e.path, "duplicate composition");
    int rows = c.rank(k.p, k.r, k.a + k.b), cols = c.rank(k.q, k.r, k.a) * c.rank(k.p, k.q, k.b);
    c.compositions[k] = matrixOf(e.at("matrix"), rows, cols, Ring::Z());
  }
  Node units = n.at("units");
  units.arraySize(static_cast<size_t>(no), "units");
  for (int p = 0; p < no; ++p) c.units.push_back(vectorOf(units[p], c.rank(p, p, 0), Ring::Z()));
  if (n.has("moduleRanks")) {
    Node mr = n.at("moduleRanks");
    mr.arraySize(static_cast<size_t>(no), "module ranks");
    c.moduleRanks = mr.intList();
    for (int p = 0; p < no; ++p)
      for (int q = 0; q < no; ++q) {
        const HomComplex& h = c.hom(p, q);
        if (h.lo != 0 || h.ranks.size() != 1 || h.ranks[0] != c.moduleRanks[p] * c.moduleRanks[q])
          schemaError(mr.path, "Hom(" + std::to_string(p) + ", " + std::to_string(q) + ") does not match the module ranks");
      }
  }
  if (n.has("relations")) {
    c.relationDegree = n.at("relationDegree").integer();
    Node rel = n.at("relations");
    for (size_t i = 0; i < rel.arraySize(); ++i) {
      Node e = rel[i];
      e.onlyKeys({"source", "target", "basis"});
      int p = e.at("source").index(no, "object"), q = e.at("target").index(no, "object");
      Matrix b = matrixOfWidth(e.at("basis"), c.rank(p, q, c.relationDegree), Ring::Z());
      c.relations[{p, q}] = Lattice::fromGenerators(b);
    }
  } else if (n.has("relationDegree")) {
    c.relationDegree = n.at("relationDegree").integer();
  }
  return c;
}

TwistedComplex twistedOf(const Node& n) {
  n.onlyKeys({"category", "entries", "arrows", "kind", "formatVersion"});
  TwistedComplex m;
  m.cat = std::make_shared<const DGCategoryData>(categoryOf(n.at("category")));
  Node es = n.at("entries");
  for (size_t i = 0; i < es.arraySize(); ++i) {
    Node e = es[i];
    e.onlyKeys({"position", "object"});
    m.entries.push_back({e.at("position").integer(), e.at("object").index(m.cat->size(), "object")});
  }
  Node as = n.at("arrows");
  for (size_t i = 0; i < as.arraySize(); ++i) {
    Node e = as[i];
    e.onlyKeys({"from", "to", "value"});
    int a = e.at("from").index(m.size(), "entry"), b = e.at("to").index(m.size(), "entry");
    if (m.q.count({a, b})) schemaError(e.path, "duplicate arrow");
    m.setArrow(a, b, vectorOf(e.at("value"), m.cat->rank(m.obj(a), m.obj(b), m.arrowDegree(a, b)), Ring::Z()));
  }
  return m;
}

FilteredComplex filteredOf(const Node& n) {
  n.onlyKeys({"complex", "pLo", "pHi", "levels", "kind", "formatVersion"});
  Complex x = complexOf(n.at("complex"));
  if (!x.ring().isZ()) schemaError(n.at("complex").path + ".ring", "filtered complexes are over Z");
  int lo = n.at("pLo").integer(), hi = n.at("pHi").integer();
  if (hi < lo) schemaError(n.path + ".pHi", "pHi below pLo");
  Node lv = n.at("levels");
  lv.arraySize(x.windowEmpty() ? 0 : x.ranks().size(), "degrees");
  std::vector<std::vector<Lattice>> levels;
  for (int i = x.minDeg(); i <= x.maxDeg() && !x.windowEmpty(); ++i) {
    Node row = lv[i - x.minDeg()];
    row.arraySize(static_cast<size_t>(hi - lo + 1), "levels");
    std::vector<Lattice> ls;
    for (int p = lo; p <= hi; ++p) ls.push_back(Lattice::fromGenerators(matrixOfWidth(row[p - lo], x.rank(i), Ring::Z())));
    levels.push_back(ls);
  }
  FilteredComplex fc(x, lo, hi, levels);
  try {
    validateFiltration(fc);
  } catch (const Error& e) {
    schemaError(lv.path, e.what());
  }
  return fc;
}

json parseJson(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    size_t upto = std::min(text.size(), e.byte > 0 ? static_cast<size_t>(e.byte - 1) : 0);
    size_t line = 1;
    for (size_t i = 0; i < upto; ++i) line += text[i] == '\n';
    std::string reason = e.what();
    size_t colon = reason.rfind(": ");
    if (colon != std::string::npos) reason = reason.substr(colon + 2);
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + reason);
  }
}

}  // namespace

Document parseDocument(const std::string& text) {
  json j = parseJson(text);
  Node root{j, "$"};
  if (!j.is_object()) schemaError("$", "expected an object");
  Document d;
  if (root.has("formatVersion")) {
    d.formatVersion = root.at("formatVersion").string();
    if (d.formatVersion != "1") schemaError("$.formatVersion", "unsupported version '" + d.formatVersion + "'");
  }
  std::string kind = root.at("kind").string();
  try {
    if (kind == "complex") d.payload = complexOf(root);
    else if (kind == "chainMap") d.payload = chainMapOf(root);
    else if (kind == "dgCategory") d.payload = categoryOf(root);
    else if (kind == "twistedComplex") d.payload = twistedOf(root);
    else if (kind == "filteredComplex") d.payload = filteredOf(root);
    else schemaError("$.kind", "unknown kind '" + kind + "'");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    schemaError("$", e.what());
  }
  return d;
}

std::string serializeDocument(const Document& d) {
  ojson j;
  j["formatVersion"] = d.formatVersion;
  j["kind"] = docKindName(d.kind());
  ojson body = payloadJson(d);
  for (const auto& [k, v] : body.items()) j[k] = v;
  std::string out;
  emit(j, 0, out);
  return out + "\n";
}

PreTrHomElement parsePreTrComponents(const std::string& text, const TwistedComplex& src, const TwistedComplex& tgt) {
  json j = parseJson(text);
  Node root{j, "$"};
  PreTrHomElement f = PreTrHomElement::zero(src, tgt, 0);
  for (size_t i = 0; i < root.arraySize(); ++i) {
    Node e = root[i];
    e.onlyKeys({"from", "to", "value"});
    int a = e.at("from").index(src.size(), "source entry"), b = e.at("to").index(tgt.size(), "target entry");
    f.set(a, b, vectorOf(e.at("value"), src.cat->rank(src.obj(a), tgt.obj(b), f.componentDegree(a, b)), Ring::Z()));
  }
  return f;
}

bool sameCategoryData(const DGCategoryData& a, const DGCategoryData& b) {
  return categoryJson(a).dump() == categoryJson(b).dump();
}

}  // namespace wk
