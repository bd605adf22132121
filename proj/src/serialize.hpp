#pragma once

#include <string>
#include <variant>

#include "spectral.hpp"
#include "twisted.hpp"

namespace wk {

enum class DocKind { Complex, ChainMap, DGCategory, TwistedComplex, FilteredComplex };

const char* docKindName(DocKind k);

// formatVersion and kind live next to the payload fields at the top level of the JSON
// object; nested complexes and categories are bare payloads without the two tags.
struct Document {
  std::string formatVersion = "1";
  std::variant<Complex, ChainMap, DGCategoryData, TwistedComplex, FilteredComplex> payload;

  DocKind kind() const { return static_cast<DocKind>(payload.index()); }
  template <class T>
  const T& as() const { return std::get<T>(payload); }
};

inline Document makeDocument(const Complex& x) { return {"1", x}; }
inline Document makeDocument(const ChainMap& f) { return {"1", f}; }
inline Document makeDocument(const DGCategoryData& c) { return {"1", c}; }
inline Document makeDocument(const TwistedComplex& m) { return {"1", m}; }
inline Document makeDocument(const FilteredComplex& fc) { return {"1", fc}; }

// Throws ParseError ("line N: ...") on malformed JSON and SchemaError ("at $.path: ...")
// on anything that does not describe a valid object of the kind.
Document parseDocument(const std::string& text);
// Canonical text: fixed key order, matrices as rows of decimal strings, trailing newline.
std::string serializeDocument(const Document& d);

// Arrows of PreTr elements as a bare JSON array [{"from","to","value"}]; used by
// twisted-cone to read the morphism. Components default to zero.
PreTrHomElement parsePreTrComponents(const std::string& text, const TwistedComplex& src, const TwistedComplex& tgt);

// Same category data, compared through the canonical form.
bool sameCategoryData(const DGCategoryData& a, const DGCategoryData& b);

}  // namespace wk
