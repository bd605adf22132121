#include "weightkit/weightkit.h"

#include <cstdlib>
#include <cstring>
#include <functional>
#include <new>

#include "commands.hpp"
#include "verify.hpp"

struct wk_document {
  wk::Document doc;
};

namespace {

thread_local std::string lastError;

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

wk_status fail(wk_status st, const std::string& msg) {
  lastError = msg;
  return st;
}

wk_status statusOf(wk::ErrorCode c) {
  if (c == wk::ErrorCode::ParseError) return WK_PARSE_ERROR;
  if (c == wk::ErrorCode::SchemaError) return WK_SCHEMA_ERROR;
  if (wk::isCheckFailure(c)) return WK_CHECK_FAILED;
  return WK_INVALID_ARGUMENT;
}

// Runs body, turning exceptions into statuses. A check failure thrown by the core still
// produces a report carrying the message.
wk_status guarded(char** report, const std::function<wk::CommandResult()>& body) {
  if (report) *report = nullptr;
  lastError.clear();
  try {
    if (!report) return fail(WK_INVALID_ARGUMENT, "report pointer is NULL");
    wk::CommandResult r = body();
    *report = dup(r.text);
    if (!r.ok) lastError = "check failed";
    return r.ok ? WK_OK : WK_CHECK_FAILED;
  } catch (const wk::Error& e) {
    wk_status st = statusOf(e.code());
    if (st == WK_CHECK_FAILED) *report = dup(std::string(e.what()) + "\n");
    return fail(st, e.what());
  } catch (const std::bad_alloc&) {
    return fail(WK_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(WK_INTERNAL, e.what());
  }
}

template <class T>
const T& need(const wk_document* d, wk::DocKind kind, const char* role) {
  if (!d) throw wk::Error(wk::ErrorCode::InvalidArgument, std::string(role) + ": no document");
  if (d->doc.kind() != kind)
    throw wk::Error(wk::ErrorCode::InvalidArgument, std::string(role) + ": expected a " + wk::docKindName(kind) +
                                                        " document, got " + wk::docKindName(d->doc.kind()));
  return d->doc.as<T>();
}

const wk::Complex& complexArg(const wk_document* d, const char* role = "input") {
  return need<wk::Complex>(d, wk::DocKind::Complex, role);
}
const wk::ChainMap& mapArg(const wk_document* d) { return need<wk::ChainMap>(d, wk::DocKind::ChainMap, "input"); }
const wk::FilteredComplex& filteredArg(const wk_document* d) {
  return need<wk::FilteredComplex>(d, wk::DocKind::FilteredComplex, "input");
}
const wk::TwistedComplex& twistedArg(const wk_document* d, const char* role = "input") {
  return need<wk::TwistedComplex>(d, wk::DocKind::TwistedComplex, role);
}

void requirePages(int pages) {
  if (pages < 1) throw wk::Error(wk::ErrorCode::InvalidArgument, "pages must be at least 1");
}

}  // namespace

extern "C" {

const char* wk_version(void) { return "1.0.0"; }

const char* wk_last_error(void) { return lastError.c_str(); }

void wk_free_string(char* s) { std::free(s); }

wk_status wk_document_parse(const char* text, wk_document** out) {
  lastError.clear();
  if (!out) return fail(WK_INVALID_ARGUMENT, "output pointer is NULL");
  *out = nullptr;
  if (!text) return fail(WK_INVALID_ARGUMENT, "text is NULL");
  try {
    *out = new wk_document{wk::parseDocument(text)};
    return WK_OK;
  } catch (const wk::Error& e) {
    wk_status st = statusOf(e.code());
    return fail(st == WK_CHECK_FAILED ? WK_SCHEMA_ERROR : st, e.what());
  } catch (const std::exception& e) {
    return fail(WK_INTERNAL, e.what());
  }
}

wk_status wk_document_serialize(const wk_document* doc, char** out) {
  return guarded(out, [&] {
    if (!doc) throw wk::Error(wk::ErrorCode::InvalidArgument, "no document");
    return wk::CommandResult{true, wk::serializeDocument(doc->doc)};
  });
}

wk_kind wk_document_kind(const wk_document* doc) { return static_cast<wk_kind>(doc->doc.kind()); }

const char* wk_kind_name(wk_kind kind) {
  if (kind < WK_KIND_COMPLEX || kind > WK_KIND_FILTERED_COMPLEX) return "";
  return wk::docKindName(static_cast<wk::DocKind>(kind));
}

void wk_document_free(wk_document* doc) { delete doc; }

wk_status wk_homology(const wk_document* complex, char** report) {
  return guarded(report, [&] { return wk::cmdHomology(complexArg(complex)); });
}

wk_status wk_hom_k(const wk_document* x, const wk_document* y, int degree, char** report) {
  return guarded(report, [&] { return wk::cmdHomK(complexArg(x, "X"), complexArg(y, "Y"), degree); });
}

wk_status wk_cone(const wk_document* chain_map, char** report) {
  return guarded(report, [&] { return wk::cmdCone(mapArg(chain_map)); });
}

wk_status wk_weight_complex(const wk_document* doc, char** report) {
  return guarded(report, [&] {
    if (doc && doc->doc.kind() == wk::DocKind::ChainMap) return wk::cmdWeightComplexMap(mapArg(doc));
    return wk::cmdWeightComplex(complexArg(doc));
  });
}

wk_status wk_postnikov(const wk_document* complex, char** report) {
  return guarded(report, [&] { return wk::cmdPostnikov(complexArg(complex)); });
}

wk_status wk_weight_ss(const char* functor, const wk_document* with, const wk_document* complex, int pages,
                       char** report) {
  return guarded(report, [&] {
    requirePages(pages);
    if (!functor) throw wk::Error(wk::ErrorCode::InvalidArgument, "no functor given");
    const wk::Complex* t = with ? &complexArg(with, "T") : nullptr;
    return wk::cmdWeightSS(wk::parseFunctorSpec(functor, t), complexArg(complex), pages);
  });
}

wk_status wk_filtered_ss(const wk_document* filtered, int pages, char** report) {
  return guarded(report, [&] {
    requirePages(pages);
    return wk::cmdFilteredSS(filteredArg(filtered), pages);
  });
}

wk_status wk_decalage(const wk_document* filtered, char** report) {
  return guarded(report, [&] { return wk::cmdDecalage(filteredArg(filtered)); });
}

wk_status wk_decalage_compare(const wk_document* filtered, int pages, char** report) {
  return guarded(report, [&] {
    requirePages(pages);
    return wk::cmdDecalageCompare(filteredArg(filtered), pages);
  });
}

wk_status wk_truncate_t(const wk_document* complex, int level, int upper, char** report) {
  return guarded(report, [&] { return wk::cmdTruncateT(complexArg(complex), level, upper != 0); });
}

wk_status wk_adjacency_check(const wk_document* x, const wk_document* y, int formula, int i, int j, char** report) {
  return guarded(report,
                 [&] { return wk::cmdAdjacencyCheck(complexArg(x, "X"), complexArg(y, "Y"), formula, i, j); });
}

wk_status wk_dg_validate(const wk_document* category, char** report) {
  return guarded(report, [&] {
    return wk::cmdDGValidate(need<wk::DGCategoryData>(category, wk::DocKind::DGCategory, "input"));
  });
}

wk_status wk_mc_check(const wk_document* twisted, char** report) {
  return guarded(report, [&] { return wk::cmdMCCheck(twistedArg(twisted)); });
}

wk_status wk_tr_hom(const wk_document* m, const wk_document* n, char** report) {
  return guarded(report, [&] { return wk::cmdTrHom(twistedArg(m, "M"), twistedArg(n, "N")); });
}

wk_status wk_twisted_cone(const wk_document* m, const wk_document* n, const char* map_json, char** report) {
  return guarded(report, [&] {
    return wk::cmdTwistedCone(twistedArg(m, "M"), twistedArg(n, "N"), map_json ? map_json : "");
  });
}

wk_status wk_tn(const wk_document* twisted, int level, char** report) {
  return guarded(report, [&] { return wk::cmdTN(twistedArg(twisted), level); });
}

wk_status wk_realize(const wk_document* twisted, char** report) {
  return guarded(report, [&] { return wk::cmdRealize(twistedArg(twisted)); });
}

wk_status wk_k0(const wk_document* complex, char** report) {
  return guarded(report, [&] { return wk::cmdK0(complexArg(complex)); });
}

wk_status wk_end_k0(const wk_document* chain_map, char** report) {
  return guarded(report, [&] { return wk::cmdEndK0(mapArg(chain_map)); });
}

int wk_suite_count(void) { return static_cast<int>(wk::verifySuites().size()); }

const char* wk_suite_name(int index) {
  if (index < 0 || index >= wk_suite_count()) return "";
  return wk::verifySuites()[index].name.c_str();
}

int wk_suite_criterion(int index) {
  if (index < 0 || index >= wk_suite_count()) return 0;
  return wk::verifySuites()[index].criterion;
}

int wk_suite_default_cases(int index) {
  if (index < 0 || index >= wk_suite_count()) return 0;
  return wk::verifySuites()[index].defaultCases;
}

wk_status wk_verify(const char* suite, uint64_t seed, int cases, char** report) {
  return guarded(report, [&] { return wk::cmdVerify(suite ? suite : "", static_cast<unsigned long>(seed), cases); });
}

}  // extern "C"
