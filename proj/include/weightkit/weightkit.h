#ifndef WEIGHTKIT_WEIGHTKIT_H
#define WEIGHTKIT_WEIGHTKIT_H

#include <stdint.h>

#if defined(_WIN32)
#define WK_API __declspec(dllexport)
#else
#define WK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  WK_OK = 0,
  WK_CHECK_FAILED = 1,     /* valid input, a mathematical check failed; the report says which */
  WK_PARSE_ERROR = 2,      /* malformed JSON; message starts with "line N:" */
  WK_SCHEMA_ERROR = 3,     /* well-formed JSON that is not a valid document; message starts with "at $.path:" */
  WK_INVALID_ARGUMENT = 4, /* wrong document kind, ring, category, flag value ... */
  WK_INTERNAL = 5
} wk_status;

typedef enum {
  WK_KIND_COMPLEX = 0,
  WK_KIND_CHAIN_MAP = 1,
  WK_KIND_DG_CATEGORY = 2,
  WK_KIND_TWISTED_COMPLEX = 3,
  WK_KIND_FILTERED_COMPLEX = 4
} wk_kind;

typedef struct wk_document wk_document;

WK_API const char* wk_version(void);
/* Message of the last failing call on this thread; "" after a success. */
WK_API const char* wk_last_error(void);
/* Every char* handed out by the library is released with this. */
WK_API void wk_free_string(char* s);

WK_API wk_status wk_document_parse(const char* text, wk_document** out);
WK_API wk_status wk_document_serialize(const wk_document* doc, char** out);
WK_API wk_kind wk_document_kind(const wk_document* doc);
WK_API const char* wk_kind_name(wk_kind kind);
WK_API void wk_document_free(wk_document* doc);

/* Commands. On WK_OK and WK_CHECK_FAILED *report receives the text (a serialized document
   for the commands producing one); on other statuses it is set to NULL. */
WK_API wk_status wk_homology(const wk_document* complex, char** report);
WK_API wk_status wk_hom_k(const wk_document* x, const wk_document* y, int degree, char** report);
WK_API wk_status wk_cone(const wk_document* chain_map, char** report);
/* A complex gives t(X); a chain map gives t(g). */
WK_API wk_status wk_weight_complex(const wk_document* doc, char** report);
WK_API wk_status wk_postnikov(const wk_document* complex, char** report);
/* functor: "H^n", "H^n(-;Z/m)", "Hom_K(T,-[n])", "Hom_K(-,T[n])"; with holds T or is NULL. */
WK_API wk_status wk_weight_ss(const char* functor, const wk_document* with, const wk_document* complex, int pages,
                              char** report);
WK_API wk_status wk_filtered_ss(const wk_document* filtered, int pages, char** report);
WK_API wk_status wk_decalage(const wk_document* filtered, char** report);
WK_API wk_status wk_decalage_compare(const wk_document* filtered, int pages, char** report);
/* upper = 0: tau_{<=level} X; upper != 0: tau_{>=level} X. */
WK_API wk_status wk_truncate_t(const wk_document* complex, int level, int upper, char** report);
WK_API wk_status wk_adjacency_check(const wk_document* x, const wk_document* y, int formula, int i, int j,
                                    char** report);
WK_API wk_status wk_dg_validate(const wk_document* category, char** report);
WK_API wk_status wk_mc_check(const wk_document* twisted, char** report);
WK_API wk_status wk_tr_hom(const wk_document* m, const wk_document* n, char** report);
/* map_json: [{"from": a, "to": b, "value": [...]}, ...]; NULL for the zero map. */
WK_API wk_status wk_twisted_cone(const wk_document* m, const wk_document* n, const char* map_json, char** report);
WK_API wk_status wk_tn(const wk_document* twisted, int level, char** report);
WK_API wk_status wk_realize(const wk_document* twisted, char** report);
WK_API wk_status wk_k0(const wk_document* complex, char** report);
WK_API wk_status wk_end_k0(const wk_document* chain_map, char** report);

/* Property suites, one per acceptance criterion. suite NULL runs all; cases <= 0 uses defaults. */
WK_API int wk_suite_count(void);
WK_API const char* wk_suite_name(int index);
WK_API int wk_suite_criterion(int index);
WK_API int wk_suite_default_cases(int index);
WK_API wk_status wk_verify(const char* suite, uint64_t seed, int cases, char** report);

#ifdef __cplusplus
}
#endif

#endif
