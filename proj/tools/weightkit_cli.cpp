#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weightkit/weightkit.h"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInternal = 3;

struct InputError {
  std::string message;
};

struct DocDeleter {
  void operator()(wk_document* d) const { wk_document_free(d); }
};
using DocPtr = std::unique_ptr<wk_document, DocDeleter>;

std::string readFile(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path + ": cannot open"};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

DocPtr load(const std::string& path) {
  std::string text = readFile(path);
  wk_document* d = nullptr;
  if (wk_document_parse(text.c_str(), &d) != WK_OK) throw InputError{path + ": " + wk_last_error()};
  return DocPtr(d);
}

int exitCode(wk_status st) {
  switch (st) {
    case WK_OK: return 0;
    case WK_CHECK_FAILED: return kExitCheckFailed;
    case WK_INTERNAL: return kExitInternal;
    default: return kExitInputError;
  }
}

// Prints the report (to stdout or the output file) and maps the status to an exit code.
int finish(wk_status st, char* report, const std::string& output) {
  if (report) {
    if (output.empty()) {
      std::fputs(report, stdout);
    } else {
      std::ofstream out(output, std::ios::binary);
      out << report;
      if (!out) {
        wk_free_string(report);
        throw InputError{output + ": cannot write"};
      }
    }
    wk_free_string(report);
  }
  if (st != WK_OK && st != WK_CHECK_FAILED) std::fprintf(stderr, "wk: %s\n", wk_last_error());
  return exitCode(st);
}

unsigned long long seedFrom(unsigned long long flag) {
  const char* env = std::getenv("WEIGHTKIT_SEED");
  if (!env || !*env) return flag;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || env[0] == '-') throw InputError{std::string("WEIGHTKIT_SEED is not a seed: ") + env};
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weightkit: weight structures, weight complexes and spectral sequences over Z", "wk"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string output;
  app.add_option("-o,--output", output, "Write the report to this file instead of stdout");
  app.set_version_flag("--version", std::string(wk_version()));

  std::string in1, in2, withFile, mapFile, functor, suite;
  int degree = 0, pages = 2, level = 0, formula = 6, ai = 0, aj = 0, cases = 0;
  unsigned long long seed = 1;
  bool upper = false, list = false;

  auto one = [&](const char* name, const char* help, const char* what) {
    CLI::App* c = app.add_subcommand(name, help);
    c->add_option("input", in1, what)->required();
    return c;
  };
  auto two = [&](const char* name, const char* help, const char* a, const char* b) {
    CLI::App* c = app.add_subcommand(name, help);
    c->add_option("first", in1, a)->required();
    c->add_option("second", in2, b)->required();
    return c;
  };

  auto* format = one("format", "Print a document in canonical form", "any document");
  auto* homology = one("homology", "Cohomology groups of a complex in every degree of its window", "complex document");
  auto* homK = two("hom-k", "Hom in the homotopy category, Hom_K(X, Y[n])", "complex X", "complex Y");
  homK->add_option("-n,--degree", degree, "Shift n of Y");
  auto* coneCmd = one("cone", "Mapping cone of a chain map (complex document)", "chainMap document");
  auto* wcx = one("weight-complex", "Weight complex t(X) of a complex or t(g) of a chain map", "complex or chainMap");
  auto* postnikov = one("postnikov", "Weight Postnikov tower and distinguishedness of its triangles", "complex document");
  auto* wss = one("wss", "Weight spectral sequence of a functor on a complex", "complex document");
  wss->add_option("--functor", functor, "H^n, H^n(-;Z/m), Hom_K(T,-[n]) or Hom_K(-,T[n])")->required();
  wss->add_option("--pages", pages, "Pages to print")->check(CLI::PositiveNumber);
  wss->add_option("--with", withFile, "complex document for T");
  auto* fss = one("filtered-ss", "Spectral sequence of a filtered complex", "filteredComplex document");
  fss->add_option("--pages", pages, "Pages to print")->check(CLI::PositiveNumber);
  auto* dec = one("decalage", "Deligne's decalage of a filtration (filteredComplex document)", "filteredComplex");
  auto* decCmp = one("decalage-compare", "Compare the page indices of F and Dec F", "filteredComplex document");
  decCmp->add_option("--pages", pages, "Pages of Dec F to compare")->check(CLI::PositiveNumber);
  auto* trunc = one("truncate-t", "Canonical truncation tau_{<=i} (or tau_{>=i} with --upper)", "complex document");
  trunc->add_option("--level", level, "The level i")->required();
  trunc->add_flag("--upper", upper, "tau_{>=i} instead of tau_{<=i}");
  auto* adj = two("adjacency-check", "Compare both sides of an adjacency formula", "complex X", "complex Y");
  adj->add_option("--formula", formula, "6, 7 or 8")->required()->check(CLI::IsMember({6, 7, 8}));
  adj->add_option("-i", ai, "The index i");
  adj->add_option("-j", aj, "The index j (formulas 7 and 8)");
  auto* dgv = one("dg-validate", "Check the DG category axioms", "dgCategory document");
  auto* mc = one("mc-check", "Check the Maurer-Cartan equation", "twistedComplex document");
  auto* trHom = two("tr-hom", "Hom group in Tr between two twisted complexes", "twistedComplex M", "twistedComplex N");
  auto* tcone = two("twisted-cone", "Cone of a closed degree-0 map M -> N in PreTr", "twistedComplex M",
                    "twistedComplex N");
  tcone->add_option("--map", mapFile, "JSON array of components {from, to, value}; zero map if omitted");
  auto* tn = one("tn", "Apply t_N to a twisted complex", "twistedComplex document");
  tn->add_option("--level", level, "N")->required();
  auto* realize = one("realize", "Total complex of a twisted complex over S(A)", "twistedComplex document");
  auto* k0 = one("k0", "Class in K_0 (the Euler characteristic)", "complex document");
  auto* endk0 = one("end-k0", "Class of an endomorphism in K_0 of endomorphisms", "chainMap document");
  auto* verify = app.add_subcommand("verify", "Run property suites (all of them without --suite)");
  verify->add_option("--suite", suite, "Suite name");
  verify->add_option("--seed", seed, "Seed; WEIGHTKIT_SEED overrides it");
  verify->add_option("--cases", cases, "Number of random cases; suite default if omitted")
      ->check(CLI::NonNegativeNumber);
  verify->add_flag("--list", list, "List the suites and their criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    char* report = nullptr;
    wk_status st = WK_OK;
    if (verify->parsed()) {
      if (list) {
        std::string text;
        for (int k = 0; k < wk_suite_count(); ++k)
          text += std::string(wk_suite_name(k)) + "  criterion " + std::to_string(wk_suite_criterion(k)) +
                  ", default cases " + std::to_string(wk_suite_default_cases(k)) + "\n";
        std::fputs(text.c_str(), stdout);
        return 0;
      }
      st = wk_verify(suite.empty() ? nullptr : suite.c_str(), seedFrom(seed), cases, &report);
      return finish(st, report, output);
    }
    DocPtr a = load(in1);
    DocPtr b = in2.empty() ? nullptr : load(in2);
    if (format->parsed()) st = wk_document_serialize(a.get(), &report);
    else if (homology->parsed()) st = wk_homology(a.get(), &report);
    else if (homK->parsed()) st = wk_hom_k(a.get(), b.get(), degree, &report);
    else if (coneCmd->parsed()) st = wk_cone(a.get(), &report);
    else if (wcx->parsed()) st = wk_weight_complex(a.get(), &report);
    else if (postnikov->parsed()) st = wk_postnikov(a.get(), &report);
    else if (wss->parsed()) {
      DocPtr t = withFile.empty() ? nullptr : load(withFile);
      st = wk_weight_ss(functor.c_str(), t.get(), a.get(), pages, &report);
    } else if (fss->parsed()) st = wk_filtered_ss(a.get(), pages, &report);
    else if (dec->parsed()) st = wk_decalage(a.get(), &report);
    else if (decCmp->parsed()) st = wk_decalage_compare(a.get(), pages, &report);
    else if (trunc->parsed()) st = wk_truncate_t(a.get(), level, upper ? 1 : 0, &report);
    else if (adj->parsed()) st = wk_adjacency_check(a.get(), b.get(), formula, ai, aj, &report);
    else if (dgv->parsed()) st = wk_dg_validate(a.get(), &report);
    else if (mc->parsed()) st = wk_mc_check(a.get(), &report);
    else if (trHom->parsed()) st = wk_tr_hom(a.get(), b.get(), &report);
    else if (tcone->parsed()) {
      std::string map = mapFile.empty() ? "" : readFile(mapFile);
      st = wk_twisted_cone(a.get(), b.get(), mapFile.empty() ? nullptr : map.c_str(), &report);
    } else if (tn->parsed()) st = wk_tn(a.get(), level, &report);
    else if (realize->parsed()) st = wk_realize(a.get(), &report);
    else if (k0->parsed()) st = wk_k0(a.get(), &report);
    else if (endk0->parsed()) st = wk_end_k0(a.get(), &report);
    return finish(st, report, output);
  } catch (const InputError& e) {
    std::fprintf(stderr, "wk: %s\n", e.message.c_str());
    return kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "wk: %s\n", e.what());
    return kExitInternal;
  }
}
