#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "weightkit/weightkit.h"

namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(WK_GOLDEN_DIR) + "/" + name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Doc {
  wk_document* d = nullptr;
  explicit Doc(const std::string& text) { EXPECT_EQ(wk_document_parse(text.c_str(), &d), WK_OK) << wk_last_error(); }
  ~Doc() { wk_document_free(d); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  wk_free_string(s);
  return out;
}

}  // namespace

TEST(CApi, ParseSerializeKind) {
  Doc x(golden("complex.json"));
  EXPECT_EQ(wk_document_kind(x.d), WK_KIND_COMPLEX);
  EXPECT_STREQ(wk_kind_name(WK_KIND_FILTERED_COMPLEX), "filteredComplex");
  char* s = nullptr;
  ASSERT_EQ(wk_document_serialize(x.d, &s), WK_OK);
  EXPECT_EQ(take(s), golden("complex.json"));
}

TEST(CApi, ErrorStatuses) {
  wk_document* d = nullptr;
  EXPECT_EQ(wk_document_parse("{", &d), WK_PARSE_ERROR);
  EXPECT_EQ(d, nullptr);
  EXPECT_EQ(std::string(wk_last_error()).rfind("line 1:", 0), 0u);
  EXPECT_EQ(wk_document_parse(golden("invalid/d_squared.json").c_str(), &d), WK_SCHEMA_ERROR);
  EXPECT_NE(std::string(wk_last_error()).find("at $.diffs[1]"), std::string::npos);
  EXPECT_EQ(wk_document_parse(nullptr, &d), WK_INVALID_ARGUMENT);

  Doc x(golden("complex.json"));
  EXPECT_STREQ(wk_last_error(), "");
  char* report = reinterpret_cast<char*>(1);
  EXPECT_EQ(wk_cone(x.d, &report), WK_INVALID_ARGUMENT);
  EXPECT_EQ(report, nullptr);
  EXPECT_NE(std::string(wk_last_error()).find("expected a chainMap"), std::string::npos);
  EXPECT_EQ(wk_homology(x.d, nullptr), WK_INVALID_ARGUMENT);
}

TEST(CApi, LastErrorIsPerThread) {
  wk_document* d = nullptr;
  EXPECT_EQ(wk_document_parse("[", &d), WK_PARSE_ERROR);
  std::string other;
  std::thread([&] { other = wk_last_error(); }).join();
  EXPECT_EQ(other, "");
  EXPECT_NE(std::string(wk_last_error()), "");
}

TEST(CApi, Commands) {
  Doc x(golden("complex.json")), id(golden("chain_map.json")), m(golden("twisted_complex.json"));
  char* r = nullptr;
  ASSERT_EQ(wk_homology(x.d, &r), WK_OK);
  EXPECT_EQ(take(r), "H^0 = 0, H^1 = Z/2\n");
  ASSERT_EQ(wk_end_k0(id.d, &r), WK_OK);
  EXPECT_EQ(take(r), "rank 1, lambda 1 - t\n");
  ASSERT_EQ(wk_hom_k(x.d, x.d, 0, &r), WK_OK);
  EXPECT_EQ(take(r), "Hom_K(X, Y) = Z/2\n");
  ASSERT_EQ(wk_realize(m.d, &r), WK_OK);
  Doc back(take(r));
  ASSERT_EQ(wk_document_serialize(back.d, &r), WK_OK);
  EXPECT_EQ(take(r), golden("complex.json"));
  ASSERT_EQ(wk_weight_ss("H^1(-;Z/2)", nullptr, x.d, 3, &r), WK_OK);
  EXPECT_NE(take(r).find("functor H^1(-;Z/2)"), std::string::npos);
  EXPECT_EQ(wk_weight_ss("H^1", nullptr, x.d, 0, &r), WK_INVALID_ARGUMENT);
}

TEST(CApi, CheckFailuresCarryReports) {
  Doc bad(golden("checks/not_mc.json"));
  char* r = nullptr;
  EXPECT_EQ(wk_mc_check(bad.d, &r), WK_CHECK_FAILED);
  EXPECT_EQ(take(r), "Maurer-Cartan fails at (0,2)\n");
  Doc unit(golden("checks/bad_unit.json"));
  EXPECT_EQ(wk_dg_validate(unit.d, &r), WK_CHECK_FAILED);
  EXPECT_NE(take(r).find("left unit"), std::string::npos);
}

TEST(CApi, TwistedConeOfIdentityIsContractible) {
  Doc m(golden("twisted_complex.json"));
  char* r = nullptr;
  const char* id = R"([{"from": 0, "to": 0, "value": ["1"]}, {"from": 1, "to": 1, "value": ["1"]}])";
  ASSERT_EQ(wk_twisted_cone(m.d, m.d, id, &r), WK_OK) << wk_last_error();
  Doc c(take(r));
  ASSERT_EQ(wk_realize(c.d, &r), WK_OK);
  Doc total(take(r));
  ASSERT_EQ(wk_homology(total.d, &r), WK_OK);
  EXPECT_EQ(take(r), "H^-1 = 0, H^0 = 0, H^1 = 0\n");
  const char* bad = R"([{"from": 0, "to": 0, "value": ["1"]}])";
  EXPECT_EQ(wk_twisted_cone(m.d, m.d, bad, &r), WK_CHECK_FAILED);
  take(r);
}

TEST(CApi, Suites) {
  ASSERT_EQ(wk_suite_count(), 9);
  for (int k = 0; k < 9; ++k) EXPECT_EQ(wk_suite_criterion(k), k + 1);
  EXPECT_STREQ(wk_suite_name(2), "z-ideal");
  EXPECT_STREQ(wk_suite_name(9), "");
  char* r = nullptr;
  ASSERT_EQ(wk_verify("decalage", 5, 4, &r), WK_OK);
  EXPECT_NE(take(r).find("seed 5, cases 4"), std::string::npos);
  EXPECT_EQ(wk_verify("nope", 5, 4, &r), WK_INVALID_ARGUMENT);
  EXPECT_EQ(r, nullptr);
}
