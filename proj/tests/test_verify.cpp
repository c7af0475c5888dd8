#include <gtest/gtest.h>

#include "support.hpp"
#include "twistorgh/catalog.hpp"
#include "twistorgh/verify.hpp"

using namespace twistorgh;
using namespace testing_support;

namespace {

std::string describe(const SuiteResult& s) {
  std::string out = s.name;
  for (std::size_t i = 0; i < s.failures.size() && i < 3; ++i)
    out += "\n  " + s.failures[i].identity + " at " + s.failures[i].point + ": " + std::to_string(s.failures[i].defect);
  return out;
}

}  // namespace

class VerifyCatalog : public ::testing::TestWithParam<std::string> {};

TEST_P(VerifyCatalog, AllSuitesPass) {
  const auto e = build(GetParam());
  VerifyConfig cfg;
  cfg.plan = {2, 8, 1};
  const auto suites = run_verify(*e.chart, cfg);
  EXPECT_EQ(suites.size(), 6u);
  for (const auto& s : suites) {
    EXPECT_TRUE(s.passed()) << describe(s);
    EXPECT_GT(s.checks, 0) << s.name;
    EXPECT_LE(s.max_defect, s.tolerance) << s.name;
  }
}

INSTANTIATE_TEST_SUITE_P(Catalog, VerifyCatalog, ::testing::ValuesIn(catalog_names()),
                         [](const auto& info) { return info.param; });

TEST(VerifyStandardMaps, DependOnComplexStructure) {
  EXPECT_EQ(standard_fibermaps(*build("flat").chart).size(), 7u);
}
