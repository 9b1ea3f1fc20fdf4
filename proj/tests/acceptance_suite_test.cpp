#include <map>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "weaklie/acceptance.hpp"

using namespace weaklie;

namespace {

/// Checks that reproduce a misprint in the source material and are expected
/// to fail; every other check must hold.
const std::map<std::string, std::set<std::string>>& known_failures() {
  static const std::map<std::string, std::set<std::string>> m = {
      {"AC-5", {"def3 holds for {T, xi2, xi3, xi4}", "L_xi3 L_xi4 f_33 - sin x2 cos x2 eps1 = 0"}},
      {"AC-7", {"printed def3 scalar passes def3"}},
      {"AC-8", {"structure functions match the table entrywise"}},
      {"AC-9", {"tau_12 + xi (xi eta_,1 - eta xi_,1) = 0"}},
      {"AC-12", {"second covariant derivative identity as printed"}},
  };
  return m;
}

class Criterion : public ::testing::TestWithParam<std::string> {};

}  // namespace

TEST_P(Criterion, OnlyDocumentedChecksFail) {
  const std::string id = GetParam();
  CriterionResult r = run_criterion(id, NumericContext{});
  ASSERT_FALSE(r.checks.empty());
  auto it = known_failures().find(id);
  std::set<std::string> expected = it == known_failures().end() ? std::set<std::string>{} : it->second;
  std::set<std::string> failed;
  for (const auto& c : r.checks)
    if (!c.informational && !c.pass) failed.insert(c.label);
  EXPECT_EQ(failed, expected) << r.observed();
  EXPECT_EQ(r.pass(), expected.empty());
}

INSTANTIATE_TEST_SUITE_P(Acceptance, Criterion, ::testing::ValuesIn(criterion_ids()),
                         [](const ::testing::TestParamInfo<std::string>& info) {
                           std::string s = info.param;
                           for (auto& ch : s)
                             if (ch == '-') ch = '_';
                           return s;
                         });

TEST(Acceptance, UnknownCriterion) { EXPECT_THROW(run_criterion("AC-0", NumericContext{}), Error); }
