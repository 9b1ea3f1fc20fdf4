#include <set>

#include <gtest/gtest.h>

#include "support.hpp"
#include "weaklie/catalog.hpp"

using namespace weaklie;
using weaklie::testing::zero;

namespace {

ExampleParams required_defaults(const CatalogEntry& e) {
  ExampleParams p;
  for (const auto& r : e.required) p[r] = "4";
  return p;
}

}  // namespace

TEST(Catalog, EntriesAreUniqueAndDescribed) {
  std::set<std::string> names;
  for (const auto& e : catalog_entries()) {
    EXPECT_TRUE(names.insert(e.name).second) << e.name;
    EXPECT_FALSE(e.description.empty()) << e.name;
  }
  EXPECT_GE(names.size(), 20u);
}

TEST(Catalog, EveryEntryInstantiatesConsistently) {
  NumericContext ctx;
  for (const auto& e : catalog_entries()) {
    SCOPED_TRACE(e.name);
    ExampleSpec s = instantiate(e.name, required_defaults(e));
    EXPECT_EQ(s.name, e.name);
    EXPECT_TRUE(s.metric || s.form || !s.scalars.empty() || s.frame.size() > 0);
    for (int i = 0; i < s.frame.size(); ++i) EXPECT_EQ(s.frame[i].dim(), s.chart.dim());
    if (s.metric) {
      EXPECT_EQ(s.metric->dim(), s.chart.dim());
      EXPECT_NO_THROW(s.metric->require_nondegenerate(s.chart, ctx));
      EXPECT_EQ(rank_and_signature(s.metric->tensor(), s.chart, ctx).rank, s.chart.dim());
    }
    if (s.form) EXPECT_TRUE(zero(*s.form - permute(*s.form, {1, 0}), s.chart));
    for (const auto& [name, f] : s.scalars) EXPECT_FALSE(f.is_zero()) << name;
  }
}

TEST(Catalog, KasnerExponents) {
  ExampleSpec k = instantiate("kasner");
  ASSERT_TRUE(k.metric);
  EXPECT_EQ(k.chart.dim(), 4);
  EXPECT_EQ((*k.metric)(1, 1), -pow(Expr::coord(0), Rational(4, 3)));
  EXPECT_NO_THROW(instantiate("kasner", {{"p1", "1"}, {"p2", "0"}, {"p3", "0"}}));
  EXPECT_THROW(instantiate("kasner", {{"p1", "1/2"}, {"p2", "1/2"}, {"p3", "0"}}), InvariantViolation);
}

TEST(Catalog, RigidBodyFrame) {
  ExampleSpec r = instantiate("rigid_body");
  EXPECT_EQ(r.chart.dim(), 4);
  EXPECT_EQ(r.frame.size(), 7);
  EXPECT_EQ(r.frame.names.front(), "T");
  EXPECT_EQ(r.structure_coordinates, std::set<int>{0});
}

TEST(Catalog, ParameterErrors) {
  EXPECT_THROW(instantiate("no_such_example"), UnknownExample);
  EXPECT_THROW(instantiate("minkowski"), MissingParameter);
  EXPECT_THROW(instantiate("translations"), MissingParameter);
  EXPECT_THROW(instantiate("kasner", {{"q", "1"}}), Error);
  EXPECT_THROW(instantiate("minkowski", {{"n", "9"}}), Error);
  EXPECT_THROW(instantiate("minkowski", {{"n", "x"}}), Error);
}

TEST(Catalog, OverridesReplaceFunctions) {
  ExampleSpec k = instantiate("kasner", {{"f", "x0^2"}});
  EXPECT_EQ(k.frame[1][1], Expr::coord(0) * Expr::coord(0));
  ExampleSpec m = instantiate("minkowski", {{"n", "3"}});
  EXPECT_EQ(m.chart.dim(), 3);
  EXPECT_EQ(m.frame.size(), 3);
}

TEST(Catalog, FlatSpaces) {
  ExampleSpec m = instantiate("minkowski", {{"n", "4"}});
  RankSignature r = rank_and_signature(m.metric->tensor(), m.chart, {});
  EXPECT_EQ(r.plus, 1);
  EXPECT_EQ(r.minus, 3);
  ExampleSpec e = instantiate("euclidean", {{"n", "5"}});
  EXPECT_EQ(rank_and_signature(e.metric->tensor(), e.chart, {}).plus, 5);
}

TEST(Catalog, DegenerateFormHasRankThree) {
  ExampleSpec s = instantiate("extended_motion_metric");
  ASSERT_TRUE(s.form);
  EXPECT_EQ(rank_and_signature(*s.form, s.chart, {}).rank, 3);
}

TEST(Catalog, AngleCoordinatesAvoidPoles) {
  for (const char* name : {"sss_frame", "weak_sss", "frw_substrate"}) {
    ExampleSpec s = instantiate(name);
    Interval box = s.chart.interval(2);
    EXPECT_GE(box.lo, 0.3) << name;
    EXPECT_LE(box.hi, 2.8) << name;
  }
}
