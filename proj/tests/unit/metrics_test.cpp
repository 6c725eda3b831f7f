#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lineup/error.hpp"
#include "lineup/metrics.hpp"
#include "oracles.hpp"

namespace lineup {
namespace {

using testing::xy;

TEST(BinIndex, EdgesAreLeftClosedLastBinClosed) {
  const Interval r{0.0, 4.0};
  EXPECT_EQ(bin_index(0.0, r, 4), 0u);
  EXPECT_EQ(bin_index(0.999, r, 4), 0u);
  EXPECT_EQ(bin_index(1.0, r, 4), 1u);
  EXPECT_EQ(bin_index(3.0, r, 4), 3u);
  EXPECT_EQ(bin_index(4.0, r, 4), 3u);
  EXPECT_THROW(bin_index(4.5, r, 4), PreconditionError);
  EXPECT_THROW(bin_index(1.0, r, 0), PreconditionError);
}

TEST(BinIndex, ZeroWidthRangeUsesFirstBin) {
  EXPECT_EQ(bin_index(2.0, Interval{2.0, 2.0}, 5), 0u);
}

TEST(CombinedRange, CoversAllSamples) {
  const std::vector<double> a{1, 5}, b{-2, 3};
  EXPECT_EQ(combined_range({a, b}), (Interval{-2, 5}));
}

TEST(Binned, FigureExampleIsRootFortyTwo) {
  // Counts per cell (x-bin, y-bin) in order (0,0), (0,1), (1,0), (1,1):
  // first panel 5, 0, 0, 1 and second panel 0, 4, 1, 1.
  const Dataset a = xy({0, 0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 1});
  const Dataset b = xy({0, 0, 0, 0, 1, 1}, {1, 1, 1, 1, 0, 1});
  EXPECT_NEAR(dist_binned(a, b, 2, 2), std::sqrt(42.0), 1e-12);
  const auto grid = shared_grid(a, b, 2, 2, "x", "y");
  const auto ca = bin_counts(a, grid, "x", "y");
  EXPECT_EQ(ca.at(0, 0), 5);
  EXPECT_EQ(ca.at(1, 1), 1);
  EXPECT_EQ(ca.total(), 6);
  EXPECT_NEAR(dist_binned(a, b, grid, "x", "y"), std::sqrt(42.0), 1e-12);
}

TEST(Binned, MatchesOracleOnRandomData) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Dataset a = testing::linear_data(40, 1.0, 1.0, s);
    const Dataset b = testing::linear_data(40, -0.5, 1.0, s + 100);
    oracle::Points pa, pb;
    for (std::size_t i = 0; i < 40; ++i) {
      pa.emplace_back(a["x"].values()[i], a["y"].values()[i]);
      pb.emplace_back(b["x"].values()[i], b["y"].values()[i]);
    }
    EXPECT_NEAR(dist_binned(a, b, 5, 3), oracle::binned(pa, pb, 5, 3), 1e-12);
  }
}

TEST(Binned, CategoricalAxisUsesOneBinPerLevel) {
  // p is ignored along the categorical axis.
  const Dataset a({Variable::categorical("g", std::vector<std::string>{"u", "u", "v"}),
                   Variable::continuous("y", {0, 1, 1})});
  const Dataset b({Variable::categorical("g", std::vector<std::string>{"v", "w", "w"}),
                   Variable::continuous("y", {0, 1, 1})});
  // Levels u, v, w; cells (level, y-bin): a = u0 u1 v1, b = v0 w1 w1.
  // Differences: u0 1, u1 1, v0 -1, v1 1, w1 -2 -> sqrt(8).
  EXPECT_NEAR(dist_binned(a, b, 9, 2), std::sqrt(8.0), 1e-12);
}

TEST(Binned, SingleColumnBinsAlongX) {
  const Dataset a({Variable::continuous("x", {0, 0, 1})});
  const Dataset b({Variable::continuous("x", {0, 1, 1})});
  EXPECT_NEAR(distance(a, b, MetricKind::binned(2, 7)), std::sqrt(2.0), 1e-12);
}

TEST(Binned, StructureMismatchThrows) {
  EXPECT_THROW(dist_binned(xy({1, 2}, {1, 2}), xy({1}, {1}), 2, 2), SchemaError);
  EXPECT_THROW(dist_binned(xy({1, 2}, {1, 2}), xy({1, 2}, {1, 2}), 0, 2), PreconditionError);
}

TEST(Boxplot, QuartileGapsAndDistance) {
  // Group a: 1..5 (q 2, 3, 4); group b: 11..15 (q 12, 13, 14).
  const Dataset a = testing::grouped({"a", "a", "a", "a", "a", "b", "b", "b", "b", "b"},
                                     {1, 2, 3, 4, 5, 11, 12, 13, 14, 15});
  const auto gaps = quartile_gaps(a);
  EXPECT_DOUBLE_EQ(gaps[0], 10.0);
  EXPECT_DOUBLE_EQ(gaps[1], 10.0);
  EXPECT_DOUBLE_EQ(gaps[2], 10.0);
  const Dataset b = testing::grouped({"a", "a", "a", "a", "a", "b", "b", "b", "b", "b"},
                                     {1, 2, 3, 4, 5, 1, 2, 3, 4, 5});
  EXPECT_NEAR(dist_boxplot(a, b), std::sqrt(300.0), 1e-12);
}

TEST(Boxplot, NeedsTwoGroups) {
  const Dataset three = testing::grouped({"a", "b", "c"}, {1, 2, 3});
  EXPECT_THROW(dist_boxplot(three, three), SchemaError);
  EXPECT_THROW(validate_metric(MetricKind::boxplot(), three), SchemaError);
}

TEST(Regression, ExactLinesGiveCoefficientGap) {
  const Dataset a = xy({0, 1, 2, 3}, {1, 3, 5, 7});      // 1 + 2x
  const Dataset b = xy({0, 1, 2, 3}, {-1, -1.5, -2, -2.5});  // -1 - 0.5x
  EXPECT_NEAR(dist_regression(a, b, 1), std::hypot(2.0, 2.5), 1e-12);
}

TEST(Regression, BinnedFitsPerStrip) {
  const Dataset d = xy({0, 1, 2, 3, 4, 5}, {0, 1, 2, 10, 8, 6});
  const auto fits = binned_regression(d, "x", "y", 2, Interval{0, 5});
  ASSERT_EQ(fits.size(), 2u);
  EXPECT_NEAR(fits[0].slope, 1.0, 1e-12);
  EXPECT_NEAR(fits[0].intercept, 0.0, 1e-12);
  EXPECT_NEAR(fits[1].slope, -2.0, 1e-12);
  EXPECT_NEAR(fits[1].intercept, 16.0, 1e-12);
}

TEST(Regression, SparseStripThrows) {
  const Dataset d = xy({0, 1, 2, 10}, {0, 1, 2, 3});
  EXPECT_THROW(dist_regression(d, d, 2), PreconditionError);
  const Dataset flat = xy({0, 0, 1, 1}, {0, 1, 2, 3});
  EXPECT_THROW(dist_regression(flat, flat, 2), PreconditionError);
}

TEST(Separation, HandComputedVectors) {
  // Two clusters on a line: a at 0 and 1, b at 4 and 6.
  const Dataset d({Variable::categorical("g", std::vector<std::string>{"a", "a", "b", "b"}),
                   Variable::continuous("x", {0, 1, 4, 6})});
  const auto ms = separation_vector(d, SeparationMode::min);
  EXPECT_EQ(ms.values, (std::vector<double>{3, 3}));
  const auto as = separation_vector(d, SeparationMode::avg);
  EXPECT_DOUBLE_EQ(as.values[0], (4 + 6 + 3 + 5) / 4.0);
  EXPECT_DOUBLE_EQ(as.values[1], (4 + 6 + 3 + 5) / 4.0);
  const auto cms = separation_vector(d, SeparationMode::cluster_mean);
  EXPECT_DOUBLE_EQ(cms.values[0], 4.5);
}

TEST(Separation, PairsComponentsByLabel) {
  const Dataset a({Variable::categorical("g", std::vector<std::string>{"a", "b", "a", "b"}),
                   Variable::continuous("x", {0, 2, 0, 2})});
  // Same data with levels first seen in the other order.
  const Dataset b({Variable::categorical("g", std::vector<std::string>{"b", "a", "b", "a"}),
                   Variable::continuous("x", {2, 0, 2, 0})});
  EXPECT_EQ(dist_separation(a, b, SeparationMode::avg), 0.0);
}

TEST(Separation, NeedsTwoClustersAndCoordinates) {
  const Dataset one({Variable::categorical("g", std::vector<std::string>{"a", "a"}),
                     Variable::continuous("x", {0, 1})});
  EXPECT_THROW(separation_vector(one, SeparationMode::min), SchemaError);
  const Dataset three({Variable::categorical("g", std::vector<std::string>{"a", "b"}),
                       Variable::continuous("x", {0, 1}), Variable::continuous("y", {0, 1}),
                       Variable::continuous("z", {0, 1})});
  EXPECT_THROW(separation_vector(three, SeparationMode::min), SchemaError);
  VariableSelection vars{"x", "z", ""};
  EXPECT_NO_THROW(separation_vector(three, SeparationMode::min, vars));
}

TEST(MetricKind, ParseDescribeRoundTrip) {
  const auto bn = parse_metric(R"({"kind":"BN","p":8,"q":8})");
  EXPECT_EQ(describe(bn), "BN(8,8)");
  EXPECT_EQ(parse_metric(metric_to_json(bn)), bn);
  const auto rg = parse_metric(R"({"kind":"RG","b":2,"x":"a","y":"b"})");
  EXPECT_EQ(describe(rg), "RG(2)");
  EXPECT_EQ(rg.vars.x, "a");
  EXPECT_EQ(parse_metric(metric_to_json(rg)), rg);
  for (const char* k : {"BX", "MS", "AS", "CMS"}) {
    const auto m = parse_metric(std::string(R"({"kind":")") + k + "\"}");
    EXPECT_EQ(describe(m), k);
    EXPECT_EQ(parse_metric(metric_to_json(m)), m);
  }
}

TEST(MetricKind, ParseErrors) {
  EXPECT_THROW(parse_metric(R"({"kind":"BN","p":0,"q":2})"), PreconditionError);
  EXPECT_THROW(parse_metric(R"({"kind":"BN","p":2})"), SchemaError);
  EXPECT_THROW(parse_metric(R"({"kind":"RG","b":0})"), PreconditionError);
  EXPECT_THROW(parse_metric(R"({"kind":"KL"})"), SchemaError);
  EXPECT_THROW(parse_metric("[1,2]"), SchemaError);
}

TEST(Distance, DispatchMatchesDirectCalls) {
  const Dataset a = testing::cluster_data(30, 3, 0.5, 1);
  const Dataset b = testing::cluster_data(30, 3, 0.5, 2);
  EXPECT_EQ(distance(a, b, MetricKind::min_separation()),
            dist_separation(a, b, SeparationMode::min));
  EXPECT_EQ(distance(a, b, MetricKind::cluster_mean_separation()),
            dist_separation(a, b, SeparationMode::cluster_mean));
  VariableSelection v{"x", "y", ""};
  MetricKind bn = MetricKind::binned(3, 3);
  bn.vars = v;
  EXPECT_EQ(distance(a, b, bn), dist_binned(a, b, 3, 3, v));
}

}  // namespace
}  // namespace lineup
