#include <gtest/gtest.h>

#include <json.hpp>

#include "fixtures.hpp"
#include "lineup/error.hpp"
#include "lineup/lineup.hpp"
#include "lineup/nullgen.hpp"

namespace lineup {
namespace {

using testing::xy;

std::vector<Dataset> constant_nulls(std::size_t count) {
  std::vector<Dataset> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(xy({1, 2, 3}, {static_cast<double>(i), 0, 0}));
  }
  return out;
}

TEST(Lineup, AssemblePlacesTrueDataAtDrawnPosition) {
  const Dataset truth = xy({1, 2, 3}, {9, 9, 9});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Lineup l = assemble_lineup(truth, constant_nulls(19), seed,
                                     PlotType::scatter, "q");
    ASSERT_EQ(l.m(), 20u);
    EXPECT_EQ(l.true_position(), draw_true_position(20, seed));
    EXPECT_EQ(l.true_data(), truth);
    // Nulls keep their order around the true panel.
    std::size_t k = 0;
    for (std::size_t pos : l.null_positions()) {
      EXPECT_EQ(l.panel(pos)["y"].values()[0], static_cast<double>(k++));
    }
  }
}

TEST(Lineup, TruePositionIsRoughlyUniform) {
  std::vector<int> hits(5, 0);
  for (std::uint64_t seed = 0; seed < 5000; ++seed) ++hits[draw_true_position(5, seed) - 1];
  for (int h : hits) EXPECT_NEAR(h, 1000, 150);
}

TEST(Lineup, Validation) {
  const Dataset truth = xy({1, 2, 3}, {9, 9, 9});
  EXPECT_THROW(assemble_lineup(truth, {}, 1, PlotType::scatter, ""), PreconditionError);
  EXPECT_THROW(assemble_lineup(truth, {xy({1, 2}, {1, 2})}, 1, PlotType::scatter, ""),
               SchemaError);
  EXPECT_THROW(Lineup({truth, truth}, 3, 0, PlotType::scatter, ""), PreconditionError);
  EXPECT_THROW(Lineup({truth, truth}, 0, 0, PlotType::scatter, ""), PreconditionError);
  const Lineup l({truth, truth}, 2, 0, PlotType::scatter, "");
  EXPECT_THROW(l.panel(3), PreconditionError);
}

TEST(Lineup, JsonRoundTrip) {
  const Dataset truth(
      {Variable::categorical("g", std::vector<std::string>{"b", "a", "b"}),
       Variable::continuous("v", {0.1, -2.5, 1e10})});
  const auto nulls = generate_nulls(truth, NullMechanism::permutation("g"), 4, 3);
  const Lineup l = assemble_lineup(truth, nulls, 3, PlotType::boxplot_pair, "Which?");
  EXPECT_EQ(lineup_from_json(lineup_to_json(l)), l);
}

TEST(Lineup, ObserverJsonWithholdsPositionAndSeed) {
  const Lineup l = assemble_lineup(xy({1, 2, 3}, {9, 9, 9}), constant_nulls(5), 8,
                                   PlotType::scatter, "q");
  const auto doc = nlohmann::json::parse(lineup_to_json(l, Audience::observer));
  EXPECT_FALSE(doc.contains("true_position"));
  EXPECT_FALSE(doc.contains("seed"));
  EXPECT_EQ(doc["m"], 6);
  EXPECT_THROW(lineup_from_json(lineup_to_json(l, Audience::observer)), Error);
}

TEST(Lineup, PlotTypeNames) {
  for (auto t : {PlotType::scatter, PlotType::scatter_with_regression, PlotType::boxplot_pair,
                 PlotType::projection_1d, PlotType::projection_2d}) {
    EXPECT_EQ(parse_plot_type(to_string(t)), t);
  }
  EXPECT_THROW(parse_plot_type("pie"), SchemaError);
}

TEST(DatasetJson, RoundTrip) {
  const Dataset d({Variable::categorical("g", {"z", "y"}, {1, 0, 1}),
                   Variable::continuous("v", {1, 2, 3})});
  EXPECT_EQ(dataset_from_json(dataset_to_json(d)), d);
}

}  // namespace
}  // namespace lineup
