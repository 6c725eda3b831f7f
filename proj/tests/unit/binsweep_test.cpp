#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lineup/binsweep.hpp"
#include "lineup/error.hpp"
#include "lineup/inference.hpp"
#include "lineup/nullgen.hpp"

namespace lineup {
namespace {

Lineup linear_lineup(std::uint64_t seed, std::size_t m = 8) {
  const Dataset d = testing::linear_data(60, 2.0, 0.3, seed);
  return assemble_lineup(d, generate_nulls(d, NullMechanism::permutation("y"), m - 1, seed),
                         seed, PlotType::scatter, "");
}

TEST(BinRange, Parse) {
  const auto r = parse_bin_range("2:10");
  EXPECT_EQ(r.first, 2u);
  EXPECT_EQ(r.last, 10u);
  EXPECT_EQ(r.size(), 9u);
  EXPECT_EQ(parse_bin_range("5").size(), 1u);
  EXPECT_THROW(parse_bin_range("a:3"), ParseError);
  EXPECT_THROW(parse_bin_range("4:"), ParseError);
  EXPECT_THROW(parse_bin_range("0:3"), PreconditionError);
  EXPECT_THROW(parse_bin_range("6:3"), PreconditionError);
}

TEST(Sweep, GridMatchesDirectDifficulty) {
  const Lineup l = linear_lineup(4);
  const auto s = sweep_bins(l, {2, 4}, {3, 5});
  ASSERT_EQ(s.grid.size(), 9u);
  EXPECT_TRUE(s.skipped.empty());
  for (const auto& [cell, delta] : s.grid) {
    const auto r = difficulty(mean_distances(l, MetricKind::binned(cell.first, cell.second)));
    EXPECT_EQ(delta, r.delta);
  }
}

TEST(Sweep, BestAndWorstAreExtremesWithSmallestTieBreak) {
  const Lineup l = linear_lineup(9);
  const auto s = sweep_bins(l);
  ASSERT_EQ(s.grid.size(), 81u);
  for (const auto& [cell, delta] : s.grid) {
    EXPECT_LE(delta, s.best.delta);
    EXPECT_GE(delta, s.worst.delta);
    if (delta == s.best.delta) {
      EXPECT_LE(std::make_pair(s.best.p, s.best.q), cell);
    }
    if (delta == s.worst.delta) {
      EXPECT_LE(std::make_pair(s.worst.p, s.worst.q), cell);
    }
  }
  EXPECT_EQ(optimal_bins(s), (BinPair{s.best.p, s.best.q}));
  EXPECT_EQ(optimal_bins(l), optimal_bins(s));
}

TEST(Sweep, IdenticalPanelsTieAtSmallestCell) {
  const Dataset d = testing::xy({0, 1, 2, 3}, {1, 0, 3, 2});
  const Lineup l({d, d, d}, 1, 0, PlotType::scatter, "");
  const auto s = sweep_bins(l, {2, 4}, {2, 4});
  EXPECT_EQ(s.best.p, 2u);
  EXPECT_EQ(s.best.q, 2u);
  EXPECT_EQ(s.best.delta, 0.0);
}

TEST(Sweep, FailingCellsAreSkipped) {
  const Dataset d = testing::xy({0, 1, 2}, {0, 1, 2});
  const Lineup two({d, d}, 1, 0, PlotType::scatter, "");
  const auto s = sweep_bins(two, {2, 3}, {2, 2});
  EXPECT_TRUE(s.grid.empty());
  EXPECT_EQ(s.skipped.size(), 2u);
  EXPECT_THROW(optimal_bins(s), PreconditionError);
}

}  // namespace
}  // namespace lineup
