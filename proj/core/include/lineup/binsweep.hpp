#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "lineup/lineup.hpp"
#include "lineup/metrics.hpp"

namespace lineup {

// Inclusive range of bin counts.
struct BinRange {
  std::size_t first = 2;
  std::size_t last = 10;

  std::size_t size() const { return last >= first ? last - first + 1 : 0; }
};

// Parses "2:10" or a single "5".
BinRange parse_bin_range(std::string_view text);

using BinPair = std::pair<std::size_t, std::size_t>;  // (p, q)

struct SweepOptimum {
  std::size_t p = 0;
  std::size_t q = 0;
  double delta = 0.0;
};

struct SweepResult {
  BinRange p_range;
  BinRange q_range;
  std::map<BinPair, double> grid;       // delta per evaluated cell
  std::map<BinPair, std::string> skipped;  // cell -> error message
  SweepOptimum best;                    // max delta, smallest (p, q) on ties
  SweepOptimum worst;                   // min delta, smallest (p, q) on ties
};

// delta_lineup under BN(p, q) for every cell of p_range x q_range. Cells
// whose distances fail are recorded in `skipped` instead of aborting.
SweepResult sweep_bins(const Lineup& lineup, BinRange p_range = {},
                       BinRange q_range = {},
                       const VariableSelection& vars = {});

// argmax of the default 2..10 x 2..10 sweep. Throws PreconditionError when
// every cell was skipped.
BinPair optimal_bins(const Lineup& lineup, const VariableSelection& vars = {});
BinPair optimal_bins(const SweepResult& sweep);

}  // namespace lineup
