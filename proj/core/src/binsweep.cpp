#include "lineup/binsweep.hpp"

#include <charconv>
#include <vector>

#include <fmt/format.h>

#include "lineup/error.hpp"
#include "lineup/inference.hpp"
#include "parallel.hpp"

namespace lineup {
namespace {

std::size_t parse_count(std::string_view text) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(fmt::format("'{}' is not a bin count", text));
  }
  return value;
}

}  // namespace

BinRange parse_bin_range(std::string_view text) {
  const auto colon = text.find(':');
  BinRange range;
  if (colon == std::string_view::npos) {
    range.first = range.last = parse_count(text);
  } else {
    range.first = parse_count(text.substr(0, colon));
    range.last = parse_count(text.substr(colon + 1));
  }
  if (range.first == 0 || range.last < range.first) {
    throw PreconditionError(fmt::format("invalid bin range '{}'", text));
  }
  return range;
}

SweepResult sweep_bins(const Lineup& lineup, BinRange p_range,
                       BinRange q_range, const VariableSelection& vars) {
  if (p_range.size() == 0 || q_range.size() == 0 || p_range.first == 0 ||
      q_range.first == 0) {
    throw PreconditionError("empty or zero-based bin range");
  }
  std::vector<BinPair> cells;
  for (std::size_t p = p_range.first; p <= p_range.last; ++p) {
    for (std::size_t q = q_range.first; q <= q_range.last; ++q) {
      cells.emplace_back(p, q);
    }
  }
  std::vector<double> deltas(cells.size(), 0.0);
  std::vector<std::string> errors(cells.size());
  detail::parallel_for(cells.size(), [&](std::size_t k) {
    MetricKind metric = MetricKind::binned(cells[k].first, cells[k].second);
    metric.vars = vars;
    try {
      deltas[k] = difficulty(mean_distances(lineup, metric)).delta;
    } catch (const Error& e) {
      errors[k] = e.what();
      if (errors[k].empty()) errors[k] = "error";
    }
  });

  SweepResult result;
  result.p_range = p_range;
  result.q_range = q_range;
  bool any = false;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (!errors[k].empty()) {
      result.skipped.emplace(cells[k], errors[k]);
      continue;
    }
    result.grid.emplace(cells[k], deltas[k]);
    const SweepOptimum here{cells[k].first, cells[k].second, deltas[k]};
    // Cells arrive in (p, q) lexicographic order, so strict comparisons keep
    // the smallest (p, q) among ties.
    if (!any || deltas[k] > result.best.delta) result.best = here;
    if (!any || deltas[k] < result.worst.delta) result.worst = here;
    any = true;
  }
  return result;
}

BinPair optimal_bins(const SweepResult& sweep) {
  if (sweep.grid.empty()) {
    throw PreconditionError("every bin combination failed");
  }
  return {sweep.best.p, sweep.best.q};
}

BinPair optimal_bins(const Lineup& lineup, const VariableSelection& vars) {
  return optimal_bins(sweep_bins(lineup, {}, {}, vars));
}

}  // namespace lineup
