#include "lineup/quantile.hpp"

#include <algorithm>
#include <cmath>

#include "lineup/error.hpp"

namespace lineup {

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) {
    throw PreconditionError("quantile of an empty sample");
  }
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw PreconditionError("quantile probability outside [0, 1]");
  }
  const double h = static_cast<double>(sorted.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted[lo];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

Quartiles quartiles(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {quantile_sorted(sorted, 0.25), quantile_sorted(sorted, 0.5),
          quantile_sorted(sorted, 0.75)};
}

BoxSummary box_summary(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxSummary out;
  out.box = {quantile_sorted(sorted, 0.25), quantile_sorted(sorted, 0.5),
             quantile_sorted(sorted, 0.75)};
  const double reach = 1.5 * (out.box.q3 - out.box.q1);
  const double lo_fence = out.box.q1 - reach;
  const double hi_fence = out.box.q3 + reach;
  out.lower_whisker = out.box.q1;
  out.upper_whisker = out.box.q3;
  bool have_lo = false;
  for (double v : sorted) {
    if (v < lo_fence || v > hi_fence) {
      out.outliers.push_back(v);
      continue;
    }
    if (!have_lo) {
      out.lower_whisker = std::min(v, out.box.q1);
      have_lo = true;
    }
    out.upper_whisker = std::max(v, out.box.q3);
  }
  return out;
}

}  // namespace lineup
