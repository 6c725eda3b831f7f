#pragma once

#include <span>
#include <vector>

namespace lineup {

// Empirical quantile of sorted data with linear interpolation between order
// statistics at 1-based position 1 + (n - 1) * prob. Every quartile in the
// library (boxplot distance and boxplot glyphs) goes through this routine.
double quantile_sorted(std::span<const double> sorted, double prob);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

Quartiles quartiles(std::span<const double> values);

// Tukey box: whiskers reach the most extreme points within 1.5 * IQR of the
// box, anything beyond is an outlier.
struct BoxSummary {
  Quartiles box;
  double lower_whisker = 0.0;
  double upper_whisker = 0.0;
  std::vector<double> outliers;  // ascending
};

BoxSummary box_summary(std::span<const double> values);

}  // namespace lineup
