#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lineup/dataset.hpp"

namespace lineup {

// Closed interval; zero width is allowed (constant data).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double v) const { return v >= lo && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Smallest interval covering every value of all the given samples.
Interval combined_range(std::initializer_list<std::span<const double>> samples);

// Equal-width bins over `range`, left-closed and right-open except the last,
// which is closed. A zero-width range puts every value in bin 0.
std::size_t bin_index(double value, const Interval& range, std::size_t bins);

struct BinGrid {
  std::size_t p = 1;  // bins along x
  std::size_t q = 1;  // bins along y
  Interval range_x;
  Interval range_y;
};

class CountMatrix {
 public:
  CountMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), counts_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  long& at(std::size_t i, std::size_t j) { return counts_[i * cols_ + j]; }
  long at(std::size_t i, std::size_t j) const { return counts_[i * cols_ + j]; }
  long total() const;

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<long> counts_;
};

// Which columns a metric reads. Empty names fall back to defaults:
//   BN  x = first variable, y = second variable (absent for 1-column data)
//   RG  x, y = first and second continuous variables
//   BX  group = first categorical, y = first continuous
//   MS/AS/CMS  group = first categorical; coordinates = the continuous
//       variables (1 or 2), or x (and y) when named
struct VariableSelection {
  std::string x;
  std::string y;
  std::string group;

  friend bool operator==(const VariableSelection&,
                         const VariableSelection&) = default;
};

struct MetricKind {
  enum class Kind { binned, boxplot, regression, min_separation,
                    avg_separation, cluster_mean_separation };

  Kind kind = Kind::binned;
  std::size_t p = 0;  // BN x bins
  std::size_t q = 0;  // BN y bins
  std::size_t b = 0;  // RG vertical bins
  VariableSelection vars;

  static MetricKind binned(std::size_t p, std::size_t q);
  static MetricKind boxplot();
  static MetricKind regression(std::size_t b);
  static MetricKind min_separation();
  static MetricKind avg_separation();
  static MetricKind cluster_mean_separation();

  friend bool operator==(const MetricKind&, const MetricKind&) = default;
};

// Short code: BN, BX, RG, MS, AS, CMS.
std::string_view code(MetricKind::Kind kind);
std::string describe(const MetricKind& metric);  // e.g. "BN(8,8)"

// {"kind":"BN","p":8,"q":8} | {"kind":"RG","b":2} | {"kind":"BX"} |
// {"kind":"MS"} | {"kind":"AS"} | {"kind":"CMS"}, plus optional
// "x", "y", "group" column names.
MetricKind parse_metric(std::string_view json_text);
std::string metric_to_json(const MetricKind& metric);

// ---- binned distance (BN) ------------------------------------------------

// Continuous x and y columns binned on an explicit grid. Throws
// PreconditionError for points outside the grid.
CountMatrix bin_counts(const Dataset& data, const BinGrid& grid,
                       std::string_view x, std::string_view y);

// Grid spanning the combined range of both datasets.
BinGrid shared_grid(const Dataset& a, const Dataset& b, std::size_t p,
                    std::size_t q, std::string_view x, std::string_view y);

// Euclidean distance between count matrices on the shared grid. Categorical
// axes use one bin per level (the union of both datasets' levels), whatever
// p or q say; a dataset with one column is binned along x only.
double dist_binned(const Dataset& a, const Dataset& b, std::size_t p,
                   std::size_t q, const VariableSelection& vars = {});
double dist_binned(const Dataset& a, const Dataset& b, const BinGrid& grid,
                   std::string_view x, std::string_view y);

// ---- boxplot distance (BX) -----------------------------------------------

// |Q1_A - Q1_B|, |med_A - med_B|, |Q3_A - Q3_B| for a two-level group.
std::array<double, 3> quartile_gaps(const Dataset& data,
                                    const VariableSelection& vars = {});
double dist_boxplot(const Dataset& a, const Dataset& b,
                    const VariableSelection& vars = {});

// ---- regression distance (RG) --------------------------------------------

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

// OLS fit of y on x inside each of `bins` vertical strips of `range`.
// Throws PreconditionError when a strip has fewer than 2 points or no spread
// in x.
std::vector<LineFit> binned_regression(const Dataset& data, std::string_view x,
                                       std::string_view y, std::size_t bins,
                                       const Interval& range);
double dist_regression(const Dataset& a, const Dataset& b, std::size_t bins,
                       const VariableSelection& vars = {});

// ---- separation distances (MS, AS, CMS) ----------------------------------

enum class SeparationMode { min, avg, cluster_mean };

struct SeparationVector {
  std::vector<std::string> labels;  // group levels, in level order
  std::vector<double> values;
};

SeparationVector separation_vector(const Dataset& data, SeparationMode mode,
                                   const VariableSelection& vars = {});
double dist_separation(const Dataset& a, const Dataset& b, SeparationMode mode,
                       const VariableSelection& vars = {});

// ---- dispatch ------------------------------------------------------------

// Throws SchemaError if the metric cannot be computed on this structure.
void validate_metric(const MetricKind& metric, const Dataset& data);

// Every metric is reported on the square-root (Euclidean) scale.
double distance(const Dataset& a, const Dataset& b, const MetricKind& metric);

}  // namespace lineup
