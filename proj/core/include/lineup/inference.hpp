#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lineup/dataset.hpp"
#include "lineup/lineup.hpp"
#include "lineup/metrics.hpp"
#include "lineup/nullgen.hpp"

namespace lineup {

// Symmetric m x m matrix of panel-to-panel distances, panel order.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t size)
      : size_(size), values_(size * size, 0.0) {}

  std::size_t size() const { return size_; }
  // 0-based panel indices.
  double at(std::size_t i, std::size_t j) const { return values_[i * size_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * size_ + j] = v;
    values_[j * size_ + i] = v;
  }

 private:
  std::size_t size_;
  std::vector<double> values_;
};

// Pairs are evaluated in parallel; the result does not depend on scheduling.
DistanceMatrix pairwise_distances(std::span<const Dataset> panels,
                                  const MetricKind& metric);

struct MeanDistances {
  double d_true = 0.0;          // true panel vs all m - 1 nulls
  std::vector<double> d_null;   // each null vs the other m - 2 nulls,
                                // in panel order
};

// Requires m >= 3. The true panel is not part of any null's peer set.
MeanDistances mean_distances(const Lineup& lineup, const MetricKind& metric);
MeanDistances mean_distances(const DistanceMatrix& distances,
                             std::size_t true_position);

enum class Verdict { easy, difficult };
std::string_view to_string(Verdict verdict);

struct DifficultyReport {
  double delta = 0.0;        // d_true - max d_null
  std::size_t gamma = 0;     // #nulls with d_null > d_true
  MeanDistances mean_distances;
  Verdict verdict = Verdict::difficult;  // easy iff delta > 0
};

DifficultyReport difficulty(const MeanDistances& md);

struct EmpiricalDistribution {
  std::vector<double> samples;
  std::size_t m = 0;
  NullMechanism mechanism;
  MetricKind metric;
  std::uint64_t seed = 0;

  std::size_t N() const { return samples.size(); }
};

// N replicates of: draw a pseudo-true null from true_data, draw m - 2 nulls
// from the pseudo-true, record the mean pseudo-true-to-null distance.
// Replicate r runs on derive_seed(seed, r) and replicates run in parallel.
EmpiricalDistribution empirical_distribution(const Dataset& true_data,
                                             const NullMechanism& mechanism,
                                             const MetricKind& metric,
                                             std::size_t m, std::size_t N,
                                             std::uint64_t seed);

// Mean distance of the pseudo-true panel in one replicate.
double replicate_mean_distance(const Dataset& true_data,
                               const NullMechanism& mechanism,
                               const MetricKind& metric, std::size_t m,
                               std::uint64_t replicate_seed);

}  // namespace lineup
