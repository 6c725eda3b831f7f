#include "lineup/inference.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "lineup/error.hpp"
#include "lineup/random.hpp"
#include "parallel.hpp"

namespace lineup {

DistanceMatrix pairwise_distances(std::span<const Dataset> panels,
                                  const MetricKind& metric) {
  const std::size_t m = panels.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> values(pairs.size());
  detail::parallel_for(pairs.size(), [&](std::size_t k) {
    values[k] = distance(panels[pairs[k].first], panels[pairs[k].second], metric);
  });
  DistanceMatrix out(m);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out.set(pairs[k].first, pairs[k].second, values[k]);
  }
  return out;
}

MeanDistances mean_distances(const DistanceMatrix& distances,
                             std::size_t true_position) {
  const std::size_t m = distances.size();
  if (m < 3) {
    throw PreconditionError(
        fmt::format("mean distances need m >= 3 panels, got {}", m));
  }
  if (true_position < 1 || true_position > m) {
    throw PreconditionError("true position outside the lineup");
  }
  const std::size_t t = true_position - 1;
  MeanDistances md;
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (k != t) sum += distances.at(t, k);
  }
  md.d_true = sum / static_cast<double>(m - 1);
  md.d_null.reserve(m - 1);
  for (std::size_t j = 0; j < m; ++j) {
    if (j == t) continue;
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k != t && k != j) s += distances.at(j, k);
    }
    md.d_null.push_back(s / static_cast<double>(m - 2));
  }
  return md;
}

MeanDistances mean_distances(const Lineup& lineup, const MetricKind& metric) {
  if (lineup.m() < 3) {
    throw PreconditionError(
        fmt::format("mean distances need m >= 3 panels, got {}", lineup.m()));
  }
  validate_metric(metric, lineup.true_data());
  return mean_distances(pairwise_distances(lineup.panels(), metric),
                        lineup.true_position());
}

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::easy ? "easy" : "difficult";
}

DifficultyReport difficulty(const MeanDistances& md) {
  if (md.d_null.empty()) {
    throw PreconditionError("difficulty needs at least one null mean distance");
  }
  DifficultyReport report;
  report.mean_distances = md;
  report.delta = md.d_true - *std::max_element(md.d_null.begin(), md.d_null.end());
  report.gamma = static_cast<std::size_t>(
      std::count_if(md.d_null.begin(), md.d_null.end(),
                    [&](double d) { return d > md.d_true; }));
  report.verdict = report.delta > 0.0 ? Verdict::easy : Verdict::difficult;
  return report;
}

double replicate_mean_distance(const Dataset& true_data,
                               const NullMechanism& mechanism,
                               const MetricKind& metric, std::size_t m,
                               std::uint64_t replicate_seed) {
  const Dataset pseudo_true =
      simulate_null_dataset(true_data, mechanism, derive_seed(replicate_seed, 0));
  const auto nulls = generate_nulls(pseudo_true, mechanism, m - 2, replicate_seed);
  double sum = 0.0;
  for (const auto& null : nulls) sum += distance(pseudo_true, null, metric);
  return sum / static_cast<double>(nulls.size());
}

EmpiricalDistribution empirical_distribution(const Dataset& true_data,
                                             const NullMechanism& mechanism,
                                             const MetricKind& metric,
                                             std::size_t m, std::size_t N,
                                             std::uint64_t seed) {
  if (N < 1) throw PreconditionError("empirical distribution needs N >= 1");
  if (m < 3) throw PreconditionError("empirical distribution needs m >= 3");
  validate_mechanism(mechanism, true_data);
  validate_metric(metric, true_data);

  EmpiricalDistribution dist;
  dist.m = m;
  dist.mechanism = mechanism;
  dist.metric = metric;
  dist.seed = seed;
  dist.samples.resize(N);
  detail::parallel_for(N, [&](std::size_t r) {
    dist.samples[r] = replicate_mean_distance(true_data, mechanism, metric, m,
                                              derive_seed(seed, r));
  });
  return dist;
}

}  // namespace lineup
