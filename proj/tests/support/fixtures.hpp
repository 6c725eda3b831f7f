#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "lineup/dataset.hpp"
#include "lineup/random.hpp"

namespace lineup::testing {

inline Dataset xy(std::vector<double> x, std::vector<double> y) {
  return Dataset({Variable::continuous("x", std::move(x)),
                  Variable::continuous("y", std::move(y))});
}

inline Dataset grouped(std::vector<std::string> group, std::vector<double> value) {
  return Dataset({Variable::categorical("group", group),
                  Variable::continuous("value", std::move(value))});
}

// y = slope * x + noise, x ~ N(0, 1), noise ~ N(0, sd^2).
inline Dataset linear_data(std::size_t n, double slope, double sd,
                           std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.normal();
    y[i] = slope * x[i] + sd * rng.normal();
  }
  return xy(std::move(x), std::move(y));
}

// Points around `clusters` centres in the plane, labelled c0, c1, ...; every
// cluster gets at least two points.
inline Dataset cluster_data(std::size_t n, std::size_t clusters, double spread,
                            std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> cx(clusters), cy(clusters);
  for (std::size_t c = 0; c < clusters; ++c) {
    cx[c] = 10.0 * rng.uniform() - 5.0;
    cy[c] = 10.0 * rng.uniform() - 5.0;
  }
  std::vector<std::string> label(n);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i < 2 * clusters ? i % clusters : rng.uniform_index(clusters);
    label[i] = "c" + std::to_string(c);
    x[i] = cx[c] + spread * rng.normal();
    y[i] = cy[c] + spread * rng.normal();
  }
  return Dataset({Variable::categorical("cluster", label),
                  Variable::continuous("x", std::move(x)),
                  Variable::continuous("y", std::move(y))});
}

// Two groups "a"/"b" with at least two observations each.
inline Dataset two_group_data(std::size_t n, double shift, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> group(n);
  std::vector<double> value(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool b = i < 4 ? i % 2 == 1 : rng.uniform() < 0.5;
    group[i] = b ? "b" : "a";
    value[i] = rng.normal() * (1.0 + rng.uniform()) + (b ? shift : 0.0);
  }
  return grouped(std::move(group), std::move(value));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("lineup-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace lineup::testing
