#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lineup/dataset.hpp"

namespace lineup {

// How null datasets are produced from observed data.
//
//   permutation               shuffle `target`, every other column fixed
//   simulate_null_regression  refit `target` under the null model
//                             target ~ 1 + covariates and redraw it from
//                             Normal(fitted, sigma2_hat); with no covariates
//                             this is the intercept-only model
//   simulate_normal           redraw `target` i.i.d. from Normal(mean, sd^2);
//                             mean/sd default to the sample moments
struct NullMechanism {
  enum class Kind { permutation, simulate_null_regression, simulate_normal };

  Kind kind = Kind::permutation;
  std::string target;
  std::vector<std::string> covariates;
  std::optional<double> mean;
  std::optional<double> sd;
  std::uint64_t seed = 0;

  static NullMechanism permutation(std::string target, std::uint64_t seed = 0);
  static NullMechanism null_regression(std::string response,
                                       std::vector<std::string> covariates = {},
                                       std::uint64_t seed = 0);
  static NullMechanism normal(std::string target, std::uint64_t seed = 0);

  friend bool operator==(const NullMechanism&, const NullMechanism&) = default;
};

std::string_view to_string(NullMechanism::Kind kind);

// {"kind":"permutation","target":"group","seed":42}; simulate_null_regression
// also accepts "response" for the target and an optional "covariates" array.
NullMechanism parse_mechanism(std::string_view json_text);
std::string mechanism_to_json(const NullMechanism& mechanism);

// Throws SchemaError / PreconditionError when the mechanism cannot act on data.
void validate_mechanism(const NullMechanism& mechanism, const Dataset& data);

// Fisher-Yates shuffle of one column.
Dataset permute_variable(const Dataset& data, std::string_view target,
                         std::uint64_t seed);

struct InterceptFit {
  double beta0_hat = 0.0;
  double sigma2_hat = 0.0;
};

// Intercept-only fit: sample mean and unbiased (n - 1) variance.
InterceptFit fit_null_regression(const Dataset& data, std::string_view response);

struct LeastSquaresFit {
  std::vector<double> coefficients;  // intercept first, then covariates
  std::vector<double> fitted;
  double sigma2_hat = 0.0;           // RSS / (n - parameters)
};

LeastSquaresFit fit_least_squares(const Dataset& data, std::string_view response,
                                  const std::vector<std::string>& covariates);

Dataset simulate_null_dataset(const Dataset& data,
                              const NullMechanism& mechanism,
                              std::uint64_t seed);

// count independent nulls; null i (0-based) uses derive_seed(seed, i + 1).
std::vector<Dataset> generate_nulls(const Dataset& data,
                                    const NullMechanism& mechanism,
                                    std::size_t count, std::uint64_t seed);

}  // namespace lineup
