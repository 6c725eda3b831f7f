#include "lineup/nullgen.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "json_util.hpp"
#include "lineup/error.hpp"
#include "lineup/random.hpp"

namespace lineup {

using detail::json;

NullMechanism NullMechanism::permutation(std::string target,
                                         std::uint64_t seed) {
  NullMechanism m;
  m.kind = Kind::permutation;
  m.target = std::move(target);
  m.seed = seed;
  return m;
}

NullMechanism NullMechanism::null_regression(
    std::string response, std::vector<std::string> covariates,
    std::uint64_t seed) {
  NullMechanism m;
  m.kind = Kind::simulate_null_regression;
  m.target = std::move(response);
  m.covariates = std::move(covariates);
  m.seed = seed;
  return m;
}

NullMechanism NullMechanism::normal(std::string target, std::uint64_t seed) {
  NullMechanism m;
  m.kind = Kind::simulate_normal;
  m.target = std::move(target);
  m.seed = seed;
  return m;
}

std::string_view to_string(NullMechanism::Kind kind) {
  switch (kind) {
    case NullMechanism::Kind::permutation: return "permutation";
    case NullMechanism::Kind::simulate_null_regression:
      return "simulate_null_regression";
    case NullMechanism::Kind::simulate_normal: return "simulate_normal";
  }
  return "permutation";
}

NullMechanism parse_mechanism(std::string_view json_text) {
  constexpr std::string_view what = "mechanism";
  const json doc = detail::parse_json(json_text, what);
  const auto kind = detail::field<std::string>(doc, "kind", what);
  NullMechanism m;
  if (kind == "permutation") {
    m.kind = NullMechanism::Kind::permutation;
  } else if (kind == "simulate_null_regression") {
    m.kind = NullMechanism::Kind::simulate_null_regression;
  } else if (kind == "simulate_normal") {
    m.kind = NullMechanism::Kind::simulate_normal;
  } else {
    throw SchemaError(fmt::format("mechanism: unknown kind '{}'", kind));
  }
  if (doc.contains("target")) {
    m.target = detail::field<std::string>(doc, "target", what);
  } else if (doc.contains("response")) {
    m.target = detail::field<std::string>(doc, "response", what);
  } else {
    throw SchemaError("mechanism: missing 'target'");
  }
  if (doc.contains("covariates")) {
    m.covariates = detail::field<std::vector<std::string>>(doc, "covariates", what);
  }
  if (doc.contains("mean")) m.mean = detail::field<double>(doc, "mean", what);
  if (doc.contains("sd")) m.sd = detail::field<double>(doc, "sd", what);
  if (doc.contains("seed")) m.seed = detail::field<std::uint64_t>(doc, "seed", what);
  if (m.sd && !(*m.sd >= 0.0)) {
    throw PreconditionError("mechanism: 'sd' must be nonnegative");
  }
  if (!m.covariates.empty() &&
      m.kind != NullMechanism::Kind::simulate_null_regression) {
    throw SchemaError("mechanism: 'covariates' only applies to "
                      "simulate_null_regression");
  }
  return m;
}

std::string mechanism_to_json(const NullMechanism& m) {
  json doc{{"kind", std::string(to_string(m.kind))}, {"target", m.target}};
  if (!m.covariates.empty()) doc["covariates"] = m.covariates;
  if (m.mean) doc["mean"] = *m.mean;
  if (m.sd) doc["sd"] = *m.sd;
  doc["seed"] = m.seed;
  return doc.dump();
}

void validate_mechanism(const NullMechanism& m, const Dataset& data) {
  const Variable& target = data.at(m.target);
  switch (m.kind) {
    case NullMechanism::Kind::permutation:
      if (data.rows() < 2) {
        throw PreconditionError("permutation needs at least 2 rows");
      }
      break;
    case NullMechanism::Kind::simulate_null_regression:
      if (!target.is_continuous()) {
        throw SchemaError(fmt::format(
            "null regression response '{}' must be continuous", m.target));
      }
      for (const auto& c : m.covariates) {
        if (c == m.target) {
          throw SchemaError("the response cannot be its own covariate");
        }
        if (!data.at(c).is_continuous()) {
          throw SchemaError(fmt::format("covariate '{}' must be continuous", c));
        }
      }
      if (data.rows() < m.covariates.size() + 2) {
        throw PreconditionError(
            "null regression needs more rows than model parameters");
      }
      break;
    case NullMechanism::Kind::simulate_normal:
      if (!target.is_continuous()) {
        throw SchemaError(
            fmt::format("normal target '{}' must be continuous", m.target));
      }
      if ((!m.mean || !m.sd) && data.rows() < 2) {
        throw PreconditionError(
            "estimating normal parameters needs at least 2 rows");
      }
      break;
  }
}

Dataset permute_variable(const Dataset& data, std::string_view target,
                         std::uint64_t seed) {
  const Variable& var = data.at(target);
  const std::size_t n = data.rows();
  if (n < 2) {
    throw PreconditionError(
        fmt::format("cannot permute '{}' with fewer than 2 rows", target));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_index(i + 1)]);
  }
  if (var.is_continuous()) {
    const auto src = var.values();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = src[order[i]];
    return data.with_variable(var.with_values(std::move(out)));
  }
  const auto src = var.codes();
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = src[order[i]];
  return data.with_variable(var.with_codes(std::move(out)));
}

InterceptFit fit_null_regression(const Dataset& data,
                                 std::string_view response) {
  const Variable& var = data.at(response);
  if (!var.is_continuous()) {
    throw SchemaError(fmt::format("response '{}' must be continuous", response));
  }
  const auto y = var.values();
  const std::size_t n = y.size();
  if (n < 2) {
    throw PreconditionError("variance needs at least 2 observations");
  }
  double sum = 0.0;
  for (double v : y) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return {mean, ss / static_cast<double>(n - 1)};
}

LeastSquaresFit fit_least_squares(const Dataset& data,
                                  std::string_view response,
                                  const std::vector<std::string>& covariates) {
  if (covariates.empty()) {
    const auto fit = fit_null_regression(data, response);
    return {{fit.beta0_hat},
            std::vector<double>(data.rows(), fit.beta0_hat),
            fit.sigma2_hat};
  }
  const auto y = data.at(response).values();
  const std::size_t n = y.size();
  const std::size_t k = covariates.size();
  if (n < k + 2) {
    throw PreconditionError("least squares needs more rows than parameters");
  }
  std::vector<std::span<const double>> xs;
  for (const auto& c : covariates) xs.push_back(data.at(c).values());

  // Centred normal equations; the intercept is recovered from the means.
  const double nd = static_cast<double>(n);
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= nd;
  std::vector<double> x_mean(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    for (double v : xs[j]) x_mean[j] += v;
    x_mean[j] /= nd;
  }
  // Augmented k x (k + 1) system.
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < k; ++r) {
      const double xr = xs[r][i] - x_mean[r];
      for (std::size_t c = 0; c < k; ++c) a[r][c] += xr * (xs[c][i] - x_mean[c]);
      a[r][k] += xr * (y[i] - y_mean);
    }
  }
  double scale = 0.0;
  for (std::size_t r = 0; r < k; ++r) scale = std::max(scale, std::abs(a[r][r]));
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) <= 1e-12 * scale || scale == 0.0) {
      throw PreconditionError("covariates are collinear or constant");
    }
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
    }
  }
  LeastSquaresFit fit;
  fit.coefficients.assign(k + 1, 0.0);
  double intercept = y_mean;
  for (std::size_t j = 0; j < k; ++j) {
    fit.coefficients[j + 1] = a[j][k] / a[j][j];
    intercept -= fit.coefficients[j + 1] * x_mean[j];
  }
  fit.coefficients[0] = intercept;
  fit.fitted.resize(n);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = intercept;
    for (std::size_t j = 0; j < k; ++j) f += fit.coefficients[j + 1] * xs[j][i];
    fit.fitted[i] = f;
    rss += (y[i] - f) * (y[i] - f);
  }
  fit.sigma2_hat = rss / static_cast<double>(n - k - 1);
  return fit;
}

Dataset simulate_null_dataset(const Dataset& data,
                              const NullMechanism& mechanism,
                              std::uint64_t seed) {
  validate_mechanism(mechanism, data);
  if (mechanism.kind == NullMechanism::Kind::permutation) {
    return permute_variable(data, mechanism.target, seed);
  }
  const Variable& target = data.at(mechanism.target);
  const std::size_t n = data.rows();
  Rng rng(seed);
  std::vector<double> draws(n);
  if (mechanism.kind == NullMechanism::Kind::simulate_null_regression) {
    const auto fit = fit_least_squares(data, mechanism.target, mechanism.covariates);
    const double sd = std::sqrt(fit.sigma2_hat);
    for (std::size_t i = 0; i < n; ++i) draws[i] = rng.normal(fit.fitted[i], sd);
  } else {
    double mean = 0.0;
    double sd = 0.0;
    if (!mechanism.mean || !mechanism.sd) {
      const auto fit = fit_null_regression(data, mechanism.target);
      mean = fit.beta0_hat;
      sd = std::sqrt(fit.sigma2_hat);
    }
    if (mechanism.mean) mean = *mechanism.mean;
    if (mechanism.sd) sd = *mechanism.sd;
    for (std::size_t i = 0; i < n; ++i) draws[i] = rng.normal(mean, sd);
  }
  return data.with_variable(target.with_values(std::move(draws)));
}

std::vector<Dataset> generate_nulls(const Dataset& data,
                                    const NullMechanism& mechanism,
                                    std::size_t count, std::uint64_t seed) {
  validate_mechanism(mechanism, data);
  std::vector<Dataset> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(simulate_null_dataset(data, mechanism, derive_seed(seed, i + 1)));
  }
  return out;
}

}  // namespace lineup
