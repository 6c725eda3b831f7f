#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "lineup/error.hpp"
#include "lineup/nullgen.hpp"
#include "oracles.hpp"

namespace lineup {
namespace {

using testing::xy;

std::vector<double> sorted(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Permutation, KeepsMultisetAndOtherColumns) {
  const Dataset d = testing::linear_data(50, 1.0, 0.5, 4);
  const Dataset p = permute_variable(d, "y", 99);
  EXPECT_EQ(sorted(p["y"].values()), sorted(d["y"].values()));
  EXPECT_EQ(p["x"], d["x"]);
  EXPECT_NE(p["y"], d["y"]);
}

TEST(Permutation, CategoricalKeepsLevels) {
  const Dataset d = testing::two_group_data(30, 1.0, 2);
  const Dataset p = permute_variable(d, "group", 5);
  EXPECT_EQ(std::vector<std::string>(p["group"].levels().begin(), p["group"].levels().end()),
            std::vector<std::string>(d["group"].levels().begin(), d["group"].levels().end()));
  auto count_b = [](const Dataset& ds) {
    const auto c = ds["group"].codes();
    return std::count(c.begin(), c.end(), 1u);
  };
  EXPECT_EQ(count_b(p), count_b(d));
}

TEST(Permutation, AllOrdersReachable) {
  const Dataset d = xy({0, 0, 0}, {1, 2, 3});
  std::set<std::vector<double>> seen;
  for (std::uint64_t s = 0; s < 600; ++s) {
    const Dataset p = permute_variable(d, "y", s);
    seen.emplace(p["y"].values().begin(), p["y"].values().end());
  }
  EXPECT_EQ(seen.size(), 6u);
}

TEST(Permutation, NeedsTwoRows) {
  EXPECT_THROW(permute_variable(xy({1}, {2}), "y", 0), PreconditionError);
}

TEST(NullRegression, InterceptFitIsMeanAndUnbiasedVariance) {
  const Dataset d = xy({0, 0, 0, 0}, {1, 2, 3, 6});
  const auto fit = fit_null_regression(d, "y");
  EXPECT_DOUBLE_EQ(fit.beta0_hat, 3.0);
  EXPECT_DOUBLE_EQ(fit.sigma2_hat, (4.0 + 1.0 + 0.0 + 9.0) / 3.0);
}

TEST(NullRegression, LeastSquaresMatchesClosedForm) {
  const Dataset d = testing::linear_data(40, 2.0, 1.0, 8);
  const auto fit = fit_least_squares(d, "y", {"x"});
  const std::vector<double> x(d["x"].values().begin(), d["x"].values().end());
  const std::vector<double> y(d["y"].values().begin(), d["y"].values().end());
  const auto ref = oracle::ols(x, y);
  EXPECT_NEAR(fit.coefficients[0], ref.intercept, 1e-10);
  EXPECT_NEAR(fit.coefficients[1], ref.slope, 1e-10);
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - ref.intercept - ref.slope * x[i];
    rss += r * r;
  }
  EXPECT_NEAR(fit.sigma2_hat, rss / 38.0, 1e-10);
}

TEST(NullRegression, CollinearCovariatesRejected) {
  const Dataset d({Variable::continuous("a", {1, 2, 3, 4}),
                   Variable::continuous("b", {2, 4, 6, 8}),
                   Variable::continuous("y", {1, 0, 1, 0})});
  EXPECT_THROW(fit_least_squares(d, "y", {"a", "b"}), PreconditionError);
}

TEST(NullRegression, SimulatedDataFollowsTheFit) {
  // Large n: the simulated response should reproduce the fitted mean and sd.
  Rng rng(1);
  std::vector<double> x(4000), y(4000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.uniform();
    y[i] = 5.0 + 0.5 * rng.normal();
  }
  const Dataset d = xy(x, y);
  const auto sim = simulate_null_dataset(d, NullMechanism::null_regression("y"), 7);
  double sum = 0, sq = 0;
  for (double v : sim["y"].values()) sum += v, sq += v * v;
  const double mean = sum / 4000.0;
  EXPECT_NEAR(mean, 5.0, 0.05);
  EXPECT_NEAR(std::sqrt(sq / 4000.0 - mean * mean), 0.5, 0.03);
  EXPECT_EQ(sim["x"], d["x"]);
}

TEST(SimulateNormal, FixedParametersAreUsed) {
  NullMechanism m = NullMechanism::normal("y");
  m.mean = 100.0;
  m.sd = 0.0;
  const auto sim = simulate_null_dataset(xy({1, 2, 3}, {0, 1, 2}), m, 3);
  for (double v : sim["y"].values()) EXPECT_EQ(v, 100.0);
}

TEST(Mechanism, ParseAndSerialise) {
  const auto m = parse_mechanism(R"({"kind":"permutation","target":"group","seed":42})");
  EXPECT_EQ(m.kind, NullMechanism::Kind::permutation);
  EXPECT_EQ(m.target, "group");
  EXPECT_EQ(m.seed, 42u);
  EXPECT_EQ(parse_mechanism(mechanism_to_json(m)), m);

  const auto r = parse_mechanism(
      R"({"kind":"simulate_null_regression","response":"y","covariates":["x"]})");
  EXPECT_EQ(r.target, "y");
  EXPECT_EQ(r.covariates, std::vector<std::string>{"x"});
  EXPECT_EQ(parse_mechanism(mechanism_to_json(r)), r);
}

TEST(Mechanism, ParseErrors) {
  EXPECT_THROW(parse_mechanism(R"({"kind":"bootstrap","target":"y"})"), SchemaError);
  EXPECT_THROW(parse_mechanism(R"({"kind":"permutation"})"), SchemaError);
  EXPECT_THROW(parse_mechanism(R"({"kind":"simulate_normal","target":"y","sd":-1})"),
               PreconditionError);
  EXPECT_THROW(parse_mechanism("{"), ParseError);
}

TEST(Mechanism, ValidationAgainstData) {
  const Dataset d = testing::two_group_data(10, 0.0, 1);
  EXPECT_THROW(validate_mechanism(NullMechanism::permutation("missing"), d), SchemaError);
  EXPECT_THROW(validate_mechanism(NullMechanism::null_regression("group"), d), SchemaError);
  EXPECT_NO_THROW(validate_mechanism(NullMechanism::permutation("group"), d));
}

TEST(GenerateNulls, DeterministicAndIndependentOfCount) {
  const Dataset d = testing::linear_data(30, 1.0, 1.0, 2);
  const auto mech = NullMechanism::null_regression("y", {"x"});
  const auto a = generate_nulls(d, mech, 5, 77);
  const auto b = generate_nulls(d, mech, 8, 77);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_NE(a[0], a[1]);
  EXPECT_NE(generate_nulls(d, mech, 1, 78)[0], a[0]);
}

}  // namespace
}  // namespace lineup
