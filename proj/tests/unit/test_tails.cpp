#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "haarfisher/ansatz.hpp"
#include "haarfisher/error.hpp"
#include "haarfisher/tails.hpp"
#include "test_util.hpp"

namespace haarfisher {
namespace {

// Samples whose exact tail is exp(-c0 N t^2).
std::vector<double> synthetic_tail(double c0, Index n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> out(count);
  for (auto& t : out) t = std::sqrt(e(engine) / (c0 * static_cast<double>(n)));
  return out;
}

TEST(SampleErrors, RotationFamilyErrorsInUnitInterval) {
  ComplexVector e1 = ComplexVector::Zero(2);
  e1(0) = 1.0;
  const auto a = ProductExponentialAnsatz::from_generators({testing::pauli_y()}, e1);
  RealVector theta(1);
  theta << 0.7;
  const ErrorSamples s = sample_errors(a, theta, 500, 4);
  ASSERT_EQ(s.rel_frob.size(), 500U);
  for (std::size_t i = 0; i < s.rel_frob.size(); ++i) {
    EXPECT_GE(s.rel_frob[i], 0.0);
    EXPECT_LE(s.rel_frob[i], 1.0 + 1e-12);
    EXPECT_DOUBLE_EQ(s.rel_frob[i], s.rel_max[i]);
  }
}

TEST(SampleErrors, DeterministicAndDegenerate) {
  const auto x = sample_rel_errors(6, 2, SeededUniformTheta{}, 1, 13);
  const auto y = sample_rel_errors(6, 2, SeededUniformTheta{}, 1, 13);
  EXPECT_EQ(x, y);
  const auto g = ProductExponentialAnsatz::from_generators({ComplexMatrix::Identity(3, 3)},
                                                           testing::random_unit(3));
  EXPECT_THROW(sample_errors(g, RealVector::Zero(1), 5, 1), DegenerateFamilyError);
  EXPECT_THROW(sample_rel_errors(6, 2, SeededUniformTheta{}, 0, 13), DomainError);
}

TEST(SampleErrors, ShrinkWithDimension) {
  const auto small = sample_rel_errors(10, 4, SeededUniformTheta{}, 200, 3);
  const auto large = sample_rel_errors(80, 4, SeededUniformTheta{}, 200, 3);
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  EXPECT_LT(mean(large), mean(small));
}

TEST(ThetaPolicy, ResolveAndDescribe) {
  EXPECT_EQ(resolve_theta(SeededUniformTheta{}, 4, 9), seeded_uniform_theta(4, 9));
  const RealVector fixed = RealVector::LinSpaced(3, 0.0, 1.0);
  EXPECT_EQ(resolve_theta(fixed, 3, 9), fixed);
  EXPECT_THROW(resolve_theta(fixed, 4, 9), DimensionError);
  EXPECT_NE(describe(SeededUniformTheta{}), describe(fixed));
}

TEST(Sweep, DeterministicRows) {
  const auto a = sweep_scaled_error({8, 16}, 3, 2, 5);
  const auto b = sweep_scaled_error({8, 16}, 3, 2, 5);
  ASSERT_EQ(a.size(), 2U);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].n, b[i].n);
    EXPECT_EQ(a[i].mean_rel, b[i].mean_rel);
    EXPECT_EQ(a[i].std_rel, b[i].std_rel);
    EXPECT_DOUBLE_EQ(a[i].scaled, std::sqrt(static_cast<double>(a[i].n)) * a[i].mean_rel);
  }
  EXPECT_EQ(a[0].n, 8);
  EXPECT_EQ(a[1].n, 16);
  EXPECT_THROW(sweep_scaled_error({8}, 3, 1, 5), DomainError);
}

TEST(Sweep, DoublingDimensionShrinksErrorBySquareRootTwo) {
  const auto rows = sweep_scaled_error({20, 40}, 10, 100, 3);
  const double ratio = rows[0].mean_rel / rows[1].mean_rel;
  EXPECT_GE(ratio, 1.2);
  EXPECT_LE(ratio, 1.7);
}

TEST(Histogram, Examples) {
  const auto bins = histogram({0.1, 0.1, 0.3}, 2);
  ASSERT_EQ(bins.size(), 2U);
  EXPECT_EQ(bins[0].count, 2U);
  EXPECT_EQ(bins[1].count, 1U);
  EXPECT_DOUBLE_EQ(bins[0].left, 0.0);
  EXPECT_DOUBLE_EQ(bins[1].right, 0.3);
}

TEST(Histogram, CountsSumToInput) {
  std::vector<double> xs;
  for (int i = 0; i < 997; ++i) xs.push_back(std::abs(testing::random_real(1)(0)));
  for (std::size_t b : {1U, 7U, 30U, 100U}) {
    std::uint64_t total = 0;
    for (const auto& bin : histogram(xs, b)) total += bin.count;
    EXPECT_EQ(total, xs.size());
  }
}

TEST(Histogram, Errors) {
  EXPECT_THROW(histogram({}, 3), DomainError);
  EXPECT_THROW(histogram({1.0}, 0), DomainError);
  EXPECT_THROW(histogram({-1.0}, 2), DomainError);
}

TEST(Ccdf, Examples) {
  const std::vector<double> xs{3.0, 1.0, 2.0};
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_DOUBLE_EQ(ccdf_at(sorted, 2.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(ccdf_at(sorted, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(ccdf_at(sorted, 3.0), 0.0);
  const auto pts = empirical_ccdf(xs);
  ASSERT_EQ(pts.size(), 3U);
  EXPECT_DOUBLE_EQ(pts[1].t, 2.0);
  EXPECT_DOUBLE_EQ(pts[1].ccdf, 1.0 / 3.0);
  EXPECT_THROW(empirical_ccdf({}), DomainError);
}

TEST(Ccdf, MonotoneWithTies) {
  const auto pts = empirical_ccdf({0.5, 0.2, 0.5, 0.9, 0.2, 0.2});
  ASSERT_EQ(pts.size(), 3U);
  EXPECT_DOUBLE_EQ(pts[0].ccdf, 0.5);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_LT(pts[i - 1].t, pts[i].t);
    EXPECT_LE(pts[i].ccdf, pts[i - 1].ccdf);
  }
}

TEST(Percentile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4}, 50.0), 2.5);
  EXPECT_DOUBLE_EQ(percentile({5, 1, 3}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(percentile({5, 1, 3}, 100.0), 5.0);
}

class SyntheticTail : public ::testing::TestWithParam<std::tuple<double, Index>> {};

TEST_P(SyntheticTail, RecoversConstant) {
  const auto [c0, n] = GetParam();
  const auto xs = synthetic_tail(c0, n, 100000, 77);
  const TailFit fit = fit_tail_constant(xs, n);
  EXPECT_NEAR(fit.c_regression, c0, 0.1 * c0);
  EXPECT_GT(fit.c_adjusted, 0.0);
  EXPECT_LE(fit.c_adjusted, 1.1 * fit.c_regression);
  EXPECT_GT(fit.r_squared, 0.99);
  EXPECT_TRUE(tail_envelope_holds(fit, xs));
  EXPECT_GE(fit.regression_points, 3U);
}

INSTANTIATE_TEST_SUITE_P(Grid, SyntheticTail,
                         ::testing::Combine(::testing::Values(0.1, 0.5, 2.0),
                                            ::testing::Values(Index{20}, Index{80})));

TEST(TailFit, SpecificWindow) {
  const auto xs = synthetic_tail(0.5, 80, 100000, 5);
  const TailFit fit = fit_tail_constant(xs, 80, 10);
  EXPECT_GE(fit.c_regression, 0.45);
  EXPECT_LE(fit.c_regression, 0.55);
  EXPECT_EQ(fit.num_samples, 100000U);
  EXPECT_EQ(fit.m, 10);
  EXPECT_LT(fit.t_lo, fit.t_hi);
  EXPECT_DOUBLE_EQ(fit.cutoff_t, percentile(xs, 99.99));
}

TEST(TailFit, EnvelopeCheckDetectsTooLargeConstant) {
  const auto xs = synthetic_tail(0.5, 20, 5000, 6);
  TailFit fit = fit_tail_constant(xs, 20);
  EXPECT_TRUE(tail_envelope_holds(fit, xs));
  fit.c_adjusted *= 1.5;
  EXPECT_FALSE(tail_envelope_holds(fit, xs));
}

TEST(TailFit, Errors) {
  EXPECT_THROW(fit_tail_constant(synthetic_tail(1.0, 20, 999, 1), 20), DomainError);
  // Two distinct values leave no usable band.
  std::vector<double> two(2000, 1.0);
  two[0] = 2.0;
  EXPECT_THROW(fit_tail_constant(two, 20), DomainError);
  TailFitOptions bad;
  bad.band_lo = 0.6;
  EXPECT_THROW(fit_tail_constant(synthetic_tail(1.0, 20, 2000, 1), 20, 0, bad), DomainError);
}

TEST(MaxNormBound, Arithmetic) {
  EXPECT_NEAR(max_norm_tail_bound(2.0, 121, 1), 2.0 * std::exp(-4.0), 1e-15);
  EXPECT_EQ(max_norm_tail_bound(1e-6, 121, 1), 1.0);
  EXPECT_EQ(max_norm_tail_bound(1e3, 121, 10), 0.0);
  EXPECT_THROW(max_norm_tail_bound(0.0, 10, 1), DomainError);
  EXPECT_THROW(max_norm_tail_bound(1.0, 1, 1), DomainError);
}

TEST(FrobeniusBound, Arithmetic) {
  const auto b = frobenius_tail_bound(0.5, 20, 10);
  EXPECT_NEAR(b.threshold - 0.5, 16.0 * std::sqrt(10.0 / 19.0), 1e-14);
  EXPECT_NEAR(b.threshold - 0.5, 11.61, 0.005);
  EXPECT_NEAR(b.probability, std::exp(-19.0 * 0.25 / 120.0), 1e-15);
  EXPECT_EQ(frobenius_tail_bound(1e3, 20, 10).probability, 0.0);
  EXPECT_LT(frobenius_tail_bound(2.0, 20, 10).probability, frobenius_tail_bound(1.0, 20, 10).probability);
  EXPECT_LT(frobenius_tail_bound(1.0, 40, 10).probability, frobenius_tail_bound(1.0, 20, 10).probability);
}

TEST(EigenvalueBound, Arithmetic) {
  const auto b = sandwich_bound(0.4, 1000000, 1);
  EXPECT_TRUE(b.precondition_met);
  const double expected = std::pow(0.4 * std::sqrt(999999.0) - 285.0, 2) / 30.0;
  EXPECT_NEAR(b.failure_exponent, expected, 1e-9);
  EXPECT_NEAR(b.failure_exponent, 440.8, 0.1);
  EXPECT_NEAR(b.probability, 1.0, 1e-15);

  for (double eps : {0.05, 0.25, 0.49}) EXPECT_FALSE(sandwich_bound(eps, 160, 10).precondition_met);
  EXPECT_GE(sandwich_bound(0.3, 160, 10).probability, 0.0);
  EXPECT_LE(sandwich_bound(0.3, 160, 10).probability, 1.0);

  // Past the point eps sqrt(N-1) > 285 sqrt(m) the exponent increases with N.
  double prev = 0.0;
  for (Index n : {600000, 800000, 1600000, 3200000}) {
    const double e = sandwich_bound(0.4, n, 1).failure_exponent;
    EXPECT_GT(e, prev);
    prev = e;
  }
  EXPECT_THROW(sandwich_bound(0.5, 100, 1), DomainError);
}

TEST(BoundReport, RealSamplesHaveNoViolations) {
  const auto a = build_ansatz(40, 4, 2);
  const ErrorSamples s = sample_errors(a, seeded_uniform_theta(4, 2), 2000, 8);
  const auto r = bound_violation_report(s, 40, 4);
  EXPECT_TRUE(r.ok());
  EXPECT_LE(r.max_norm.max_ratio, 1.0);
  EXPECT_LE(r.frobenius.max_ratio, 1.0);
  // The Frobenius offset 16 sqrt(4/39) exceeds every observed error.
  EXPECT_TRUE(r.frobenius.vacuous);
  EXPECT_FALSE(r.frobenius.note.empty());
}

TEST(BoundReport, FlagsViolationsOnFabricatedTail) {
  // Errors of size 5 at N=2000 sit far above the max-norm bound.
  ErrorSamples s;
  s.rel_max.assign(100, 5.0);
  s.rel_frob.assign(100, 0.1);
  const auto r = bound_violation_report(s, 2000, 1);
  EXPECT_FALSE(r.max_norm.violations.empty());
  EXPECT_FALSE(r.ok());
  EXPECT_GT(r.max_norm.max_ratio, 1.0);
}

}  // namespace
}  // namespace haarfisher
