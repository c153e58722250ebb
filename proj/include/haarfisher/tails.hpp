#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "haarfisher/ansatz.hpp"
#include "haarfisher/montecarlo.hpp"

namespace haarfisher {

/// How theta is fixed for an experiment: drawn from the master seed, or given.
struct SeededUniformTheta {};
using ThetaPolicy = std::variant<SeededUniformTheta, RealVector>;

RealVector resolve_theta(const ThetaPolicy& policy, Index m, std::uint64_t seed);
std::string describe(const ThetaPolicy& policy);

/// Per-sample relative errors of F^U against E[F^U] = Q/2.
struct ErrorSamples {
  std::vector<double> rel_frob;
  std::vector<double> rel_max;
};

ErrorSamples sample_errors(const ProductExponentialAnsatz& ansatz, const RealVector& theta,
                           std::uint64_t num_samples, std::uint64_t master_seed,
                           const SampleOptions& options = {});

/// Relative Frobenius errors for the reference ansatz of (N, m, master_seed).
std::vector<double> sample_rel_errors(Index n, Index m, const ThetaPolicy& theta,
                                      std::uint64_t num_samples, std::uint64_t master_seed,
                                      const SampleOptions& options = {});

struct SweepRow {
  Index n = 0;
  double mean_rel = 0.0;
  double scaled = 0.0;  // sqrt(N) * mean_rel
  double std_rel = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

std::vector<SweepRow> sweep_scaled_error(const std::vector<Index>& dims, Index m,
                                         std::uint64_t trials, std::uint64_t master_seed,
                                         const SampleOptions& options = {},
                                         const ThetaPolicy& theta = SeededUniformTheta{});

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::uint64_t count = 0;
};

/// Equal-width bins over [0, max sample]; the last bin is closed.
std::vector<HistogramBin> histogram(const std::vector<double>& samples, std::size_t num_bins);

struct CcdfPoint {
  double t = 0.0;
  double ccdf = 0.0;  // fraction of samples strictly greater than t
};

/// One point per distinct sample value, ascending in t.
std::vector<CcdfPoint> empirical_ccdf(const std::vector<double>& samples);

/// Fraction of `sorted` strictly greater than t.
double ccdf_at(const std::vector<double>& sorted, double t);

/// Value at the given percentile (0-100), linear interpolation between order
/// statistics.
double percentile(std::vector<double> samples, double pct);

struct TailFit {
  Index n = 0;
  Index m = 0;
  std::uint64_t num_samples = 0;
  double c_regression = 0.0;
  double c_adjusted = 0.0;
  double intercept = 0.0;  // of the log-ccdf regression line
  double r_squared = 0.0;
  double percentile_cutoff = 99.99;
  double band_lo = 1e-4;
  double band_hi = 0.5;
  double t_lo = 0.0;  // regression range in t
  double t_hi = 0.0;
  std::size_t regression_points = 0;
  double cutoff_t = 0.0;  // sample value at percentile_cutoff
};

struct TailFitOptions {
  double percentile_cutoff = 99.99;
  double band_lo = 1e-4;
  double band_hi = 0.5;
};

/// Fits ccdf(t) ~ exp(-c N t^2): unweighted least squares of log ccdf on t^2
/// over CCDF points inside [band_lo, band_hi] gives c_regression = -slope/N;
/// c_adjusted is the largest c with ccdf(t) <= exp(-c N t^2) at every sample
/// point up to the cutoff percentile. `m` is recorded only.
TailFit fit_tail_constant(const std::vector<double>& samples, Index n, Index m = 0,
                          const TailFitOptions& options = {});

/// Re-checks the TailFit envelope against `samples` by direct counting.
bool tail_envelope_holds(const TailFit& fit, const std::vector<double>& samples);

/// min(1, 2 m^2 exp(-(N-1) t^2 / 120)).
double max_norm_tail_bound(double t, Index n, Index m);

struct FrobeniusTailBound {
  double threshold = 0.0;    // t + 16 sqrt(m / (N - 1))
  double probability = 0.0;  // min(1, exp(-(N-1) t^2 / 120))
};
FrobeniusTailBound frobenius_tail_bound(double t, Index n, Index m);

struct SandwichBound {
  bool precondition_met = false;  // N >= 1e5 m / eps^2
  double failure_exponent = 0.0;  // (eps sqrt(N-1) - 285 sqrt(m))^2 / 30
  double probability = 0.0;       // 1 - exp(-exponent), clipped to [0, 1]
};
SandwichBound sandwich_bound(double epsilon, Index n, Index m);

struct BoundViolation {
  double t = 0.0;
  double threshold = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
};

struct BoundCheck {
  std::string name;
  std::size_t grid_points = 0;
  std::size_t nonvacuous_points = 0;    // bound < 1
  std::size_t informative_points = 0;   // bound < 1 and empirical tail > 0
  std::vector<BoundViolation> violations;
  double max_ratio = 0.0;  // empirical / bound over non-vacuous points
  bool vacuous = false;    // no informative point at this scale
  std::string note;
};

struct BoundViolationReport {
  Index n = 0;
  Index m = 0;
  std::uint64_t num_samples = 0;
  BoundCheck max_norm;
  BoundCheck frobenius;
  bool ok() const { return max_norm.violations.empty() && frobenius.violations.empty(); }
};

/// Compares the empirical tails P(err >= threshold) of the max-norm and
/// Frobenius relative errors with the max-norm and Frobenius concentration
/// bounds on a grid of `grid_points` values of t.
BoundViolationReport bound_violation_report(const ErrorSamples& samples, Index n, Index m,
                                            std::size_t grid_points = 400);

}  // namespace haarfisher
