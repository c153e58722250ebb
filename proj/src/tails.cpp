#include "haarfisher/tails.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "haarfisher/error.hpp"

namespace haarfisher {

namespace {

constexpr std::size_t kMinTailSamples = 1000;
constexpr std::size_t kMinRegressionPoints = 3;

void check_samples(const std::vector<double>& samples, const char* what) {
  if (samples.empty()) throw DomainError(std::string(what) + ": empty sample set");
  for (double x : samples) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite sample");
  }
}

void check_bound_args(double t, Index n) {
  if (!(t > 0.0)) throw DomainError("bound: t must be positive");
  if (n < 2) throw DomainError("bound: N must be >= 2");
}

// Fraction of `sorted` that is >= t.
double tail_at_least(const std::vector<double>& sorted, double t) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

}  // namespace

RealVector resolve_theta(const ThetaPolicy& policy, Index m, std::uint64_t seed) {
  if (const auto* explicit_theta = std::get_if<RealVector>(&policy)) {
    if (explicit_theta->size() != m) {
      throw DimensionError("theta: explicit vector has the wrong length");
    }
    return *explicit_theta;
  }
  return seeded_uniform_theta(m, seed);
}

std::string describe(const ThetaPolicy& policy) {
  return std::holds_alternative<SeededUniformTheta>(policy) ? "seeded-uniform" : "explicit";
}

ErrorSamples sample_errors(const ProductExponentialAnsatz& ansatz, const RealVector& theta,
                           std::uint64_t num_samples, std::uint64_t master_seed,
                           const SampleOptions& options) {
  if (num_samples < 1) throw DomainError("sample_errors: need at least one sample");
  const StateWithJacobian swj = ansatz.evaluate(theta);
  const RealMatrix q = qgt(swj).real_part;
  if (q.norm() < 1e-12) {
    throw DegenerateFamilyError("degenerate family: the QFIM vanishes");
  }
  SampleOptions opts = options;
  opts.keep_samples = false;
  CfimBatch batch = sample_cfims(swj, q, num_samples, master_seed, opts);
  return {std::move(batch.rel_frob), std::move(batch.rel_max)};
}

std::vector<double> sample_rel_errors(Index n, Index m, const ThetaPolicy& theta,
                                      std::uint64_t num_samples, std::uint64_t master_seed,
                                      const SampleOptions& options) {
  const auto ansatz = build_ansatz(n, m, master_seed);
  return sample_errors(ansatz, resolve_theta(theta, m, master_seed), num_samples,
                       master_seed, options)
      .rel_frob;
}

std::vector<SweepRow> sweep_scaled_error(const std::vector<Index>& dims, Index m,
                                         std::uint64_t trials, std::uint64_t master_seed,
                                         const SampleOptions& options,
                                         const ThetaPolicy& theta) {
  if (trials < 2) throw DomainError("sweep: trials must be >= 2");
  std::vector<SweepRow> rows;
  rows.reserve(dims.size());
  for (Index n : dims) {
    const auto errors = sample_rel_errors(n, m, theta, trials, master_seed, options);
    const double k = static_cast<double>(errors.size());
    const double mean = std::accumulate(errors.begin(), errors.end(), 0.0) / k;
    double ss = 0.0;
    for (double e : errors) ss += (e - mean) * (e - mean);
    SweepRow row;
    row.n = n;
    row.mean_rel = mean;
    row.scaled = std::sqrt(static_cast<double>(n)) * mean;
    row.std_rel = std::sqrt(ss / (k - 1.0));
    row.trials = trials;
    row.seed = master_seed;
    rows.push_back(row);
  }
  return rows;
}

std::vector<HistogramBin> histogram(const std::vector<double>& samples, std::size_t num_bins) {
  check_samples(samples, "histogram");
  if (num_bins < 1) throw DomainError("histogram: need at least one bin");
  if (*std::min_element(samples.begin(), samples.end()) < 0.0) {
    throw DomainError("histogram: samples must be non-negative");
  }
  const double top = *std::max_element(samples.begin(), samples.end());
  const double width = top / static_cast<double>(num_bins);
  std::vector<HistogramBin> bins(num_bins);
  for (std::size_t b = 0; b < num_bins; ++b) {
    bins[b].left = width * static_cast<double>(b);
    bins[b].right = b + 1 == num_bins ? top : width * static_cast<double>(b + 1);
  }
  for (double x : samples) {
    std::size_t b = width > 0.0 ? static_cast<std::size_t>(x / width) : 0;
    bins[std::min(b, num_bins - 1)].count++;
  }
  return bins;
}

std::vector<CcdfPoint> empirical_ccdf(const std::vector<double>& samples) {
  check_samples(samples, "empirical_ccdf");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double total = static_cast<double>(sorted.size());
  std::vector<CcdfPoint> out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    out.push_back({sorted[i], static_cast<double>(sorted.size() - j) / total});
    i = j;
  }
  return out;
}

double ccdf_at(const std::vector<double>& sorted, double t) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

double percentile(std::vector<double> samples, double pct) {
  check_samples(samples, "percentile");
  std::sort(samples.begin(), samples.end());
  const double h = (static_cast<double>(samples.size()) - 1.0) * std::clamp(pct, 0.0, 100.0) / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  return samples[lo] + (h - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

TailFit fit_tail_constant(const std::vector<double>& samples, Index n, Index m,
                          const TailFitOptions& options) {
  check_samples(samples, "fit_tail_constant");
  if (samples.size() < kMinTailSamples) {
    throw DomainError("fit_tail_constant: at least 1000 samples are required");
  }
  if (n < 1) throw DomainError("fit_tail_constant: N must be positive");
  if (!(options.band_lo > 0.0 && options.band_lo < options.band_hi && options.band_hi <= 1.0)) {
    throw DomainError("fit_tail_constant: invalid regression band");
  }
  const auto points = empirical_ccdf(samples);
  const double dim = static_cast<double>(n);

  TailFit fit;
  fit.n = n;
  fit.m = m;
  fit.num_samples = samples.size();
  fit.percentile_cutoff = options.percentile_cutoff;
  fit.band_lo = options.band_lo;
  fit.band_hi = options.band_hi;

  // Regression of log ccdf on t^2 inside the probability band.
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    if (p.ccdf >= options.band_lo && p.ccdf <= options.band_hi) {
      xs.push_back(p.t * p.t);
      ys.push_back(std::log(p.ccdf));
      if (xs.size() == 1) fit.t_lo = p.t;
      fit.t_hi = p.t;
    }
  }
  if (xs.size() < kMinRegressionPoints) {
    throw DomainError("fit_tail_constant: too few CCDF points in the regression band");
  }
  const double k = static_cast<double>(xs.size());
  const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    syy += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_tail_constant: degenerate regression band");
  const double slope = sxy / sxx;
  fit.intercept = mean_y - slope * mean_x;
  fit.c_regression = -slope / dim;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.regression_points = xs.size();

  // Largest c keeping the empirical tail under exp(-c N t^2) up to the cutoff.
  fit.cutoff_t = percentile(samples, options.percentile_cutoff);
  double c = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    if (p.t > fit.cutoff_t) break;
    if (p.t <= 0.0 || p.ccdf <= 0.0) continue;
    c = std::min(c, -std::log(p.ccdf) / (dim * p.t * p.t));
  }
  if (!std::isfinite(c)) {
    throw DomainError("fit_tail_constant: no positive sample below the cutoff percentile");
  }
  fit.c_adjusted = c;
  return fit;
}

bool tail_envelope_holds(const TailFit& fit, const std::vector<double>& samples) {
  std::vector<double> desc = samples;
  std::sort(desc.begin(), desc.end(), std::greater<>());
  const double total = static_cast<double>(desc.size());
  // Walk from the largest value down, counting how many exceed each one.
  std::size_t greater = 0;
  for (std::size_t i = 0; i < desc.size(); ++i) {
    if (i > 0 && desc[i] < desc[i - 1]) greater = i;
    const double t = desc[i];
    if (t > fit.cutoff_t || t <= 0.0) continue;
    const double tail = static_cast<double>(greater) / total;
    const double envelope = std::exp(-fit.c_adjusted * static_cast<double>(fit.n) * t * t);
    if (tail > envelope * (1.0 + 1e-9)) return false;
  }
  return true;
}

double max_norm_tail_bound(double t, Index n, Index m) {
  check_bound_args(t, n);
  const double md = static_cast<double>(m);
  const double value =
      2.0 * md * md * std::exp(-(static_cast<double>(n) - 1.0) * t * t / 120.0);
  return std::min(1.0, value);
}

FrobeniusTailBound frobenius_tail_bound(double t, Index n, Index m) {
  check_bound_args(t, n);
  const double nm1 = static_cast<double>(n) - 1.0;
  return {t + 16.0 * std::sqrt(static_cast<double>(m) / nm1),
          std::min(1.0, std::exp(-nm1 * t * t / 120.0))};
}

SandwichBound sandwich_bound(double epsilon, Index n, Index m) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw DomainError("eigenvalue bound: epsilon must lie in (0, 1/2)");
  }
  if (n < 2) throw DomainError("eigenvalue bound: N must be >= 2");
  const double md = static_cast<double>(m);
  SandwichBound out;
  out.precondition_met = static_cast<double>(n) >= 1e5 * md / (epsilon * epsilon);
  const double gap = epsilon * std::sqrt(static_cast<double>(n) - 1.0) - 285.0 * std::sqrt(md);
  out.failure_exponent = gap * gap / 30.0;
  out.probability = std::clamp(1.0 - std::exp(-out.failure_exponent), 0.0, 1.0);
  return out;
}

BoundViolationReport bound_violation_report(const ErrorSamples& samples, Index n, Index m,
                                            std::size_t grid_points) {
  check_samples(samples.rel_max, "bound_violation_report");
  check_samples(samples.rel_frob, "bound_violation_report");
  if (n < 2) throw DomainError("bound_violation_report: N must be >= 2");
  if (grid_points < 1) throw DomainError("bound_violation_report: empty grid");
  std::vector<double> rel_max = samples.rel_max;
  std::vector<double> rel_frob = samples.rel_frob;
  std::sort(rel_max.begin(), rel_max.end());
  std::sort(rel_frob.begin(), rel_frob.end());

  const double md = static_cast<double>(m);
  // Far enough out that the max-norm bound drops below e^-40.
  const double t_top =
      std::sqrt(120.0 * (std::log(2.0 * md * md) + 40.0) / (static_cast<double>(n) - 1.0));

  BoundViolationReport report;
  report.n = n;
  report.m = m;
  report.num_samples = samples.rel_frob.size();
  report.max_norm.name = "max_norm";
  report.frobenius.name = "frobenius";

  auto record = [](BoundCheck& check, double t, double threshold, double empirical,
                   double bound) {
    ++check.grid_points;
    if (bound >= 1.0) return;
    ++check.nonvacuous_points;
    if (empirical > 0.0) ++check.informative_points;
    check.max_ratio = std::max(check.max_ratio, empirical / bound);
    if (empirical > bound) check.violations.push_back({t, threshold, empirical, bound});
  };
  for (std::size_t k = 1; k <= grid_points; ++k) {
    const double t = t_top * static_cast<double>(k) / static_cast<double>(grid_points);
    record(report.max_norm, t, t, tail_at_least(rel_max, t), max_norm_tail_bound(t, n, m));
    const auto frob = frobenius_tail_bound(t, n, m);
    record(report.frobenius, t, frob.threshold, tail_at_least(rel_frob, frob.threshold),
           frob.probability);
  }

  std::ostringstream msg;
  auto& mx = report.max_norm;
  mx.vacuous = mx.informative_points == 0;
  if (mx.nonvacuous_points == 0) {
    mx.note = "vacuous at this scale: bound >= 1 at every grid point";
  } else if (mx.vacuous) {
    msg << "vacuous at this scale: bound < 1 only for t >= "
        << std::sqrt(120.0 * std::log(2.0 * md * md) / (static_cast<double>(n) - 1.0))
        << ", beyond every observed max-norm error (max " << rel_max.back() << ")";
    mx.note = msg.str();
  } else {
    mx.note = "informative";
  }
  msg.str("");
  auto& fr = report.frobenius;
  fr.vacuous = fr.informative_points == 0;
  if (fr.vacuous) {
    msg << "vacuous at this scale: offset 16*sqrt(m/(N-1)) = "
        << 16.0 * std::sqrt(md / (static_cast<double>(n) - 1.0))
        << " exceeds every observed Frobenius error (max " << rel_frob.back() << ")";
    fr.note = msg.str();
  } else {
    fr.note = "informative";
  }
  return report;
}

}  // namespace haarfisher
