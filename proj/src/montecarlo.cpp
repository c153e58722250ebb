#include "haarfisher/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "haarfisher/error.hpp"
#include "haarfisher/haar.hpp"
#include "haarfisher/parallel.hpp"

namespace haarfisher {

namespace {

constexpr double kDegenerateFrobenius = 1e-12;
// F restricted to ker Q must stay below this fraction of |F|_max.
constexpr double kKernelLeakTol = 1e-8;

void merge_batches(CfimBatch& into, CfimBatch& from) {
  if (from.count == 0) return;
  if (into.count == 0) {
    into.count = from.count;
    into.mean = std::move(from.mean);
    into.sum_sq_dev = std::move(from.sum_sq_dev);
  } else {
    const double na = static_cast<double>(into.count);
    const double nb = static_cast<double>(from.count);
    const double total = na + nb;
    const RealMatrix delta = from.mean - into.mean;
    into.mean += delta * (nb / total);
    into.sum_sq_dev += from.sum_sq_dev + delta.cwiseAbs2() * (na * nb / total);
    into.count += from.count;
  }
  into.min_prob = std::min(into.min_prob, from.min_prob);
  into.skipped_outcomes += from.skipped_outcomes;
  for (auto& s : from.samples) into.samples.push_back(std::move(s));
}

}  // namespace

const char* to_string(CfimForm form) {
  return form == CfimForm::kProjection ? "projection" : "definition";
}

ErrorMetrics error_metrics(const RealMatrix& f, const RealMatrix& q) {
  if (f.rows() != q.rows() || f.cols() != q.cols()) {
    throw DimensionError("error_metrics: F and Q shapes differ");
  }
  const RealMatrix half = 0.5 * q;
  const RealMatrix diff = f - half;
  const double den_max = max_norm(half);
  const double den_frob = half.norm();
  const double den_spec = symmetric_spectral_norm(symmetrized(half));
  if (!(den_max > 0.0) || !(den_frob > 0.0) || !(den_spec > 0.0)) {
    throw DomainError("error_metrics: Q/2 has zero norm");
  }
  return {max_norm(diff) / den_max, diff.norm() / den_frob,
          symmetric_spectral_norm(symmetrized(diff)) / den_spec};
}

RealMatrix empirical_variance(std::span<const RealMatrix> samples) {
  if (samples.size() < 2) {
    throw DomainError("empirical_variance: at least two samples are required");
  }
  const Index rows = samples.front().rows();
  const Index cols = samples.front().cols();
  // Two passes over data shifted by the first sample; constant input gives exact zeros.
  const RealMatrix& shift = samples.front();
  RealMatrix mean = RealMatrix::Zero(rows, cols);
  for (const auto& s : samples) {
    if (s.rows() != rows || s.cols() != cols) {
      throw DimensionError("empirical_variance: sample shapes differ");
    }
    mean += s - shift;
  }
  mean /= static_cast<double>(samples.size());
  RealMatrix ss = RealMatrix::Zero(rows, cols);
  for (const auto& s : samples) ss += (s - shift - mean).cwiseAbs2();
  return ss / static_cast<double>(samples.size() - 1);
}

SandwichPencil::SandwichPencil(const RealMatrix& q, double rank_tol) {
  if (q.rows() != q.cols() || q.rows() == 0) {
    throw DimensionError("sandwich: Q must be square and non-empty");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(symmetrized(0.5 * q));
  const RealVector& lambda = solver.eigenvalues();
  const double lambda_max = lambda.maxCoeff();
  if (!(lambda_max > 0.0)) throw DomainError("sandwich: Q has no positive eigenvalue");
  if (lambda.minCoeff() < -1e-10 * std::max(1.0, lambda_max)) {
    throw DomainError("sandwich: Q is not positive semidefinite");
  }
  const double cutoff = rank_tol * lambda_max;
  std::vector<Index> range;
  std::vector<Index> kernel;
  for (Index i = 0; i < lambda.size(); ++i) {
    (lambda(i) > cutoff ? range : kernel).push_back(i);
  }
  whitening_.resize(q.rows(), static_cast<Index>(range.size()));
  for (std::size_t c = 0; c < range.size(); ++c) {
    whitening_.col(static_cast<Index>(c)) =
        solver.eigenvectors().col(range[c]) / std::sqrt(lambda(range[c]));
  }
  kernel_.resize(q.rows(), static_cast<Index>(kernel.size()));
  for (std::size_t c = 0; c < kernel.size(); ++c) {
    kernel_.col(static_cast<Index>(c)) = solver.eigenvectors().col(kernel[c]);
  }
}

std::pair<double, double> SandwichPencil::ratios(const RealMatrix& f) const {
  if (f.rows() != whitening_.rows() || f.cols() != whitening_.rows()) {
    throw DimensionError("sandwich: F and Q shapes differ");
  }
  if (kernel_.cols() > 0) {
    const double leak = max_norm(RealMatrix(f * kernel_));
    if (leak > kKernelLeakTol * std::max(max_norm(f), std::numeric_limits<double>::min())) {
      throw DomainError("sandwich: F is non-negligible on the kernel of Q");
    }
  }
  const RealMatrix pencil = symmetrized(whitening_.transpose() * f * whitening_);
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(pencil, Eigen::EigenvaluesOnly);
  return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
}

double minimal_sandwich_epsilon(double min_ratio, double max_ratio) {
  return std::max({0.0, (1.0 - min_ratio) / 2.0, (max_ratio - 1.0) / 2.0});
}

SandwichResult sandwich_check(const RealMatrix& f, const RealMatrix& q, double epsilon,
                              double rank_tol) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw DomainError("sandwich_check: epsilon must lie in (0, 1/2)");
  }
  const SandwichPencil pencil(q, rank_tol);
  const auto [lo, hi] = pencil.ratios(f);
  SandwichResult out;
  out.epsilon = epsilon;
  out.min_ratio = lo;
  out.max_ratio = hi;
  out.rank_used = pencil.rank();
  out.passed = lo >= 1.0 - 2.0 * epsilon && hi <= 1.0 + 2.0 * epsilon;
  return out;
}

CfimBatch sample_cfims(const StateWithJacobian& swj, const RealMatrix& q,
                       std::uint64_t count, std::uint64_t master_seed,
                       const SampleOptions& options, const SandwichPencil* pencil) {
  const Index n = swj.dim();
  const Index m = swj.num_params();
  const RealMatrix half = 0.5 * q;
  const double half_frob = half.norm();
  const double half_max = max_norm(half);

  std::vector<double> rel_frob(count);
  std::vector<double> rel_max(count);
  std::vector<double> lo(pencil ? count : 0);
  std::vector<double> hi(pencil ? count : 0);

  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    CfimBatch acc;
    acc.mean = RealMatrix::Zero(m, m);
    acc.sum_sq_dev = RealMatrix::Zero(m, m);
    acc.min_prob = std::numeric_limits<double>::infinity();
    for (std::uint64_t s = begin; s < end; ++s) {
      const ComplexMatrix u = sample_haar_unitary(n, substream(master_seed, s));
      const Cfim f = options.form == CfimForm::kProjection
                         ? cfim_projection(swj, u, options.prob_floor)
                         : cfim_definition(swj, u, options.prob_floor);
      ++acc.count;
      const RealMatrix delta = f.matrix - acc.mean;
      acc.mean += delta / static_cast<double>(acc.count);
      acc.sum_sq_dev += delta.cwiseProduct(f.matrix - acc.mean);
      acc.min_prob = std::min(acc.min_prob, f.min_prob);
      acc.skipped_outcomes += static_cast<std::uint64_t>(f.skipped_outcomes);
      const RealMatrix diff = f.matrix - half;
      rel_frob[s] = half_frob > 0.0 ? diff.norm() / half_frob : 0.0;
      rel_max[s] = half_max > 0.0 ? max_norm(diff) / half_max : 0.0;
      if (pencil) std::tie(lo[s], hi[s]) = pencil->ratios(f.matrix);
      if (options.keep_samples) acc.samples.push_back(f.matrix);
    }
    return acc;
  };
  CfimBatch out = parallel_block_reduce<CfimBatch>(count, options.workers, block, merge_batches);
  out.rel_frob = std::move(rel_frob);
  out.rel_max = std::move(rel_max);
  out.min_ratio = std::move(lo);
  out.max_ratio = std::move(hi);
  return out;
}

EstimationReport estimate_qfim(const ProductExponentialAnsatz& ansatz,
                               const RealVector& theta, std::uint64_t samples,
                               std::uint64_t master_seed, const SampleOptions& options) {
  if (samples < 1) throw DomainError("estimate_qfim: K must be >= 1");
  const StateWithJacobian swj = ansatz.evaluate(theta);
  const Qgt tensor = qgt(swj);
  if (tensor.real_part.norm() < kDegenerateFrobenius) {
    throw DegenerateFamilyError(
        "degenerate family: the QFIM vanishes, so every CFIM is zero and relative "
        "errors are undefined");
  }
  const SandwichPencil pencil(tensor.real_part);
  CfimBatch batch =
      sample_cfims(swj, tensor.real_part, samples, master_seed, options, &pencil);

  EstimationReport report;
  report.n = ansatz.dim();
  report.m = ansatz.num_params();
  report.k_samples = samples;
  report.master_seed = master_seed;
  report.theta = theta;
  report.qfim = tensor.real_part;
  report.qgt_imag = tensor.imag_part;
  report.mean_cfim = batch.mean;
  report.empirical_variance =
      samples >= 2 ? RealMatrix(batch.sum_sq_dev / static_cast<double>(samples - 1))
                   : RealMatrix(RealMatrix::Zero(report.m, report.m));
  report.predicted_variance = variance_predictor(tensor, report.n);
  const ErrorMetrics metrics = error_metrics(batch.mean, tensor.real_part);
  report.rel_err_max = metrics.rel_max;
  report.rel_err_frob = metrics.rel_frob;
  report.per_sample_rel_frob = std::move(batch.rel_frob);
  report.sandwich_rank = pencil.rank();
  for (std::size_t i = 0; i < batch.min_ratio.size(); ++i) {
    report.sandwich_epsilon = std::max(
        report.sandwich_epsilon, minimal_sandwich_epsilon(batch.min_ratio[i], batch.max_ratio[i]));
  }
  report.per_sample_min_ratio = std::move(batch.min_ratio);
  report.per_sample_max_ratio = std::move(batch.max_ratio);
  report.samples = std::move(batch.samples);
  report.min_prob = batch.min_prob;
  report.skipped_outcomes = batch.skipped_outcomes;
  return report;
}

}  // namespace haarfisher
