#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "haarfisher/ansatz.hpp"
#include "haarfisher/fisher.hpp"
#include "haarfisher/linalg.hpp"

namespace haarfisher {

enum class CfimForm { kProjection, kDefinition };

const char* to_string(CfimForm form);

struct SampleOptions {
  unsigned workers = 0;  // 0: all hardware threads
  double prob_floor = kDefaultProbFloor;
  CfimForm form = CfimForm::kProjection;
  bool keep_samples = false;
};

struct ErrorMetrics {
  double rel_max = 0.0;
  double rel_frob = 0.0;
  double rel_spec = 0.0;
};

/// Relative distance of F from Q/2 in max, Frobenius and spectral norm.
/// Throws DomainError if Q/2 vanishes in any of them.
ErrorMetrics error_metrics(const RealMatrix& f, const RealMatrix& q);

/// Unbiased entrywise sample variance (divides by K - 1).
RealMatrix empirical_variance(std::span<const RealMatrix> samples);

inline constexpr double kDefaultRankTol = 1e-10;

struct SandwichResult {
  double epsilon = 0.0;
  bool passed = false;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  Index rank_used = 0;
};

/// Generalized eigenvalue bounds of F against E[F] = Q/2, restricted to the
/// range of Q. Eigendirections of Q/2 below rank_tol * lambda_max are
/// treated as kernel, on which F must vanish.
class SandwichPencil {
 public:
  explicit SandwichPencil(const RealMatrix& q, double rank_tol = kDefaultRankTol);

  Index rank() const { return whitening_.cols(); }

  /// Extreme eigenvalues of B^T F B, with B the inverse square root of Q/2 on
  /// its range. Throws DomainError if F is non-negligible on ker Q.
  std::pair<double, double> ratios(const RealMatrix& f) const;

 private:
  RealMatrix whitening_;
  RealMatrix kernel_;
};

SandwichResult sandwich_check(const RealMatrix& f, const RealMatrix& q, double epsilon,
                              double rank_tol = kDefaultRankTol);

/// Smallest epsilon with (1 - 2 eps) <= min_ratio and max_ratio <= (1 + 2 eps).
double minimal_sandwich_epsilon(double min_ratio, double max_ratio);

/// Per-sample CFIMs under Haar bases, accumulated in stream order.
struct CfimBatch {
  std::uint64_t count = 0;
  RealMatrix mean;
  RealMatrix sum_sq_dev;          // Welford M2
  std::vector<double> rel_frob;   // |F_i - Q/2|_F / |Q/2|_F
  std::vector<double> rel_max;    // |F_i - Q/2|_max / |Q/2|_max
  std::vector<double> min_ratio;  // filled when a pencil is supplied
  std::vector<double> max_ratio;
  std::vector<RealMatrix> samples;  // only with keep_samples
  double min_prob = 0.0;
  std::uint64_t skipped_outcomes = 0;
};

/// Draws `count` Haar bases (sample i on substream(master_seed, i)) and
/// evaluates the CFIM of `swj` under each one. `q` is the QFIM used as the
/// reference Q/2 for the per-sample error scalars.
CfimBatch sample_cfims(const StateWithJacobian& swj, const RealMatrix& q,
                       std::uint64_t count, std::uint64_t master_seed,
                       const SampleOptions& options = {},
                       const SandwichPencil* pencil = nullptr);

struct EstimationReport {
  Index n = 0;
  Index m = 0;
  std::uint64_t k_samples = 0;
  std::uint64_t master_seed = 0;
  RealVector theta;
  RealMatrix qfim;
  RealMatrix qgt_imag;
  RealMatrix mean_cfim;
  RealMatrix empirical_variance;
  RealMatrix predicted_variance;
  double rel_err_max = 0.0;
  double rel_err_frob = 0.0;
  std::vector<double> per_sample_rel_frob;
  // Extreme eigenvalues of each F^U relative to Q/2 on the range of Q.
  std::vector<double> per_sample_min_ratio;
  std::vector<double> per_sample_max_ratio;
  Index sandwich_rank = 0;
  // Smallest epsilon for which every sample satisfies the two-sided bound.
  double sandwich_epsilon = 0.0;
  std::vector<RealMatrix> samples;
  double min_prob = 0.0;
  std::uint64_t skipped_outcomes = 0;
};

/// Averages K random-basis CFIMs and compares the mean to Q/2.
/// Throws DegenerateFamilyError when |Q|_F < 1e-12.
EstimationReport estimate_qfim(const ProductExponentialAnsatz& ansatz,
                               const RealVector& theta, std::uint64_t samples,
                               std::uint64_t master_seed,
                               const SampleOptions& options = {});

}  // namespace haarfisher
