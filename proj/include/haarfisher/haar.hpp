#pragma once

#include <cstdint>
#include <random>

#include "haarfisher/linalg.hpp"

namespace haarfisher {

/// Identifies a reproducible random stream. The generated sequence is a pure
/// function of (master_seed, stream_id).
struct SeededStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  bool operator==(const SeededStream&) const = default;

  /// 64-bit engine seeded by mixing both fields.
  std::mt19937_64 engine() const;
};

/// Stream of the Monte Carlo sample with the given index. Independent of how
/// samples are scheduled across workers.
SeededStream substream(std::uint64_t master_seed, std::uint64_t sample_index);

// Reserved stream ids, far from any sample index.
inline constexpr std::uint64_t kAnsatzStreamId = 0xA175A72000000001ULL;
inline constexpr std::uint64_t kThetaStreamId = 0xA175A72000000002ULL;

enum class PhaseFix { kApply, kSkip };

/// Haar-distributed unitary: Ginibre matrix, QR, and column j of Q scaled by
/// R_jj/|R_jj| so that the factorization has a positive diagonal R. PhaseFix::kSkip keeps the raw Householder Q, which is
/// unitary but not Haar; it exists for negative-control tests.
ComplexMatrix sample_haar_unitary(Index n, const SeededStream& stream,
                                  PhaseFix phase_fix = PhaseFix::kApply);

/// N x M matrix of i.i.d. standard complex Gaussians (E|g|^2 = 1).
ComplexMatrix complex_gaussian(Index rows, Index cols, std::mt19937_64& engine);

}  // namespace haarfisher

namespace haarfisher {

/// Sample mean of one scalar statistic with its standard error.
struct MomentCheck {
  double estimate = 0.0;
  double expected = 0.0;
  double std_error = 0.0;

  double z_score() const;
  bool within(double num_std_errors) const { return z_score() <= num_std_errors; }
};

/// Moments of U_11 over Haar samples: E|U11|^2 = 1/N,
/// E|U11|^4 = 2/(N(N+1)), and E[Re U11] = E[Im U11] = 0.
struct HaarMomentReport {
  MomentCheck abs2;
  MomentCheck abs4;
  MomentCheck re_u11;
  MomentCheck im_u11;
};

HaarMomentReport haar_moments(Index n, std::uint64_t samples, std::uint64_t master_seed,
                              PhaseFix phase_fix = PhaseFix::kApply, unsigned workers = 0);

}  // namespace haarfisher
