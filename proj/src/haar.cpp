#include "haarfisher/haar.hpp"

#include <cmath>

#include "haarfisher/error.hpp"

namespace haarfisher {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 SeededStream::engine() const {
  const std::uint64_t a = splitmix64(master_seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(stream_id + 0x632BE59BD9B4E019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

SeededStream substream(std::uint64_t master_seed, std::uint64_t sample_index) {
  return {master_seed, sample_index};
}

ComplexMatrix complex_gaussian(Index rows, Index cols, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(rows, cols);
  // Fill column-major in a fixed order so results do not depend on Eigen's
  // traversal.
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(engine);
      const double im = normal(engine);
      g(r, c) = Complex(re, im);
    }
  }
  return g;
}

ComplexMatrix sample_haar_unitary(Index n, const SeededStream& stream,
                                  PhaseFix phase_fix) {
  if (n < 1) throw DomainError("sample_haar_unitary: N must be >= 1");
  auto engine = stream.engine();
  for (;;) {
    const ComplexMatrix ginibre = complex_gaussian(n, n, engine);
    Eigen::HouseholderQR<ComplexMatrix> qr(ginibre);
    const auto r_diag = qr.matrixQR().diagonal();
    if ((r_diag.array().abs() == 0.0).any()) continue;  // measure zero: redraw
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    if (phase_fix == PhaseFix::kApply) {
      for (Index j = 0; j < n; ++j) {
        const Complex rjj = r_diag(j);
        q.col(j) *= rjj / std::abs(rjj);
      }
    }
    return q;
  }
}

}  // namespace haarfisher

#include <array>
#include <limits>

#include "haarfisher/parallel.hpp"

namespace haarfisher {

double MomentCheck::z_score() const {
  const double diff = std::abs(estimate - expected);
  if (std_error > 0.0) return diff / std_error;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

HaarMomentReport haar_moments(Index n, std::uint64_t samples, std::uint64_t master_seed,
                              PhaseFix phase_fix, unsigned workers) {
  if (samples < 2) throw DomainError("haar_moments: need at least two samples");
  // Per statistic: running sum and sum of squares.
  using Sums = std::array<double, 8>;
  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    Sums acc{};
    for (std::uint64_t s = begin; s < end; ++s) {
      const Complex u11 = sample_haar_unitary(n, substream(master_seed, s), phase_fix)(0, 0);
      const double a2 = std::norm(u11);
      const std::array<double, 4> x{a2, a2 * a2, u11.real(), u11.imag()};
      for (std::size_t i = 0; i < 4; ++i) {
        acc[2 * i] += x[i];
        acc[2 * i + 1] += x[i] * x[i];
      }
    }
    return acc;
  };
  const Sums total = parallel_block_reduce<Sums>(samples, workers, block, [](Sums& a, const Sums& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  });
  const double k = static_cast<double>(samples);
  auto moment = [&](std::size_t i, double expected) {
    const double mean = total[2 * i] / k;
    const double var = std::max(0.0, (total[2 * i + 1] - k * mean * mean) / (k - 1.0));
    return MomentCheck{mean, expected, std::sqrt(var / k)};
  };
  const double nd = static_cast<double>(n);
  return {moment(0, 1.0 / nd), moment(1, 2.0 / (nd * (nd + 1.0))), moment(2, 0.0),
          moment(3, 0.0)};
}

}  // namespace haarfisher
