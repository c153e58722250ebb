#pragma once

#include <cstdint>
#include <optional>

#include "haarfisher/ansatz.hpp"
#include "haarfisher/haar.hpp"
#include "haarfisher/linalg.hpp"

namespace haarfisher {

inline constexpr double kDefaultProbFloor = 1e-14;

/// Quantum geometric tensor. real_part is the QFIM.
struct Qgt {
  ComplexMatrix matrix;
  RealMatrix real_part;
  RealMatrix imag_part;
};

/// Classical Fisher information under one measurement basis, normalized with
/// the 1/4 factor so that its Haar average is Q/2.
struct Cfim {
  RealMatrix matrix;
  /// Stream the basis was drawn from; empty for a caller-supplied basis.
  std::optional<SeededStream> basis_stream;
  /// Smallest outcome probability seen.
  double min_prob = 0.0;
  /// Outcomes with probability <= prob_floor, excluded from the sum.
  Index skipped_outcomes = 0;
};

/// Q_ij = <d_i psi, d_j psi> - <d_i psi, psi><psi, d_j psi>.
Qgt qgt(const StateWithJacobian& swj);

/// QFIM through the realified projection form
/// (dz)^T (I - P(z, Jz)) (dz) with z = Phi(psi).
RealMatrix qfim_realrep(const StateWithJacobian& swj);

/// p_i = |(U^* psi)_i|^2.
RealVector measurement_probabilities(const ComplexVector& psi,
                                     const ComplexMatrix& u);

/// F_ij = sum_k d_i sqrt(p_k) d_j sqrt(p_k) evaluated directly from
/// phi = U^* psi and phi' = U^* d psi. Outcomes with p_k <= prob_floor are
/// skipped and counted.
Cfim cfim_definition(const StateWithJacobian& swj, const ComplexMatrix& u,
                     double prob_floor = kDefaultProbFloor);

/// The same matrix via (V dz)^T (I - P(Vz, D_1 J Vz, ..., D_N J Vz)) (V dz),
/// V = Phi(U)^T. Selector directions with |D_k J Vz|^2 <= prob_floor are
/// left out of the span.
Cfim cfim_projection(const StateWithJacobian& swj, const ComplexMatrix& u,
                     double prob_floor = kDefaultProbFloor);

/// Entrywise Haar variance of the CFIM:
/// (Q_ii Q_jj + Q_ij^2 + Qt_ij^2) / (8N), Qt the imaginary part of the QGT.
RealMatrix variance_predictor(const Qgt& q, Index n);

/// Monte Carlo average over `samples` Haar unitaries (sample i on
/// substream(master_seed, i)) of sum_k P(Phi(U) D_k Phi(U)^T J Phi(psi)).
/// The expected limit is (I - P(Phi psi) + P(J Phi psi)) / 2.
RealMatrix projection_sum_check(const ComplexVector& psi, std::uint64_t samples,
                                std::uint64_t master_seed, unsigned workers = 0);

/// (I - P(Phi psi) + P(J Phi psi)) / 2 for unit psi.
RealMatrix projection_sum_limit(const ComplexVector& psi);

}  // namespace haarfisher
