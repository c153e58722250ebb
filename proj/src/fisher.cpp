#include "haarfisher/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "haarfisher/error.hpp"
#include "haarfisher/parallel.hpp"
#include "haarfisher/realrep.hpp"

namespace haarfisher {

namespace {

void check_basis(const StateWithJacobian& swj, const ComplexMatrix& u) {
  if (u.rows() != swj.dim() || u.cols() != swj.dim()) {
    throw DimensionError("cfim: basis shape does not match the state dimension");
  }
}

}  // namespace

Qgt qgt(const StateWithJacobian& swj) {
  const ComplexMatrix& jac = swj.jacobian;
  // overlap(i) = <d_i psi, psi>
  const ComplexVector overlap = jac.adjoint() * swj.state;
  ComplexMatrix q = jac.adjoint() * jac - overlap * overlap.adjoint();
  q = 0.5 * (q + q.adjoint()).eval();
  RealMatrix re = q.real();
  RealMatrix im = q.imag();
  return {std::move(q), std::move(re), std::move(im)};
}

RealMatrix qfim_realrep(const StateWithJacobian& swj) {
  const RealVector z = phi_vector(swj.state);
  const RealMatrix dz = phi_columns(swj.jacobian);
  const RealVector span[] = {z, apply_j(z)};
  const RealMatrix basis = orthonormal_basis(span);
  const RealMatrix coeffs = basis.transpose() * dz;
  return symmetrized(dz.transpose() * dz - coeffs.transpose() * coeffs);
}

RealVector measurement_probabilities(const ComplexVector& psi,
                                     const ComplexMatrix& u) {
  if (u.rows() != psi.size() || u.cols() != psi.size()) {
    throw DimensionError("measurement_probabilities: basis shape mismatch");
  }
  return (u.adjoint() * psi).cwiseAbs2();
}

Cfim cfim_definition(const StateWithJacobian& swj, const ComplexMatrix& u,
                     double prob_floor) {
  check_basis(swj, u);
  const ComplexVector phi = u.adjoint() * swj.state;
  const ComplexMatrix dphi = u.adjoint() * swj.jacobian;
  const Index n = swj.dim();
  const Index m = swj.num_params();

  // Row k holds d_i sqrt(p_k) = Re(conj(phi_k) dphi_ki) / sqrt(p_k).
  RealMatrix dsqrt = RealMatrix::Zero(n, m);
  Cfim out;
  out.min_prob = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < n; ++k) {
    const double p = std::norm(phi(k));
    out.min_prob = std::min(out.min_prob, p);
    if (p <= prob_floor) {
      ++out.skipped_outcomes;
      continue;
    }
    const double inv_sqrt_p = 1.0 / std::sqrt(p);
    for (Index i = 0; i < m; ++i) {
      dsqrt(k, i) = (std::conj(phi(k)) * dphi(k, i)).real() * inv_sqrt_p;
    }
  }
  out.matrix = symmetrized(dsqrt.transpose() * dsqrt);
  return out;
}

Cfim cfim_projection(const StateWithJacobian& swj, const ComplexMatrix& u,
                     double prob_floor) {
  check_basis(swj, u);
  const Index n = swj.dim();
  // V = Phi(U)^T = Phi(U^*), applied in complex arithmetic before realifying.
  const RealVector vz = phi_vector(u.adjoint() * swj.state);
  const RealMatrix vdz = phi_columns(u.adjoint() * swj.jacobian);

  Cfim out;
  out.min_prob = std::numeric_limits<double>::infinity();
  // The spanning set is already orthogonal: each D_k J Vz lives on coordinates
  // {k, k+N} and is orthogonal to Vz there, so normalizing suffices.
  const Index m = swj.num_params();
  RealMatrix coeffs(n + 1, m);
  Index rows = 0;
  coeffs.row(rows++) = (vz.transpose() * vdz) / vz.norm();
  for (Index k = 0; k < n; ++k) {
    const double p = vz(k) * vz(k) + vz(k + n) * vz(k + n);  // |D_k J Vz|^2
    out.min_prob = std::min(out.min_prob, p);
    if (p <= prob_floor) {
      ++out.skipped_outcomes;
      continue;
    }
    coeffs.row(rows++) = (vz(k) * vdz.row(k + n) - vz(k + n) * vdz.row(k)) / std::sqrt(p);
  }
  const auto c = coeffs.topRows(rows);
  out.matrix = symmetrized(vdz.transpose() * vdz - c.transpose() * c);
  return out;
}

RealMatrix variance_predictor(const Qgt& q, Index n) {
  if (n < 2) throw DomainError("variance_predictor: N must be >= 2");
  const RealVector diag = q.real_part.diagonal();
  const RealMatrix v = diag * diag.transpose() +
                       q.real_part.cwiseAbs2() + q.imag_part.cwiseAbs2();
  return v / (8.0 * static_cast<double>(n));
}

RealMatrix projection_sum_limit(const ComplexVector& psi) {
  const RealVector z = phi_vector(psi);
  const RealVector jz = apply_j(z);
  const Index dim = z.size();
  return 0.5 * (RealMatrix::Identity(dim, dim) - z * z.transpose() +
                jz * jz.transpose());
}

RealMatrix projection_sum_check(const ComplexVector& psi, std::uint64_t samples,
                                std::uint64_t master_seed, unsigned workers) {
  const Index n = psi.size();
  if (n < 2) throw DomainError("projection_sum_check: N must be >= 2");
  if (samples < 1) throw DomainError("projection_sum_check: need at least one sample");
  const RealVector jz = apply_j(phi_vector(psi));
  const Index dim = 2 * n;

  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    RealMatrix acc = RealMatrix::Zero(dim, dim);
    for (std::uint64_t s = begin; s < end; ++s) {
      const RealMatrix pu = phi_matrix(sample_haar_unitary(n, substream(master_seed, s)));
      const RealVector y = pu.transpose() * jz;
      for (Index k = 0; k < n; ++k) {
        // Phi(U) D_k y only touches columns k and k + N of Phi(U).
        const RealVector w = pu.col(k) * y(k) + pu.col(k + n) * y(k + n);
        const double w2 = w.squaredNorm();
        if (w2 == 0.0) continue;
        acc.noalias() += (w / w2) * w.transpose();
      }
    }
    return acc;
  };
  RealMatrix total = parallel_block_reduce<RealMatrix>(
      samples, workers, block, [](RealMatrix& into, const RealMatrix& from) { into += from; });
  return total / static_cast<double>(samples);
}

}  // namespace haarfisher
