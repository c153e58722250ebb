#include "haarfisher/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "haarfisher/error.hpp"
#include "haarfisher/haar.hpp"

namespace haarfisher {

ProductExponentialAnsatz::ProductExponentialAnsatz(
    std::vector<ComplexMatrix> generators, ComplexVector base_state,
    std::optional<std::uint64_t> seed)
    : generators_(std::move(generators)),
      base_state_(std::move(base_state)),
      seed_(seed) {
  eigs_.reserve(generators_.size());
  for (const auto& h : generators_) eigs_.push_back(hermitian_eig(h));
}

ProductExponentialAnsatz ProductExponentialAnsatz::seeded(Index n, Index m,
                                                          std::uint64_t seed) {
  if (n < 2) throw DomainError("build_ansatz: N must be >= 2");
  if (m < 1) throw DomainError("build_ansatz: m must be >= 1");
  auto engine = SeededStream{seed, kAnsatzStreamId}.engine();
  const double scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
  std::vector<ComplexMatrix> generators;
  generators.reserve(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) {
    const ComplexMatrix g = complex_gaussian(n, n, engine);
    generators.emplace_back((g + g.adjoint()) * scale);
  }
  ComplexVector psi0 = complex_gaussian(n, 1, engine).col(0);
  psi0 /= psi0.norm();
  return ProductExponentialAnsatz(std::move(generators), std::move(psi0), seed);
}

ProductExponentialAnsatz ProductExponentialAnsatz::from_generators(
    std::vector<ComplexMatrix> generators, ComplexVector base_state) {
  if (generators.empty()) throw DomainError("ansatz: at least one generator required");
  const Index n = base_state.size();
  if (n < 2) throw DomainError("ansatz: N must be >= 2");
  for (const auto& h : generators) {
    if (h.rows() != n || h.cols() != n) {
      throw DimensionError("ansatz: generator shape does not match base state");
    }
  }
  const double norm = base_state.norm();
  if (!(std::abs(norm - 1.0) <= 1e-12)) {
    throw DomainError("ansatz: base state is not normalized");
  }
  return ProductExponentialAnsatz(std::move(generators), std::move(base_state),
                                  std::nullopt);
}

ComplexVector ProductExponentialAnsatz::apply_exp(std::size_t j, double t,
                                                  const ComplexVector& v) const {
  const auto& eig = eigs_[j];
  const ComplexVector phases =
      (eig.values.cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
  return eig.vectors * (phases.cwiseProduct(eig.vectors.adjoint() * v));
}

void ProductExponentialAnsatz::check_theta(const RealVector& theta) const {
  if (theta.size() != num_params()) {
    throw DimensionError("ansatz: theta has length " + std::to_string(theta.size()) +
                         ", expected " + std::to_string(num_params()));
  }
  if (!theta.allFinite()) throw DomainError("ansatz: theta is not finite");
}

ComplexVector ProductExponentialAnsatz::state(const RealVector& theta) const {
  check_theta(theta);
  ComplexVector psi = base_state_;
  for (std::size_t j = 0; j < generators_.size(); ++j) {
    psi = apply_exp(j, theta(static_cast<Index>(j)), psi);
  }
  return psi;
}

StateWithJacobian ProductExponentialAnsatz::evaluate(const RealVector& theta) const {
  check_theta(theta);
  const std::size_t m = generators_.size();
  ComplexMatrix jac(dim(), static_cast<Index>(m));
  ComplexVector psi = base_state_;
  for (std::size_t j = 0; j < m; ++j) {
    psi = apply_exp(j, theta(static_cast<Index>(j)), psi);
    // Derivative of V_j is -i H_j V_j; the later factors are applied below.
    jac.col(static_cast<Index>(j)) = Complex(0.0, -1.0) * (generators_[j] * psi);
    for (std::size_t k = 0; k < j; ++k) {
      jac.col(static_cast<Index>(k)) =
          apply_exp(j, theta(static_cast<Index>(j)), jac.col(static_cast<Index>(k)));
    }
  }
  return {std::move(psi), std::move(jac)};
}

ProductExponentialAnsatz build_ansatz(Index n, Index m, std::uint64_t seed) {
  return ProductExponentialAnsatz::seeded(n, m, seed);
}

ComplexMatrix jacobian_fd(const ProductExponentialAnsatz& ansatz,
                          const RealVector& theta, double step) {
  if (!(step > 0.0)) throw DomainError("jacobian_fd: step must be positive");
  const Index m = ansatz.num_params();
  ComplexMatrix jac(ansatz.dim(), m);
  for (Index j = 0; j < m; ++j) {
    RealVector plus = theta;
    RealVector minus = theta;
    plus(j) += step;
    minus(j) -= step;
    jac.col(j) = (ansatz.state(plus) - ansatz.state(minus)) / (2.0 * step);
  }
  return jac;
}

RealVector seeded_uniform_theta(Index m, std::uint64_t seed) {
  auto engine = SeededStream{seed, kThetaStreamId}.engine();
  std::uniform_real_distribution<double> uniform(-std::numbers::pi, std::numbers::pi);
  RealVector theta(m);
  for (Index j = 0; j < m; ++j) theta(j) = uniform(engine);
  return theta;
}

}  // namespace haarfisher
