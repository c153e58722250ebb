#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "haarfisher/linalg.hpp"

namespace haarfisher {

/// Pure state psi_theta together with its Jacobian d psi / d theta
/// (column j holds the derivative with respect to theta_j).
struct StateWithJacobian {
  ComplexVector state;
  ComplexMatrix jacobian;

  Index dim() const { return state.size(); }
  Index num_params() const { return jacobian.cols(); }
};

/// psi_theta = V_m ... V_1 psi_0 with V_j = exp(-i theta_j H_j).
///
/// The seeded reference family draws H_j = (G_j + G_j^*) / (2 sqrt N) from
/// i.i.d. standard complex Gaussian G_j and a normalized complex Gaussian
/// psi_0. Custom families (explicit generators) carry no seed and are used
/// for hand-checkable cases such as exp(-i theta Y)|0> = (cos theta, sin theta).
class ProductExponentialAnsatz {
 public:
  static ProductExponentialAnsatz seeded(Index n, Index m, std::uint64_t seed);
  static ProductExponentialAnsatz from_generators(
      std::vector<ComplexMatrix> generators, ComplexVector base_state);

  Index dim() const { return base_state_.size(); }
  Index num_params() const { return static_cast<Index>(generators_.size()); }
  /// Seed of the reference family; empty for custom generators.
  std::optional<std::uint64_t> seed() const { return seed_; }

  const std::vector<ComplexMatrix>& generators() const { return generators_; }
  const ComplexVector& base_state() const { return base_state_; }

  /// Exact state and product-rule Jacobian.
  StateWithJacobian evaluate(const RealVector& theta) const;

  /// State only.
  ComplexVector state(const RealVector& theta) const;

 private:
  ProductExponentialAnsatz(std::vector<ComplexMatrix> generators,
                           ComplexVector base_state,
                           std::optional<std::uint64_t> seed);

  // exp(-i t H_j) v using the cached eigendecomposition.
  ComplexVector apply_exp(std::size_t j, double t, const ComplexVector& v) const;
  void check_theta(const RealVector& theta) const;

  std::vector<ComplexMatrix> generators_;
  std::vector<HermitianEig> eigs_;
  ComplexVector base_state_;
  std::optional<std::uint64_t> seed_;
};

/// Free-function spelling of ProductExponentialAnsatz::seeded.
ProductExponentialAnsatz build_ansatz(Index n, Index m, std::uint64_t seed);

/// Central finite-difference Jacobian, column j =
/// (psi(theta + h e_j) - psi(theta - h e_j)) / (2h).
ComplexMatrix jacobian_fd(const ProductExponentialAnsatz& ansatz,
                          const RealVector& theta, double step);

/// theta drawn uniformly from [-pi, pi]^m on the seed's theta stream.
RealVector seeded_uniform_theta(Index m, std::uint64_t seed);

}  // namespace haarfisher
