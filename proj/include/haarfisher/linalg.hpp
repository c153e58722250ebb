#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace haarfisher {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultDropTol = 1e-12;

/// Orthonormal basis (as columns) of the span of `vectors`, built by modified
/// Gram-Schmidt with one re-orthogonalization pass. A vector whose residual
/// norm after orthogonalization is <= drop_tol contributes nothing.
RealMatrix orthonormal_basis(std::span<const RealVector> vectors,
                             double drop_tol = kDefaultDropTol);

/// Same, with the input vectors given as the columns of a matrix.
RealMatrix orthonormal_basis(const RealMatrix& columns,
                             double drop_tol = kDefaultDropTol);

/// Orthogonal projector onto the span of `vectors`.
RealMatrix project_onto_span(std::span<const RealVector> vectors,
                             double drop_tol = kDefaultDropTol);

struct HermitianEig {
  RealVector values;     // ascending
  ComplexMatrix vectors; // unitary, columns are eigenvectors
};

/// Eigendecomposition H = V diag(values) V*. Throws DomainError if H departs
/// from Hermitian by more than 1e-10 in max norm.
HermitianEig hermitian_eig(const ComplexMatrix& h);

/// exp(-i t H) for Hermitian H, via the eigendecomposition.
ComplexMatrix hermitian_expm(const ComplexMatrix& h, double t);
ComplexMatrix hermitian_expm(const HermitianEig& eig, double t);

double max_norm(const RealMatrix& a);
double max_norm(const ComplexMatrix& a);

/// Largest singular value of a real symmetric matrix (max |eigenvalue|).
double symmetric_spectral_norm(const RealMatrix& a);

/// (A + A^T) / 2
RealMatrix symmetrized(const RealMatrix& a);

bool all_finite(const RealMatrix& a);
bool all_finite(const ComplexMatrix& a);

}  // namespace haarfisher
