#include "haarfisher/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "haarfisher/error.hpp"

namespace haarfisher {

namespace {

constexpr double kHermitianTol = 1e-10;

// Orthogonalizes `v` against the first `rank` columns of `basis` in place,
// one modified Gram-Schmidt sweep.
void mgs_sweep(const RealMatrix& basis, Index rank, RealVector& v) {
  for (Index j = 0; j < rank; ++j) {
    v -= basis.col(j).dot(v) * basis.col(j);
  }
}

}  // namespace

RealMatrix orthonormal_basis(const RealMatrix& columns, double drop_tol) {
  if (!(drop_tol > 0.0)) {
    throw DomainError("orthonormal_basis: drop_tol must be positive");
  }
  const Index dim = columns.rows();
  RealMatrix basis(dim, std::min(dim, columns.cols()));
  Index rank = 0;
  RealVector v(dim);
  for (Index c = 0; c < columns.cols() && rank < dim; ++c) {
    v = columns.col(c);
    mgs_sweep(basis, rank, v);
    mgs_sweep(basis, rank, v);  // re-orthogonalize
    const double norm = v.norm();
    if (norm <= drop_tol) continue;
    basis.col(rank++) = v / norm;
  }
  return basis.leftCols(rank);
}

RealMatrix orthonormal_basis(std::span<const RealVector> vectors,
                             double drop_tol) {
  if (vectors.empty()) return RealMatrix(0, 0);
  const Index dim = vectors.front().size();
  RealMatrix columns(dim, static_cast<Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dim) {
      throw DimensionError("orthonormal_basis: vector " + std::to_string(i) +
                           " has length " + std::to_string(vectors[i].size()) +
                           ", expected " + std::to_string(dim));
    }
    columns.col(static_cast<Index>(i)) = vectors[i];
  }
  return orthonormal_basis(columns, drop_tol);
}

RealMatrix project_onto_span(std::span<const RealVector> vectors,
                             double drop_tol) {
  const RealMatrix q = orthonormal_basis(vectors, drop_tol);
  return q * q.transpose();
}

HermitianEig hermitian_eig(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) {
    throw DimensionError("hermitian_eig: matrix is not square");
  }
  const double asym = max_norm(ComplexMatrix(h - h.adjoint()));
  if (!(asym <= kHermitianTol)) {
    throw DomainError("hermitian_eig: matrix is not Hermitian (max |H - H*| = " +
                      std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error("hermitian_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix hermitian_expm(const HermitianEig& eig, double t) {
  const ComplexVector phases =
      (eig.values.cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix hermitian_expm(const ComplexMatrix& h, double t) {
  return hermitian_expm(hermitian_eig(h), t);
}

double max_norm(const RealMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double max_norm(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double symmetric_spectral_norm(const RealMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

RealMatrix symmetrized(const RealMatrix& a) {
  return 0.5 * (a + a.transpose());
}

bool all_finite(const RealMatrix& a) { return a.allFinite(); }
bool all_finite(const ComplexMatrix& a) {
  return a.real().allFinite() && a.imag().allFinite();
}

}  // namespace haarfisher
