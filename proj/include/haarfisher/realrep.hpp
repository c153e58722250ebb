#pragma once

// Realification C^N -> R^{2N}: a complex vector x + iy maps to (x, y), and a
// complex matrix A + iB maps to [[A, -B], [B, A]], so that multiplication by
// i becomes the symplectic matrix J.

#include "haarfisher/linalg.hpp"

namespace haarfisher {

using SelectorMatrix = Eigen::DiagonalMatrix<double, Eigen::Dynamic>;

RealVector phi_vector(const ComplexVector& psi);

/// Column-wise realification of an N x m complex matrix into 2N x m.
RealMatrix phi_columns(const ComplexMatrix& columns);

/// Block form [[A, -B], [B, A]]; throws DimensionError for non-square input.
RealMatrix phi_matrix(const ComplexMatrix& z);

ComplexVector phi_inverse(const RealVector& z);

RealMatrix symplectic_j(Index n);

/// J v without forming J: (x, y) -> (-y, x).
RealVector apply_j(const RealVector& v);

/// D_k as a diagonal mask selecting coordinates k and k + N (k is 0-based).
SelectorMatrix dk_selector(Index k, Index n);

/// D_k J z as a dense vector with at most two non-zeros.
RealVector dk_j_apply(Index k, const RealVector& z);

/// Complex inner product, conjugate-linear in the first argument.
inline Complex inner(const ComplexVector& a, const ComplexVector& b) {
  return a.dot(b);  // Eigen conjugates the left operand
}

}  // namespace haarfisher
