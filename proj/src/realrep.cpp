#include "haarfisher/realrep.hpp"

#include <string>

#include "haarfisher/error.hpp"

namespace haarfisher {

RealVector phi_vector(const ComplexVector& psi) {
  const Index n = psi.size();
  RealVector z(2 * n);
  z.head(n) = psi.real();
  z.tail(n) = psi.imag();
  return z;
}

RealMatrix phi_columns(const ComplexMatrix& columns) {
  const Index n = columns.rows();
  RealMatrix out(2 * n, columns.cols());
  out.topRows(n) = columns.real();
  out.bottomRows(n) = columns.imag();
  return out;
}

RealMatrix phi_matrix(const ComplexMatrix& z) {
  if (z.rows() != z.cols()) {
    throw DimensionError("phi_matrix: expected a square matrix, got " +
                         std::to_string(z.rows()) + "x" +
                         std::to_string(z.cols()));
  }
  const Index n = z.rows();
  RealMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = z.real();
  out.topRightCorner(n, n) = -z.imag();
  out.bottomLeftCorner(n, n) = z.imag();
  out.bottomRightCorner(n, n) = z.real();
  return out;
}

ComplexVector phi_inverse(const RealVector& z) {
  if (z.size() % 2 != 0) {
    throw DimensionError("phi_inverse: odd-length vector");
  }
  const Index n = z.size() / 2;
  ComplexVector psi(n);
  psi.real() = z.head(n);
  psi.imag() = z.tail(n);
  return psi;
}

RealMatrix symplectic_j(Index n) {
  if (n < 1) throw DomainError("symplectic_j: N must be >= 1");
  RealMatrix j = RealMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -RealMatrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = RealMatrix::Identity(n, n);
  return j;
}

RealVector apply_j(const RealVector& v) {
  const Index n = v.size() / 2;
  RealVector out(v.size());
  out.head(n) = -v.tail(n);
  out.tail(n) = v.head(n);
  return out;
}

SelectorMatrix dk_selector(Index k, Index n) {
  if (n < 1 || k < 0 || k >= n) {
    throw DomainError("dk_selector: index " + std::to_string(k) +
                      " out of range for N = " + std::to_string(n));
  }
  RealVector mask = RealVector::Zero(2 * n);
  mask(k) = 1.0;
  mask(k + n) = 1.0;
  return SelectorMatrix(mask);
}

RealVector dk_j_apply(Index k, const RealVector& z) {
  if (z.size() % 2 != 0) throw DimensionError("dk_j_apply: realified vector has odd length");
  const Index n = z.size() / 2;
  if (k < 0 || k >= n) {
    throw DomainError("dk_j_apply: index " + std::to_string(k) +
                      " out of range for N = " + std::to_string(n));
  }
  RealVector out = RealVector::Zero(z.size());
  out(k) = -z(k + n);
  out(k + n) = z(k);
  return out;
}

}  // namespace haarfisher
