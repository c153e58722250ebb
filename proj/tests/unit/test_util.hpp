#pragma once

#include <random>

#include "haarfisher/linalg.hpp"

namespace haarfisher::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20241017);
  return engine;
}

inline RealVector random_real(Index n) {
  std::normal_distribution<double> g;
  RealVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = g(rng());
  return v;
}

inline ComplexMatrix random_complex(Index rows, Index cols) {
  std::normal_distribution<double> g;
  ComplexMatrix a(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) a(r, c) = Complex(g(rng()), g(rng()));
  return a;
}

inline ComplexVector random_unit(Index n) {
  ComplexVector v = random_complex(n, 1).col(0);
  return v / v.norm();
}

inline ComplexMatrix random_hermitian(Index n) {
  const ComplexMatrix g = random_complex(n, n);
  return 0.5 * (g + g.adjoint());
}

inline ComplexMatrix pauli_x() {
  ComplexMatrix p(2, 2);
  p << 0, 1, 1, 0;
  return p;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix p(2, 2);
  p << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return p;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix p(2, 2);
  p << 1, 0, 0, -1;
  return p;
}

}  // namespace haarfisher::testing
