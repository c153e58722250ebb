#include <gtest/gtest.h>

#include "haarfisher/error.hpp"
#include "haarfisher/haar.hpp"
#include "haarfisher/realrep.hpp"
#include "test_util.hpp"

namespace haarfisher {
namespace {

using testing::random_complex;
using testing::random_unit;

TEST(PhiVector, Definition) {
  ComplexVector psi(2);
  psi << Complex(1, 2), Complex(3, 0);
  RealVector expected(4);
  expected << 1, 3, 2, 0;
  EXPECT_EQ(phi_vector(psi), expected);
}

TEST(PhiVector, ImaginaryUnitIsJ) {
  ComplexVector e1 = ComplexVector::Zero(2);
  e1(0) = 1.0;
  RealVector expected(4);
  expected << 0, 0, 1, 0;
  EXPECT_EQ(phi_vector(Complex(0, 1) * e1), expected);
  EXPECT_EQ(symplectic_j(2) * phi_vector(e1), expected);
  EXPECT_EQ(apply_j(phi_vector(e1)), expected);
}

TEST(PhiVector, Isometry) {
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(phi_vector(random_unit(17)).norm(), 1.0, 1e-15);
}

TEST(PhiVector, InverseRoundTrips) {
  const ComplexVector psi = random_complex(9, 1).col(0);
  EXPECT_EQ(phi_inverse(phi_vector(psi)), psi);
  EXPECT_THROW(phi_inverse(RealVector::Zero(3)), DimensionError);
}

TEST(PhiMatrix, IdentityAndImaginaryUnit) {
  const Index n = 3;
  EXPECT_EQ(phi_matrix(ComplexMatrix::Identity(n, n)), RealMatrix::Identity(2 * n, 2 * n));
  const ComplexMatrix i_n = Complex(0, 1) * ComplexMatrix::Identity(n, n);
  EXPECT_EQ(phi_matrix(i_n), symplectic_j(n));
}

TEST(PhiMatrix, BlockStructure) {
  const RealMatrix r = phi_matrix(random_complex(5, 5));
  EXPECT_EQ(r.topLeftCorner(5, 5), r.bottomRightCorner(5, 5));
  EXPECT_EQ(r.topRightCorner(5, 5), RealMatrix(-r.bottomLeftCorner(5, 5)));
}

TEST(PhiMatrix, UnitaryBecomesOrthogonal) {
  const ComplexMatrix u = sample_haar_unitary(12, substream(5, 0));
  const RealMatrix r = phi_matrix(u);
  EXPECT_LE(max_norm(RealMatrix(r.transpose() * r - RealMatrix::Identity(24, 24))), 1e-12);
}

TEST(PhiMatrix, Homomorphism) {
  const ComplexMatrix a = random_complex(6, 6);
  const ComplexMatrix b = random_complex(6, 6);
  const ComplexVector psi = random_complex(6, 1).col(0);
  EXPECT_LE(max_norm(RealMatrix(phi_matrix(a * b) - phi_matrix(a) * phi_matrix(b))), 1e-12);
  EXPECT_LE((phi_vector(a * psi) - phi_matrix(a) * phi_vector(psi)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(phi_matrix(a.adjoint()), RealMatrix(phi_matrix(a).transpose()));
  EXPECT_EQ(phi_columns(a.leftCols(2)).col(1), phi_vector(a.col(1)));
}

TEST(PhiMatrix, NonSquareThrows) {
  EXPECT_THROW(phi_matrix(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST(SymplecticJ, SmallCase) {
  RealMatrix expected(2, 2);
  expected << 0, -1, 1, 0;
  EXPECT_EQ(symplectic_j(1), expected);
  EXPECT_THROW(symplectic_j(0), DomainError);
}

TEST(SymplecticJ, Properties) {
  for (Index n : {1, 2, 7}) {
    const RealMatrix j = symplectic_j(n);
    EXPECT_EQ(j * j, RealMatrix(-RealMatrix::Identity(2 * n, 2 * n)));
    EXPECT_EQ(j.transpose(), RealMatrix(-j));
    const RealVector z = phi_vector(random_complex(n, 1).col(0));
    EXPECT_NEAR(z.dot(j * z), 0.0, 1e-14);
    EXPECT_EQ(apply_j(z), RealVector(j * z));
  }
}

TEST(DkSelector, Definition) {
  // Index 0 is the first outcome.
  RealVector expected(4);
  expected << 1, 0, 1, 0;
  EXPECT_EQ(dk_selector(0, 2).diagonal(), expected);
}

TEST(DkSelector, PartitionOfIdentityAndCommutesWithJ) {
  const Index n = 5;
  RealVector total = RealVector::Zero(2 * n);
  const RealMatrix j = symplectic_j(n);
  for (Index k = 0; k < n; ++k) {
    const SelectorMatrix d = dk_selector(k, n);
    total += d.diagonal();
    EXPECT_EQ(RealMatrix(d * j), RealMatrix(j * d));
  }
  EXPECT_EQ(total, RealVector::Ones(2 * n));
}

TEST(DkSelector, SelectsOutcomeProbability) {
  const ComplexVector psi = random_unit(6);
  const RealVector z = phi_vector(psi);
  for (Index k = 0; k < 6; ++k) {
    const RealVector w = dk_j_apply(k, z);
    EXPECT_NEAR(w.squaredNorm(), std::norm(psi(k)), 1e-15);
    EXPECT_EQ(w, RealVector(dk_selector(k, 6) * (symplectic_j(6) * z)));
  }
}

TEST(DkSelector, OutOfRangeThrows) {
  EXPECT_THROW(dk_selector(-1, 3), DomainError);
  EXPECT_THROW(dk_selector(3, 3), DomainError);
  EXPECT_THROW(dk_j_apply(2, RealVector::Zero(4)), DomainError);
}

TEST(InnerProduct, RealPartIsRealInnerProduct) {
  for (int i = 0; i < 1000; ++i) {
    const ComplexVector a = random_complex(8, 1).col(0);
    const ComplexVector b = random_complex(8, 1).col(0);
    EXPECT_NEAR(inner(a, b).real(), phi_vector(a).dot(phi_vector(b)), 1e-13);
  }
}

TEST(InnerProduct, ImaginaryPartThroughJ) {
  // <1, i> = i, while Phi(1)^T J Phi(i) = -1: the imaginary part carries a minus sign
  // with the conjugate-linear first slot.
  ComplexVector one(1), imag(1);
  one << 1.0;
  imag << Complex(0, 1);
  EXPECT_EQ(inner(one, imag), Complex(0, 1));
  EXPECT_EQ(phi_vector(one).dot(apply_j(phi_vector(imag))), -1.0);
  for (int i = 0; i < 1000; ++i) {
    const ComplexVector a = random_complex(8, 1).col(0);
    const ComplexVector b = random_complex(8, 1).col(0);
    EXPECT_NEAR(inner(a, b).imag(), -phi_vector(a).dot(apply_j(phi_vector(b))), 1e-13);
  }
}

}  // namespace
}  // namespace haarfisher
