#include <cmath>

#include <gtest/gtest.h>

#include "mifit/linalg.hpp"
#include "support.hpp"

using namespace mifit;

namespace {

double reconstruction_error(const Matrix& a, const HermitianEig& e) {
  const std::size_t n = a.rows();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = e.values[i];
  return (a - e.vectors * d * e.vectors.adjoint()).max_abs();
}

}  // namespace

TEST(HermitianEig, Identity) {
  const HermitianEig e = hermitian_eig(Matrix::identity(2));
  EXPECT_DOUBLE_EQ(e.values[0], 1.0);
  EXPECT_DOUBLE_EQ(e.values[1], 1.0);
  EXPECT_LE((e.vectors - Matrix::identity(2)).max_abs(), 1e-15);
}

TEST(HermitianEig, RankOne) {
  const HermitianEig e = hermitian_eig(Matrix{{1, 1}, {1, 1}});
  EXPECT_NEAR(e.values[0], 2.0, 1e-14);
  EXPECT_NEAR(e.values[1], 0.0, 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(e.vectors(0, 0) - Complex(r)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(1, 0) - Complex(r)), 0.0, 1e-14);
}

TEST(HermitianEig, ComplexTwoByTwo) {
  const Complex i(0, 1);
  const HermitianEig e = hermitian_eig(Matrix{{2, i}, {-i, 2}});
  EXPECT_NEAR(e.values[0], 3.0, 1e-14);
  EXPECT_NEAR(e.values[1], 1.0, 1e-14);
}

TEST(HermitianEig, RejectsNonHermitian) {
  EXPECT_THROW(hermitian_eig(Matrix{{1, 2}, {0, 1}}), InvalidInput);
  EXPECT_THROW(hermitian_eig(Matrix(2, 3)), InvalidInput);
  EXPECT_THROW(hermitian_eig(Matrix{{Complex(1, 1), 0}, {0, 1}}), InvalidInput);
}

TEST(HermitianEig, ZeroSizeAndScalar) {
  EXPECT_TRUE(hermitian_eig(Matrix(0, 0)).values.empty());
  const HermitianEig e = hermitian_eig(Matrix{{-4}});
  EXPECT_DOUBLE_EQ(e.values[0], -4.0);
}

TEST(HermitianEig, ReconstructionOnRandomMatrices) {
  fixtures::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.pick(1, 8);
    const Matrix a = rng.hermitian(n);
    const HermitianEig e = hermitian_eig(a);
    EXPECT_LE(reconstruction_error(a, e), 1e-9 * (1.0 + a.max_abs()));
    EXPECT_LE(unitary_defect(e.vectors), 1e-12);
    for (std::size_t k = 1; k < n; ++k) EXPECT_GE(e.values[k - 1], e.values[k]);
  }
}

TEST(HermitianEig, DegenerateSpectrum) {
  fixtures::Rng rng(5);
  // U diag(3,3,1,1) U* for a random unitary U
  std::vector<CVector> cols;
  for (int k = 0; k < 4; ++k) cols.push_back(rng.vector(4));
  const std::vector<CVector> q = orthonormalize(cols);
  ASSERT_EQ(q.size(), 4u);
  Matrix u(4, 4), d(4, 4);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) u(i, j) = q[j][i];
  d(0, 0) = d(1, 1) = 3.0;
  d(2, 2) = d(3, 3) = 1.0;
  const Matrix a = u * d * u.adjoint();
  const HermitianEig e = hermitian_eig(a);
  EXPECT_NEAR(e.values[0], 3.0, 1e-12);
  EXPECT_NEAR(e.values[1], 3.0, 1e-12);
  EXPECT_NEAR(e.values[2], 1.0, 1e-12);
  EXPECT_NEAR(e.values[3], 1.0, 1e-12);
  EXPECT_LE(reconstruction_error(a, e), 1e-12);
}

TEST(HermitianEig, PhaseConventionIsDeterministic) {
  fixtures::Rng rng(9);
  const Matrix a = rng.hermitian(4);
  const HermitianEig e1 = hermitian_eig(a);
  const HermitianEig e2 = hermitian_eig(a);
  EXPECT_EQ(e1.values, e2.values);
  EXPECT_EQ(e1.vectors.data(), e2.vectors.data());
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (std::abs(e1.vectors(i, j)) > 1e-12) {
        EXPECT_EQ(e1.vectors(i, j).imag(), 0.0);
        EXPECT_GT(e1.vectors(i, j).real(), 0.0);
        break;
      }
    }
  }
}

TEST(Orthonormalize, DropsDependentVectors) {
  const std::vector<CVector> vs{{1, 0, 0}, {2, 0, 0}, {1, 1, 0}, {0, 0, 0}};
  const std::vector<CVector> q = orthonormalize(vs);
  ASSERT_EQ(q.size(), 2u);
  EXPECT_NEAR(std::abs(dot(q[0], q[1])), 0.0, 1e-15);
  EXPECT_NEAR(norm(q[1]), 1.0, 1e-15);
}

TEST(VectorOps, DotIsConjugateLinearInSecondArgument) {
  const Complex i(0, 1);
  const CVector a{1}, b{i};
  EXPECT_EQ(dot(a, b), -i);
  EXPECT_EQ(dot(b, a), i);
  EXPECT_THROW(dot(CVector{1, 2}, CVector{1}), DimensionMismatch);
}
