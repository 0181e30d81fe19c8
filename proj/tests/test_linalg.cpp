#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/linalg.hpp"

using namespace qcorr;
namespace la = qcorr::linalg;

namespace {

ComplexMatrix diag(std::initializer_list<double> xs) {
  ComplexMatrix m = ComplexMatrix::Zero(xs.size(), xs.size());
  int i = 0;
  for (double x : xs) m(i, i) = x, ++i;
  return m;
}

double reconstruction_residual(const ComplexMatrix& m, const la::Eigensystem& es) {
  return (es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint() - m).norm();
}

}  // namespace

TEST(Eigen, IdentityHasUnitSpectrum) {
  const auto es = la::hermitian_eigendecompose(la::identity(2));
  EXPECT_NEAR(es.values(0), 1.0, 1e-15);
  EXPECT_NEAR(es.values(1), 1.0, 1e-15);
}

TEST(Eigen, DiagonalIsAscending) {
  const auto es = la::hermitian_eigendecompose(diag({0.75, 0.25}));
  EXPECT_NEAR(es.values(0), 0.25, 1e-15);
  EXPECT_NEAR(es.values(1), 0.75, 1e-15);
}

TEST(Eigen, PauliX) {
  const auto es = la::hermitian_eigendecompose(la::pauli_x());
  EXPECT_NEAR(es.values(0), -1.0, 1e-14);
  EXPECT_NEAR(es.values(1), 1.0, 1e-14);
  // Up to phase, (|0> - |1>)/sqrt2 then (|0> + |1>)/sqrt2.
  const ComplexMatrix minus = oracle::ket({1.0, -1.0}) / std::sqrt(2.0);
  const ComplexMatrix plus = oracle::ket({1.0, 1.0}) / std::sqrt(2.0);
  EXPECT_NEAR(std::abs((minus.adjoint() * es.vectors.col(0))(0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs((plus.adjoint() * es.vectors.col(1))(0)), 1.0, 1e-12);
  EXPECT_LE(reconstruction_residual(la::pauli_x(), es), 1e-12);
}

TEST(Eigen, RejectsNonHermitian) {
  ComplexMatrix m = la::pauli_x();
  m(0, 1) = 2.0;
  EXPECT_THROW(la::hermitian_eigendecompose(m), NotHermitian);
  m = la::pauli_x();
  m(0, 1) += 5e-11;  // inside the tolerance
  EXPECT_NO_THROW(la::hermitian_eigendecompose(m));
}

TEST(Eigen, RandomReconstructionAndUnitarity) {
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 8; ++d) {
    for (int rep = 0; rep < 5; ++rep) {
      const ComplexMatrix m = la::random_hermitian(d, rng);
      const auto es = la::hermitian_eigendecompose(m);
      EXPECT_LE(reconstruction_residual(m, es), 1e-10 * std::max(1.0, m.norm()));
      EXPECT_LE((es.vectors.adjoint() * es.vectors - la::identity(d)).norm(), 1e-10);
      for (int k = 1; k < d; ++k) EXPECT_LE(es.values(k - 1), es.values(k));
    }
  }
}

TEST(PsdSqrt, Examples) {
  EXPECT_LE((la::psd_sqrt(la::identity(3)) - la::identity(3)).norm(), 1e-14);
  EXPECT_LE((la::psd_sqrt(diag({4, 9})) - diag({2, 3})).norm(), 1e-14);
  ComplexMatrix w = ComplexMatrix::Identity(4, 4) * 0.125;
  const ComplexMatrix psi = oracle::ket({0.0, 1.0, -1.0, 0.0}) / std::sqrt(2.0);
  w += 0.5 * psi * psi.adjoint();
  const ComplexMatrix r = la::psd_sqrt(w);
  EXPECT_LE((r * r - w).norm(), 1e-10);
  EXPECT_LE((r - r.adjoint()).norm(), 1e-14);
}

TEST(PsdSqrt, ClampsTinyNegativesRejectsLarge) {
  EXPECT_NO_THROW(la::psd_sqrt(diag({1.0, -5e-11})));
  EXPECT_THROW(la::psd_sqrt(diag({1.0, -1e-6})), NotPSD);
}

TEST(PsdSqrt, RandomPsd) {
  std::mt19937_64 rng(5);
  for (int d = 1; d <= 6; ++d) {
    const ComplexMatrix g = la::ginibre(d, d, rng);
    const ComplexMatrix m = g * g.adjoint();
    const ComplexMatrix r = la::psd_sqrt(m);
    EXPECT_LE((r * r - m).norm(), 1e-9 * std::max(1.0, m.norm()));
    EXPECT_GE(la::min_eigenvalue(r), -1e-12);
  }
}

TEST(Kron, Examples) {
  EXPECT_LE((la::kron(la::identity(2), la::identity(2)) - la::identity(4)).norm(), 0.0);
  EXPECT_LE((la::kron(la::pauli_z(), la::pauli_z()) - diag({1, -1, -1, 1})).norm(), 0.0);
  ComplexMatrix c(1, 1);
  c(0, 0) = Complex(2.0, -1.0);
  const ComplexMatrix a = la::pauli_y();
  EXPECT_LE((la::kron(a, c) - c(0, 0) * a).norm(), 1e-15);
}

TEST(Kron, MatchesOracleAndMixedProduct) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const ComplexMatrix a = la::ginibre(2, 2, rng), b = la::ginibre(2, 2, rng);
    const ComplexMatrix c = la::ginibre(2, 2, rng), d = la::ginibre(2, 2, rng);
    EXPECT_LE((la::kron(a, b) - oracle::kron(a, b)).norm(), 1e-15);
    EXPECT_LE((la::kron(a, b) * la::kron(c, d) - la::kron(a * c, b * d)).norm(), 1e-12);
    // Bilinearity.
    const Complex s(0.3, -1.2);
    EXPECT_LE((la::kron(a + s * c, b) - la::kron(a, b) - s * la::kron(c, b)).norm(), 1e-12);
    EXPECT_LE((la::kron(a, b + s * d) - la::kron(a, b) - s * la::kron(a, d)).norm(), 1e-12);
  }
  const ComplexMatrix r = la::ginibre(2, 3, rng), t = la::ginibre(3, 1, rng);
  EXPECT_LE((la::kron(r, t) - oracle::kron(r, t)).norm(), 1e-15);
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(la::operator_norm(la::identity(3)), 1.0, 1e-12);
  EXPECT_NEAR(la::operator_norm(diag({3, -4})), 4.0, 1e-12);
  EXPECT_NEAR(la::operator_norm(oracle::ket({1.0, 1.0})), std::sqrt(2.0), 1e-12);
}

TEST(OperatorNorm, UnitaryInvariance) {
  std::mt19937_64 rng(8);
  for (int d = 2; d <= 6; ++d) {
    const ComplexMatrix m = la::ginibre(d, d, rng);
    const ComplexMatrix u = la::random_unitary(d, rng), w = la::random_unitary(d, rng);
    EXPECT_LE((u.adjoint() * u - la::identity(d)).norm(), 1e-12);
    const double n = la::operator_norm(m);
    EXPECT_NEAR(la::operator_norm(u * m * w), n, 1e-9 * n);
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    EXPECT_NEAR(n, svd.singularValues()(0), 1e-9 * n);
  }
}

TEST(Vec, RowMajorRoundTrip) {
  ComplexMatrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  const ComplexVector v = la::vec(m);
  EXPECT_EQ(v(1), Complex(2.0));
  EXPECT_EQ(v(3), Complex(4.0));
  EXPECT_EQ(la::unvec(v, 2, 3), m);
}

TEST(Realify, ActsLikeTheComplexMap) {
  std::mt19937_64 rng(2);
  const ComplexMatrix m = la::ginibre(3, 2, rng);
  const ComplexVector x = la::ginibre(2, 1, rng).col(0);
  const RealVector lhs = la::realify(m) * la::realify(x);
  EXPECT_LE((la::complexify(lhs) - m * x).norm(), 1e-14);
}

TEST(Random, SeededAndValid) {
  std::mt19937_64 a(42), b(42);
  EXPECT_EQ(la::random_density(3, a), la::random_density(3, b));
  std::mt19937_64 rng(1);
  const ComplexMatrix r = la::random_density(4, rng);
  EXPECT_NEAR(r.trace().real(), 1.0, 1e-12);
  EXPECT_GT(la::min_eigenvalue(r), 0.0);
  EXPECT_TRUE(la::is_hermitian(la::random_hermitian(5, rng)));
}

TEST(Finite, DetectsNaN) {
  ComplexMatrix m = la::identity(2);
  EXPECT_TRUE(la::all_finite(m));
  m(1, 0) = Complex(std::nan(""), 0.0);
  EXPECT_FALSE(la::all_finite(m));
}
