#pragma once

// Dense complex linear algebra used throughout the toolkit. Matrices are
// Eigen::MatrixXcd; every routine here is a pure function.

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace qcorr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

namespace linalg {

/// Entrywise tolerance on |m - m^dagger| accepted as Hermitian.
inline constexpr double kHermitianTol = 1e-10;
/// Eigenvalues in [-kPsdTol, 0) are clamped to zero; below that is an error.
inline constexpr double kPsdTol = 1e-10;

struct Eigensystem {
  RealVector values;       // ascending
  ComplexMatrix vectors;   // columns are the eigenvectors
};

double hermiticity_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
bool all_finite(const ComplexMatrix& m);

/// Spectral decomposition m = sum_k values[k] v_k v_k^dagger.
/// Throws NotHermitian, ConvergenceFailure.
Eigensystem hermitian_eigendecompose(const ComplexMatrix& m);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const ComplexMatrix& m);

/// Positive square root. Throws NotHermitian, NotPSD.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest singular value, from the spectrum of m^dagger m.
double operator_norm(const ComplexMatrix& m);

ComplexMatrix identity(int n);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Row-major vectorization: index i*cols + j.
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, int rows, int cols);

/// Realification z -> (Re z, Im z) and the matching real form of a
/// complex-linear map.
RealVector realify(const ComplexVector& v);
RealMatrix realify(const ComplexMatrix& m);
ComplexVector complexify(const RealVector& v);

// Random ensembles. All take an explicit engine so call sites control the
// stream.
ComplexMatrix ginibre(int rows, int cols, std::mt19937_64& rng);
ComplexMatrix random_unitary(int n, std::mt19937_64& rng);
/// Hermitian matrix drawn from the Gaussian unitary ensemble.
ComplexMatrix random_hermitian(int n, std::mt19937_64& rng);
/// Full-rank random density matrix G G^dagger / Tr(G G^dagger).
ComplexMatrix random_density(int n, std::mt19937_64& rng);

}  // namespace linalg
}  // namespace qcorr
