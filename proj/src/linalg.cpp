#include "qcorr/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "qcorr/errors.hpp"

namespace qcorr::linalg {

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

Eigensystem hermitian_eigendecompose(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw NotHermitian("eigendecomposition of a non-square matrix");
  }
  if (!m.allFinite()) {
    throw NotHermitian("matrix has non-finite entries");
  }
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianTol) {
    throw NotHermitian("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  // Symmetrize so the solver sees an exactly Hermitian input.
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const ComplexMatrix& m) {
  return hermitian_eigendecompose(m).values(0);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const Eigensystem es = hermitian_eigendecompose(m);
  if (es.values(0) < -kPsdTol) {
    throw NotPSD("matrix has eigenvalue " + std::to_string(es.values(0)));
  }
  const RealVector roots = es.values.cwiseMax(0.0).cwiseSqrt();
  return es.vectors * roots.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  const ComplexMatrix gram = m.adjoint() * m;
  const Eigensystem es = hermitian_eigendecompose(0.5 * (gram + gram.adjoint()));
  return std::sqrt(std::max(0.0, es.values(es.values.size() - 1)));
}

ComplexMatrix identity(int n) {
  return ComplexMatrix::Identity(n, n);
}

ComplexMatrix pauli_x() {
  ComplexMatrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

ComplexMatrix pauli_y() {
  ComplexMatrix s(2, 2);
  s << 0, Complex(0, -1), Complex(0, 1), 0;
  return s;
}

ComplexMatrix pauli_z() {
  ComplexMatrix s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

ComplexVector vec(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  }
  return v;
}

ComplexMatrix unvec(const ComplexVector& v, int rows, int cols) {
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  }
  return m;
}

RealVector realify(const ComplexVector& v) {
  RealVector r(2 * v.size());
  r << v.real(), v.imag();
  return r;
}

RealMatrix realify(const ComplexMatrix& m) {
  RealMatrix r(2 * m.rows(), 2 * m.cols());
  r << m.real(), -m.imag(), m.imag(), m.real();
  return r;
}

ComplexVector complexify(const RealVector& v) {
  const Eigen::Index n = v.size() / 2;
  ComplexVector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = Complex(v(i), v(n + i));
  return z;
}

ComplexMatrix ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
  // QR of a Ginibre matrix with the phases of R's diagonal divided out is
  // Haar distributed.
  const ComplexMatrix g = ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix random_density(int n, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(n, n, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace qcorr::linalg
