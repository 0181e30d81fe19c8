#include "qcorr/bipartite.hpp"

#include <cmath>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kTraceTol = 1e-10;

}  // namespace

void validate_density_matrix(const ComplexMatrix& m, const char* what) {
  const std::string name(what);
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidDensityMatrix(name + " must be a non-empty square matrix");
  }
  if (!m.allFinite()) {
    throw InvalidDensityMatrix(name + " has non-finite entries");
  }
  if (!linalg::is_hermitian(m)) {
    throw InvalidDensityMatrix(name + " is not Hermitian");
  }
  const double tr_im = std::abs(m.trace().imag());
  const double tr_re = m.trace().real();
  if (std::abs(tr_re - 1.0) > kTraceTol || tr_im > kTraceTol) {
    throw InvalidDensityMatrix(name + " does not have unit trace (trace " + std::to_string(tr_re) + ")");
  }
  const double lo = linalg::min_eigenvalue(m);
  if (lo < -linalg::kPsdTol) {
    throw InvalidDensityMatrix(name + " is not positive semidefinite (min eigenvalue " +
                               std::to_string(lo) + ")");
  }
}

bool is_density_matrix(const ComplexMatrix& m) {
  try {
    validate_density_matrix(m);
    return true;
  } catch (const Error&) {
    return false;
  }
}

BipartiteState::BipartiteState(BipartiteSpace space, ComplexMatrix rho)
    : space_(space), rho_(std::move(rho)) {
  if (space_.d1 < 1 || space_.d2 < 1) {
    throw InvalidDensityMatrix("factor dimensions must be positive");
  }
  if (rho_.rows() != space_.dim() || rho_.cols() != space_.dim()) {
    throw DimensionMismatch("density matrix is " + std::to_string(rho_.rows()) + "x" +
                            std::to_string(rho_.cols()) + " but d1*d2 = " +
                            std::to_string(space_.dim()));
  }
  validate_density_matrix(rho_, "bipartite state");
}

ComplexMatrix trace_out_second(const ComplexMatrix& m, BipartiteSpace space) {
  const int d1 = space.d1, d2 = space.d2;
  ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
  for (int i = 0; i < d1; ++i) {
    for (int k = 0; k < d1; ++k) {
      out(i, k) = m.block(i * d2, k * d2, d2, d2).trace();
    }
  }
  return out;
}

ComplexMatrix trace_out_first(const ComplexMatrix& m, BipartiteSpace space) {
  const int d1 = space.d1, d2 = space.d2;
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (int i = 0; i < d1; ++i) out += m.block(i * d2, i * d2, d2, d2);
  return out;
}

ComplexMatrix restrict_first(const BipartiteState& s) {
  return trace_out_second(s.rho(), s.space());
}

ComplexMatrix restrict_second(const BipartiteState& s) {
  return trace_out_first(s.rho(), s.space());
}

Complex expect(const BipartiteState& s, const ComplexMatrix& A) {
  if (A.rows() != s.space().dim() || A.cols() != s.space().dim()) {
    throw DimensionMismatch("observable is " + std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()) + ", state dimension is " +
                            std::to_string(s.space().dim()));
  }
  return (s.rho() * A).trace();
}

ComplexMatrix singlet_projector() {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  return psi * psi.adjoint();
}

BipartiteState make_werner(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw OutOfRange("Werner parameter p must lie in [0, 1], got " + std::to_string(p));
  }
  ComplexMatrix rho = p * singlet_projector() + (1.0 - p) / 4.0 * linalg::identity(4);
  return BipartiteState({2, 2}, std::move(rho));
}

BipartiteState make_bell() {
  return BipartiteState({2, 2}, singlet_projector());
}

BipartiteState make_product(const ComplexMatrix& sigma, const ComplexMatrix& tau) {
  validate_density_matrix(sigma, "first factor");
  validate_density_matrix(tau, "second factor");
  return BipartiteState({static_cast<int>(sigma.rows()), static_cast<int>(tau.rows())},
                        linalg::kron(sigma, tau));
}

BipartiteState make_random_state(BipartiteSpace space, int rank, std::uint64_t seed) {
  if (space.d1 < 1 || space.d2 < 1) {
    throw InvalidDensityMatrix("factor dimensions must be positive");
  }
  if (rank < 1 || rank > space.dim()) {
    throw InvalidDensityMatrix("rank must lie in [1, d1*d2], got " + std::to_string(rank));
  }
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = linalg::ginibre(space.dim(), rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return BipartiteState(space, 0.5 * (rho + rho.adjoint()));
}

}  // namespace qcorr
