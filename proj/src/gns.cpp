#include "qcorr/gns.hpp"

#include <cmath>
#include <sstream>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kNullRelTol = 1e-12;   // on Gram eigenvalues (squared singular values)
constexpr double kWellDefinedTol = 1e-8;
constexpr double kResidualTol = 1e-9;
constexpr double kOmegaTol = 1e-10;
constexpr double kNormSlack = 1e-9;

std::string describe(const ComplexMatrix& a) {
  std::ostringstream os;
  os.precision(6);
  os << "[";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    os << (i ? "; " : "");
    for (Eigen::Index j = 0; j < a.cols(); ++j) os << (j ? " " : "") << a(i, j);
  }
  os << "]";
  return os.str();
}

void require_density(const ComplexMatrix& rho, int d, const char* what) {
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionMismatch(std::string(what) + " must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  validate_density_matrix(rho, what);
}

// Pseudo-inverse of `domain` composed with `target`: the unique map that
// sends domain * c to target * c and vanishes on the orthogonal complement
// of range(domain). A coefficient vector c with domain * c ~ 0 but
// target * c != 0 makes the assignment ill-defined; `element` rebuilds the
// algebra element for the error message.
template <class Matrix, class ElementFn>
Matrix intertwiner(const Matrix& domain, const Matrix& target, ElementFn element) {
  Eigen::JacobiSVD<Matrix> svd(domain, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  Matrix out = Matrix::Zero(target.rows(), domain.rows());
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    const double sk = k < s.size() ? s(k) : 0.0;
    const auto c = v.col(k);
    if (sk * sk <= kNullRelTol * smax * smax) {
      const double leak = (target * c).norm();
      if (leak > kWellDefinedTol) {
        throw WellDefinednessFailure("pi(a) Omega vanishes but ||alpha(a) rho^1/2|| = " + std::to_string(leak) +
                                     " for a = " + describe(element(c)));
      }
      continue;
    }
    out += (target * c) * (u.col(k).adjoint() / sk);
  }
  return out;
}

ComplexMatrix element_from_units(const ComplexVector& c, int d) {
  return linalg::unvec(c, d, d);
}

}  // namespace

GnsRepresentation build_gns(int d, const ComplexMatrix& density, bool anti) {
  require_density(density, d, "GNS state density");
  const int n = d * d;
  const std::vector<ComplexMatrix> units = matrix_unit_basis(d);
  // Gram matrix of the form, conjugate-linear in the first slot.
  ComplexMatrix gram(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const ComplexMatrix prod = anti ? ComplexMatrix(units[q] * units[p].adjoint())
                                      : ComplexMatrix(units[p].adjoint() * units[q]);
      gram(p, q) = (density * prod).trace();
    }
  }
  const auto es = linalg::hermitian_eigendecompose(0.5 * (gram + gram.adjoint()));
  const double top = es.values(n - 1);
  std::vector<int> kept;
  for (int k = n - 1; k >= 0; --k) {
    if (es.values(k) > kNullRelTol * top) kept.push_back(k);
  }

  GnsRepresentation g;
  g.d_ = d;
  g.anti_ = anti;
  g.density_ = density;
  const auto r = static_cast<Eigen::Index>(kept.size());
  g.coord_.resize(r, n);
  g.lift_.resize(n, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const double lam = es.values(kept[i]);
    g.coord_.row(i) = std::sqrt(lam) * es.vectors.col(kept[i]).adjoint();
    g.lift_.col(i) = es.vectors.col(kept[i]) / std::sqrt(lam);
  }
  g.omega_ = g.coord_ * linalg::vec(linalg::identity(d));
  return g;
}

ComplexVector GnsRepresentation::coordinates(const ComplexMatrix& a) const {
  if (a.rows() != d_ || a.cols() != d_) throw DimensionMismatch("algebra element has wrong dimension");
  return coord_ * linalg::vec(a);
}

ComplexMatrix GnsRepresentation::rep(const ComplexMatrix& a) const {
  if (a.rows() != d_ || a.cols() != d_) throw DimensionMismatch("algebra element has wrong dimension");
  // Row-major vec: vec(c a) = (c (x) 1) vec(a), vec(a c) = (1 (x) c^T) vec(a).
  const ComplexMatrix mult = anti_ ? linalg::kron(linalg::identity(d_), a.transpose())
                                   : linalg::kron(a, linalg::identity(d_));
  return coord_ * mult * lift_;
}

GnsRepresentation gns_left(int d, const ComplexMatrix& omega_density) {
  return build_gns(d, omega_density, false);
}

GnsRepresentation gns_right(int d, const ComplexMatrix& omega_density) {
  return build_gns(d, omega_density, true);
}

std::vector<ComplexMatrix> matrix_unit_basis(int d) {
  std::vector<ComplexMatrix> basis;
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(k, l) = 1.0;
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

std::vector<ComplexMatrix> hermitian_basis(int d) {
  std::vector<ComplexMatrix> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < d; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(k, k) = 1.0;
    basis.push_back(std::move(e));
  }
  for (int k = 0; k < d; ++k) {
    for (int l = k + 1; l < d; ++l) {
      ComplexMatrix sym = ComplexMatrix::Zero(d, d);
      sym(k, l) = r;
      sym(l, k) = r;
      basis.push_back(std::move(sym));
      ComplexMatrix asym = ComplexMatrix::Zero(d, d);
      asym(k, l) = Complex(0, -r);
      asym(l, k) = Complex(0, r);
      basis.push_back(std::move(asym));
    }
  }
  return basis;
}

ComplexMatrix induced_state(const PositiveMapSpec& alpha, const ComplexMatrix& rho) {
  const int d = alpha.dim();
  if (rho.rows() != d || rho.cols() != d) throw DimensionMismatch("density matrix has wrong dimension");
  ComplexMatrix sigma(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(i, j) = 1.0;
      // Tr(sigma E_ij) = sigma_ji.
      sigma(j, i) = (rho * apply_map(alpha, e)).trace();
    }
  }
  return sigma;
}

namespace {

struct Prepared {
  ComplexMatrix sigma;
  ComplexMatrix rho_sqrt;
};

Prepared prepare(const PositiveMapSpec& alpha, const ComplexMatrix& rho) {
  const int d = alpha.dim();
  require_density(rho, d, "density matrix");
  if (!alpha.unital()) throw MapNotUnital("map '" + alpha.name() + "' does not fix the identity");
  ComplexMatrix sigma = induced_state(alpha, rho);
  sigma = 0.5 * (sigma + sigma.adjoint());
  const auto es = linalg::hermitian_eigendecompose(sigma);
  if (es.values(0) < -linalg::kPsdTol) {
    const ComplexVector v = es.vectors.col(0);
    throw WellDefinednessFailure("omega(a) = Tr(rho alpha(a)) is negative (" + std::to_string(es.values(0)) +
                                 ") for the projector a = " + describe(v * v.adjoint()) +
                                 "; the map is not positive");
  }
  sigma = es.vectors * es.values.cwiseMax(0.0).cast<Complex>().asDiagonal() * es.vectors.adjoint();
  sigma /= sigma.trace().real();
  return {0.5 * (sigma + sigma.adjoint()), linalg::psd_sqrt(rho)};
}

}  // namespace

int LocalDecomposition::gns_dim() const {
  return left.dim() + (right ? right->dim() : 0);
}

ComplexMatrix LocalDecomposition::tilde_rep(const ComplexMatrix& a) const {
  if (kind == DecompositionKind::SelfAdjoint) {
    return linalg::realify(left.rep(a)).cast<Complex>();
  }
  const int n1 = left.dim();
  const int n2 = right->dim();
  ComplexMatrix out = ComplexMatrix::Zero(n1 + n2, n1 + n2);
  out.topLeftCorner(n1, n1) = left.rep(a);
  out.bottomRightCorner(n2, n2) = right->rep(a);
  return out;
}

LocalDecomposition build_self_adjoint_decomposition(const PositiveMapSpec& alpha, const ComplexMatrix& rho) {
  const int d = alpha.dim();
  const Prepared prep = prepare(alpha, rho);
  LocalDecomposition ld{DecompositionKind::SelfAdjoint, gns_left(d, prep.sigma), std::nullopt, true, {}, {}, {},
                        prep.rho_sqrt, 1.0, 0.0};

  const std::vector<ComplexMatrix> basis = hermitian_basis(d);
  const int n = static_cast<int>(basis.size());
  RealMatrix domain(2 * ld.left.dim(), n);
  RealMatrix target(2 * d * d, n);
  for (int k = 0; k < n; ++k) {
    domain.col(k) = linalg::realify(ld.left.coordinates(basis[k]));
    target.col(k) = linalg::realify(linalg::vec(apply_map(alpha, basis[k]) * prep.rho_sqrt));
  }
  const RealMatrix v = intertwiner(domain, target, [&](const RealVector& c) {
    ComplexMatrix a = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < n; ++k) a += c(k) * basis[k];
    return a;
  });
  ld.V = v.cast<Complex>();
  ld.tilde_omega = linalg::realify(ld.left.omega()).cast<Complex>();
  ld.rho_sqrt = linalg::realify(linalg::vec(prep.rho_sqrt)).cast<Complex>();
  ld.v_norm = linalg::operator_norm(ld.V);
  return ld;
}

LocalDecomposition build_direct_sum_decomposition(const PositiveMapSpec& alpha, const ComplexMatrix& rho) {
  const int d = alpha.dim();
  const Prepared prep = prepare(alpha, rho);
  LocalDecomposition ld{DecompositionKind::DirectSum, gns_left(d, prep.sigma), gns_right(d, prep.sigma), false,
                        {}, {}, {}, prep.rho_sqrt, std::sqrt(2.0), 0.0};

  const int n1 = ld.left.dim();
  const int n2 = ld.right->dim();
  // The halved inner product becomes the standard one after scaling both
  // summands by 1/sqrt(2).
  const double h = 1.0 / std::sqrt(2.0);
  const std::vector<ComplexMatrix> units = matrix_unit_basis(d);
  const int n = d * d;
  ComplexMatrix domain(n1 + n2, n);
  ComplexMatrix target(n, n);
  for (int p = 0; p < n; ++p) {
    domain.col(p) << h * ld.left.coordinates(units[p]), h * ld.right->coordinates(units[p]);
    target.col(p) = linalg::vec(apply_map(alpha, units[p]) * prep.rho_sqrt);
  }
  ld.V = intertwiner(domain, target, [&](const ComplexVector& c) { return element_from_units(c, d); });
  ld.tilde_omega.resize(n1 + n2);
  ld.tilde_omega << h * ld.left.omega(), h * ld.right->omega();
  ld.rho_sqrt = linalg::vec(prep.rho_sqrt);
  ld.v_norm = linalg::operator_norm(ld.V);
  return ld;
}

GnsVerification verify(const LocalDecomposition& ld, const PositiveMapSpec& alpha) {
  const int d = alpha.dim();
  const bool self_adjoint = ld.kind == DecompositionKind::SelfAdjoint;
  const std::vector<ComplexMatrix> basis = self_adjoint ? hermitian_basis(d) : matrix_unit_basis(d);

  GnsVerification out;
  const ComplexVector pulled = ld.V.adjoint() * ld.rho_sqrt;
  for (const auto& a : basis) {
    const ComplexVector lhs = ld.V * (ld.tilde_rep(a) * pulled);
    ComplexVector rhs = linalg::vec(apply_map(alpha, a) * ld.rho_sqrt_matrix);
    if (ld.real_linear) rhs = linalg::realify(rhs).cast<Complex>();
    out.residual_max = std::max(out.residual_max, (lhs - rhs).norm());
  }
  out.omega_residual = (pulled - ld.tilde_omega).norm();
  out.v_norm = ld.v_norm;
  out.dim_gns = ld.gns_dim();
  out.bound = ld.norm_bound;
  out.pass = out.residual_max <= kResidualTol && out.omega_residual <= kOmegaTol &&
             out.v_norm <= out.bound + kNormSlack;
  return out;
}

}  // namespace qcorr
