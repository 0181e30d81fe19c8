#pragma once

// Finite-dimensional GNS machinery for positive unital maps alpha on M_d.
//
// For a density matrix rho, omega(a) = Tr(rho alpha(a)) is a state on M_d.
// The left GNS space carries <a, b> = omega(a^dagger b) with pi(c)[a] = [ca];
// the right-kernel space carries <a, b>' = omega(b a^dagger) with the
// anti-representation pi'(c)[a] = [ac]. Classes are stored in orthonormal
// coordinates so adjoints are conjugate transposes. The target space of the
// intertwiner is M_d with the Hilbert-Schmidt inner product, in row-major
// coordinates; vectors alpha(a) rho^{1/2} live there.

#include <optional>

#include "qcorr/posmaps.hpp"

namespace qcorr {

class GnsRepresentation {
public:
  int dim() const { return static_cast<int>(coord_.rows()); }
  int algebra_dim() const { return d_; }
  bool anti() const { return anti_; }
  const ComplexMatrix& density() const { return density_; }

  /// dim x d^2 map from row-major vec(a) to the coordinates of the class of a.
  const ComplexMatrix& basis_map() const { return coord_; }
  ComplexVector coordinates(const ComplexMatrix& a) const;
  /// pi(a) (or pi'(a) for the anti-representation) as a dim x dim matrix.
  ComplexMatrix rep(const ComplexMatrix& a) const;
  /// Class of the unit.
  const ComplexVector& omega() const { return omega_; }

private:
  friend GnsRepresentation build_gns(int d, const ComplexMatrix& density, bool anti);

  int d_ = 0;
  bool anti_ = false;
  ComplexMatrix density_;
  ComplexMatrix coord_;
  ComplexMatrix lift_;
  ComplexVector omega_;
};

/// Throws InvalidDensityMatrix.
GnsRepresentation gns_left(int d, const ComplexMatrix& omega_density);
GnsRepresentation gns_right(int d, const ComplexMatrix& omega_density);

enum class DecompositionKind {
  /// pi_omega alone, intertwining on self-adjoint elements, ||V|| <= 1.
  SelfAdjoint,
  /// pi_omega (+) pi'_omega with the halved inner product, all elements, ||V|| <= sqrt 2.
  DirectSum,
};

struct LocalDecomposition {
  DecompositionKind kind = DecompositionKind::DirectSum;
  GnsRepresentation left;
  std::optional<GnsRepresentation> right;
  /// For SelfAdjoint the map V is only real-linear; V, tilde_omega and
  /// rho_sqrt are then stored in realified coordinates (Re, Im) with zero
  /// imaginary parts.
  bool real_linear = false;
  ComplexVector tilde_omega;
  ComplexMatrix V;
  /// Hilbert-Schmidt coordinates of rho^{1/2} and the matrix itself.
  ComplexVector rho_sqrt;
  ComplexMatrix rho_sqrt_matrix;
  double norm_bound = 0.0;
  double v_norm = 0.0;

  int gns_dim() const;
  /// The representation V acts on, in the same coordinates as V.
  ComplexMatrix tilde_rep(const ComplexMatrix& a) const;
};

/// omega's density: sigma with Tr(sigma a) = Tr(rho alpha(a)).
ComplexMatrix induced_state(const PositiveMapSpec& alpha, const ComplexMatrix& rho);

/// Throws MapNotUnital, InvalidDensityMatrix, DimensionMismatch and
/// WellDefinednessFailure (induced functional not positive, or a vector
/// pi(a) Omega ~ 0 with alpha(a) rho^{1/2} != 0).
LocalDecomposition build_self_adjoint_decomposition(const PositiveMapSpec& alpha, const ComplexMatrix& rho);
LocalDecomposition build_direct_sum_decomposition(const PositiveMapSpec& alpha, const ComplexMatrix& rho);

struct GnsVerification {
  double residual_max = 0.0;
  double omega_residual = 0.0;
  double v_norm = 0.0;
  int dim_gns = 0;
  double bound = 0.0;
  bool pass = false;
};

/// Intertwining residual max_a ||V pi~(a) V^dagger rho^{1/2} - alpha(a) rho^{1/2}||
/// over matrix units (DirectSum) or a Hermitian basis (SelfAdjoint), the
/// residual of V^dagger rho^{1/2} = Omega~, and the norm bound.
GnsVerification verify(const LocalDecomposition& ld, const PositiveMapSpec& alpha);

/// Orthonormal basis of the self-adjoint part of M_d (d^2 elements).
std::vector<ComplexMatrix> hermitian_basis(int d);
std::vector<ComplexMatrix> matrix_unit_basis(int d);

}  // namespace qcorr
