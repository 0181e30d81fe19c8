#pragma once

// Finitely supported measures on the bipartite state space, the product
// measure built from their marginals, and the isometry parametrization of
// all decompositions of a fixed state.

#include <span>
#include <vector>

#include "qcorr/bipartite.hpp"

namespace qcorr {

/// Groups of pure-ensemble indices merged into one member each.
using Partition = std::vector<std::vector<int>>;

/// Probability weights lambda_i on density matrices rho_i whose barycenter
/// sum_i lambda_i rho_i equals the declared state.
class Ensemble {
public:
  /// Validates all invariants; throws InvalidDensityMatrix on a bad member
  /// or barycenter mismatch and OutOfRange on bad weights.
  Ensemble(BipartiteSpace space, std::vector<double> weights, std::vector<ComplexMatrix> members,
           BipartiteState barycenter);

  /// Computes the barycenter from the members.
  static Ensemble from_members(BipartiteSpace space, std::vector<double> weights,
                               std::vector<ComplexMatrix> members);

  const BipartiteSpace& space() const { return space_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<ComplexMatrix>& members() const { return members_; }
  const BipartiteState& barycenter() const { return barycenter_; }
  std::size_t size() const { return weights_.size(); }

private:
  BipartiteSpace space_;
  std::vector<double> weights_;
  std::vector<ComplexMatrix> members_;
  BipartiteState barycenter_;
};

/// sum_i lambda_i delta_{r1 rho_i} x delta_{r2 rho_i}.
struct ProductEnsemble {
  BipartiteSpace space;
  std::vector<double> weights;
  std::vector<ComplexMatrix> first_marginals;
  std::vector<ComplexMatrix> second_marginals;
};

ProductEnsemble boxtimes(const Ensemble& e);

/// sum_i lambda_i r1(rho_i) (x) r2(rho_i); always separable.
BipartiteState boxtimes_barycenter(const ProductEnsemble& pe);

/// sum_i lambda_i Tr[(r1 rho_i (x) r2 rho_i) A]. Throws DimensionMismatch.
Complex evaluate_boxtimes(const ProductEnsemble& pe, const ComplexMatrix& A);

/// Columns sqrt(p_k) psi_k of the spectral decomposition of rho restricted
/// to eigenvalues above the rank threshold, so rho = B B^dagger.
ComplexMatrix spectral_factor(const BipartiteState& rho);
int numerical_rank(const BipartiteState& rho);

Partition singleton_partition(int m);
/// Throws BadPartition unless the groups are non-empty and cover 0..m-1
/// exactly once.
void validate_partition(const Partition& partition, int m);

/// m x m unitary exp(K) for the anti-Hermitian K encoded by m^2 reals:
/// entries 0..m-1 are Im K_jj, followed by (Re K_jl, Im K_jl) for j < l in
/// row-major order. Throws DimensionMismatch on a wrong parameter count.
ComplexMatrix unitary_from_params(std::span<const double> params, int m);

/// Ensemble obtained from the isometry W (m x r, orthonormal columns) and
/// the spectral factor B (d x r): phi_j = B conj(W_j.)^T, grouped by
/// `partition`. Groups of weight below 1e-14 are dropped and the remaining
/// weights renormalized.
Ensemble ensemble_from_isometry(const BipartiteState& rho, const ComplexMatrix& factor,
                                const ComplexMatrix& isometry, const Partition& partition);

/// Every finite decomposition of rho, reached through the first rank(rho)
/// columns of unitary_from_params(params, m) followed by coarse-graining.
/// Throws RankTooSmall, BadPartition, DimensionMismatch.
Ensemble hjw_ensemble(const BipartiteState& rho, std::span<const double> params, int m,
                      const Partition& partition);

}  // namespace qcorr
