#pragma once

// Local search over decompositions of a fixed state.
//
// A decomposition with m pure components is encoded by an isometry W
// (m x r, r = rank rho) through phi_j = B conj(W_j.)^T, where rho = B B^dagger.
// Coarse-graining by a partition merges components. Search directions are
// anti-Hermitian m x m generators X acting on the left, W -> exp(tX) W,
// realized by the polar retraction of W + tXW.

#include <array>
#include <vector>

#include "qcorr/measures.hpp"

namespace qcorr {

/// |Tr(rho A) - sum_G Tr[(r1 M_G (x) r2 M_G) A] / Tr M_G| where M_G is the
/// unnormalized member of group G. A may be non-Hermitian; its Hermitian and
/// anti-Hermitian parts give the two real residual components.
class GapObjective {
public:
  GapObjective(const BipartiteState& rho, const ComplexMatrix& observable);

  struct Evaluation {
    double value = 0.0;
    int components = 1;
    std::array<double, 2> residual{};
    /// Left-trivialized gradients of each residual component, anti-Hermitian.
    std::array<ComplexMatrix, 2> gradient;
  };

  Evaluation evaluate(const ComplexMatrix& isometry, const Partition& partition,
                      bool with_gradient) const;

  const BipartiteState& state() const { return rho_; }
  const ComplexMatrix& factor() const { return factor_; }
  int rank() const { return static_cast<int>(factor_.cols()); }
  /// Operator norm of the observable; tolerances are taken relative to it.
  double scale() const { return scale_; }

private:
  BipartiteState rho_;
  ComplexMatrix factor_;
  std::array<ComplexMatrix, 2> parts_;
  std::array<double, 2> targets_{};
  int components_ = 1;
  double scale_ = 1.0;
};

/// Polar retraction of W + t X W onto the isometries.
ComplexMatrix retract(const ComplexMatrix& isometry, const ComplexMatrix& generator, double t);

/// First r columns of a Haar-random m x m unitary.
ComplexMatrix random_isometry(int m, int r, std::mt19937_64& rng);

struct LocalSearchResult {
  ComplexMatrix isometry;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Minimizes the gap from `start`: Gauss-Newton steps toward a zero of the
/// residual when one is within reach, L-BFGS descent otherwise. Stops when
/// the gap falls below tol * scale, on stagnation, or after max_iters.
LocalSearchResult local_search(const GapObjective& objective, ComplexMatrix start,
                               const Partition& partition, int max_iters, double tol);

}  // namespace qcorr
