#pragma once

// Bipartite density operators on C^{d1} (x) C^{d2}.
//
// Layout convention, shared by every module: the first factor is the slow
// index of the Kronecker layout, so basis vector |i>|j> has index i*d2 + j
// and rho decomposes into d1 x d1 blocks of size d2 x d2.

#include <cstdint>

#include "qcorr/linalg.hpp"

namespace qcorr {

struct BipartiteSpace {
  int d1 = 1;
  int d2 = 1;

  int dim() const { return d1 * d2; }
  bool operator==(const BipartiteSpace&) const = default;
};

/// Throws InvalidDensityMatrix unless m is Hermitian, PSD and unit trace to
/// the toolkit tolerances. `what` names the offending object in messages.
void validate_density_matrix(const ComplexMatrix& m, const char* what = "density matrix");
bool is_density_matrix(const ComplexMatrix& m);

/// A validated density matrix with declared factor dimensions.
class BipartiteState {
public:
  BipartiteState(BipartiteSpace space, ComplexMatrix rho);

  const BipartiteSpace& space() const { return space_; }
  const ComplexMatrix& rho() const { return rho_; }

private:
  BipartiteSpace space_;
  ComplexMatrix rho_;
};

// Raw partial traces, valid for any (not necessarily positive) operator.
ComplexMatrix trace_out_second(const ComplexMatrix& m, BipartiteSpace space);
ComplexMatrix trace_out_first(const ComplexMatrix& m, BipartiteSpace space);

/// Marginal on the first factor: Tr(result a) = Tr(rho (a (x) 1)).
ComplexMatrix restrict_first(const BipartiteState& s);
/// Marginal on the second factor: Tr(result b) = Tr(rho (1 (x) b)).
ComplexMatrix restrict_second(const BipartiteState& s);

/// Tr(rho A). Throws DimensionMismatch.
Complex expect(const BipartiteState& s, const ComplexMatrix& A);

/// p |psi-><psi-| + (1-p) I/4 on 2 (x) 2. Throws OutOfRange.
BipartiteState make_werner(double p);
/// The singlet |psi-> = (|01> - |10>)/sqrt(2).
BipartiteState make_bell();
ComplexMatrix singlet_projector();
/// sigma (x) tau. Throws InvalidDensityMatrix.
BipartiteState make_product(const ComplexMatrix& sigma, const ComplexMatrix& tau);
/// G G^dagger / Tr(G G^dagger) with G a (d1 d2) x rank complex Gaussian
/// matrix drawn from std::mt19937_64 seeded with `seed`.
BipartiteState make_random_state(BipartiteSpace space, int rank, std::uint64_t seed);

}  // namespace qcorr
