#pragma once

// Linear maps on M_d stored through their Choi matrix
//   C = sum_{kl} E_kl (x) alpha(E_kl),
// so block (k, l) of C (each d x d) is alpha(E_kl) and
//   alpha(x)_ij = sum_kl x_kl C[k d + i, l d + j].

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcorr/bipartite.hpp"

namespace qcorr {

class PositiveMapSpec {
public:
  /// Throws NotHermitian unless the Choi matrix is Hermitian (the map then
  /// preserves Hermiticity), DimensionMismatch unless it is d^2 x d^2.
  PositiveMapSpec(int d, ComplexMatrix choi, std::string name = {}, bool positive_verified = false);

  static PositiveMapSpec from_action(int d, const std::function<ComplexMatrix(const ComplexMatrix&)>& action,
                                     std::string name = {}, bool positive_verified = false);

  int dim() const { return d_; }
  const ComplexMatrix& choi() const { return choi_; }
  const std::string& name() const { return name_; }
  /// alpha(1) = 1 to 1e-10, checked at construction.
  bool unital() const { return unital_; }
  /// Positivity is known analytically (builtins) or was confirmed by sampling.
  bool positive_verified() const { return positive_verified_; }

private:
  int d_;
  ComplexMatrix choi_;
  std::string name_;
  bool unital_ = false;
  bool positive_verified_ = false;
};

/// alpha(x). Throws DimensionMismatch.
ComplexMatrix apply_map(const PositiveMapSpec& alpha, const ComplexMatrix& x);

/// (alpha (x) id)(m) for an operator on C^d1 (x) C^d2 with d1 = alpha.dim().
ComplexMatrix apply_tensor_id(const PositiveMapSpec& alpha, const ComplexMatrix& m, BipartiteSpace space);
/// (alpha (x) id)(rho). Throws DimensionMismatch.
ComplexMatrix apply_tensor_id(const PositiveMapSpec& alpha, const BipartiteState& s);

/// Transposition on the first factor.
ComplexMatrix partial_transpose(const ComplexMatrix& m, BipartiteSpace space);
ComplexMatrix partial_transpose(const BipartiteState& s);
double ppt_min_eigenvalue(const BipartiteState& s);

/// Smallest eigenvalue of alpha(a^dagger a + a a^dagger) - alpha(a^dagger) alpha(a) - alpha(a) alpha(a^dagger).
double kadison_defect(const PositiveMapSpec& alpha, const ComplexMatrix& a);

// Named maps on M_d.
PositiveMapSpec identity_map(int d);
PositiveMapSpec transpose_map(int d);
/// (Tr(x) 1 - x) / (d - 1), unital for every d >= 2.
PositiveMapSpec reduction_map(int d);
/// p x + (1 - p) Tr(x) 1 / d.
PositiveMapSpec depolarizing_map(int d, double p);
/// x -> Z x Z^dagger with Z = diag(exp(2 pi i k / d)); sigma_z conjugation at d = 2.
PositiveMapSpec phase_conjugation_map(int d);
PositiveMapSpec convex_combination(const PositiveMapSpec& a, const PositiveMapSpec& b, double weight_a,
                                   std::string name = {});
/// x - Tr(x) 1 / (2d): neither positive nor unital.
PositiveMapSpec shifted_identity_map(int d);
/// 3 Tr(x) 1 / d - 2 x: unital but not positive.
PositiveMapSpec overshoot_map(int d);

/// The positive unital builtins on M_d: identity, transpose, reduction,
/// depolarizing (full and half), phase conjugation, and the even mixture of
/// identity and transpose.
std::vector<PositiveMapSpec> builtin_maps(int d);
/// Resolves a builtin or control map by name; throws OutOfRange if unknown.
PositiveMapSpec map_by_name(const std::string& name, int d);
std::vector<std::string> map_names();

struct PositivityReport {
  bool positive = true;
  /// Smallest <phi| alpha(|psi><psi|) |phi> found.
  double min_value = 0.0;
  ComplexVector psi;
  ComplexVector phi;
};

/// Sampling-based positivity test: random pure inputs psi refined by local
/// perturbation, minimizing the lowest eigenvalue of alpha(|psi><psi|).
/// A negative verdict (value < -1e-9) is certified by the reported pair.
PositivityReport is_positive_map(const PositiveMapSpec& alpha, int n_samples, std::uint64_t seed);

}  // namespace qcorr
