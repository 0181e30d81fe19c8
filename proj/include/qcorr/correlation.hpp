#pragma once

// Coefficients of quantum correlations: the smallest discrepancy, over all
// decompositions mu of a state, between the state's expectation of an
// observable and the expectation under the product measure built from the
// marginals of mu.

#include <cstdint>
#include <string>
#include <vector>

#include "qcorr/measures.hpp"

namespace qcorr {

struct OptimizerConfig {
  /// Ensemble cardinality; 0 selects (d1 d2)^2.
  int m = 0;
  int starts = 32;
  int max_iters = 2000;
  /// Convergence tolerance on the objective, relative to ||A||.
  double tol = 1e-9;
  std::uint64_t seed = 1;
  /// Also search coarse-grained decompositions.
  bool use_partitions = true;
  int random_partitions = 2;
  /// Verdict thresholds: Separable at or below, Entangled above 10x.
  double decision_threshold = 1e-4;
  /// Worker threads for multi-start; results do not depend on it.
  int threads = 1;
};

/// Throws ConfigInvalid if any field is out of range.
void validate_config(const OptimizerConfig& cfg);

struct CorrelationResult {
  /// Best objective found: an upper bound on the infimum.
  double value = 0.0;
  Ensemble ensemble;
  bool converged = false;
  int starts_used = 0;
};

/// |Tr(rho A) - Tr(boxtimes-barycenter A)| for one decomposition. Throws
/// DimensionMismatch, NotHermitian.
double d0_objective(const Ensemble& e, const ComplexMatrix& A);

/// Same discrepancy for an arbitrary (possibly non-Hermitian) A.
double correlation_gap(const Ensemble& e, const ComplexMatrix& A);

/// Multi-start minimization of d0_objective over decompositions of rho.
/// Deterministic for a fixed seed. Throws DimensionMismatch, NotHermitian,
/// ConfigInvalid.
CorrelationResult minimize_d0(const BipartiteState& rho, const ComplexMatrix& A, const OptimizerConfig& cfg);

struct SimpleCorrelationResult {
  CorrelationResult result;
  Complex state_value;   // Tr(rho a (x) b)
  Complex factored;      // sum_i lambda_i Tr(r1 rho_i a) Tr(r2 rho_i b)
  Complex boxtimes_value;  // evaluate_boxtimes on a (x) b
};

/// The coefficient for a simple tensor a (x) b. Throws DimensionMismatch.
SimpleCorrelationResult minimize_d_simple(const BipartiteState& rho, const ComplexMatrix& a,
                                          const ComplexMatrix& b, const OptimizerConfig& cfg);

enum class Verdict { Separable, Entangled, Inconclusive };
std::string to_string(Verdict v);

struct ProbeOutcome {
  std::string label;
  ComplexMatrix observable;
  CorrelationResult result;
};

struct VerdictReport {
  Verdict verdict = Verdict::Inconclusive;
  double max_d0 = 0.0;
  ComplexMatrix witness;
  double ppt_min_eig = 0.0;
  std::vector<ProbeOutcome> probes;
};

/// Random probes used by separability_verdict callers unless told otherwise.
inline constexpr int kDefaultProbeObservables = 6;

/// Partial-transpose witness (|eta><eta|)^{T_1} for the lowest eigenvector
/// eta of rho^{T_1}.
ComplexMatrix pt_witness(const BipartiteState& rho);

/// Minimizes d0 independently for each probe: the partial-transpose witness
/// when rho is not PPT, n_observables seeded random Hermitian observables of
/// unit norm, and the identity. Separable requires every value at or below
/// the decision threshold and, where PPT is exact (d1 d2 <= 6), a PPT state;
/// otherwise such states are Inconclusive.
VerdictReport separability_verdict(const BipartiteState& rho, const OptimizerConfig& cfg, int n_observables);

}  // namespace qcorr
