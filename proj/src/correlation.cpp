#include "qcorr/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <thread>

#include "qcorr/decomposition_search.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/posmaps.hpp"

namespace qcorr {

namespace {

constexpr int kMaxOptimizedDim = 16;
constexpr std::uint64_t kProbeStream = 0x70726f6265ULL;

struct StartOutcome {
  double value = std::numeric_limits<double>::infinity();
  std::optional<Ensemble> ensemble;
  bool converged = false;
};

void require_square(const ComplexMatrix& A, int dim, const char* what) {
  if (A.rows() != dim || A.cols() != dim) {
    throw DimensionMismatch(std::string(what) + " is " + std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()) + ", expected " + std::to_string(dim) + "x" +
                            std::to_string(dim));
  }
}

Partition random_partition(int m, std::mt19937_64& rng) {
  const int groups = std::uniform_int_distribution<int>(2, std::max(2, m / 2))(rng);
  std::uniform_int_distribution<int> pick(0, groups - 1);
  Partition raw(groups);
  for (int j = 0; j < m; ++j) raw[pick(rng)].push_back(j);
  Partition out;
  for (auto& g : raw) {
    if (!g.empty()) out.push_back(std::move(g));
  }
  return out;
}

Partition trivial_partition(int m) {
  Partition p(1);
  for (int j = 0; j < m; ++j) p[0].push_back(j);
  return p;
}

// One multi-start restart. Depends only on (seed, index), never on other
// starts, so the reduction is independent of scheduling.
StartOutcome run_start(const GapObjective& objective, const ComplexMatrix& A, const OptimizerConfig& cfg,
                       int m, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  const ComplexMatrix start = random_isometry(m, objective.rank(), rng);

  StartOutcome best;
  auto consider = [&](const ComplexMatrix& isometry, const Partition& partition, bool converged) {
    Ensemble e = ensemble_from_isometry(objective.state(), objective.factor(), isometry, partition);
    const double value = correlation_gap(e, A);
    if (value < best.value) {
      best.value = value;
      best.ensemble.emplace(std::move(e));
      best.converged = converged;
    }
  };

  // The trivial decomposition {1, rho} is exact for product states.
  if (index == 0) {
    consider(start, trivial_partition(m), true);
    if (best.value <= cfg.tol * objective.scale()) return best;
  }

  const Partition singletons = singleton_partition(m);
  const LocalSearchResult fine = local_search(objective, start, singletons, cfg.max_iters, cfg.tol);
  consider(fine.isometry, singletons, fine.converged);

  if (cfg.use_partitions) {
    for (int k = 0; k < cfg.random_partitions; ++k) {
      if (best.value <= cfg.tol * objective.scale()) break;
      const Partition partition = random_partition(m, rng);
      const LocalSearchResult coarse = local_search(objective, fine.isometry, partition, cfg.max_iters, cfg.tol);
      consider(coarse.isometry, partition, coarse.converged);
    }
  }
  return best;
}

CorrelationResult search(const BipartiteState& rho, const ComplexMatrix& A, const OptimizerConfig& cfg) {
  validate_config(cfg);
  const int dim = rho.space().dim();
  require_square(A, dim, "observable");
  if (dim > kMaxOptimizedDim) {
    throw ConfigInvalid("decomposition search supports d1*d2 <= 16, got " + std::to_string(dim));
  }
  const GapObjective objective(rho, A);
  const int m = cfg.m > 0 ? cfg.m : dim * dim;
  if (m < objective.rank()) {
    throw ConfigInvalid("ensemble cardinality " + std::to_string(m) + " is below the rank " +
                        std::to_string(objective.rank()) + " of the state");
  }
  const double floor = cfg.tol * objective.scale();

  std::vector<StartOutcome> outcomes(cfg.starts);
  int used = 0;
  const int batch = std::max(1, cfg.threads);
  bool done = false;
  for (int first = 0; first < cfg.starts && !done; first += batch) {
    const int last = std::min(cfg.starts, first + batch);
    if (last - first == 1) {
      outcomes[first] = run_start(objective, A, cfg, m, first);
    } else {
      std::vector<std::jthread> workers;
      for (int s = first; s < last; ++s) {
        workers.emplace_back([&, s] { outcomes[s] = run_start(objective, A, cfg, m, s); });
      }
    }
    // Sequential-equivalent early exit: the first start reaching the floor ends the search.
    for (int s = first; s < last; ++s) {
      used = s + 1;
      if (outcomes[s].value <= floor) {
        done = true;
        break;
      }
    }
  }

  int best = 0;
  bool converged = false;
  for (int s = 0; s < used; ++s) {
    if (outcomes[s].value < outcomes[best].value) best = s;
    converged = converged || outcomes[s].converged;
  }
  return CorrelationResult{outcomes[best].value, std::move(*outcomes[best].ensemble), converged, used};
}

}  // namespace

void validate_config(const OptimizerConfig& cfg) {
  if (cfg.m < 0) throw ConfigInvalid("m must be positive (or 0 for the default)");
  if (cfg.starts < 1) throw ConfigInvalid("starts must be positive");
  if (cfg.max_iters < 1) throw ConfigInvalid("max_iters must be positive");
  if (!(cfg.tol > 0.0)) throw ConfigInvalid("tol must be positive");
  if (cfg.random_partitions < 0) throw ConfigInvalid("random_partitions must be nonnegative");
  if (!(cfg.decision_threshold > 0.0)) throw ConfigInvalid("decision threshold must be positive");
  if (cfg.threads < 1) throw ConfigInvalid("threads must be positive");
}

double correlation_gap(const Ensemble& e, const ComplexMatrix& A) {
  require_square(A, e.space().dim(), "observable");
  return std::abs(expect(e.barycenter(), A) - evaluate_boxtimes(boxtimes(e), A));
}

double d0_objective(const Ensemble& e, const ComplexMatrix& A) {
  require_square(A, e.space().dim(), "observable");
  if (!linalg::is_hermitian(A)) throw NotHermitian("observable must be Hermitian");
  return correlation_gap(e, A);
}

CorrelationResult minimize_d0(const BipartiteState& rho, const ComplexMatrix& A, const OptimizerConfig& cfg) {
  require_square(A, rho.space().dim(), "observable");
  if (!linalg::is_hermitian(A)) throw NotHermitian("observable must be Hermitian");
  return search(rho, A, cfg);
}

SimpleCorrelationResult minimize_d_simple(const BipartiteState& rho, const ComplexMatrix& a,
                                          const ComplexMatrix& b, const OptimizerConfig& cfg) {
  require_square(a, rho.space().d1, "first-factor observable");
  require_square(b, rho.space().d2, "second-factor observable");
  const ComplexMatrix A = linalg::kron(a, b);
  CorrelationResult result = search(rho, A, cfg);

  const ProductEnsemble pe = boxtimes(result.ensemble);
  Complex factored = 0.0;
  for (std::size_t i = 0; i < pe.weights.size(); ++i) {
    factored += pe.weights[i] * (pe.first_marginals[i] * a).trace() * (pe.second_marginals[i] * b).trace();
  }
  const Complex state_value = expect(rho, A);
  const Complex boxed = evaluate_boxtimes(pe, A);
  return SimpleCorrelationResult{std::move(result), state_value, factored, boxed};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Separable:
      return "Separable";
    case Verdict::Entangled:
      return "Entangled";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

ComplexMatrix pt_witness(const BipartiteState& rho) {
  const auto es = linalg::hermitian_eigendecompose(partial_transpose(rho));
  const ComplexVector eta = es.vectors.col(0);
  return partial_transpose(ComplexMatrix(eta * eta.adjoint()), rho.space());
}

VerdictReport separability_verdict(const BipartiteState& rho, const OptimizerConfig& cfg, int n_observables) {
  validate_config(cfg);
  if (n_observables < 0) throw ConfigInvalid("number of random observables must be nonnegative");
  const int dim = rho.space().dim();

  VerdictReport report;
  report.ppt_min_eig = ppt_min_eigenvalue(rho);

  std::vector<std::pair<std::string, ComplexMatrix>> probes;
  if (report.ppt_min_eig < -linalg::kPsdTol) probes.emplace_back("pt-witness", pt_witness(rho));
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(kProbeStream)};
  std::mt19937_64 rng(seq);
  for (int i = 0; i < n_observables; ++i) {
    ComplexMatrix h = linalg::random_hermitian(dim, rng);
    h /= linalg::operator_norm(h);
    probes.emplace_back("random-" + std::to_string(i), std::move(h));
  }
  probes.emplace_back("identity", linalg::identity(dim));

  report.max_d0 = -1.0;
  for (auto& [label, observable] : probes) {
    CorrelationResult result = minimize_d0(rho, observable, cfg);
    if (result.value > report.max_d0) {
      report.max_d0 = result.value;
      report.witness = observable;
    }
    report.probes.push_back(ProbeOutcome{label, observable, std::move(result)});
  }

  const bool ppt_exact = dim <= 6 || rho.space().d1 == 1 || rho.space().d2 == 1;
  const bool ppt = report.ppt_min_eig >= -linalg::kPsdTol;
  if (report.max_d0 > 10.0 * cfg.decision_threshold) {
    report.verdict = Verdict::Entangled;
  } else if (report.max_d0 <= cfg.decision_threshold && ppt_exact && ppt) {
    report.verdict = Verdict::Separable;
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

}  // namespace qcorr
