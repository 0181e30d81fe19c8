#include "qcorr/measures.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kWeightSumTol = 1e-10;
constexpr double kBarycenterTol = 1e-8;
constexpr double kDropWeight = 1e-14;
constexpr double kRankTol = 1e-12;

ComplexMatrix weighted_sum(const std::vector<double>& weights,
                           const std::vector<ComplexMatrix>& members, int dim) {
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * members[i];
  return sum;
}

void check_weights(const std::vector<double>& weights) {
  if (weights.empty()) throw OutOfRange("ensemble has no members");
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw OutOfRange("ensemble weight " + std::to_string(w) + " is not a nonnegative number");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    throw OutOfRange("ensemble weights sum to " + std::to_string(total));
  }
}

}  // namespace

Ensemble::Ensemble(BipartiteSpace space, std::vector<double> weights,
                   std::vector<ComplexMatrix> members, BipartiteState barycenter)
    : space_(space),
      weights_(std::move(weights)),
      members_(std::move(members)),
      barycenter_(std::move(barycenter)) {
  if (weights_.size() != members_.size()) {
    throw DimensionMismatch("ensemble has " + std::to_string(weights_.size()) + " weights but " +
                            std::to_string(members_.size()) + " members");
  }
  if (!(barycenter_.space() == space_)) {
    throw DimensionMismatch("barycenter space differs from ensemble space");
  }
  check_weights(weights_);
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].rows() != space_.dim() || members_[i].cols() != space_.dim()) {
      throw DimensionMismatch("ensemble member " + std::to_string(i) + " has wrong dimension");
    }
    const std::string what = "ensemble member " + std::to_string(i);
    validate_density_matrix(members_[i], what.c_str());
  }
  const double residual =
      (weighted_sum(weights_, members_, space_.dim()) - barycenter_.rho()).norm();
  if (residual > kBarycenterTol) {
    throw InvalidDensityMatrix("ensemble barycenter residual " + std::to_string(residual) +
                               " exceeds tolerance");
  }
}

Ensemble Ensemble::from_members(BipartiteSpace space, std::vector<double> weights,
                                std::vector<ComplexMatrix> members) {
  if (weights.size() != members.size()) {
    throw DimensionMismatch("ensemble has " + std::to_string(weights.size()) + " weights but " +
                            std::to_string(members.size()) + " members");
  }
  check_weights(weights);
  for (const auto& m : members) {
    if (m.rows() != space.dim() || m.cols() != space.dim()) {
      throw DimensionMismatch("ensemble member has wrong dimension");
    }
  }
  ComplexMatrix bary = weighted_sum(weights, members, space.dim());
  bary = 0.5 * (bary + bary.adjoint());
  BipartiteState barycenter(space, std::move(bary));
  return Ensemble(space, std::move(weights), std::move(members), std::move(barycenter));
}

ProductEnsemble boxtimes(const Ensemble& e) {
  ProductEnsemble pe{e.space(), e.weights(), {}, {}};
  pe.first_marginals.reserve(e.size());
  pe.second_marginals.reserve(e.size());
  for (const auto& member : e.members()) {
    pe.first_marginals.push_back(trace_out_second(member, e.space()));
    pe.second_marginals.push_back(trace_out_first(member, e.space()));
  }
  return pe;
}

BipartiteState boxtimes_barycenter(const ProductEnsemble& pe) {
  ComplexMatrix sum = ComplexMatrix::Zero(pe.space.dim(), pe.space.dim());
  for (std::size_t i = 0; i < pe.weights.size(); ++i) {
    sum += pe.weights[i] * linalg::kron(pe.first_marginals[i], pe.second_marginals[i]);
  }
  return BipartiteState(pe.space, 0.5 * (sum + sum.adjoint()));
}

Complex evaluate_boxtimes(const ProductEnsemble& pe, const ComplexMatrix& A) {
  const int dim = pe.space.dim();
  if (A.rows() != dim || A.cols() != dim) {
    throw DimensionMismatch("observable dimension " + std::to_string(A.rows()) +
                            " does not match d1*d2 = " + std::to_string(dim));
  }
  Complex total = 0.0;
  for (std::size_t i = 0; i < pe.weights.size(); ++i) {
    total += pe.weights[i] *
             (linalg::kron(pe.first_marginals[i], pe.second_marginals[i]) * A).trace();
  }
  return total;
}

ComplexMatrix spectral_factor(const BipartiteState& rho) {
  const auto es = linalg::hermitian_eigendecompose(rho.rho());
  const int dim = rho.space().dim();
  std::vector<int> kept;
  // Descending order so the dominant eigenvector comes first.
  for (int k = dim - 1; k >= 0; --k) {
    if (es.values(k) > kRankTol) kept.push_back(k);
  }
  ComplexMatrix factor(dim, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    factor.col(c) = std::sqrt(es.values(kept[c])) * es.vectors.col(kept[c]);
  }
  return factor;
}

int numerical_rank(const BipartiteState& rho) {
  return static_cast<int>(spectral_factor(rho).cols());
}

Partition singleton_partition(int m) {
  Partition p(m);
  for (int j = 0; j < m; ++j) p[j] = {j};
  return p;
}

void validate_partition(const Partition& partition, int m) {
  std::vector<int> seen(m, 0);
  for (const auto& group : partition) {
    if (group.empty()) throw BadPartition("partition contains an empty group");
    for (int j : group) {
      if (j < 0 || j >= m) {
        throw BadPartition("partition index " + std::to_string(j) + " outside 0.." +
                           std::to_string(m - 1));
      }
      if (seen[j]++) throw BadPartition("partition index " + std::to_string(j) + " repeated");
    }
  }
  for (int j = 0; j < m; ++j) {
    if (!seen[j]) throw BadPartition("partition does not cover index " + std::to_string(j));
  }
}

ComplexMatrix unitary_from_params(std::span<const double> params, int m) {
  if (m < 1 || params.size() != static_cast<std::size_t>(m) * m) {
    throw DimensionMismatch("isometry parameters: expected m^2 = " + std::to_string(m * m) +
                            " values, got " + std::to_string(params.size()));
  }
  // K = i H with H Hermitian, so exp(K) = V diag(exp(i lambda)) V^dagger.
  ComplexMatrix h = ComplexMatrix::Zero(m, m);
  std::size_t idx = 0;
  for (int j = 0; j < m; ++j) h(j, j) = params[idx++];
  for (int j = 0; j < m; ++j) {
    for (int l = j + 1; l < m; ++l) {
      const Complex k_jl(params[idx], params[idx + 1]);
      idx += 2;
      // H = -i K.
      h(j, l) = Complex(0, -1) * k_jl;
      h(l, j) = std::conj(h(j, l));
    }
  }
  const auto es = linalg::hermitian_eigendecompose(h);
  ComplexVector phases(m);
  for (int k = 0; k < m; ++k) phases(k) = std::polar(1.0, es.values(k));
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

Ensemble ensemble_from_isometry(const BipartiteState& rho, const ComplexMatrix& factor,
                                const ComplexMatrix& isometry, const Partition& partition) {
  const int m = static_cast<int>(isometry.rows());
  validate_partition(partition, m);
  if (isometry.cols() != factor.cols()) {
    throw DimensionMismatch("isometry column count differs from the rank of the state");
  }
  // Column j is the unnormalized vector phi_j.
  const ComplexMatrix phi = factor * isometry.adjoint();
  const int dim = rho.space().dim();

  std::vector<double> weights;
  std::vector<ComplexMatrix> members;
  for (const auto& group : partition) {
    ComplexMatrix block = ComplexMatrix::Zero(dim, dim);
    for (int j : group) block += phi.col(j) * phi.col(j).adjoint();
    const double weight = block.trace().real();
    if (weight < kDropWeight) continue;
    block /= weight;
    weights.push_back(weight);
    members.push_back(0.5 * (block + block.adjoint()));
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return Ensemble(rho.space(), std::move(weights), std::move(members), rho);
}

Ensemble hjw_ensemble(const BipartiteState& rho, std::span<const double> params, int m,
                      const Partition& partition) {
  const ComplexMatrix factor = spectral_factor(rho);
  const int rank = static_cast<int>(factor.cols());
  if (m < rank) {
    throw RankTooSmall("ensemble cardinality " + std::to_string(m) + " is below rank " +
                       std::to_string(rank));
  }
  validate_partition(partition, m);
  const ComplexMatrix u = unitary_from_params(params, m);
  return ensemble_from_isometry(rho, factor, u.leftCols(rank), partition);
}

}  // namespace qcorr
