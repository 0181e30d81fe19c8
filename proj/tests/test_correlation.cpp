#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcorr/correlation.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/posmaps.hpp"

using namespace qcorr;
namespace la = qcorr::linalg;

namespace {

const BipartiteSpace k22{2, 2};

ComplexMatrix werner_witness() { return 0.5 * la::identity(4) - singlet_projector(); }

BipartiteState separable_mixture(std::uint64_t seed, int terms) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(terms);
  double s = 0;
  for (auto& x : w) s += (x = u(rng));
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < terms; ++k) rho += (w[k] / s) * la::kron(la::random_density(2, rng), oracle::random_pure(2, rng));
  return BipartiteState(k22, rho);
}

}  // namespace

TEST(Objective, Examples) {
  const auto bell = make_bell();
  const Ensemble trivial(k22, {1.0}, {bell.rho()}, bell);
  EXPECT_NEAR(d0_objective(trivial, la::identity(4)), 0.0, 1e-15);
  EXPECT_NEAR(d0_objective(trivial, singlet_projector()), 0.75, 1e-15);
  std::mt19937_64 rng(1);
  const auto prod = make_product(la::random_density(2, rng), la::random_density(2, rng));
  const Ensemble pe(k22, {1.0}, {prod.rho()}, prod);
  EXPECT_NEAR(d0_objective(pe, la::random_hermitian(4, rng)), 0.0, 1e-14);
  EXPECT_THROW(d0_objective(pe, la::ginibre(4, 4, rng)), NotHermitian);
  EXPECT_THROW(d0_objective(pe, la::identity(2)), DimensionMismatch);
}

// A pure barycenter admits only the trivial decomposition, so every
// ensemble reached by the parametrization evaluates to the same value.
TEST(Objective, RandomBellEnsemblesAllGiveThreeQuarters) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  const auto bell = make_bell();
  for (int rep = 0; rep < 100; ++rep) {
    const int m = 1 + rep % 5;
    std::vector<double> p(m * m);
    for (auto& x : p) x = n(rng);
    const auto e = hjw_ensemble(bell, p, m, singleton_partition(m));
    EXPECT_NEAR(d0_objective(e, singlet_projector()), 0.75, 1e-12);
  }
}

TEST(Minimize, ProductStateIsZero) {
  std::mt19937_64 rng(3);
  const auto prod = make_product(la::random_density(2, rng), la::random_density(2, rng));
  EXPECT_LE(minimize_d0(prod, la::random_hermitian(4, rng), {}).value, 1e-9);
}

TEST(Minimize, Bell) {
  const auto r = minimize_d0(make_bell(), singlet_projector(), {});
  EXPECT_NEAR(r.value, 0.75, 1e-6);
}

TEST(Minimize, SeparableWerner) {
  const auto r = minimize_d0(make_werner(0.25), singlet_projector(), {});
  EXPECT_LE(r.value, 1e-4);
  EXPECT_TRUE(r.converged);
}

TEST(Minimize, ResultIsSoundAndReproducible) {
  std::mt19937_64 rng(4);
  const auto rho = make_werner(0.6);
  const ComplexMatrix A = la::random_hermitian(4, rng);
  OptimizerConfig cfg;
  cfg.starts = 6;
  const auto a = minimize_d0(rho, A, cfg);
  EXPECT_GE(a.value, 0.0);
  EXPECT_NEAR(d0_objective(a.ensemble, A), a.value, 1e-12);
  EXPECT_LE((a.ensemble.barycenter().rho() - rho.rho()).norm(), 1e-8);
  const auto b = minimize_d0(rho, A, cfg);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.starts_used, b.starts_used);
  cfg.threads = 3;
  const auto c = minimize_d0(rho, A, cfg);
  EXPECT_EQ(a.value, c.value);
  EXPECT_EQ(a.ensemble.weights(), c.ensemble.weights());
}

TEST(Minimize, Homogeneous) {
  std::mt19937_64 rng(5);
  const auto rho = make_werner(0.7);
  OptimizerConfig cfg;
  cfg.starts = 4;
  for (const ComplexMatrix& A : {werner_witness(), la::random_hermitian(4, rng)}) {
    const double base = minimize_d0(rho, A, cfg).value;
    for (double c : {-2.5, 0.01, 7.0}) {
      const double scaled = minimize_d0(rho, c * A, cfg).value;
      EXPECT_NEAR(scaled, std::abs(c) * base, 1e-8 * std::abs(c) * std::max(base, 1e-12));
    }
  }
}

TEST(Minimize, MonotoneInStarts) {
  std::mt19937_64 rng(6);
  const auto rho = make_random_state(k22, 4, 3);
  for (int rep = 0; rep < 3; ++rep) {
    const ComplexMatrix A = la::random_hermitian(4, rng);
    OptimizerConfig cfg;
    cfg.seed = 10 + rep;
    double prev = 1e300;
    for (int k : {1, 2, 4, 8}) {
      cfg.starts = k;
      const double v = minimize_d0(rho, A, cfg).value;
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(Minimize, WitnessLowerBound) {
  OptimizerConfig cfg;
  cfg.starts = 8;
  for (double p : {0.4, 0.7, 0.9}) {
    const auto rho = make_werner(p);
    const double bound = std::abs(expect(rho, werner_witness()).real());
    EXPECT_NEAR(bound, (3 * p - 1) / 4, 1e-14);
    const auto r = minimize_d0(rho, werner_witness(), cfg);
    EXPECT_GE(r.value, bound - 1e-9);
    // Closed form of the infimum from the twirl-symmetric reduction.
    const double q = (3 * p - 1) / 4;
    EXPECT_NEAR(r.value, q + q * q, 1e-6);
  }
}

TEST(Minimize, ConfigErrors) {
  const auto rho = make_random_state(k22, 3, 1);
  const auto A = la::identity(4);
  OptimizerConfig cfg;
  cfg.starts = 0;
  EXPECT_THROW(minimize_d0(rho, A, cfg), ConfigInvalid);
  cfg = {};
  cfg.tol = 0.0;
  EXPECT_THROW(minimize_d0(rho, A, cfg), ConfigInvalid);
  cfg = {};
  cfg.m = 2;
  EXPECT_THROW(minimize_d0(rho, A, cfg), ConfigInvalid);
  cfg = {};
  cfg.threads = 0;
  EXPECT_THROW(validate_config(cfg), ConfigInvalid);
  const auto big = make_random_state({3, 6}, 2, 1);
  EXPECT_THROW(minimize_d0(big, la::identity(18), {}), ConfigInvalid);
  EXPECT_THROW(minimize_d0(rho, la::identity(3), {}), DimensionMismatch);
  ComplexMatrix nh = la::identity(4);
  nh(0, 1) = 1.0;
  EXPECT_THROW(minimize_d0(rho, nh, {}), NotHermitian);
}

TEST(Simple, BellZZ) {
  const auto r = minimize_d_simple(make_bell(), la::pauli_z(), la::pauli_z(), {});
  EXPECT_NEAR(r.result.value, 1.0, 1e-6);
  EXPECT_NEAR(r.state_value.real(), -1.0, 1e-14);
  EXPECT_LE(std::abs(r.factored - r.boxtimes_value), 1e-12);
}

TEST(Simple, ProductAndUnitFactor) {
  std::mt19937_64 rng(7);
  const ComplexMatrix a = la::ginibre(2, 2, rng), b = la::ginibre(3, 3, rng);
  const auto prod = make_product(la::random_density(2, rng), la::random_density(3, rng));
  EXPECT_LE(minimize_d_simple(prod, a, b, {}).result.value, 1e-9);
  const auto rho = make_random_state({2, 3}, 6, 2);
  OptimizerConfig cfg;
  cfg.starts = 2;
  const auto r = minimize_d_simple(rho, la::identity(2), b, cfg);
  EXPECT_LE(r.result.value, 1e-12);
  EXPECT_LE(std::abs(r.factored - r.boxtimes_value), 1e-12);
  EXPECT_THROW(minimize_d_simple(rho, b, a, cfg), DimensionMismatch);
}

TEST(Verdict, Bell) {
  const auto v = separability_verdict(make_bell(), {}, 2);
  EXPECT_EQ(v.verdict, Verdict::Entangled);
  EXPECT_GE(v.max_d0, 0.75 - 1e-6);
  EXPECT_NEAR(v.ppt_min_eig, -0.5, 1e-12);
}

TEST(Verdict, MaximallyMixed) {
  const auto v = separability_verdict(BipartiteState(k22, la::identity(4) / 4.0), {}, 6);
  EXPECT_EQ(v.verdict, Verdict::Separable);
  EXPECT_LE(v.max_d0, 1e-9);
}

TEST(Verdict, WernerAboveThreshold) {
  const auto v = separability_verdict(make_werner(0.6), {}, 2);
  EXPECT_EQ(v.verdict, Verdict::Entangled);
  EXPECT_GE(v.max_d0, 0.2);
  // The reported witness is the probe attaining max_d0.
  bool found = false;
  for (const auto& p : v.probes) found |= p.result.value == v.max_d0 && p.observable == v.witness;
  EXPECT_TRUE(found);
}

TEST(Verdict, SeparableMixtures) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto rho = separable_mixture(seed, 1 + seed % 4);
    const auto v = separability_verdict(rho, {}, 6);
    EXPECT_NE(v.verdict, Verdict::Entangled);
    EXPECT_LE(v.max_d0, 1e-4);
  }
}

TEST(Verdict, LargerSystemsAreNeverCertifiedSeparable) {
  std::mt19937_64 rng(8);
  const auto prod = make_product(la::random_density(3, rng), la::random_density(3, rng));
  OptimizerConfig cfg;
  cfg.starts = 2;
  const auto v = separability_verdict(prod, cfg, 1);
  EXPECT_EQ(v.verdict, Verdict::Inconclusive);
  EXPECT_LE(v.max_d0, 1e-9);
}

TEST(Verdict, Names) {
  EXPECT_EQ(to_string(Verdict::Separable), "Separable");
  EXPECT_EQ(to_string(Verdict::Entangled), "Entangled");
  EXPECT_EQ(to_string(Verdict::Inconclusive), "Inconclusive");
}
