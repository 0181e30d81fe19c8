#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qcorr/decomposition_search.hpp"
#include "qcorr/correlation.hpp"

using namespace qcorr;
namespace la = qcorr::linalg;

namespace {

// Inner product <X, Y> = Re Tr(X^dagger Y) on generators.
double pairing(const ComplexMatrix& x, const ComplexMatrix& y) { return (x.adjoint() * y).trace().real(); }

ComplexMatrix random_generator(int m, std::mt19937_64& rng) {
  const ComplexMatrix g = la::ginibre(m, m, rng);
  return 0.5 * (g - g.adjoint());
}

}  // namespace

TEST(Retract, StaysIsometric) {
  std::mt19937_64 rng(1);
  const ComplexMatrix w = random_isometry(6, 3, rng);
  EXPECT_LE((w.adjoint() * w - la::identity(3)).norm(), 1e-13);
  const ComplexMatrix x = random_generator(6, rng);
  for (double t : {1e-3, 0.1, 1.0, 5.0}) {
    const ComplexMatrix r = retract(w, x, t);
    EXPECT_LE((r.adjoint() * r - la::identity(3)).norm(), 1e-12);
  }
  EXPECT_LE((retract(w, x, 0.0) - w).norm(), 1e-13);
}

// Evaluated value agrees with the public objective on the induced ensemble.
TEST(GapObjective, MatchesEnsembleObjective) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 6; ++rep) {
    const auto rho = make_random_state({2, 2}, 2 + rep % 3, rep);
    const ComplexMatrix A = la::random_hermitian(4, rng);
    const GapObjective obj(rho, A);
    const int m = 6;
    const ComplexMatrix w = random_isometry(m, obj.rank(), rng);
    for (const Partition& part : {singleton_partition(m), Partition{{0, 3}, {1, 2, 4}, {5}}}) {
      const auto ev = obj.evaluate(w, part, false);
      const auto e = ensemble_from_isometry(rho, obj.factor(), w, part);
      EXPECT_NEAR(ev.value, d0_objective(e, A), 1e-12);
    }
  }
}

// Directional derivative of each residual component along a random
// generator X equals the pairing with the reported gradient.
TEST(GapObjective, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 6; ++rep) {
    const auto rho = make_random_state({2, 2}, 3, 10 + rep);
    const ComplexMatrix A = rep % 2 ? la::random_hermitian(4, rng) : la::ginibre(4, 4, rng);
    const GapObjective obj(rho, A);
    const int m = 5;
    const ComplexMatrix w = random_isometry(m, obj.rank(), rng);
    const Partition part = rep < 3 ? singleton_partition(m) : Partition{{0, 1}, {2}, {3, 4}};
    const auto ev = obj.evaluate(w, part, true);
    const ComplexMatrix x = random_generator(m, rng);
    const double h = 1e-6;
    const auto plus = obj.evaluate(retract(w, x, h), part, false);
    const auto minus = obj.evaluate(retract(w, x, -h), part, false);
    for (int c = 0; c < ev.components; ++c) {
      const double fd = (plus.residual[c] - minus.residual[c]) / (2 * h);
      const double an = pairing(ev.gradient[c], x);
      EXPECT_NEAR(fd, an, 1e-6 * std::max(1.0, std::abs(an))) << "component " << c << " rep " << rep;
    }
  }
}

TEST(LocalSearch, ReachesZeroOnProductState) {
  std::mt19937_64 rng(4);
  const auto rho = make_product(la::random_density(2, rng), la::random_density(2, rng));
  const GapObjective obj(rho, la::random_hermitian(4, rng));
  const auto res = local_search(obj, random_isometry(16, obj.rank(), rng), singleton_partition(16), 2000, 1e-9);
  EXPECT_LE(res.value, 1e-9 * obj.scale());
  EXPECT_TRUE(res.converged);
}

TEST(LocalSearch, NeverIncreasesFromTheStart) {
  std::mt19937_64 rng(5);
  const auto rho = make_werner(0.7);
  const GapObjective obj(rho, la::random_hermitian(4, rng));
  const ComplexMatrix w = random_isometry(8, obj.rank(), rng);
  const double start = obj.evaluate(w, singleton_partition(8), false).value;
  const auto res = local_search(obj, w, singleton_partition(8), 500, 1e-9);
  EXPECT_LE(res.value, start + 1e-15);
  EXPECT_LE((res.isometry.adjoint() * res.isometry - la::identity(obj.rank())).norm(), 1e-10);
}
