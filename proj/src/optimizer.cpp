#include "qcorr/decomposition_search.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kDropWeight = 1e-14;
constexpr double kMaxStep = 1.0;
constexpr int kMemory = 8;
constexpr int kStallLimit = 5;

double inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.conjugate().cwiseProduct(b).sum().real();
}

ComplexMatrix inverse_sqrt_psd(const ComplexMatrix& gram) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("eigensolver failed during retraction");
  }
  const RealVector inv = solver.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return solver.eigenvectors() * inv.cast<Complex>().asDiagonal() *
         solver.eigenvectors().adjoint();
}

ComplexMatrix gap_gradient(const GapObjective::Evaluation& ev) {
  ComplexMatrix g = (ev.residual[0] / ev.value) * ev.gradient[0];
  if (ev.components == 2) g += (ev.residual[1] / ev.value) * ev.gradient[1];
  return g;
}

}  // namespace

GapObjective::GapObjective(const BipartiteState& rho, const ComplexMatrix& observable)
    : rho_(rho), factor_(spectral_factor(rho)) {
  const int dim = rho.space().dim();
  if (observable.rows() != dim || observable.cols() != dim) {
    throw DimensionMismatch("observable dimension " + std::to_string(observable.rows()) +
                            " does not match d1*d2 = " + std::to_string(dim));
  }
  parts_[0] = 0.5 * (observable + observable.adjoint());
  parts_[1] = Complex(0, -0.5) * (observable - observable.adjoint());
  components_ = parts_[1].cwiseAbs().maxCoeff() > 0.0 ? 2 : 1;
  for (int c = 0; c < 2; ++c) targets_[c] = (rho.rho() * parts_[c]).trace().real();
  scale_ = linalg::operator_norm(observable);
  if (scale_ <= 0.0) scale_ = 1.0;
}

GapObjective::Evaluation GapObjective::evaluate(const ComplexMatrix& isometry,
                                                const Partition& partition,
                                                bool with_gradient) const {
  const int d1 = rho_.space().d1;
  const int d2 = rho_.space().d2;
  const int dim = rho_.space().dim();
  const int m = static_cast<int>(isometry.rows());
  const ComplexMatrix phi = factor_ * isometry.adjoint();

  Evaluation ev;
  ev.components = components_;
  std::array<double, 2> boxed{0.0, 0.0};
  std::array<ComplexMatrix, 2> rows;
  if (with_gradient) {
    for (int c = 0; c < components_; ++c) rows[c] = ComplexMatrix::Zero(m, m);
  }

  ComplexMatrix y1(d1, d1), y2(d2, d2);
  for (const auto& group : partition) {
    ComplexMatrix pg(dim, static_cast<Eigen::Index>(group.size()));
    for (std::size_t k = 0; k < group.size(); ++k) pg.col(k) = phi.col(group[k]);
    const ComplexMatrix member = pg * pg.adjoint();
    const double weight = member.trace().real();
    if (weight < kDropWeight) continue;
    const ComplexMatrix x = trace_out_second(member, rho_.space());
    const ComplexMatrix z = trace_out_first(member, rho_.space());

    for (int c = 0; c < components_; ++c) {
      const ComplexMatrix& h = parts_[c];
      // y1 = Tr_2[(1 (x) z) h], so Tr[(x (x) z) h] = Tr(x y1).
      y1.setZero();
      for (int i = 0; i < d1; ++i)
        for (int k = 0; k < d1; ++k)
          for (int j = 0; j < d2; ++j)
            for (int jp = 0; jp < d2; ++jp) y1(i, k) += z(j, jp) * h(i * d2 + jp, k * d2 + j);
      const double q = (x * y1).trace().real();
      boxed[c] += q / weight;
      if (!with_gradient) continue;

      // y2 = Tr_1[(x (x) 1) h].
      y2.setZero();
      for (int j = 0; j < d2; ++j)
        for (int l = 0; l < d2; ++l)
          for (int i = 0; i < d1; ++i)
            for (int ip = 0; ip < d1; ++ip) y2(j, l) += x(i, ip) * h(ip * d2 + j, i * d2 + l);
      // Derivative of q/weight with respect to the member matrix.
      ComplexMatrix k = linalg::kron(y1, linalg::identity(d2)) +
                        linalg::kron(linalg::identity(d1), y2);
      k /= weight;
      k.diagonal().array() -= q / (weight * weight);
      const ComplexMatrix block = (k * pg).adjoint() * phi;
      for (std::size_t r = 0; r < group.size(); ++r) rows[c].row(group[r]) = block.row(r);
    }
  }

  double sq = 0.0;
  for (int c = 0; c < components_; ++c) {
    ev.residual[c] = targets_[c] - boxed[c];
    sq += ev.residual[c] * ev.residual[c];
    if (with_gradient) ev.gradient[c] = -(rows[c] - rows[c].adjoint());
  }
  ev.value = std::sqrt(sq);
  return ev;
}

ComplexMatrix retract(const ComplexMatrix& isometry, const ComplexMatrix& generator, double t) {
  const ComplexMatrix y = isometry + t * (generator * isometry);
  return y * inverse_sqrt_psd(y.adjoint() * y);
}

ComplexMatrix random_isometry(int m, int r, std::mt19937_64& rng) {
  const ComplexMatrix g = linalg::ginibre(m, r, rng);
  return g * inverse_sqrt_psd(g.adjoint() * g);
}

LocalSearchResult local_search(const GapObjective& objective, ComplexMatrix start,
                               const Partition& partition, int max_iters, double tol) {
  const double scale = objective.scale();
  const double floor = tol * scale;

  ComplexMatrix w = std::move(start);
  auto ev = objective.evaluate(w, partition, true);
  std::deque<std::pair<ComplexMatrix, ComplexMatrix>> memory;  // (s, y)

  LocalSearchResult out;
  int stall = 0;
  int it = 0;
  for (; it < max_iters; ++it) {
    if (ev.value <= floor) {
      out.converged = true;
      break;
    }
    const ComplexMatrix grad = gap_gradient(ev);
    const double gnorm = std::sqrt(inner(grad, grad));
    if (gnorm <= 1e-13 * scale) {
      out.converged = true;
      break;
    }

    bool accepted = false;
    ComplexMatrix next;
    GapObjective::Evaluation trial;
    ComplexMatrix step;

    // Minimum-norm Gauss-Newton step toward a zero of the residual.
    {
      const int k = ev.components;
      Eigen::Matrix2d gram = Eigen::Matrix2d::Identity();
      Eigen::Vector2d r(ev.residual[0], k == 2 ? ev.residual[1] : 0.0);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) gram(a, b) = inner(ev.gradient[a], ev.gradient[b]);
      gram.diagonal().array() += 1e-12 * gram.trace();
      const Eigen::Vector2d coef = gram.ldlt().solve(r);
      ComplexMatrix delta = -coef(0) * ev.gradient[0];
      if (k == 2) delta -= coef(1) * ev.gradient[1];
      if (std::sqrt(inner(delta, delta)) <= kMaxStep) {
        for (double t = 1.0; t >= 1.0 / 16.0; t *= 0.5) {
          next = retract(w, delta, t);
          trial = objective.evaluate(next, partition, true);
          if (trial.value <= (1.0 - 0.5 * t) * ev.value) {
            accepted = true;
            step = t * delta;
            break;
          }
        }
      }
    }

    if (!accepted) {
      // L-BFGS two-loop recursion in the Lie algebra.
      ComplexMatrix q = grad;
      std::vector<double> alpha(memory.size());
      for (int i = static_cast<int>(memory.size()) - 1; i >= 0; --i) {
        const auto& [s, y] = memory[i];
        alpha[i] = inner(s, q) / inner(y, s);
        q -= alpha[i] * y;
      }
      ComplexMatrix dir;
      if (memory.empty()) {
        dir = -(std::min(kMaxStep, ev.value / gnorm) / gnorm) * grad;
      } else {
        const auto& [s, y] = memory.back();
        q *= inner(s, y) / inner(y, y);
        for (std::size_t i = 0; i < memory.size(); ++i) {
          const auto& [s_i, y_i] = memory[i];
          const double beta = inner(y_i, q) / inner(y_i, s_i);
          q += (alpha[i] - beta) * s_i;
        }
        dir = -q;
      }
      double slope = inner(grad, dir);
      if (slope >= 0.0) {
        memory.clear();
        dir = -(std::min(kMaxStep, ev.value / gnorm) / gnorm) * grad;
        slope = inner(grad, dir);
      }
      const double dnorm = std::sqrt(inner(dir, dir));
      if (dnorm > kMaxStep) {
        dir *= kMaxStep / dnorm;
        slope *= kMaxStep / dnorm;
      }
      double t = 1.0;
      for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
        next = retract(w, dir, t);
        trial = objective.evaluate(next, partition, true);
        if (trial.value <= ev.value + 1e-4 * t * slope) {
          accepted = true;
          step = t * dir;
          break;
        }
      }
      if (!accepted) {
        out.converged = true;
        break;
      }
    }

    if (trial.value > 0.0) {
      const ComplexMatrix y = gap_gradient(trial) - grad;
      const double sy = inner(step, y);
      if (sy > 1e-12 * std::sqrt(inner(step, step) * inner(y, y))) {
        memory.emplace_back(step, y);
        if (static_cast<int>(memory.size()) > kMemory) memory.pop_front();
      }
    }
    const double decrease = ev.value - trial.value;
    w = std::move(next);
    ev = std::move(trial);
    if (decrease <= 1e-12 * scale) {
      if (++stall >= kStallLimit) {
        out.converged = true;
        ++it;
        break;
      }
    } else {
      stall = 0;
    }
  }

  out.isometry = std::move(w);
  out.value = ev.value;
  out.iterations = it;
  return out;
}

}  // namespace qcorr
