#include "qcorr/posmaps.hpp"

#include <cmath>
#include <numbers>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kUnitalTol = 1e-10;

ComplexMatrix matrix_unit(int d, int k, int l) {
  ComplexMatrix e = ComplexMatrix::Zero(d, d);
  e(k, l) = 1.0;
  return e;
}

void require_dim(const ComplexMatrix& x, int d, const char* what) {
  if (x.rows() != d || x.cols() != d) {
    throw DimensionMismatch(std::string(what) + " is " + std::to_string(x.rows()) + "x" +
                            std::to_string(x.cols()) + ", map acts on M_" + std::to_string(d));
  }
}

}  // namespace

PositiveMapSpec::PositiveMapSpec(int d, ComplexMatrix choi, std::string name, bool positive_verified)
    : d_(d), choi_(std::move(choi)), name_(std::move(name)), positive_verified_(positive_verified) {
  if (d_ < 1) throw DimensionMismatch("map dimension must be positive");
  if (choi_.rows() != d_ * d_ || choi_.cols() != d_ * d_) {
    throw DimensionMismatch("Choi matrix must be " + std::to_string(d_ * d_) + "x" +
                            std::to_string(d_ * d_));
  }
  if (!choi_.allFinite() || !linalg::is_hermitian(choi_)) {
    throw NotHermitian("Choi matrix is not Hermitian; the map does not preserve Hermiticity");
  }
  ComplexMatrix one = ComplexMatrix::Zero(d_, d_);
  for (int k = 0; k < d_; ++k) one += choi_.block(k * d_, k * d_, d_, d_);
  unital_ = (one - linalg::identity(d_)).cwiseAbs().maxCoeff() <= kUnitalTol;
}

PositiveMapSpec PositiveMapSpec::from_action(int d,
                                             const std::function<ComplexMatrix(const ComplexMatrix&)>& action,
                                             std::string name, bool positive_verified) {
  ComplexMatrix choi(d * d, d * d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) choi.block(k * d, l * d, d, d) = action(matrix_unit(d, k, l));
  }
  return PositiveMapSpec(d, std::move(choi), std::move(name), positive_verified);
}

ComplexMatrix apply_map(const PositiveMapSpec& alpha, const ComplexMatrix& x) {
  const int d = alpha.dim();
  require_dim(x, d, "map argument");
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      if (x(k, l) != 0.0) out += x(k, l) * alpha.choi().block(k * d, l * d, d, d);
    }
  }
  return out;
}

ComplexMatrix apply_tensor_id(const PositiveMapSpec& alpha, const ComplexMatrix& m, BipartiteSpace space) {
  const int d1 = space.d1, d2 = space.d2;
  if (alpha.dim() != d1) {
    throw DimensionMismatch("map acts on M_" + std::to_string(alpha.dim()) + " but first factor has dimension " +
                            std::to_string(d1));
  }
  if (m.rows() != space.dim() || m.cols() != space.dim()) {
    throw DimensionMismatch("operator dimension does not match d1*d2");
  }
  ComplexMatrix out = ComplexMatrix::Zero(space.dim(), space.dim());
  for (int k = 0; k < d1; ++k) {
    for (int l = 0; l < d1; ++l) {
      out += linalg::kron(alpha.choi().block(k * d1, l * d1, d1, d1), m.block(k * d2, l * d2, d2, d2));
    }
  }
  return out;
}

ComplexMatrix apply_tensor_id(const PositiveMapSpec& alpha, const BipartiteState& s) {
  return apply_tensor_id(alpha, s.rho(), s.space());
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, BipartiteSpace space) {
  const int d1 = space.d1, d2 = space.d2;
  if (m.rows() != space.dim() || m.cols() != space.dim()) {
    throw DimensionMismatch("operator dimension does not match d1*d2");
  }
  ComplexMatrix out(space.dim(), space.dim());
  for (int k = 0; k < d1; ++k) {
    for (int l = 0; l < d1; ++l) out.block(k * d2, l * d2, d2, d2) = m.block(l * d2, k * d2, d2, d2);
  }
  return out;
}

ComplexMatrix partial_transpose(const BipartiteState& s) {
  return partial_transpose(s.rho(), s.space());
}

double ppt_min_eigenvalue(const BipartiteState& s) {
  return linalg::min_eigenvalue(partial_transpose(s));
}

double kadison_defect(const PositiveMapSpec& alpha, const ComplexMatrix& a) {
  require_dim(a, alpha.dim(), "Kadison argument");
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix alpha_a = apply_map(alpha, a);
  const ComplexMatrix alpha_ad = apply_map(alpha, ad);
  ComplexMatrix defect = apply_map(alpha, ad * a + a * ad) - alpha_ad * alpha_a - alpha_a * alpha_ad;
  return linalg::min_eigenvalue(0.5 * (defect + defect.adjoint()));
}

PositiveMapSpec identity_map(int d) {
  return PositiveMapSpec::from_action(d, [](const ComplexMatrix& x) { return x; }, "identity", true);
}

PositiveMapSpec transpose_map(int d) {
  return PositiveMapSpec::from_action(
      d, [](const ComplexMatrix& x) -> ComplexMatrix { return x.transpose(); }, "transpose", true);
}

PositiveMapSpec reduction_map(int d) {
  if (d < 2) throw OutOfRange("reduction map needs d >= 2");
  return PositiveMapSpec::from_action(
      d,
      [d](const ComplexMatrix& x) -> ComplexMatrix {
        return (x.trace() * linalg::identity(d) - x) / static_cast<double>(d - 1);
      },
      "reduction", true);
}

PositiveMapSpec depolarizing_map(int d, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw OutOfRange("depolarizing parameter must lie in [0, 1]");
  std::string name = p == 0.0 ? "depolarizing" : "depolarizing-" + std::to_string(p).substr(0, 4);
  return PositiveMapSpec::from_action(
      d,
      [d, p](const ComplexMatrix& x) -> ComplexMatrix {
        return p * x + (1.0 - p) * x.trace() / static_cast<double>(d) * linalg::identity(d);
      },
      std::move(name), true);
}

PositiveMapSpec phase_conjugation_map(int d) {
  ComplexMatrix z = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) z(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * k / d);
  return PositiveMapSpec::from_action(
      d, [z](const ComplexMatrix& x) -> ComplexMatrix { return z * x * z.adjoint(); }, "phase-conjugation",
      true);
}

PositiveMapSpec convex_combination(const PositiveMapSpec& a, const PositiveMapSpec& b, double weight_a,
                                   std::string name) {
  if (a.dim() != b.dim()) throw DimensionMismatch("convex combination of maps on different algebras");
  if (!(weight_a >= 0.0 && weight_a <= 1.0)) throw OutOfRange("convex weight must lie in [0, 1]");
  if (name.empty()) name = a.name() + "+" + b.name();
  return PositiveMapSpec(a.dim(), weight_a * a.choi() + (1.0 - weight_a) * b.choi(), std::move(name),
                         a.positive_verified() && b.positive_verified());
}

PositiveMapSpec shifted_identity_map(int d) {
  return PositiveMapSpec::from_action(
      d,
      [d](const ComplexMatrix& x) -> ComplexMatrix {
        return x - x.trace() / (2.0 * d) * linalg::identity(d);
      },
      "shifted-identity");
}

PositiveMapSpec overshoot_map(int d) {
  return PositiveMapSpec::from_action(
      d,
      [d](const ComplexMatrix& x) -> ComplexMatrix {
        return 3.0 * x.trace() / static_cast<double>(d) * linalg::identity(d) - 2.0 * x;
      },
      "overshoot");
}

std::vector<PositiveMapSpec> builtin_maps(int d) {
  std::vector<PositiveMapSpec> maps;
  maps.push_back(identity_map(d));
  maps.push_back(transpose_map(d));
  if (d >= 2) maps.push_back(reduction_map(d));
  maps.push_back(depolarizing_map(d, 0.0));
  maps.push_back(depolarizing_map(d, 0.5));
  maps.push_back(phase_conjugation_map(d));
  maps.push_back(convex_combination(identity_map(d), transpose_map(d), 0.5, "half-identity-transpose"));
  return maps;
}

std::vector<std::string> map_names() {
  return {"identity",          "transpose",       "reduction",        "depolarizing",
          "depolarizing-0.50", "phase-conjugation", "half-identity-transpose", "shifted-identity",
          "overshoot"};
}

PositiveMapSpec map_by_name(const std::string& name, int d) {
  if (name == "shifted-identity") return shifted_identity_map(d);
  if (name == "overshoot") return overshoot_map(d);
  for (auto& map : builtin_maps(d)) {
    if (map.name() == name) return map;
  }
  throw OutOfRange("unknown map '" + name + "'");
}

PositivityReport is_positive_map(const PositiveMapSpec& alpha, int n_samples, std::uint64_t seed) {
  const int d = alpha.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_vector = [&] {
    ComplexVector v(d);
    for (int i = 0; i < d; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      v(i) = Complex(re, im);
    }
    return v;
  };
  struct Probe {
    double value;
    ComplexVector phi;
  };
  auto lowest = [&](const ComplexVector& psi) {
    const ComplexMatrix out = apply_map(alpha, psi * psi.adjoint());
    const auto es = linalg::hermitian_eigendecompose(0.5 * (out + out.adjoint()));
    return Probe{es.values(0), es.vectors.col(0)};
  };

  PositivityReport report;
  report.min_value = std::numeric_limits<double>::infinity();
  for (int sample = 0; sample < std::max(1, n_samples); ++sample) {
    ComplexVector psi = random_vector().normalized();
    Probe best = lowest(psi);
    double radius = 0.5;
    for (int step = 0; step < 60 && radius > 1e-6; ++step) {
      const ComplexVector candidate = (psi + radius * random_vector()).normalized();
      const Probe p = lowest(candidate);
      if (p.value < best.value) {
        psi = candidate;
        best = p;
      } else {
        radius *= 0.7;
      }
    }
    if (best.value < report.min_value) {
      report.min_value = best.value;
      report.psi = psi;
      report.phi = best.phi;
    }
  }
  report.positive = report.min_value >= -1e-9;
  return report;
}

}  // namespace qcorr
