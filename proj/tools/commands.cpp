#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qcorr/errors.hpp"
#include "qcorr/gns.hpp"
#include "qcorr/io.hpp"

namespace qcorr::cli {

using io::json;

std::string num(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  return fmt::format("{:.12g}", x);
}

namespace {

enum class Format { Table, Json, Csv };

// Ordered key/value report; each command fills one and the format decides
// the layout.
struct Report {
  std::vector<std::pair<std::string, std::string>> rows;
  json doc = json::object();

  void add(const std::string& key, double v) {
    rows.emplace_back(key, num(v));
    doc[key] = io::round12(v);
  }
  void add(const std::string& key, int v) {
    rows.emplace_back(key, std::to_string(v));
    doc[key] = v;
  }
  void add(const std::string& key, bool v) {
    rows.emplace_back(key, v ? "true" : "false");
    doc[key] = v;
  }
  void add(const std::string& key, const std::string& v) {
    rows.emplace_back(key, v);
    doc[key] = v;
  }
  void add(const std::string& key, const char* v) { add(key, std::string(v)); }
};

void emit(const Report& r, Format f, std::ostream& out) {
  switch (f) {
    case Format::Json:
      out << r.doc.dump(2) << '\n';
      break;
    case Format::Csv: {
      std::string head, vals;
      for (const auto& [k, v] : r.rows) {
        head += (head.empty() ? "" : ",") + k;
        vals += (vals.empty() ? "" : ",") + v;
      }
      out << head << '\n' << vals << '\n';
      break;
    }
    case Format::Table: {
      std::size_t w = 0;
      for (const auto& kv : r.rows) w = std::max(w, kv.first.size());
      for (const auto& [k, v] : r.rows) out << fmt::format("{:<{}}  {}\n", k, w, v);
      break;
    }
  }
}

BipartiteState load_state(const std::string& path) {
  return io::state_from_json(io::load_json_file(path), path);
}

ComplexMatrix load_matrix(const std::string& path) {
  return io::matrix_from_json(io::load_json_file(path), path);
}

void require_square(const ComplexMatrix& m, int n, const std::string& what) {
  if (m.rows() != n || m.cols() != n) {
    throw DimensionMismatch(what + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            ", expected " + std::to_string(n) + "x" + std::to_string(n));
  }
}

// "name" or a JSON path; a name needs a dimension.
PositiveMapSpec resolve_map(const std::string& spec, int d) {
  const auto names = map_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) {
    if (d < 2) throw OutOfRange("map '" + spec + "' needs a dimension >= 2");
    return map_by_name(spec, d);
  }
  if (spec.find('/') == std::string::npos && spec.find(".json") == std::string::npos) {
    throw OutOfRange("unknown map '" + spec + "'");
  }
  auto alpha = io::map_from_json(io::load_json_file(spec), spec);
  if (d > 0 && alpha.dim() != d) {
    throw DimensionMismatch("map acts on M_" + std::to_string(alpha.dim()) + ", state on M_" + std::to_string(d));
  }
  return alpha;
}

// "random:D:SEED" or a path to a single-factor state (d2 = 1) or a bare matrix.
ComplexMatrix resolve_density(const std::string& spec) {
  if (spec.rfind("random:", 0) == 0) {
    int d = 0;
    unsigned long long seed = 0;
    char tail = 0;
    if (std::sscanf(spec.c_str(), "random:%d:%llu%c", &d, &seed, &tail) != 2) {
      throw ParseError(spec + ": expected random:D:SEED");
    }
    if (d < 1) throw OutOfRange(spec + ": dimension must be positive");
    std::mt19937_64 rng(seed);
    return linalg::random_density(d, rng);
  }
  const json j = io::load_json_file(spec);
  if (j.is_object() && j.contains("d1")) {
    const auto s = io::state_from_json(j, spec);
    return s.rho();
  }
  ComplexMatrix m = io::matrix_from_json(j, spec);
  validate_density_matrix(m, spec.c_str());
  return m;
}

struct Options {
  Format format = Format::Table;
  OptimizerConfig cfg;
};

int cmd_d0(const Options& o, const std::string& state_path, const std::string& obs_path, const std::string& dump,
           std::ostream& out) {
  const auto rho = load_state(state_path);
  const auto A = load_matrix(obs_path);
  const auto r = minimize_d0(rho, A, o.cfg);
  if (!dump.empty()) {
    std::ofstream f(dump);
    if (!f) throw ParseError(dump + ": cannot write");
    f << io::ensemble_to_json(r.ensemble).dump(2) << '\n';
  }
  Report rep;
  rep.add("value", r.value);
  rep.add("converged", r.converged);
  rep.add("starts_used", r.starts_used);
  emit(rep, o.format, out);
  return kExitOk;
}

int cmd_d(const Options& o, const std::string& state_path, const std::string& a_path, const std::string& b_path,
          std::ostream& out) {
  const auto rho = load_state(state_path);
  const auto r = minimize_d_simple(rho, load_matrix(a_path), load_matrix(b_path), o.cfg);
  Report rep;
  rep.add("value", r.result.value);
  rep.add("converged", r.result.converged);
  rep.add("starts_used", r.result.starts_used);
  rep.add("state_value_re", r.state_value.real());
  rep.add("state_value_im", r.state_value.imag());
  rep.add("factored_re", r.factored.real());
  rep.add("factored_im", r.factored.imag());
  rep.add("boxtimes_re", r.boxtimes_value.real());
  rep.add("boxtimes_im", r.boxtimes_value.imag());
  emit(rep, o.format, out);
  return kExitOk;
}

int cmd_verdict(const Options& o, const std::string& state_path, int n_obs, std::ostream& out) {
  const auto rho = load_state(state_path);
  const auto v = separability_verdict(rho, o.cfg, n_obs);
  if (o.format == Format::Table) {
    out << "verdict      " << to_string(v.verdict) << '\n';
    out << "max_d0       " << num(v.max_d0) << '\n';
    out << "ppt_min_eig  " << num(v.ppt_min_eig) << '\n';
    out << "probe        value  converged  starts_used\n";
    for (const auto& p : v.probes) {
      out << p.label << "  " << num(p.result.value) << "  " << (p.result.converged ? "true" : "false") << "  "
          << p.result.starts_used << '\n';
    }
    return kExitOk;
  }
  if (o.format == Format::Csv) {
    out << "probe,value,converged,starts_used\n";
    for (const auto& p : v.probes) {
      out << p.label << ',' << num(p.result.value) << ',' << (p.result.converged ? "true" : "false") << ','
          << p.result.starts_used << '\n';
    }
    return kExitOk;
  }
  json doc;
  doc["verdict"] = to_string(v.verdict);
  doc["max_d0"] = io::round12(v.max_d0);
  doc["ppt_min_eig"] = io::round12(v.ppt_min_eig);
  doc["witness"] = io::matrix_to_json(v.witness);
  json probes = json::array();
  for (const auto& p : v.probes) {
    probes.push_back({{"label", p.label},
                      {"value", io::round12(p.result.value)},
                      {"converged", p.result.converged},
                      {"starts_used", p.result.starts_used}});
  }
  doc["probes"] = probes;
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_ppt(const Options& o, const std::string& state_path, std::ostream& out) {
  const auto rho = load_state(state_path);
  const double e = ppt_min_eigenvalue(rho);
  Report rep;
  rep.add("min_eig", e);
  rep.add("psd", e >= -linalg::kPsdTol ? "PSD" : "NOT PSD");
  emit(rep, o.format, out);
  return kExitOk;
}

int cmd_boxtimes(const Options& o, const std::string& ens_path, const std::string& obs_path, std::ostream& out) {
  const auto e = io::ensemble_from_json(io::load_json_file(ens_path), ens_path);
  const auto A = load_matrix(obs_path);
  require_square(A, e.space().dim(), obs_path);
  const Complex bary = expect(e.barycenter(), A);
  const Complex box = evaluate_boxtimes(boxtimes(e), A);
  Report rep;
  rep.add("barycenter_re", bary.real());
  rep.add("barycenter_im", bary.imag());
  rep.add("boxtimes_re", box.real());
  rep.add("boxtimes_im", box.imag());
  rep.add("gap", std::abs(bary - box));
  emit(rep, o.format, out);
  return kExitOk;
}

int cmd_gns_verify(const Options& o, const std::string& map_spec, const std::string& state_spec, int dim,
                   bool self_adjoint, std::ostream& out) {
  const ComplexMatrix rho = resolve_density(state_spec);
  if (dim > 0 && dim != rho.rows()) {
    throw DimensionMismatch("--dim " + std::to_string(dim) + " but the state is " + std::to_string(rho.rows()) +
                            "-dimensional");
  }
  const auto alpha = resolve_map(map_spec, static_cast<int>(rho.rows()));
  const auto ld =
      self_adjoint ? build_self_adjoint_decomposition(alpha, rho) : build_direct_sum_decomposition(alpha, rho);
  const auto v = verify(ld, alpha);
  Report rep;
  rep.add("map", alpha.name());
  rep.add("construction", self_adjoint ? "self-adjoint" : "direct-sum");
  rep.add("residual_max", v.residual_max);
  rep.add("omega_residual", v.omega_residual);
  rep.add("v_norm", v.v_norm);
  rep.add("bound", v.bound);
  rep.add("dim_gns", v.dim_gns);
  rep.add("status", v.pass ? "PASS" : "FAIL");
  emit(rep, o.format, out);
  return v.pass ? kExitOk : kExitConstruction;
}

int cmd_kadison(const Options& o, const std::string& map_spec, int dim, int samples, std::ostream& out) {
  if (samples < 1) throw OutOfRange("--samples must be positive");
  const auto alpha = resolve_map(map_spec, dim);
  std::mt19937_64 rng(o.cfg.seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    worst = std::min(worst, kadison_defect(alpha, linalg::ginibre(alpha.dim(), alpha.dim(), rng)));
  }
  Report rep;
  rep.add("map", alpha.name());
  rep.add("samples", samples);
  rep.add("min_defect", worst);
  rep.add("violation", worst < -1e-10);
  emit(rep, o.format, out);
  return kExitOk;
}

int cmd_sweep(const Options& o, double p_min, double p_max, int steps, int n_obs, std::ostream& out) {
  const auto rows = werner_sweep(p_min, p_max, steps, o.cfg, n_obs);
  if (o.format == Format::Json) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"p", io::round12(r.p)},
                     {"d0_witness", io::round12(r.d0_witness)},
                     {"ppt_min_eig", io::round12(r.ppt_min_eig)},
                     {"verdict", to_string(r.verdict)}});
    }
    out << arr.dump(2) << '\n';
  } else {
    out << sweep_csv(rows);
  }
  return kExitOk;
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
  if (dynamic_cast<const MapNotUnital*>(&e) || dynamic_cast<const WellDefinednessFailure*>(&e) ||
      dynamic_cast<const ConvergenceFailure*>(&e)) {
    return kExitConstruction;
  }
  return kExitDomain;
}

}  // namespace

std::vector<SweepRow> werner_sweep(double p_min, double p_max, int steps, const OptimizerConfig& cfg,
                                   int n_observables) {
  if (!(0.0 <= p_min && p_min <= p_max && p_max <= 1.0)) {
    throw OutOfRange("sweep range must satisfy 0 <= p_min <= p_max <= 1");
  }
  if (steps < 2) throw OutOfRange("sweep needs at least 2 steps");
  std::vector<SweepRow> rows;
  for (int i = 0; i < steps; ++i) {
    const double p = i == steps - 1 ? p_max : p_min + i * (p_max - p_min) / (steps - 1);
    const auto v = separability_verdict(make_werner(p), cfg, n_observables);
    rows.push_back({p, v.max_d0, v.ppt_min_eig, v.verdict});
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string s = std::string(kSweepHeader) + "\n";
  for (const auto& r : rows) {
    s += num(r.p) + "," + num(r.d0_witness) + "," + num(r.ppt_min_eig) + "," + to_string(r.verdict) + "\n";
  }
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coefficients of quantum correlations, separability verdicts and local decompositions of positive maps"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all");

  Options o;
  std::string format = "table";
  std::optional<std::uint64_t> seed;
  app.add_option("--format", format, "table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--seed", seed, "RNG seed (falls back to $QCORR_SEED, then 1)");
  app.add_option("--m", o.cfg.m, "ensemble size (0: (d1 d2)^2)");
  app.add_option("--starts", o.cfg.starts, "multi-start count")->capture_default_str();
  app.add_option("--max-iters", o.cfg.max_iters, "iterations per local search")->capture_default_str();
  app.add_option("--tol", o.cfg.tol, "relative objective tolerance")->capture_default_str();
  app.add_option("--threads", o.cfg.threads, "worker threads")->capture_default_str();
  app.add_option("--threshold", o.cfg.decision_threshold, "verdict decision threshold")->capture_default_str();
  bool no_partitions = false;
  app.add_flag("--no-partitions", no_partitions, "search only fine-grained decompositions");

  std::string state, observable, a, b, ensemble, map, dump;
  int n_obs = kDefaultProbeObservables, dim = 0, kdim = 2, samples = 200, steps = 51;
  double p_min = 0.0, p_max = 1.0;
  bool self_adjoint = false;

  auto* d0 = app.add_subcommand("d0", "minimize d0 over decompositions of a state");
  d0->add_option("state", state, "state JSON")->required();
  d0->add_option("observable", observable, "observable JSON")->required();
  d0->add_option("--dump-ensemble", dump, "write the optimal decomposition here");

  auto* d = app.add_subcommand("d", "coefficient for a simple tensor a (x) b");
  d->add_option("state", state, "state JSON")->required();
  d->add_option("a", a, "first-factor matrix JSON")->required();
  d->add_option("b", b, "second-factor matrix JSON")->required();

  auto* verdict = app.add_subcommand("verdict", "separability verdict from d0 probes");
  verdict->add_option("state", state, "state JSON")->required();
  verdict->add_option("--observables", n_obs, "random probe count")->capture_default_str();

  auto* ppt = app.add_subcommand("ppt", "partial-transpose test");
  ppt->add_option("state", state, "state JSON")->required();

  auto* box = app.add_subcommand("boxtimes", "barycenter and product-measure terms for an ensemble");
  box->add_option("ensemble", ensemble, "ensemble JSON")->required();
  box->add_option("observable", observable, "observable JSON")->required();

  auto* gns = app.add_subcommand("gns-verify", "build and check a local decomposition of a positive map");
  gns->add_option("--map", map, "builtin name or map JSON")->required();
  gns->add_option("state", state, "density JSON or random:D:SEED")->required();
  gns->add_option("--dim", dim, "expected dimension");
  gns->add_flag("--self-adjoint", self_adjoint, "self-adjoint variant (||V|| <= 1)");

  auto* kad = app.add_subcommand("kadison", "sample the Kadison-type inequality");
  kad->add_option("--map", map, "builtin name or map JSON")->required();
  kad->add_option("--dim", kdim, "dimension for builtin maps")->capture_default_str();
  kad->add_option("--samples", samples, "random elements")->capture_default_str();

  auto* sweep = app.add_subcommand("werner-sweep", "verdicts along the Werner family");
  sweep->add_option("--p-min", p_min)->capture_default_str();
  sweep->add_option("--p-max", p_max)->capture_default_str();
  sweep->add_option("--steps", steps)->capture_default_str();
  sweep->add_option("--observables", n_obs, "random probe count")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "qcorr: " << e.what() << '\n';
    return kExitParse;
  }

  o.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Table;
  o.cfg.use_partitions = !no_partitions;
  if (seed) {
    o.cfg.seed = *seed;
  } else if (const char* env = std::getenv("QCORR_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      o.cfg.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      err << "qcorr: QCORR_SEED: expected an unsigned integer, got '" << env << "'\n";
      return kExitParse;
    }
  }

  try {
    validate_config(o.cfg);
    if (*d0) return cmd_d0(o, state, observable, dump, out);
    if (*d) return cmd_d(o, state, a, b, out);
    if (*verdict) return cmd_verdict(o, state, n_obs, out);
    if (*ppt) return cmd_ppt(o, state, out);
    if (*box) return cmd_boxtimes(o, ensemble, observable, out);
    if (*gns) return cmd_gns_verify(o, map, state, dim, self_adjoint, out);
    if (*kad) return cmd_kadison(o, map, kdim, samples, out);
    if (*sweep) return cmd_sweep(o, p_min, p_max, steps, n_obs, out);
  } catch (const Error& e) {
    err << "qcorr: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitParse;
}

}  // namespace qcorr::cli
