#include "qcorr/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qcorr/errors.hpp"

namespace qcorr::io {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "." + key + ": missing field");
  return *it;
}

int int_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer()) throw ParseError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

RealMatrix real_grid(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  RealMatrix out;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[i];
    const std::string rw = where + "[" + std::to_string(i) + "]";
    if (!row.is_array()) throw ParseError(rw + ": expected an array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      if (cols == 0) throw ParseError(rw + ": empty row");
      out.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(rw + ": ragged row");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[c].is_number()) throw ParseError(rw + "[" + std::to_string(c) + "]: expected a number");
      out(i, c) = row[c].get<double>();
      if (!std::isfinite(out(i, c))) throw ParseError(rw + "[" + std::to_string(c) + "]: not finite");
    }
  }
  return out;
}

json grid_to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(round12(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

double round12(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json matrix_to_json(const ComplexMatrix& m) {
  return json{{"re", grid_to_json(m.real())}, {"im", grid_to_json(m.imag())}};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  const RealMatrix re = real_grid(field(j, "re", where), where + ".re");
  RealMatrix im = RealMatrix::Zero(re.rows(), re.cols());
  if (j.contains("im")) {
    im = real_grid(j["im"], where + ".im");
    if (im.rows() != re.rows() || im.cols() != re.cols()) {
      throw ParseError(where + ".im: shape differs from " + where + ".re");
    }
  }
  ComplexMatrix m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

json state_to_json(const BipartiteState& s) {
  json j = matrix_to_json(s.rho());
  j["d1"] = s.space().d1;
  j["d2"] = s.space().d2;
  return j;
}

BipartiteState state_from_json(const json& j, const std::string& where) {
  const int d1 = int_field(j, "d1", where);
  const int d2 = int_field(j, "d2", where);
  if (d1 < 1) throw ParseError(where + ".d1: must be positive");
  if (d2 < 1) throw ParseError(where + ".d2: must be positive");
  return BipartiteState({d1, d2}, matrix_from_json(j, where));
}

json map_to_json(const PositiveMapSpec& alpha) {
  return json{{"d", alpha.dim()}, {"choi", matrix_to_json(alpha.choi())}, {"name", alpha.name()}};
}

PositiveMapSpec map_from_json(const json& j, const std::string& where) {
  const int d = int_field(j, "d", where);
  if (d < 1) throw ParseError(where + ".d: must be positive");
  ComplexMatrix choi = matrix_from_json(field(j, "choi", where), where + ".choi");
  std::string name;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ParseError(where + ".name: expected a string");
    name = j["name"].get<std::string>();
  }
  return PositiveMapSpec(d, std::move(choi), std::move(name));
}

json ensemble_to_json(const Ensemble& e) {
  json weights = json::array();
  json members = json::array();
  for (std::size_t i = 0; i < e.size(); ++i) {
    weights.push_back(round12(e.weights()[i]));
    json m = matrix_to_json(e.members()[i]);
    m["d1"] = e.space().d1;
    m["d2"] = e.space().d2;
    members.push_back(std::move(m));
  }
  return json{{"weights", std::move(weights)}, {"members", std::move(members)}};
}

Ensemble ensemble_from_json(const json& j, const std::string& where) {
  const json& w = field(j, "weights", where);
  const json& mem = field(j, "members", where);
  if (!w.is_array() || w.empty()) throw ParseError(where + ".weights: expected a non-empty array");
  if (!mem.is_array() || mem.size() != w.size()) {
    throw ParseError(where + ".members: expected an array with one entry per weight");
  }
  std::vector<double> weights;
  std::vector<ComplexMatrix> members;
  BipartiteSpace space{};
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::string wi = where + ".weights[" + std::to_string(i) + "]";
    if (!w[i].is_number()) throw ParseError(wi + ": expected a number");
    weights.push_back(w[i].get<double>());
    const std::string mi = where + ".members[" + std::to_string(i) + "]";
    const int d1 = int_field(mem[i], "d1", mi);
    const int d2 = int_field(mem[i], "d2", mi);
    if (d1 < 1 || d2 < 1) throw ParseError(mi + ": factor dimensions must be positive");
    if (i == 0) {
      space = {d1, d2};
    } else if (!(space == BipartiteSpace{d1, d2})) {
      throw ParseError(mi + ": factor dimensions differ from the first member");
    }
    members.push_back(matrix_from_json(mem[i], mi));
  }
  return Ensemble::from_members(space, std::move(weights), std::move(members));
}

json result_to_json(const CorrelationResult& r) {
  return json{{"value", round12(r.value)},
              {"converged", r.converged},
              {"starts_used", r.starts_used},
              {"ensemble", ensemble_to_json(r.ensemble)}};
}

json verification_to_json(const GnsVerification& v) {
  return json{{"residual_max", round12(v.residual_max)},
              {"v_norm", round12(v.v_norm)},
              {"dim_gns", v.dim_gns},
              {"bound", round12(v.bound)}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": malformed JSON (" + std::string(e.what()) + ")");
  }
}

}  // namespace qcorr::io
