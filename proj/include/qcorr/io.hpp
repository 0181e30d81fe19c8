#pragma once

// JSON forms shared by the CLI and fixtures.
//   matrix:   {"re": [[...]], "im": [[...]]}            (row-major, "im" optional)
//   state:    {"d1": int, "d2": int, "re": ..., "im": ...}
//   map:      {"d": int, "choi": matrix, "name": string}
//   ensemble: {"weights": [...], "members": [state, ...]}
// Parse failures throw ParseError naming the offending field.

#include <string>

#include <json.hpp>

#include "qcorr/correlation.hpp"
#include "qcorr/gns.hpp"
#include "qcorr/posmaps.hpp"

namespace qcorr::io {

using nlohmann::json;

/// Rounds to 12 significant digits so serialized output is stable and short.
double round12(double x);

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, const std::string& where);

json state_to_json(const BipartiteState& s);
BipartiteState state_from_json(const json& j, const std::string& where);

json map_to_json(const PositiveMapSpec& alpha);
PositiveMapSpec map_from_json(const json& j, const std::string& where);

json ensemble_to_json(const Ensemble& e);
Ensemble ensemble_from_json(const json& j, const std::string& where);

json result_to_json(const CorrelationResult& r);
json verification_to_json(const GnsVerification& v);

/// Reads and parses a JSON file; ParseError mentions the path.
json load_json_file(const std::string& path);

}  // namespace qcorr::io
