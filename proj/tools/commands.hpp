#pragma once

// Command implementations behind the qcorr executable. run() never calls
// exit(); it returns the process exit code:
//   0 success, 2 parse error, 3 domain/range error, 4 construction failure.

#include <iosfwd>
#include <string>
#include <vector>

#include "qcorr/correlation.hpp"

namespace qcorr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitConstruction = 4;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SweepRow {
  double p = 0.0;
  double d0_witness = 0.0;
  double ppt_min_eig = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

/// One verdict per grid point p_min + i (p_max - p_min) / (steps - 1).
/// Throws OutOfRange on a bad grid.
std::vector<SweepRow> werner_sweep(double p_min, double p_max, int steps, const OptimizerConfig& cfg,
                                   int n_observables);

inline constexpr const char* kSweepHeader = "p,d0_witness,ppt_min_eig,verdict";
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// 12 significant digits.
std::string num(double x);

}  // namespace qcorr::cli
