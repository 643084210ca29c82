#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qlocal/bounds.hpp"
#include "qlocal/config.hpp"
#include "qlocal/csv.hpp"

namespace qlocal {

// Everything a run produces, before it is written anywhere.
struct RunOutput {
  std::string csv_name;  // "<kind>.csv"
  Table table;
  nlohmann::json summary;
  int violations = 0;
  std::vector<std::pair<std::string, std::string>> extra_files;  // name, bytes
};

// Model constants over the window [t0, t1] for the configured growth
// exponent; the norm options seed the local-strength estimation.
BoundParams model_bound_params(const LiouvillianSpec& spec, double kappa,
                               double t0, double t1,
                               const NormOptions& opts = {});

// Runs the configured experiment. `jobs` parallelizes sweep points only;
// individual runs stay single-threaded so results are seed-deterministic.
RunOutput run_experiment(const ExperimentConfig& cfg, int jobs = 1);

// Writes <dir>/<csv_name>, <dir>/summary.json and any extra files, creating
// directories as needed. Returns the paths written, in order.
std::vector<std::string> write_outputs(const RunOutput& out, const std::string& dir);

}  // namespace qlocal
