#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "qlocal/liouvillian.hpp"
#include "qlocal/propagator.hpp"

namespace qlocal {

// A fully validated run description. `raw` holds the canonical JSON document
// after defaults and overrides were applied; everything else is derived.
struct ExperimentConfig {
  nlohmann::json raw;
  std::string kind;        // lr | quasilocal | trotter | simulate | selftest | sweep
  bool has_model = false;  // selftest and sweep may omit the model block
  LiouvillianSpec model;
  double kappa = 0.0;      // growth exponent used for bound evaluation
  SolverConfig solver;
  std::uint64_t seed = 0;
  int max_exact_sites = 10;
  std::string out_dir = "out";
  nlohmann::json experiment;  // the kind-specific block
};

// Reads and parses a JSON file; throws config_error on IO or syntax problems.
nlohmann::json load_json_file(const std::string& path);

// Applies "dotted.path=value" onto the document, creating intermediate
// objects. The value is parsed as JSON when possible, otherwise kept as a
// string. Array elements are addressed by numeric path components.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// Validates the document and builds the run description. `forced_kind`
// (from the CLI subcommand) must agree with experiment.kind when both are
// present; when the document omits the kind it is filled in. Unknown keys
// anywhere are rejected.
ExperimentConfig parse_config(nlohmann::json doc, const std::string& forced_kind = "");

// FNV-1a 64-bit hash over the compact serialization (keys sorted by the
// JSON library) with the output section removed, printed as 0x%016x: the
// same computation hashes the same wherever its results are written.
std::string config_hash(const nlohmann::json& doc);

// Builds just the model block (used by sweep to rebuild per-point models).
LiouvillianSpec model_from_config(const nlohmann::json& model, double* kappa_out);

}  // namespace qlocal
