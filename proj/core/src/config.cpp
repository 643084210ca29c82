#include "qlocal/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qlocal/errors.hpp"
#include "qlocal/presets.hpp"
#include "qlocal/trotter.hpp"

namespace qlocal {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw config_error("config: " + path + ": " + msg);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok) fail(path, "unknown key \"" + it.key() + "\"");
  }
}

const json& require(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing required key \"" + std::string(key) + "\"");
  return *it;
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double opt_double(const json& j, const std::string& path, const char* key,
                  double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_double(*it, path + "." + key);
}

int opt_int(const json& j, const std::string& path, const char* key, int fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_int(*it, path + "." + key);
}

std::vector<double> as_double_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_double(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> as_int_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_int(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

TimeProfile parse_profile(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  std::string kind = as_string(require(j, path, "kind"), path + ".kind");
  if (kind == "constant") {
    check_keys(j, path, {"kind", "value"});
    return TimeProfile::constant(as_double(require(j, path, "value"), path + ".value"));
  }
  if (kind == "piecewise") {
    check_keys(j, path, {"kind", "breakpoints", "values"});
    auto breaks = as_double_list(require(j, path, "breakpoints"), path + ".breakpoints");
    auto values = as_double_list(require(j, path, "values"), path + ".values");
    if (values.size() != breaks.size() + 1)
      fail(path, "piecewise needs values.size() == breakpoints.size() + 1");
    return TimeProfile::piecewise(std::move(breaks), std::move(values));
  }
  if (kind == "sinusoid") {
    check_keys(j, path, {"kind", "offset", "amplitude", "omega", "phase"});
    return TimeProfile::sinusoid(opt_double(j, path, "offset", 0.0),
                                 as_double(require(j, path, "amplitude"), path + ".amplitude"),
                                 as_double(require(j, path, "omega"), path + ".omega"),
                                 opt_double(j, path, "phase", 0.0));
  }
  if (kind == "quench") {
    check_keys(j, path, {"kind", "t_switch", "before", "after"});
    return TimeProfile::quench(as_double(require(j, path, "t_switch"), path + ".t_switch"),
                               as_double(require(j, path, "before"), path + ".before"),
                               as_double(require(j, path, "after"), path + ".after"));
  }
  fail(path + ".kind", "unknown profile kind \"" + kind + "\"");
}

// "hamiltonian"/"lindblads" entries: {"pauli": "zz", "coeff": 1.5}.
Matrix parse_pauli_component(const json& j, const std::string& path,
                             const Region& support, const SiteDims& dims) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"pauli", "coeff"});
  std::string chars = as_string(require(j, path, "pauli"), path + ".pauli");
  if (static_cast<int>(chars.size()) != support.size())
    fail(path + ".pauli", "needs one character per support site");
  double coeff = opt_double(j, path, "coeff", 1.0);
  try {
    return coeff * pauli_string(support, chars).mat;
  } catch (const input_error& e) {
    fail(path + ".pauli", e.what());
  }
}

Geometry parse_geometry(const json& j, const std::string& path, std::string* kind_out) {
  if (!j.is_object()) fail(path, "expected an object");
  std::string kind = as_string(require(j, path, "kind"), path + ".kind");
  *kind_out = kind;
  if (kind == "chain") {
    check_keys(j, path, {"kind", "length"});
    int n = as_int(require(j, path, "length"), path + ".length");
    if (n < 1) fail(path + ".length", "needs length >= 1");
    return Geometry::chain(n);
  }
  std::string metric = "l1";
  if (auto it = j.find("metric"); it != j.end()) {
    metric = as_string(*it, path + ".metric");
    if (metric != "l1" && metric != "linf") fail(path + ".metric", "expected \"l1\" or \"linf\"");
  }
  if (kind == "grid2d") {
    check_keys(j, path, {"kind", "nx", "ny", "metric"});
    int nx = as_int(require(j, path, "nx"), path + ".nx");
    int ny = as_int(require(j, path, "ny"), path + ".ny");
    if (nx < 1 || ny < 1) fail(path, "needs nx, ny >= 1");
    return Geometry::grid2d(nx, ny, metric);
  }
  if (kind == "grid3d") {
    check_keys(j, path, {"kind", "nx", "ny", "nz", "metric"});
    int nx = as_int(require(j, path, "nx"), path + ".nx");
    int ny = as_int(require(j, path, "ny"), path + ".ny");
    int nz = as_int(require(j, path, "nz"), path + ".nz");
    if (nx < 1 || ny < 1 || nz < 1) fail(path, "needs nx, ny, nz >= 1");
    return Geometry::grid3d(nx, ny, nz, metric);
  }
  fail(path + ".kind", "unknown geometry kind \"" + kind + "\"");
}

double default_kappa(const std::string& geometry_kind) {
  if (geometry_kind == "grid2d") return 1.0;
  if (geometry_kind == "grid3d") return 2.0;
  return 0.0;  // chain
}

}  // namespace

LiouvillianSpec model_from_config(const json& model, double* kappa_out) {
  const std::string path = "model";
  if (!model.is_object()) fail(path, "expected an object");
  if (model.contains("preset")) {
    check_keys(model, path, {"preset", "sites", "params"});
    std::string preset = as_string(model["preset"], path + ".preset");
    int sites = as_int(require(model, path, "sites"), path + ".sites");
    if (sites < 2) fail(path + ".sites", "needs at least 2 sites");
    json params = model.value("params", json::object());
    if (!params.is_object()) fail(path + ".params", "expected an object");
    if (kappa_out) *kappa_out = 0.0;  // presets are chains
    if (preset == "dissipative_ising") {
      check_keys(params, path + ".params", {"J", "g", "gamma"});
      return presets::dissipative_ising_chain(sites, opt_double(params, path + ".params", "J", 1.0),
                                              opt_double(params, path + ".params", "g", 1.0),
                                              opt_double(params, path + ".params", "gamma", 0.5));
    }
    if (preset == "xy_dephasing") {
      check_keys(params, path + ".params", {"J", "gamma"});
      return presets::xy_dephasing_chain(sites, opt_double(params, path + ".params", "J", 1.0),
                                         opt_double(params, path + ".params", "gamma", 0.5));
    }
    if (preset == "random_chain") {
      check_keys(params, path + ".params", {"strength", "model_seed"});
      return presets::random_chain_model(sites,
                                         static_cast<std::uint64_t>(opt_int(params, path + ".params", "model_seed", 1)),
                                         opt_double(params, path + ".params", "strength", 1.0));
    }
    fail(path + ".preset", "unknown preset \"" + preset + "\"");
  }

  check_keys(model, path, {"geometry", "terms"});
  std::string geom_kind;
  Geometry geometry = parse_geometry(require(model, path, "geometry"), path + ".geometry",
                                     &geom_kind);
  if (kappa_out) *kappa_out = default_kappa(geom_kind);

  const json& terms = require(model, path, "terms");
  if (!terms.is_array() || terms.empty()) fail(path + ".terms", "expected a non-empty array");

  LiouvillianSpec spec;
  spec.geometry = geometry;
  spec.dims = SiteDims(2);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tpath = path + ".terms[" + std::to_string(i) + "]";
    const json& t = terms[i];
    if (!t.is_object()) fail(tpath, "expected an object");
    check_keys(t, tpath, {"support", "hamiltonian", "lindblads", "profile", "label"});
    auto sites = as_int_list(require(t, tpath, "support"), tpath + ".support");
    for (int s : sites)
      if (s < 0 || s >= geometry.size()) fail(tpath + ".support", "site out of range");
    Region support{std::vector<SiteId>(sites.begin(), sites.end())};
    long d = spec.dims.total_dim(support);

    Matrix h = Matrix::Zero(d, d);
    if (auto it = t.find("hamiltonian"); it != t.end()) {
      // one component or a list of components, summed
      if (it->is_array()) {
        for (std::size_t k = 0; k < it->size(); ++k)
          h += parse_pauli_component((*it)[k], tpath + ".hamiltonian[" + std::to_string(k) + "]",
                                     support, spec.dims);
      } else {
        h += parse_pauli_component(*it, tpath + ".hamiltonian", support, spec.dims);
      }
    }
    std::vector<Matrix> ls;
    if (auto it = t.find("lindblads"); it != t.end()) {
      if (!it->is_array()) fail(tpath + ".lindblads", "expected an array");
      for (std::size_t k = 0; k < it->size(); ++k)
        ls.push_back(parse_pauli_component((*it)[k], tpath + ".lindblads[" + std::to_string(k) + "]",
                                           support, spec.dims));
    }
    TimeProfile profile = TimeProfile::constant(1.0);
    if (auto it = t.find("profile"); it != t.end())
      profile = parse_profile(*it, tpath + ".profile");
    std::string label = "term" + std::to_string(i);
    if (auto it = t.find("label"); it != t.end()) label = as_string(*it, tpath + ".label");
    try {
      spec.terms.push_back(make_term(support, spec.dims, std::move(h), std::move(ls),
                                     profile, label));
    } catch (const input_error& e) {
      fail(tpath, e.what());
    }
  }
  spec.validate();
  return spec;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  json doc = json::parse(ss.str(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded())
    throw config_error("config: \"" + path + "\" is not valid JSON");
  return doc;
}

void apply_override(json& doc, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw config_error("override: expected key.path=value, got \"" + assignment + "\"");
  std::string key = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);

  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto dot = key.find('.', start);
    parts.push_back(key.substr(start, dot == std::string::npos ? dot : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  for (const auto& p : parts)
    if (p.empty()) throw config_error("override: empty path component in \"" + key + "\"");

  json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) parsed = value;  // keep raw strings

  json* node = &doc;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (node->is_array()) {
      std::size_t idx = 0;
      try { idx = std::stoul(p); } catch (...) {
        throw config_error("override: \"" + p + "\" is not an array index");
      }
      if (idx >= node->size()) throw config_error("override: index " + p + " out of range");
      node = &(*node)[idx];
    } else if (node->is_object() || node->is_null()) {
      node = &(*node)[p];
    } else {
      throw config_error("override: \"" + parts[i] + "\" is not an object or array");
    }
  }
  const std::string& last = parts.back();
  if (node->is_array()) {
    std::size_t idx = 0;
    try { idx = std::stoul(last); } catch (...) {
      throw config_error("override: \"" + last + "\" is not an array index");
    }
    if (idx >= node->size()) throw config_error("override: index " + last + " out of range");
    (*node)[idx] = parsed;
  } else if (node->is_object() || node->is_null()) {
    (*node)[last] = parsed;
  } else {
    throw config_error("override: \"" + last + "\" cannot be set on a scalar");
  }
}

std::string config_hash(const json& doc) {
  json semantic = doc;
  semantic.erase("output");  // the destination does not change the computation
  std::string bytes = semantic.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

// {"sites": [...], "ops": "zx..."}: a Pauli string observable.
void validate_observable(const json& j, const std::string& path, const Geometry& geom) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"sites", "ops"});
  auto sites = as_int_list(require(j, path, "sites"), path + ".sites");
  for (int s : sites)
    if (s < 0 || s >= geom.size()) fail(path + ".sites", "site out of range");
  std::set<int> uniq(sites.begin(), sites.end());
  if (uniq.size() != sites.size()) fail(path + ".sites", "duplicate site");
  std::string ops = as_string(require(j, path, "ops"), path + ".ops");
  if (ops.size() != sites.size()) fail(path + ".ops", "needs one character per site");
  for (char c : ops)
    if (c != 'i' && c != 'x' && c != 'y' && c != 'z')
      fail(path + ".ops", "characters must be i, x, y or z");
}

std::vector<double> ascending_times(const json& j, const std::string& path, double r) {
  auto ts = as_double_list(j, path);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < r) fail(path, "times must be >= the start time");
    if (i && ts[i] <= ts[i - 1]) fail(path, "times must be strictly increasing");
  }
  return ts;
}

void validate_experiment(json& exp, const std::string& kind, const ExperimentConfig& cfg) {
  const std::string path = "experiment";
  const Geometry& geom = cfg.model.geometry;
  if (kind == "lr") {
    check_keys(exp, path, {"kind", "perturbation", "observable", "r", "t_values"});
    const json& pert = require(exp, path, "perturbation");
    if (!pert.is_object()) fail(path + ".perturbation", "expected an object");
    check_keys(pert, path + ".perturbation", {"op", "positions"});
    std::string op = as_string(require(pert, path + ".perturbation", "op"),
                               path + ".perturbation.op");
    if (op.size() != 1 || (op[0] != 'x' && op[0] != 'y' && op[0] != 'z'))
      fail(path + ".perturbation.op", "expected one of \"x\", \"y\", \"z\"");
    auto pos = as_int_list(require(pert, path + ".perturbation", "positions"),
                           path + ".perturbation.positions");
    for (int s : pos)
      if (s < 0 || s >= geom.size()) fail(path + ".perturbation.positions", "site out of range");
    validate_observable(require(exp, path, "observable"), path + ".observable", geom);
    double r = as_double(require(exp, path, "r"), path + ".r");
    ascending_times(require(exp, path, "t_values"), path + ".t_values", r);
    return;
  }
  if (kind == "quasilocal") {
    check_keys(exp, path, {"kind", "observable", "r", "t", "radii"});
    validate_observable(require(exp, path, "observable"), path + ".observable", geom);
    double r = as_double(require(exp, path, "r"), path + ".r");
    double t = as_double(require(exp, path, "t"), path + ".t");
    if (t < r) fail(path + ".t", "needs t >= r");
    auto radii = as_int_list(require(exp, path, "radii"), path + ".radii");
    for (int d : radii)
      if (d < 0) fail(path + ".radii", "radii must be >= 0");
    return;
  }
  if (kind == "trotter") {
    check_keys(exp, path, {"kind", "observable", "t_total", "dt_values", "d0",
                           "ordering", "averaged", "samples"});
    validate_observable(require(exp, path, "observable"), path + ".observable", geom);
    double t_total = as_double(require(exp, path, "t_total"), path + ".t_total");
    if (t_total <= 0) fail(path + ".t_total", "needs t_total > 0");
    auto dts = as_double_list(require(exp, path, "dt_values"), path + ".dt_values");
    for (double dt : dts)
      if (dt <= 0 || dt > t_total) fail(path + ".dt_values", "needs 0 < dt <= t_total");
    int d0 = opt_int(exp, path, "d0", 1);
    if (d0 < 1) fail(path + ".d0", "needs d0 >= 1");
    exp["d0"] = d0;
    std::string ordering = "lexicographic";
    if (auto it = exp.find("ordering"); it != exp.end())
      ordering = as_string(*it, path + ".ordering");
    try {
      ordering_from_string(ordering);
    } catch (const input_error& e) {
      fail(path + ".ordering", e.what());
    }
    exp["ordering"] = ordering;
    bool averaged = false;
    if (auto it = exp.find("averaged"); it != exp.end())
      averaged = as_bool(*it, path + ".averaged");
    exp["averaged"] = averaged;
    int samples = opt_int(exp, path, "samples", 8);
    if (samples < 1) fail(path + ".samples", "needs samples >= 1");
    exp["samples"] = samples;
    return;
  }
  if (kind == "simulate") {
    check_keys(exp, path, {"kind", "observable", "r", "t_values", "state"});
    validate_observable(require(exp, path, "observable"), path + ".observable", geom);
    double r = as_double(require(exp, path, "r"), path + ".r");
    ascending_times(require(exp, path, "t_values"), path + ".t_values", r);
    json state = exp.value("state", json{{"kind", "all_up"}});
    if (!state.is_object()) fail(path + ".state", "expected an object");
    check_keys(state, path + ".state", {"kind", "bits"});
    std::string skind = as_string(require(state, path + ".state", "kind"),
                                  path + ".state.kind");
    if (skind == "basis") {
      std::string bits = as_string(require(state, path + ".state", "bits"),
                                   path + ".state.bits");
      if (static_cast<int>(bits.size()) != geom.size())
        fail(path + ".state.bits", "needs one digit per lattice site");
      for (int s = 0; s < geom.size(); ++s) {
        int digit = bits[s] - '0';
        if (digit < 0 || digit >= cfg.model.dims.dim(s))
          fail(path + ".state.bits", "digit exceeds the site dimension");
      }
    } else if (skind != "all_up" && skind != "all_down") {
      fail(path + ".state.kind", "expected all_up, all_down or basis");
    }
    exp["state"] = state;
    return;
  }
  if (kind == "selftest") {
    check_keys(exp, path, {"kind", "x_max", "x_step", "n_max", "d_max", "kappas",
                           "duality_cases", "cpt_cases", "path_n_max"});
    exp["x_max"] = opt_double(exp, path, "x_max", 5.0);
    exp["x_step"] = opt_double(exp, path, "x_step", 0.5);
    exp["n_max"] = opt_int(exp, path, "n_max", 30);
    exp["d_max"] = opt_int(exp, path, "d_max", 40);
    if (!exp.contains("kappas")) exp["kappas"] = json::array({0.0, 0.5, 1.0, 2.0});
    as_double_list(exp["kappas"], path + ".kappas");
    exp["duality_cases"] = opt_int(exp, path, "duality_cases", 50);
    exp["cpt_cases"] = opt_int(exp, path, "cpt_cases", 20);
    exp["path_n_max"] = opt_int(exp, path, "path_n_max", 6);
    if (exp["x_max"].get<double>() < 0 || exp["x_step"].get<double>() <= 0)
      fail(path, "needs x_max >= 0 and x_step > 0");
    if (exp["n_max"].get<int>() < 1 || exp["d_max"].get<int>() < 2)
      fail(path, "needs n_max >= 1 and d_max >= 2");
    return;
  }
  if (kind == "sweep") {
    check_keys(exp, path, {"kind", "parameter", "values", "inner"});
    std::string parameter = as_string(require(exp, path, "parameter"), path + ".parameter");
    if (parameter.empty()) fail(path + ".parameter", "expected a dotted path");
    const json& values = require(exp, path, "values");
    if (!values.is_array() || values.empty()) fail(path + ".values", "expected a non-empty array");
    const json& inner = require(exp, path, "inner");
    if (!inner.is_object()) fail(path + ".inner", "expected an object");
    std::string inner_kind = as_string(require(inner, path + ".inner", "kind"),
                                       path + ".inner.kind");
    if (inner_kind == "sweep") fail(path + ".inner.kind", "sweeps cannot nest");
    // the inner experiment is fully validated per sweep point at run time
    return;
  }
  fail(path + ".kind", "unknown experiment kind \"" + kind + "\"");
}

}  // namespace

ExperimentConfig parse_config(json doc, const std::string& forced_kind) {
  if (!doc.is_object()) throw config_error("config: top level must be a JSON object");
  check_keys(doc, "top level", {"version", "seed", "model", "growth", "solver",
                                "limits", "output", "experiment"});

  const json& version = require(doc, "top level", "version");
  if (!version.is_number_integer() || version.get<int>() != 1)
    fail("version", "this tool reads version 1 documents");

  ExperimentConfig cfg;

  json& exp = doc["experiment"];
  if (exp.is_null()) fail("experiment", "missing required key \"experiment\"");
  if (!exp.is_object()) fail("experiment", "expected an object");
  if (auto it = exp.find("kind"); it != exp.end()) {
    cfg.kind = as_string(*it, "experiment.kind");
    if (!forced_kind.empty() && cfg.kind != forced_kind)
      fail("experiment.kind", "document says \"" + cfg.kind +
           "\" but the subcommand requires \"" + forced_kind + "\"");
  } else if (!forced_kind.empty()) {
    cfg.kind = forced_kind;
    exp["kind"] = forced_kind;
  } else {
    fail("experiment.kind", "missing required key \"kind\"");
  }

  {
    const json& seed = require(doc, "top level", "seed");
    if (!seed.is_number_integer() ||
        (!seed.is_number_unsigned() && seed.get<long long>() < 0))
      fail("seed", "expected a non-negative integer (norm estimation is seeded)");
    cfg.seed = seed.get<std::uint64_t>();
  }

  bool inner_selftest = false;
  if (cfg.kind == "sweep" && exp.contains("inner") && exp["inner"].is_object() &&
      exp["inner"].value("kind", "") == "selftest")
    inner_selftest = true;
  bool needs_model = cfg.kind != "selftest" && !inner_selftest;
  if (auto it = doc.find("model"); it != doc.end()) {
    cfg.model = model_from_config(*it, &cfg.kappa);
    cfg.has_model = true;
  } else if (needs_model) {
    fail("model", "missing required key \"model\"");
  }

  if (auto it = doc.find("growth"); it != doc.end()) {
    check_keys(*it, "growth", {"kappa"});
    cfg.kappa = opt_double(*it, "growth", "kappa", cfg.kappa);
    if (cfg.kappa < 0) fail("growth.kappa", "needs kappa >= 0");
  }

  if (auto it = doc.find("solver"); it != doc.end()) {
    const std::string p = "solver";
    check_keys(*it, p, {"step_scale", "max_step", "step", "tol", "halving", "max_halvings"});
    cfg.solver.step_scale = opt_double(*it, p, "step_scale", cfg.solver.step_scale);
    cfg.solver.max_step = opt_double(*it, p, "max_step", cfg.solver.max_step);
    cfg.solver.step_override = opt_double(*it, p, "step", cfg.solver.step_override);
    cfg.solver.tol = opt_double(*it, p, "tol", cfg.solver.tol);
    if (auto h = it->find("halving"); h != it->end())
      cfg.solver.halving = as_bool(*h, p + ".halving");
    cfg.solver.max_halvings = opt_int(*it, p, "max_halvings", cfg.solver.max_halvings);
    if (cfg.solver.step_scale <= 0 || cfg.solver.max_step <= 0 || cfg.solver.tol <= 0 ||
        cfg.solver.step_override < 0 || cfg.solver.max_halvings < 0)
      fail(p, "step_scale, max_step, tol must be > 0; step, max_halvings >= 0");
  }

  if (auto it = doc.find("limits"); it != doc.end()) {
    check_keys(*it, "limits", {"max_exact_sites"});
    cfg.max_exact_sites = opt_int(*it, "limits", "max_exact_sites", cfg.max_exact_sites);
    if (cfg.max_exact_sites < 1 || cfg.max_exact_sites > 14)
      fail("limits.max_exact_sites", "needs 1 <= max_exact_sites <= 14");
  }
  cfg.solver.max_exact_sites = cfg.max_exact_sites;

  if (auto it = doc.find("output"); it != doc.end()) {
    check_keys(*it, "output", {"dir"});
    if (auto d = it->find("dir"); d != it->end()) {
      cfg.out_dir = as_string(*d, "output.dir");
      if (cfg.out_dir.empty()) fail("output.dir", "expected a non-empty path");
    }
  }

  validate_experiment(exp, cfg.kind, cfg);
  cfg.experiment = exp;
  cfg.raw = std::move(doc);
  return cfg;
}

}  // namespace qlocal
