#include "qlocal/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>

#include "qlocal/format.hpp"
#include "qlocal/trotter.hpp"

namespace qlocal {

using nlohmann::json;

namespace {

// Measured values may exceed a bound by at most this before a row is flagged.
constexpr double kViolationTol = 1e-7;

std::string fmt(double v) { return format_g17(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(long v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt_bool(bool b) { return b ? "true" : "false"; }

NormOptions norm_opts(std::uint64_t seed) {
  NormOptions o;
  o.seed = seed;
  return o;
}

json solver_json(const SolverConfig& s) {
  return json{{"step_scale", s.step_scale}, {"max_step", s.max_step},
              {"step", s.step_override},    {"tol", s.tol},
              {"halving", s.halving},       {"max_halvings", s.max_halvings},
              {"max_exact_sites", s.max_exact_sites}};
}

json constants_json(const BoundParams& p) {
  return json{{"range_a", p.range_a},
              {"max_neighbors", p.max_neighbors},
              {"term_norm", p.term_norm},
              {"growth_prefactor", p.growth_prefactor},
              {"growth_exponent", p.growth_exponent},
              {"velocity", lr_velocity(p)}};
}

json base_summary(const ExperimentConfig& cfg) {
  json s;
  s["kind"] = cfg.kind;
  s["seed"] = cfg.seed;
  s["config_hash"] = config_hash(cfg.raw);
  s["solver"] = solver_json(cfg.solver);
  return s;
}

Region observable_region(const json& obs) {
  auto sites = obs.at("sites").get<std::vector<int>>();
  return Region{std::vector<SiteId>(sites.begin(), sites.end())};
}

double worst_err(const SolverStats& st) {
  return std::isnan(st.err_estimate) ? 0.0 : st.err_estimate;
}

// ---------------------------------------------------------------- lr ------

RunOutput run_lr(const ExperimentConfig& cfg) {
  const LiouvillianSpec& spec = cfg.model;
  const json& exp = cfg.experiment;
  Region y = observable_region(exp.at("observable"));
  std::string ops = exp.at("observable").at("ops").get<std::string>();
  char op_x = exp.at("perturbation").at("op").get<std::string>()[0];
  auto positions = exp.at("perturbation").at("positions").get<std::vector<int>>();
  double r = exp.at("r").get<double>();
  auto ts = exp.at("t_values").get<std::vector<double>>();

  Region lambda = spec.geometry.all_sites();
  InteractionHypergraph hg = spec.hypergraph();
  BoundParams p = model_bound_params(spec, cfg.kappa, r, ts.back(), norm_opts(cfg.seed));

  Op obs = pauli_string(y, ops);
  double norm_o = inf_norm(obs);
  SolverStats stats;
  std::vector<Op> evolved = evolve_observable_sweep(
      spec, lambda, embed(obs, lambda, spec.dims), r, ts, cfg.solver, &stats);
  int vol_y = volume(hg, extension(hg, y));

  // perturbation generator K = i[A, .] on one site; its norm enters the bound
  const Matrix& ax = pauli(op_x);
  Matrix id2 = Matrix::Identity(2, 2);
  Matrix sk = cxd(0, 1) * (kron(id2, ax) - kron(ax.transpose(), id2));
  double norm_k = 0;

  RunOutput out;
  out.csv_name = "lr.csv";
  out.table.columns = {"x_site",  "y_sites", "op_x",    "op_y",      "r",
                       "t",       "distance", "measured", "bound",    "margin",
                       "violated", "norm_k",  "norm_o",  "vol_x_ext", "vol_y_ext",
                       "solver_err"};

  for (int x : positions) {
    Region rx{x};
    if (spec.dims.dim(x) != 2)
      throw input_error("lr: perturbation sites must be qubits");
    if (norm_k == 0)
      norm_k = inf_inf_norm(make_superop(rx, spec.dims, sk), norm_opts(cfg.seed)).value;
    int vol_x = volume(hg, extension(hg, rx));
    double dist = spec.geometry.distance(rx, y);
    SlotMap slot(lambda, rx, spec.dims);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const Matrix& g = evolved[i].mat;
      Matrix kt = cxd(0, 1) * (slot.left(ax, g) - slot.right(ax, g));
      double measured = inf_norm(kt);
      double bound = lr_bound(p, vol_x, vol_y, dist, r, ts[i], norm_k, norm_o);
      bool violated = measured > bound + kViolationTol;
      out.violations += violated;
      out.table.add_row({fmt(x), to_string(y), std::string(1, op_x), ops, fmt(r),
                         fmt(ts[i]), fmt(dist), fmt(measured), fmt(bound),
                         fmt(bound - measured), fmt_bool(violated), fmt(norm_k),
                         fmt(norm_o), fmt(vol_x), fmt(vol_y), fmt(worst_err(stats))});
    }
  }

  out.summary = base_summary(cfg);
  out.summary["constants"] = constants_json(p);
  return out;
}

// -------------------------------------------------------- quasilocal ------

RunOutput run_quasilocal(const ExperimentConfig& cfg) {
  const LiouvillianSpec& spec = cfg.model;
  const json& exp = cfg.experiment;
  Region y = observable_region(exp.at("observable"));
  std::string ops = exp.at("observable").at("ops").get<std::string>();
  double r = exp.at("r").get<double>();
  double t = exp.at("t").get<double>();
  auto radii = exp.at("radii").get<std::vector<int>>();

  Region lambda = spec.geometry.all_sites();
  InteractionHypergraph hg = spec.hypergraph();
  BoundParams p = model_bound_params(spec, cfg.kappa, r, t, norm_opts(cfg.seed));

  Op obs = pauli_string(y, ops);
  double norm_o = inf_norm(obs);
  SolverStats stats_full;
  Op full = evolve_observable(spec, lambda, embed(obs, lambda, spec.dims), r, t,
                              cfg.solver, &stats_full);

  RunOutput out;
  out.csv_name = "quasilocal.csv";
  out.table.columns = {"radius",   "cone_depth", "truncated_sites", "measured",
                       "bound",    "margin",     "violated",        "norm_o",
                       "solver_err"};

  for (int radius : radii) {
    // The radius names the simulated window: the truncated generator keeps
    // exactly the supports contained in ball(y, radius). The envelope depth is
    // the distance (in range units) to the nearest dropped support -- the
    // dropped terms are what the envelope's tail sums over. No dropped
    // support means the truncation is exact and there is nothing to bound.
    Region window = spec.geometry.ball(y, radius);
    SolverStats st;
    Op trunc = evolve_observable(spec, window, embed(obs, window, spec.dims), r,
                                 t, cfg.solver, &st);
    Matrix diff = embed(trunc, lambda, spec.dims).mat - full.mat;
    double measured = inf_norm(diff);
    double depth = std::numeric_limits<double>::infinity();
    for (const Region& z : hg.supports()) {
      if (window.contains(z)) continue;
      const double dz = spec.geometry.distance(y, z);
      double dd;
      if (p.range_a > 0)
        dd = std::ceil(dz / p.range_a);
      else
        dd = dz > 0 ? std::numeric_limits<double>::infinity() : 0.0;
      depth = std::min(depth, dd);
    }

    std::string bound_s, margin_s;
    bool violated = false;
    if (std::isfinite(depth)) {
      try {
        double bound = quasi_locality_bound(p, static_cast<int>(depth), r, t, norm_o);
        violated = measured > bound + kViolationTol;
        bound_s = fmt(bound);
        margin_s = fmt(bound - measured);
      } catch (const precondition_error&) {
        // depth below the envelope's validity threshold: no bound to report
      }
    }
    out.violations += violated;
    out.table.add_row({fmt(radius), fmt(depth),
                       fmt(lambda.size() - window.size()), fmt(measured),
                       bound_s, margin_s, fmt_bool(violated), fmt(norm_o),
                       fmt(std::max(worst_err(stats_full), worst_err(st)))});
  }

  out.summary = base_summary(cfg);
  out.summary["constants"] = constants_json(p);
  return out;
}

// ------------------------------------------------------------ trotter -----

RunOutput run_trotter(const ExperimentConfig& cfg) {
  const LiouvillianSpec& spec = cfg.model;
  const json& exp = cfg.experiment;
  Region y = observable_region(exp.at("observable"));
  double t_total = exp.at("t_total").get<double>();
  auto dts = exp.at("dt_values").get<std::vector<double>>();
  int d0 = exp.at("d0").get<int>();
  ChannelOrdering ordering = ordering_from_string(exp.at("ordering").get<std::string>());
  bool averaged = exp.at("averaged").get<bool>();
  int samples = exp.at("samples").get<int>();

  Region lambda = spec.geometry.all_sites();
  BoundParams p = model_bound_params(spec, cfg.kappa, 0, t_total, norm_opts(cfg.seed));
  double velocity = lr_velocity(p);

  ErrorProbe probe = make_error_probe(spec, y, lambda, 0, t_total, samples,
                                      cfg.seed, cfg.solver);

  RunOutput out;
  out.csv_name = "trotter.csv";
  out.table.columns = {"dt",        "slices",           "channels",
                       "observed",  "bound_total",      "bound_truncation",
                       "bound_trotter", "margin",       "violated",
                       "samples",   "ordering",         "averaged",
                       "saturated_slices", "solver_err", "circuit_file"};

  for (std::size_t idx = 0; idx < dts.size(); ++idx) {
    double dt = dts[idx];
    Schedule sched = light_cone_schedule(spec, y, 0, t_total, dt, d0, velocity);
    ScheduleInfo info = analyze_schedule(spec, sched, y);
    TrotterCircuit circuit = build_circuit(spec, sched, ordering, averaged, cfg.seed);
    CircuitError err = measure_error(spec, circuit, probe, cfg.solver);
    TrotterBoundBreakdown bb = trotter_total_bound(p, sched.times, info.cone_depths,
                                                   info.volumes);
    bool violated = err.observed_sup > bb.total + kViolationTol;
    out.violations += violated;
    int saturated = static_cast<int>(
        std::count(info.saturated.begin(), info.saturated.end(), true));
    std::string fname = "circuit_" + std::to_string(idx + 1) + ".txt";
    out.extra_files.emplace_back(fname, serialize_circuit(spec, circuit));
    out.table.add_row({fmt(dt), fmt(static_cast<long>(sched.times.size()) - 1),
                       fmt(static_cast<long>(circuit.channels.size())),
                       fmt(err.observed_sup), fmt(bb.total), fmt(bb.truncation),
                       fmt(bb.trotter), fmt(bb.total - err.observed_sup),
                       fmt_bool(violated), fmt(samples), to_string(ordering),
                       fmt_bool(averaged), fmt(saturated), fmt(err.solver_err),
                       fname});
  }

  out.summary = base_summary(cfg);
  out.summary["constants"] = constants_json(p);
  out.summary["probe"] = json{{"samples", samples},
                              {"kinds", probe.kinds},
                              {"solver_err", probe.solver_err}};
  return out;
}

// ----------------------------------------------------------- simulate -----

RunOutput run_simulate(const ExperimentConfig& cfg) {
  const LiouvillianSpec& spec = cfg.model;
  const json& exp = cfg.experiment;
  Region y = observable_region(exp.at("observable"));
  std::string ops = exp.at("observable").at("ops").get<std::string>();
  double r = exp.at("r").get<double>();
  auto ts = exp.at("t_values").get<std::vector<double>>();
  const json& state = exp.at("state");
  std::string skind = state.at("kind").get<std::string>();

  Region lambda = spec.geometry.all_sites();
  // basis index of the product state, big-endian over ascending sites
  long idx = 0;
  for (int s = 0; s < spec.geometry.size(); ++s) {
    int dim = spec.dims.dim(s);
    int digit = 0;
    if (skind == "all_down") digit = dim - 1;
    if (skind == "basis") digit = state.at("bits").get<std::string>()[s] - '0';
    idx = idx * dim + digit;
  }

  Op obs = pauli_string(y, ops);
  SolverStats stats;
  std::vector<Op> evolved = evolve_observable_sweep(
      spec, lambda, embed(obs, lambda, spec.dims), r, ts, cfg.solver, &stats);

  RunOutput out;
  out.csv_name = "simulate.csv";
  out.table.columns = {"t", "expectation_re", "expectation_im", "solver_err"};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    cxd e = evolved[i].mat(idx, idx);  // <b| tau(r,t) O |b>
    out.table.add_row({fmt(ts[i]), fmt(e.real()), fmt(e.imag()),
                       fmt(worst_err(stats))});
  }

  out.summary = base_summary(cfg);
  out.summary["state"] = state;
  out.summary["state_index"] = idx;
  return out;
}

// ----------------------------------------------------------- selftest -----

struct PathCase {
  std::string name;
  Geometry geometry;
  InteractionHypergraph graph;
};

std::vector<PathCase> path_cases() {
  std::vector<PathCase> cases;
  {
    Geometry g = Geometry::chain(10);
    std::vector<Region> s;
    for (int i = 0; i + 1 < 10; ++i) s.push_back(Region{i, i + 1});
    cases.push_back({"pair_chain_10", g, InteractionHypergraph(std::move(s))});
  }
  {
    Geometry g = Geometry::chain(6);
    std::vector<Region> s;
    for (int i = 0; i + 1 < 6; ++i) s.push_back(Region{i, i + 1});
    for (int i = 0; i < 6; ++i) s.push_back(Region{i});
    cases.push_back({"mixed_chain_6", g, InteractionHypergraph(std::move(s))});
  }
  {
    Geometry g = Geometry::grid2d(2, 3);
    std::vector<Region> s;
    for (int a = 0; a < 6; ++a)
      for (int b = a + 1; b < 6; ++b)
        if (g.distance(a, b) == 1.0) s.push_back(Region{a, b});
    cases.push_back({"grid_2x3_edges", g, InteractionHypergraph(std::move(s))});
  }
  return cases;
}

int neighbor_count(const InteractionHypergraph& h, const Region& z) {
  int n = 0;
  for (const Region& w : h.supports()) n += w.intersects(z);
  return n;
}

RunOutput run_selftest(const ExperimentConfig& cfg) {
  const json& exp = cfg.experiment;
  double x_max = exp.at("x_max").get<double>();
  double x_step = exp.at("x_step").get<double>();
  int n_max = exp.at("n_max").get<int>();
  int d_max = exp.at("d_max").get<int>();
  auto kappas = exp.at("kappas").get<std::vector<double>>();
  int duality_cases = exp.at("duality_cases").get<int>();
  int cpt_cases = exp.at("cpt_cases").get<int>();
  int path_n_max = exp.at("path_n_max").get<int>();

  RunOutput out;
  out.csv_name = "selftest.csv";
  out.table.columns = {"family", "cases", "violations", "worst", "note"};
  auto add = [&](const std::string& family, long cases, int viol, double worst,
                 const std::string& note) {
    out.violations += viol;
    out.table.add_row({family, fmt(cases), fmt(viol), fmt(worst), note});
  };

  {  // exponential tail against its envelope
    long cases = 0;
    int viol = 0;
    double worst = 0;
    for (double x = 0; x <= x_max + 1e-12; x += x_step)
      for (int n = 0; n <= n_max; ++n) {
        TailSum ts = partial_exp_sum(x, n);
        ++cases;
        if (ts.exact > ts.bound * (1 + 1e-12)) ++viol;
        if (ts.bound > 0) worst = std::max(worst, ts.exact / ts.bound);
      }
    add("exp_tail", cases, viol, worst, "max tail/envelope");
  }

  {  // polynomially weighted tail against its envelope
    long cases = 0;
    int viol = 0;
    double worst = 0;
    for (double kappa : kappas) {
      int d_min = kappa == 0 ? 1 : static_cast<int>(2 * kappa + 1) + 1;
      for (int d = d_min; d <= d_max; ++d) {
        TailSum ts = exp_tail_sum(kappa, d);
        ++cases;
        if (ts.exact > ts.bound * (1 + 1e-12)) ++viol;
        if (ts.bound > 0) worst = std::max(worst, ts.exact / ts.bound);
      }
    }
    add("shell_tail", cases, viol, worst, "max tail/envelope");
  }

  {  // closed forms of the weighted tail at kappa = 0 and 1
    long cases = 0;
    int viol = 0;
    double worst = 0;
    const double q = std::exp(-1.0);
    for (int d = 1; d <= d_max; ++d) {
      double closed0 = std::pow(q, d) / (1 - q);
      double dev0 = std::abs(exp_tail_sum(0, d).exact - closed0) / closed0;
      ++cases;
      if (dev0 > 1e-12) ++viol;
      worst = std::max(worst, dev0);
      if (d >= 4) {  // validity threshold of the kappa = 1 sum
        double closed1 = std::pow(q, d) * (d - (d - 1) * q) / ((1 - q) * (1 - q));
        double dev1 = std::abs(exp_tail_sum(1, d).exact - closed1) / closed1;
        ++cases;
        if (dev1 > 1e-12) ++viol;
        worst = std::max(worst, dev1);
      }
    }
    add("shell_closed_form", cases, viol, worst, "max relative deviation");
  }

  {  // two independent routes to the inf->inf norm must agree
    int viol = 0;
    double worst = 0;
    SiteDims dims(2);
    Region r0{0};
    for (int i = 0; i < duality_cases; ++i) {
      auto rng = rng_from_seed(cfg.seed ^ (0x9e3779b97f4a7c15ull * (i + 1)));
      SuperOp t = random_superop(r0, dims, rng);
      double dual = inf_inf_norm(t, norm_opts(cfg.seed + i)).value;
      double direct = inf_inf_norm_direct(t, norm_opts(cfg.seed + i)).value;
      double gap = std::abs(dual - direct) / std::max({dual, direct, 1e-30});
      if (gap > 1e-6) ++viol;
      worst = std::max(worst, gap);
    }
    add("norm_duality", duality_cases, viol, worst, "max relative dual/direct gap");
  }

  {  // random channels: trace preserving + completely positive + unit 1->1 norm
    int viol = 0;
    double worst = 0;
    SiteDims dims(2);
    for (int i = 0; i < cpt_cases; ++i) {
      auto rng = rng_from_seed(cfg.seed ^ (0xbf58476d1ce4e5b9ull * (i + 1)));
      Region region = (i % 2 == 0) ? Region{0} : Region{0, 1};
      SuperOp ch = random_cpt_superop(region, dims, 2 + i % 3, rng);
      bool ok = cpt_check(ch).cpt;
      double val = one_to_one_norm(ch, norm_opts(cfg.seed + i)).value;
      double gap = std::abs(val - 1.0);
      if (!ok || gap > 1e-6) ++viol;
      worst = std::max(worst, gap);
    }
    add("cpt_norm", cpt_cases, viol, worst, "max |norm - 1|");
  }

  {  // path counting: zero below the distance threshold + growth caps
    long zero_cases = 0, cap_cases = 0;
    int zero_viol = 0, cap_viol = 0;
    double worst_cap = 0;
    for (const PathCase& pc : path_cases()) {
      double a = interaction_range(pc.geometry, pc.graph);
      int z_overlap = max_neighbors(pc.graph);
      int z_dp = 0;  // max successor count the recursion actually obeys
      bool z_forms_agree = true;
      for (const Region& z : pc.graph.supports()) {
        int ext_vol = volume(pc.graph, extension(pc.graph, z));
        z_dp = std::max(z_dp, ext_vol);
        if (ext_vol != neighbor_count(pc.graph, z)) z_forms_agree = false;
      }
      for (const Region& x : pc.graph.supports())
        for (const Region& y : pc.graph.supports()) {
          double dist = pc.geometry.distance(x, y);
          int vol_x = volume(pc.graph, extension(pc.graph, x));
          int vol_y = volume(pc.graph, extension(pc.graph, y));
          for (int n = 0; n <= path_n_max; ++n) {
            auto c = static_cast<double>(count_paths(pc.graph, x, y, n));
            ++zero_cases;
            if (c > 0 && n * a + 1e-12 < dist) ++zero_viol;
            if (n >= 1) {
              // structural cap, valid for every hypergraph
              double cap = vol_x * std::pow(double(z_dp), n - 1);
              ++cap_cases;
              if (c > cap * (1 + 1e-12)) ++cap_viol;
              if (cap > 0) worst_cap = std::max(worst_cap, c / cap);
              if (z_forms_agree) {
                // neighbor-count cap, rigorous when successor == intersector
                double capz = std::min(vol_x, vol_y) * std::pow(double(z_overlap), n - 1);
                ++cap_cases;
                if (c > capz * (1 + 1e-12)) ++cap_viol;
                if (capz > 0) worst_cap = std::max(worst_cap, c / capz);
              }
            }
          }
        }
    }
    add("path_zero", zero_cases, zero_viol, 0.0, "paths below distance threshold");
    add("path_cap", cap_cases, cap_viol, worst_cap, "max count/cap");
  }

  out.summary = base_summary(cfg);
  return out;
}

// -------------------------------------------------------------- sweep -----

RunOutput run_sweep(const ExperimentConfig& cfg, int jobs) {
  const json& exp = cfg.experiment;
  std::string parameter = exp.at("parameter").get<std::string>();
  const json& values = exp.at("values");
  const json& inner = exp.at("inner");

  const std::size_t npoints = values.size();
  std::vector<RunOutput> results(npoints);
  std::vector<std::exception_ptr> errors(npoints);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= npoints) break;
      try {
        json doc = cfg.raw;
        doc["experiment"] = inner;
        // every point gets its own deterministic seed
        doc["seed"] = cfg.seed ^ (0x9e3779b97f4a7c15ull * (i + 1));
        apply_override(doc, parameter + "=" + values[i].dump());
        ExperimentConfig point = parse_config(std::move(doc));
        results[i] = run_experiment(point, 1);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  int nthreads = std::clamp<int>(jobs, 1, static_cast<int>(npoints));
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  RunOutput out;
  out.csv_name = "sweep.csv";
  out.table.columns = {"sweep_index", "sweep_value"};
  out.table.columns.insert(out.table.columns.end(), results[0].table.columns.begin(),
                           results[0].table.columns.end());
  json points = json::array();
  for (std::size_t i = 0; i < npoints; ++i) {
    if (results[i].table.columns != results[0].table.columns)
      throw config_error("sweep: points produced differing columns");
    std::string value_s = values[i].is_string() ? values[i].get<std::string>()
                                                : values[i].dump();
    for (const auto& row : results[i].table.rows) {
      std::vector<std::string> merged{fmt(static_cast<long>(i + 1)), value_s};
      merged.insert(merged.end(), row.begin(), row.end());
      out.table.add_row(std::move(merged));
    }
    out.violations += results[i].violations;
    for (auto& [name, bytes] : results[i].extra_files)
      out.extra_files.emplace_back("point" + std::to_string(i + 1) + "_" + name,
                                   std::move(bytes));
    points.push_back(json{{"value", values[i]},
                          {"rows", results[i].table.rows.size()},
                          {"violations", results[i].violations},
                          {"summary", std::move(results[i].summary)}});
  }

  out.summary = base_summary(cfg);
  out.summary["parameter"] = parameter;
  out.summary["points"] = std::move(points);
  return out;
}

}  // namespace

BoundParams model_bound_params(const LiouvillianSpec& spec, double kappa,
                               double t0, double t1, const NormOptions& opts) {
  InteractionHypergraph hg = spec.hypergraph();
  BoundParams p;
  p.range_a = interaction_range(spec.geometry, hg);
  p.max_neighbors = max_neighbors(hg);
  p.term_norm = model_term_norm(spec, t0, t1, opts);
  p.growth_exponent = kappa;
  p.growth_prefactor = fit_growth_prefactor(spec.geometry, hg, kappa);
  return p;
}

RunOutput run_experiment(const ExperimentConfig& cfg, int jobs) {
  RunOutput out;
  if (cfg.kind == "lr") out = run_lr(cfg);
  else if (cfg.kind == "quasilocal") out = run_quasilocal(cfg);
  else if (cfg.kind == "trotter") out = run_trotter(cfg);
  else if (cfg.kind == "simulate") out = run_simulate(cfg);
  else if (cfg.kind == "selftest") out = run_selftest(cfg);
  else if (cfg.kind == "sweep") out = run_sweep(cfg, jobs);
  else throw config_error("unknown experiment kind \"" + cfg.kind + "\"");
  out.summary["rows"] = out.table.rows.size();
  out.summary["violations"] = out.violations;
  return out;
}

std::vector<std::string> write_outputs(const RunOutput& out, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  json summary = out.summary;
  json names = json::array({out.csv_name, "summary.json"});
  for (const auto& [name, bytes] : out.extra_files) names.push_back(name);
  summary["files"] = names;

  std::vector<std::string> written;
  auto write = [&](const std::string& name, const std::string& content) {
    fs::path p = fs::path(dir) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw config_error("cannot write \"" + p.string() + "\"");
    f << content;
    written.push_back(p.string());
  };
  write(out.csv_name, to_csv(out.table));
  write("summary.json", summary.dump(2) + "\n");
  for (const auto& [name, content] : out.extra_files) write(name, content);
  return written;
}

}  // namespace qlocal
