#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "qlocal/csv.hpp"
#include "qlocal/experiments.hpp"
#include "qlocal/format.hpp"

using namespace qlocal;
using nlohmann::json;

namespace {
json base_doc() {
  return json{
      {"version", 1},
      {"seed", 7},
      {"model",
       {{"preset", "dissipative_ising"},
        {"sites", 3},
        {"params", {{"J", 1.0}, {"g", 1.0}, {"gamma", 0.5}}}}},
      {"experiment",
       {{"kind", "simulate"},
        {"observable", {{"sites", {0}}, {"ops", "z"}}},
        {"r", 0.3},
        {"t_values", {0.3, 0.5}},
        {"state", {{"kind", "basis"}, {"bits", "010"}}}}},
  };
}
}  // namespace

TEST_CASE("config parsing is strict") {
  CHECK(parse_config(base_doc()).kind == "simulate");

  SUBCASE("version is mandatory and must be 1") {
    json d = base_doc();
    d.erase("version");
    CHECK_THROWS_AS(parse_config(d), config_error);
    d["version"] = 2;
    CHECK_THROWS_AS(parse_config(d), config_error);
    d["version"] = 1.5;
    CHECK_THROWS_AS(parse_config(d), config_error);
  }
  SUBCASE("seed is a mandatory non-negative integer") {
    json d = base_doc();
    d.erase("seed");
    CHECK_THROWS_AS(parse_config(d), config_error);
    d["seed"] = -3;
    CHECK_THROWS_AS(parse_config(d), config_error);
    d["seed"] = 1.5;
    CHECK_THROWS_AS(parse_config(d), config_error);
  }
  SUBCASE("unknown keys are rejected at every level") {
    json d = base_doc();
    d["extras"] = 1;
    CHECK_THROWS_AS(parse_config(d), config_error);
    d = base_doc();
    d["model"]["foo"] = 1;
    CHECK_THROWS_AS(parse_config(d), config_error);
    d = base_doc();
    d["model"]["params"]["zeta"] = 1;
    CHECK_THROWS_AS(parse_config(d), config_error);
    d = base_doc();
    d["experiment"]["bogus"] = 1;
    CHECK_THROWS_AS(parse_config(d), config_error);
    d = base_doc();
    d["experiment"]["observable"]["weight"] = 1;
    CHECK_THROWS_AS(parse_config(d), config_error);
    d = base_doc();
    d["solver"] = {{"dt", 0.1}};
    CHECK_THROWS_AS(parse_config(d), config_error);
  }
  SUBCASE("the subcommand kind must agree with the document") {
    CHECK_THROWS_AS(parse_config(base_doc(), "lr"), config_error);
    CHECK(parse_config(base_doc(), "simulate").kind == "simulate");
    json d = base_doc();
    d["experiment"].erase("kind");
    CHECK_THROWS_AS(parse_config(d), config_error);  // no kind anywhere
    ExperimentConfig cfg = parse_config(d, "simulate");
    CHECK(cfg.kind == "simulate");
    CHECK(cfg.raw["experiment"]["kind"] == "simulate");
  }
  SUBCASE("only selftest may omit the model") {
    json d = base_doc();
    d.erase("model");
    CHECK_THROWS_AS(parse_config(d), config_error);
    json st = {{"version", 1}, {"seed", 1}, {"experiment", {{"kind", "selftest"}}}};
    ExperimentConfig cfg = parse_config(st);
    CHECK(!cfg.has_model);
  }
  SUBCASE("growth, solver, limits and output blocks") {
    json d = base_doc();
    d["growth"] = {{"kappa", 1.5}};
    d["solver"] = {{"tol", 1e-8}, {"halving", false}, {"step", 0.02}};
    d["limits"] = {{"max_exact_sites", 12}};
    d["output"] = {{"dir", "runs/x"}};
    ExperimentConfig cfg = parse_config(d);
    CHECK(cfg.kappa == 1.5);
    CHECK(cfg.solver.tol == 1e-8);
    CHECK(!cfg.solver.halving);
    CHECK(cfg.solver.step_override == 0.02);
    CHECK(cfg.max_exact_sites == 12);
    CHECK(cfg.solver.max_exact_sites == 12);
    CHECK(cfg.out_dir == "runs/x");

    d["growth"]["kappa"] = -1.0;
    CHECK_THROWS_AS(parse_config(d), config_error);
    d["growth"]["kappa"] = 0.0;
    d["limits"]["max_exact_sites"] = 15;
    CHECK_THROWS_AS(parse_config(d), config_error);
    d["limits"]["max_exact_sites"] = 10;
    d["output"]["dir"] = "";
    CHECK_THROWS_AS(parse_config(d), config_error);
    d["output"]["dir"] = "out";
    d["solver"]["tol"] = 0.0;
    CHECK_THROWS_AS(parse_config(d), config_error);
  }
  SUBCASE("kind defaults are normalized into the document") {
    json d = base_doc();
    d["experiment"] = {{"kind", "trotter"},
                       {"observable", {{"sites", {1}}, {"ops", "z"}}},
                       {"t_total", 0.4},
                       {"dt_values", {0.2, 0.1}}};
    ExperimentConfig cfg = parse_config(d);
    CHECK(cfg.experiment["d0"] == 1);
    CHECK(cfg.experiment["ordering"] == "lexicographic");
    CHECK(cfg.experiment["averaged"] == false);
    CHECK(cfg.experiment["samples"] == 8);
  }
  SUBCASE("observable validation") {
    json d = base_doc();
    d["experiment"]["observable"] = {{"sites", {0, 0}}, {"ops", "zz"}};
    CHECK_THROWS_AS(parse_config(d), config_error);  // duplicate site
    d["experiment"]["observable"] = {{"sites", {0, 1}}, {"ops", "z"}};
    CHECK_THROWS_AS(parse_config(d), config_error);  // length mismatch
    d["experiment"]["observable"] = {{"sites", {0}}, {"ops", "q"}};
    CHECK_THROWS_AS(parse_config(d), config_error);  // bad character
    d["experiment"]["observable"] = {{"sites", {9}}, {"ops", "z"}};
    CHECK_THROWS_AS(parse_config(d), config_error);  // off the lattice
  }
  SUBCASE("times must ascend from the start time") {
    json d = base_doc();
    d["experiment"]["t_values"] = {0.2};  // before r = 0.3
    CHECK_THROWS_AS(parse_config(d), config_error);
    d["experiment"]["t_values"] = {0.5, 0.5};
    CHECK_THROWS_AS(parse_config(d), config_error);
  }
}

TEST_CASE("model building from config") {
  SUBCASE("custom terms: supports, components, profiles, labels") {
    json m = {{"geometry", {{"kind", "chain"}, {"length", 3}}},
              {"terms",
               {{{"support", {0, 1}},
                 {"hamiltonian", {{"pauli", "zz"}, {"coeff", 0.5}}}},
                {{"support", {2}},
                 {"hamiltonian",
                  {{{"pauli", "x"}, {"coeff", 1.0}},
                   {{"pauli", "z"}, {"coeff", 0.25}}}},
                 {"lindblads", {{{"pauli", "z"}, {"coeff", 0.3}}}},
                 {"profile",
                  {{"kind", "quench"}, {"t_switch", 0.5}, {"before", 1.0}, {"after", 0.0}}},
                 {"label", "edge"}}}}};
    double kappa = -1;
    LiouvillianSpec spec = model_from_config(m, &kappa);
    CHECK(kappa == 0.0);  // chains carry no shell growth
    REQUIRE(spec.terms.size() == 2);
    CHECK(spec.terms[0].label == "term0");
    CHECK(spec.terms[1].label == "edge");
    CHECK(spec.terms[0].support == Region{0, 1});
    Matrix zz = 0.5 * kron(pauli('z'), pauli('z'));
    CHECK(inf_norm(Matrix(spec.terms[0].hamiltonian.mat - zz)) < 1e-15);
    Matrix xz = pauli('x') + 0.25 * pauli('z');
    CHECK(inf_norm(Matrix(spec.terms[1].hamiltonian.mat - xz)) < 1e-15);
    REQUIRE(spec.terms[1].lindblads.size() == 1);
    CHECK(inf_norm(Matrix(spec.terms[1].lindblads[0].mat - 0.3 * pauli('z'))) < 1e-15);
    CHECK(spec.terms[1].profile.value(0.2) == 1.0);
    CHECK(spec.terms[1].profile.value(0.7) == 0.0);
  }
  SUBCASE("grid geometries set the default growth exponent") {
    json m = {{"geometry", {{"kind", "grid2d"}, {"nx", 2}, {"ny", 2}}},
              {"terms", {{{"support", {0, 1}}, {"hamiltonian", {{"pauli", "zz"}}}}}}};
    double kappa = -1;
    model_from_config(m, &kappa);
    CHECK(kappa == 1.0);
    m["geometry"] = {{"kind", "grid3d"}, {"nx", 2}, {"ny", 2}, {"nz", 2}};
    model_from_config(m, &kappa);
    CHECK(kappa == 2.0);
  }
  SUBCASE("bad blocks are refused") {
    json good = {{"geometry", {{"kind", "chain"}, {"length", 3}}},
                 {"terms", {{{"support", {0, 1}}, {"hamiltonian", {{"pauli", "zz"}}}}}}};
    json m = good;
    m["terms"][0]["support"] = {0, 7};  // off the lattice
    CHECK_THROWS_AS(model_from_config(m, nullptr), config_error);
    m = good;
    m["terms"][0]["support"] = {0, 0};  // collapses to one site, "zz" too long
    CHECK_THROWS_AS(model_from_config(m, nullptr), config_error);
    m = good;
    m["terms"][0]["hamiltonian"]["pauli"] = "zq";
    CHECK_THROWS_AS(model_from_config(m, nullptr), config_error);
    m = good;
    m["terms"][0]["profile"] = {{"kind", "ramp"}};
    CHECK_THROWS_AS(model_from_config(m, nullptr), config_error);
    m = good;
    m["terms"] = json::array();
    CHECK_THROWS_AS(model_from_config(m, nullptr), config_error);
    m = {{"preset", "unknown_thing"}, {"sites", 4}};
    CHECK_THROWS_AS(model_from_config(m, nullptr), config_error);
    m = {{"preset", "dissipative_ising"}, {"sites", 1}};
    CHECK_THROWS_AS(model_from_config(m, nullptr), config_error);
  }
}

TEST_CASE("override assignments address dotted paths and array slots") {
  json d = json::object();
  apply_override(d, "a.b=3");
  CHECK(d["a"]["b"] == 3);
  apply_override(d, "a.c=hello");
  CHECK(d["a"]["c"] == "hello");  // unparseable values stay strings
  apply_override(d, "a.c=\"quoted\"");
  CHECK(d["a"]["c"] == "quoted");
  apply_override(d, "flag=true");
  CHECK(d["flag"] == true);
  d["xs"] = {1, 2, 3};
  apply_override(d, "xs.1=9");
  CHECK(d["xs"] == json({1, 9, 3}));
  d["terms"] = json::array({{{"coeff", 1.0}}});
  apply_override(d, "terms.0.coeff=2.5");
  CHECK(d["terms"][0]["coeff"] == 2.5);

  CHECK_THROWS_AS(apply_override(d, "=3"), config_error);
  CHECK_THROWS_AS(apply_override(d, "novalue"), config_error);
  CHECK_THROWS_AS(apply_override(d, "a..b=1"), config_error);
  CHECK_THROWS_AS(apply_override(d, "xs.7=1"), config_error);
  CHECK_THROWS_AS(apply_override(d, "xs.zz=1"), config_error);
  d["s"] = 3;
  CHECK_THROWS_AS(apply_override(d, "s.x=1"), config_error);
}

TEST_CASE("config hashing ignores the output destination only") {
  json d = {{"seed", 1}, {"version", 1}};
  // FNV-1a 64 of the compact dump {"seed":1,"version":1}
  CHECK(config_hash(d) == "0xc3b4ed37ac0c3ff8");

  json with_out = d;
  with_out["output"] = {{"dir", "elsewhere"}};
  CHECK(config_hash(with_out) == config_hash(d));

  json other = d;
  other["seed"] = 2;
  CHECK(config_hash(other) != config_hash(d));
}

TEST_CASE("json file loading") {
  namespace fs = std::filesystem;
  fs::path dir = fs::path("harness_test_out");
  fs::create_directories(dir);
  CHECK_THROWS_AS(load_json_file((dir / "missing.json").string()), config_error);
  std::ofstream((dir / "bad.json")) << "not json {";
  CHECK_THROWS_AS(load_json_file((dir / "bad.json").string()), config_error);
  std::ofstream((dir / "ok.json")) << "{\"version\": 1}";
  CHECK(load_json_file((dir / "ok.json").string())["version"] == 1);
}

TEST_CASE("csv output follows RFC 4180 quoting") {
  Table t;
  t.columns = {"a", "b,c", "d\"e"};
  t.add_row({"plain", "with,comma", "with\"quote"});
  t.add_row({"line\nbreak", "", "x"});
  CHECK(to_csv(t) ==
        "a,\"b,c\",\"d\"\"e\"\n"
        "plain,\"with,comma\",\"with\"\"quote\"\n"
        "\"line\nbreak\",,x\n");
  CHECK_THROWS_AS(t.add_row({"too", "short"}), std::logic_error);
}

TEST_CASE("number formatting is exact and round-trips") {
  CHECK(format_g17(1.0) == "1");
  CHECK(format_g17(0.25) == "0.25");
  CHECK(format_g17(0.1) == "0.10000000000000001");
  CHECK(format_g17(std::nan("")) == "nan");
  CHECK(format_g17(INFINITY) == "inf");
  CHECK(format_g17(-INFINITY) == "-inf");
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.6789, -0.875, 6.02214076e23}) {
    CHECK(std::stod(format_g17(v)) == v);
  }
}

TEST_CASE("a simulate run reports exact expectations at the start time") {
  ExperimentConfig cfg = parse_config(base_doc());
  RunOutput out = run_experiment(cfg);
  CHECK(out.csv_name == "simulate.csv");
  CHECK(out.table.columns ==
        std::vector<std::string>{"t", "expectation_re", "expectation_im", "solver_err"});
  REQUIRE(out.table.rows.size() == 2);
  // bits "010" big-endian over sites 0,1,2 -> basis index 2
  CHECK(out.summary["state_index"] == 2);
  // at t = r the observable is untouched: <b| Z_0 |b> = +1 for digit 0
  CHECK(std::stod(out.table.rows[0][0]) == 0.3);
  CHECK(out.table.rows[0][1] == "1");
  CHECK(out.table.rows[0][2] == "0");
  CHECK(out.summary["rows"] == 2);
  CHECK(out.summary["violations"] == 0);
  CHECK(out.summary["kind"] == "simulate");
  CHECK(out.summary["seed"] == 7);

  json down = base_doc();
  down["experiment"]["state"] = {{"kind", "all_down"}};
  RunOutput out2 = run_experiment(parse_config(down));
  CHECK(out2.summary["state_index"] == 7);  // |111>
  CHECK(out2.table.rows[0][1] == "-1");
}

TEST_CASE("a reduced selftest passes cleanly") {
  json d = {{"version", 1},
            {"seed", 21},
            {"experiment",
             {{"kind", "selftest"},
              {"x_max", 1.0},
              {"x_step", 0.5},
              {"n_max", 5},
              {"d_max", 6},
              {"kappas", {0.0, 1.0}},
              {"duality_cases", 3},
              {"cpt_cases", 2},
              {"path_n_max", 3}}}};
  RunOutput out = run_experiment(parse_config(d));
  CHECK(out.violations == 0);
  CHECK(out.csv_name == "selftest.csv");
  std::vector<std::string> families;
  for (const auto& row : out.table.rows) families.push_back(row[0]);
  CHECK(families == std::vector<std::string>{"exp_tail", "shell_tail",
                                             "shell_closed_form", "norm_duality",
                                             "cpt_norm", "path_zero", "path_cap"});
  for (const auto& row : out.table.rows) CHECK(row[2] == "0");  // violation column
}

TEST_CASE("outputs land on disk with a parseable summary") {
  namespace fs = std::filesystem;
  fs::path dir = fs::path("harness_test_out") / "simulate";
  fs::remove_all(dir);
  ExperimentConfig cfg = parse_config(base_doc());
  RunOutput out = run_experiment(cfg);
  std::vector<std::string> written = write_outputs(out, dir.string());
  REQUIRE(written.size() == 2);
  CHECK(fs::path(written[0]).filename() == "simulate.csv");
  CHECK(fs::path(written[1]).filename() == "summary.json");
  json summary = load_json_file(written[1]);
  CHECK(summary["files"] == json::array({"simulate.csv", "summary.json"}));
  CHECK(summary["config_hash"] == config_hash(cfg.raw));
  std::ifstream csv(written[0], std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(csv)),
                    std::istreambuf_iterator<char>());
  CHECK(bytes == to_csv(out.table));

  // identical run, identical bytes
  RunOutput again = run_experiment(parse_config(base_doc()));
  CHECK(to_csv(again.table) == to_csv(out.table));
  CHECK(again.summary.dump() == out.summary.dump());
}

TEST_CASE("sweeps fan out deterministically") {
  json d = base_doc();
  json inner = d["experiment"];
  inner["t_values"] = {0.4};
  d["experiment"] = {{"kind", "sweep"},
                     {"parameter", "model.params.gamma"},
                     {"values", {0.3, 0.6}},
                     {"inner", inner}};
  ExperimentConfig cfg = parse_config(d);
  RunOutput seq = run_experiment(cfg, 1);
  RunOutput par = run_experiment(cfg, 2);
  CHECK(to_csv(seq.table) == to_csv(par.table));
  CHECK(seq.summary.dump() == par.summary.dump());

  CHECK(seq.table.columns[0] == "sweep_index");
  CHECK(seq.table.columns[1] == "sweep_value");
  REQUIRE(seq.table.rows.size() == 2);
  CHECK(seq.table.rows[0][1] == "0.3");
  CHECK(seq.table.rows[1][1] == "0.6");

  // every point derives its own seed from the top-level one
  const std::uint64_t golden = 0x9e3779b97f4a7c15ull;
  REQUIRE(seq.summary["points"].size() == 2);
  CHECK(seq.summary["points"][0]["summary"]["seed"] ==
        (cfg.seed ^ (golden * 1)));
  CHECK(seq.summary["points"][1]["summary"]["seed"] ==
        (cfg.seed ^ (golden * 2)));

  // nested sweeps are refused
  json nested = d;
  nested["experiment"]["inner"] = d["experiment"];
  CHECK_THROWS_AS(parse_config(nested), config_error);
}
