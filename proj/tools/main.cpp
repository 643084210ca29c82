#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qlocal/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* c = cmd->add_option("--config", args.config, "JSON run description");
  if (config_required) c->required();
  cmd->add_option("--out", args.out_dir, "output directory (wins over output.dir)");
  cmd->add_option_function<std::uint64_t>(
         "--seed", [&args](std::uint64_t v) { args.seed = v; args.seed_set = true; },
         "seed for every randomized estimate (wins over the document)");
  cmd->add_option("--jobs", args.jobs, "worker threads for sweep points")
      ->check(CLI::Range(1, 256));
  cmd->add_option("--override", args.overrides,
                  "key.path=value applied to the document (repeatable)")
      ->take_all();
}

int run(const std::string& kind, const CommonArgs& args) {
  nlohmann::json doc;
  if (!args.config.empty()) {
    doc = qlocal::load_json_file(args.config);
  } else {
    // selftest runs out of the box; everything else requires a document
    doc = nlohmann::json{{"version", 1}, {"experiment", {{"kind", kind}}}};
  }
  if (!doc.is_object())
    throw qlocal::config_error("config: top level must be a JSON object");
  for (const std::string& o : args.overrides) qlocal::apply_override(doc, o);
  if (args.seed_set) doc["seed"] = args.seed;
  if (!doc.contains("seed") && args.config.empty()) doc["seed"] = 1;
  if (!args.out_dir.empty()) doc["output"]["dir"] = args.out_dir;

  qlocal::ExperimentConfig cfg = qlocal::parse_config(std::move(doc), kind);
  qlocal::RunOutput out = qlocal::run_experiment(cfg, args.jobs);
  std::vector<std::string> written = qlocal::write_outputs(out, cfg.out_dir);

  std::cout << "kind=" << cfg.kind << " rows=" << out.table.rows.size()
            << " violations=" << out.violations << '\n';
  for (const std::string& p : written) std::cout << "wrote " << p << '\n';
  return out.violations > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"open-system lattice dynamics with certified locality envelopes"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    bool config_required;
  };
  const Sub subs[] = {
      {"simulate", "expectation values of an evolved observable", true},
      {"lr", "light-cone envelope vs. measured commutator growth", true},
      {"quasilocal", "truncated-evolution error vs. decay envelope", true},
      {"trotter", "local-channel circuit error vs. its envelope", true},
      {"selftest", "internal inequality and duality sweeps", false},
      {"sweep", "run an inner experiment over a parameter list", true},
  };

  CommonArgs args;
  std::string picked;
  for (const Sub& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, args, s.config_required);
    cmd->callback([&picked, name = std::string(s.name)] { picked = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);       // prints the message; 0 for --help
    return code == 0 ? 0 : 2;     // any usage problem exits 2
  }

  try {
    return run(picked, args);
  } catch (const qlocal::config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const qlocal::precondition_error& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 1;
  } catch (const qlocal::input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
