// fnls-lab: runs one experiment from a TOML config, or every config in a directory.
#include <iostream>

#include "CLI11.hpp"
#include "fnls/lab.hpp"

namespace {

void add_overrides(CLI::App& app, fnls::ConfigOverrides& o) {
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--alpha", o.alpha, "dispersion exponent");
  app.add_option("--n-max", o.n_max, "truncation n or N_max");
  app.add_option("--T", o.T, "final time");
  app.add_option("--dt", o.dt, "time step");
  app.add_option("--samples", o.samples, "ensemble size");
  app.add_option("--out", o.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for the fractional cubic NLS on the torus"};
  app.require_subcommand(1);
  fnls::ConfigOverrides overrides;
  std::string config, config_dir;

  for (const char* name :
       {"conserve", "invariance", "converge", "picard", "counting", "strichartz", "ansatz", "threshold"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config, "TOML config")->required()->check(CLI::ExistingFile);
    add_overrides(*sub, overrides);
  }
  auto* all = app.add_subcommand("all", "run every *.toml in a directory");
  all->add_option("--config-dir", config_dir, "directory of TOML configs")->required()->check(CLI::ExistingDirectory);
  add_overrides(*all, overrides);

  CLI11_PARSE(app, argc, argv);

  try {
    if (all->parsed()) return fnls::run_all(config_dir, overrides, std::cout) == 0 ? 0 : 1;
    const std::string requested = app.get_subcommands().front()->get_name();
    fnls::ExperimentConfig cfg = fnls::load_config(config);
    if (fnls::to_string(cfg.experiment) != requested) {
      std::cerr << "error: " << config << " configures '" << fnls::to_string(cfg.experiment) << "', not '"
                << requested << "'\n";
      return 2;
    }
    fnls::apply_overrides(cfg, overrides);
    const fnls::Report r = fnls::run_experiment(cfg);
    for (const auto& a : r.assertions)
      std::cout << (a.passed ? "[ok]     " : "[FAILED] ") << a.name << ": " << a.detail << '\n';
    std::cout << (r.passed() ? "PASS" : "FAIL") << " -> " << (cfg.output_dir / cfg.name).generic_string() << '\n';
    return r.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
