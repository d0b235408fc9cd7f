#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fnls/io.hpp"

namespace fnls {

enum class Experiment { Conserve, Invariance, Converge, Picard, Counting, Strichartz, Ansatz, Threshold };

std::string to_string(Experiment e);
/// Throws InvalidArgument for an unknown name.
Experiment parse_experiment(const std::string& name);

/// One experiment run. Top-level fields are shared by every experiment; the
/// table named after the experiment carries its own parameters.
struct ExperimentConfig {
  Experiment experiment = Experiment::Conserve;
  /// Report subdirectory; defaults to the config file stem.
  std::string name = "experiment";
  double alpha = 1.5;
  /// Truncation n (or N_max for the multi-scale experiments).
  int n = 16;
  double T = 1.0;
  double dt = 1e-3;
  std::uint64_t n_samples = 1;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir = "fnls-out";
  /// Experiment-specific block as given in the file.
  json params = json::object();

  void validate() const;
  json to_json() const;
};

/// Command-line values that take precedence over the file.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<int> n_max;
  std::optional<double> T;
  std::optional<double> dt;
  std::optional<std::uint64_t> samples;
  std::optional<std::filesystem::path> out;
};

ExperimentConfig parse_config(const std::string& toml_text, const std::string& default_name);
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& o);

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Report {
  /// Resolved config, including every defaulted parameter.
  json config;
  std::vector<Assertion> assertions;
  json results = json::object();

  bool passed() const;
  json to_json() const;
};

Report run_conserve(const ExperimentConfig& cfg);
Report run_invariance(const ExperimentConfig& cfg);
Report run_converge(const ExperimentConfig& cfg);
Report run_picard(const ExperimentConfig& cfg);
Report run_counting(const ExperimentConfig& cfg);
Report run_strichartz(const ExperimentConfig& cfg);
Report run_ansatz(const ExperimentConfig& cfg);
Report run_threshold(const ExperimentConfig& cfg);

/// d_n = sup_t ||u_{2n}(t) - u_n(t)||_{H^sigma0} for consecutive n in `ns`
/// (which must double), where u_n solves the cubic equation at the common
/// cutoff with data Pi_n phi. The sup runs over every `stride`-th step.
std::vector<double> cauchy_distances(const SpectralField& phi, const std::vector<int>& ns, int cutoff, double T,
                                     double dt, double sigma0, std::size_t stride = 1);

/// Dispatches on cfg.experiment, writes report.json and the tables under
/// output_dir/name and returns the report.
Report run_experiment(const ExperimentConfig& cfg);

/// Runs every *.toml in cfg_dir (sorted by name) and returns the number of
/// experiments with a failing assertion or an error. Summary lines go to log.
int run_all(const std::filesystem::path& cfg_dir, const ConfigOverrides& overrides, std::ostream& log);

}  // namespace fnls
