#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "lab_internal.hpp"
#include "toml.hpp"

namespace fnls {

namespace {

constexpr std::array<std::pair<Experiment, const char*>, 8> kNames{{
    {Experiment::Conserve, "conserve"},
    {Experiment::Invariance, "invariance"},
    {Experiment::Converge, "converge"},
    {Experiment::Picard, "picard"},
    {Experiment::Counting, "counting"},
    {Experiment::Strichartz, "strichartz"},
    {Experiment::Ansatz, "ansatz"},
    {Experiment::Threshold, "threshold"},
}};

json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = toml_to_json(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(toml_to_json(v));
    return out;
  }
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  if (const auto* v = node.as_string()) return v->get();
  throw InvalidArgument("unsupported TOML value (dates and times are not accepted)");
}

template <class T>
T top_level(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [x, name] : kNames)
    if (x == e) return name;
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& [x, n] : kNames)
    if (name == n) return x;
  throw InvalidArgument("unknown experiment '" + name + "'");
}

void ExperimentConfig::validate() const {
  require(alpha >= 1.0 && alpha <= 2.0, "alpha must lie in [1, 2]");
  require(n >= 1, "n must be at least 1");
  require(T >= 0.0 && std::isfinite(T), "T must be non-negative");
  require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
  require(n_samples >= 1, "n_samples must be at least 1");
  require(!name.empty(), "name must not be empty");
  require(params.is_object(), "experiment block must be a table");
}

json ExperimentConfig::to_json() const {
  return {{"experiment", to_string(experiment)},
          {"name", name},
          {"alpha", alpha},
          {"n", n},
          {"T", T},
          {"dt", dt},
          {"n_samples", n_samples},
          {"master_seed", master_seed},
          {"output_dir", output_dir.generic_string()},
          {to_string(experiment), params}};
}

ExperimentConfig parse_config(const std::string& toml_text, const std::string& default_name) {
  json doc;
  try {
    doc = toml_to_json(toml::parse(toml_text));
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML parse error: " << e.description() << " at line " << e.source().begin.line;
    throw InvalidArgument(os.str());
  }
  require(doc.contains("experiment"), "config must name an experiment");
  ExperimentConfig cfg;
  cfg.experiment = parse_experiment(top_level<std::string>(doc, "experiment", ""));
  const std::string block = to_string(cfg.experiment);
  require(doc.contains(block), "config is missing its [" + block + "] table");
  require(!(doc.contains("n") && doc.contains("N_max")), "give either n or N_max, not both");

  for (const auto& [key, value] : doc.items()) {
    static const std::set<std::string> known{"experiment", "name",      "alpha",       "n",         "N_max",
                                             "T",          "dt",        "n_samples",   "master_seed", "output_dir"};
    require(known.contains(key) || key == block, "unknown config key '" + key + "'");
  }
  cfg.name = top_level<std::string>(doc, "name", default_name);
  cfg.alpha = top_level<double>(doc, "alpha", cfg.alpha);
  cfg.n = top_level<int>(doc, doc.contains("N_max") ? "N_max" : "n", cfg.n);
  cfg.T = top_level<double>(doc, "T", cfg.T);
  cfg.dt = top_level<double>(doc, "dt", cfg.dt);
  const auto samples = top_level<long long>(doc, "n_samples", 1);
  require(samples >= 1, "n_samples must be at least 1");
  cfg.n_samples = static_cast<std::uint64_t>(samples);
  const auto seed = top_level<long long>(doc, "master_seed", 0);
  require(seed >= 0, "master_seed must be non-negative");
  cfg.master_seed = static_cast<std::uint64_t>(seed);
  cfg.output_dir = top_level<std::string>(doc, "output_dir", cfg.output_dir.string());
  cfg.params = doc.at(block);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot read config " + path.string());
  std::ostringstream text;
  text << is.rdbuf();
  try {
    return parse_config(text.str(), path.stem().string());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& o) {
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.n_max) cfg.n = *o.n_max;
  if (o.T) cfg.T = *o.T;
  if (o.dt) cfg.dt = *o.dt;
  if (o.samples) cfg.n_samples = *o.samples;
  if (o.out) cfg.output_dir = *o.out;
  cfg.validate();
}

bool Report::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

json Report::to_json() const {
  json checks = json::array();
  for (const auto& a : assertions) checks.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  return {{"experiment", config.value("experiment", "")},
          {"master_seed", config.value("master_seed", std::uint64_t{0})},
          {"passed", passed()},
          {"assertions", std::move(checks)},
          {"config", config},
          {"results", results}};
}

namespace detail {

Report start_report(const ExperimentConfig& cfg, const Params& params) {
  ExperimentConfig resolved = cfg;
  resolved.params = params.resolved();
  Report r;
  r.config = resolved.to_json();
  return r;
}

std::filesystem::path report_dir(const ExperimentConfig& cfg) { return cfg.output_dir / cfg.name; }

}  // namespace detail

Report run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Report r;
  switch (cfg.experiment) {
    case Experiment::Conserve: r = run_conserve(cfg); break;
    case Experiment::Invariance: r = run_invariance(cfg); break;
    case Experiment::Converge: r = run_converge(cfg); break;
    case Experiment::Picard: r = run_picard(cfg); break;
    case Experiment::Counting: r = run_counting(cfg); break;
    case Experiment::Strichartz: r = run_strichartz(cfg); break;
    case Experiment::Ansatz: r = run_ansatz(cfg); break;
    case Experiment::Threshold: r = run_threshold(cfg); break;
  }
  save_json(detail::report_dir(cfg) / "report.json", r.to_json());
  return r;
}

int run_all(const std::filesystem::path& cfg_dir, const ConfigOverrides& overrides, std::ostream& log) {
  require(std::filesystem::is_directory(cfg_dir), "not a directory: " + cfg_dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(cfg_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".toml") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  // Load everything first so a bad file fails before any long run starts.
  std::vector<ExperimentConfig> configs;
  std::map<std::string, std::filesystem::path> seen;
  for (const auto& f : files) {
    ExperimentConfig cfg = load_config(f);
    apply_overrides(cfg, overrides);
    const auto key = detail::report_dir(cfg).lexically_normal().generic_string();
    if (const auto it = seen.find(key); it != seen.end())
      throw InvalidArgument("configs " + it->second.string() + " and " + f.string() + " write to the same directory " +
                            key);
    seen[key] = f;
    configs.push_back(std::move(cfg));
  }

  int failures = 0;
  for (const auto& cfg : configs) {
    const std::string label = cfg.name + " (" + to_string(cfg.experiment) + ")";
    try {
      const Report r = run_experiment(cfg);
      log << (r.passed() ? "PASS " : "FAIL ") << label << '\n';
      for (const auto& a : r.assertions)
        log << "  [" << (a.passed ? "ok" : "FAILED") << "] " << a.name << ": " << a.detail << '\n';
      if (!r.passed()) ++failures;
    } catch (const std::exception& e) {
      log << "ERROR " << label << ": " << e.what() << '\n';
      ++failures;
    }
  }
  log << configs.size() << " experiment(s), " << failures << " failed\n";
  return failures;
}

}  // namespace fnls
