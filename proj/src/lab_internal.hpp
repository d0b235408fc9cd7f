#pragma once

#include <set>
#include <sstream>
#include <string>

#include "fnls/lab.hpp"

namespace fnls::detail {

/// Reads keys out of an experiment block, recording the value actually used
/// (given or default) so reports carry the resolved configuration.
class Params {
 public:
  Params(const json& block, std::string where) : block_(block), where_(std::move(where)) {}

  template <class T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!block_.contains(key)) {
      resolved_[key] = fallback;
      return fallback;
    }
    try {
      T value = block_.at(key).get<T>();
      resolved_[key] = block_.at(key);
      return value;
    } catch (const json::exception&) {
      throw InvalidArgument("[" + where_ + "] key '" + key + "' has the wrong type");
    }
  }

  /// Throws on keys that no runner consumed (usually typos).
  void finish() const {
    for (const auto& [key, value] : block_.items())
      if (!used_.contains(key)) throw InvalidArgument("[" + where_ + "] unknown key '" + key + "'");
  }

  const json& resolved() const { return resolved_; }

 private:
  json block_;
  std::string where_;
  std::set<std::string> used_;
  json resolved_ = json::object();
};

inline std::string sci(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

/// Report with the resolved config filled in.
Report start_report(const ExperimentConfig& cfg, const Params& params);

inline void check(Report& r, std::string name, bool passed, std::string detail) {
  r.assertions.push_back({std::move(name), passed, std::move(detail)});
}

std::filesystem::path report_dir(const ExperimentConfig& cfg);

}  // namespace fnls::detail
