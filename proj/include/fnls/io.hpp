#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fnls/dynamics.hpp"
#include "fnls/random_data.hpp"
#include "json.hpp"

namespace fnls {

using json = nlohmann::ordered_json;

/// {alpha, n_max, re[], im[]} with k ascending from -n_max.
json field_to_json(const SpectralField& u);
/// Throws InvalidArgument on missing keys or mismatched array lengths.
SpectralField field_from_json(const json& j);

/// Header line {n, alpha, master_seed, count, acceptance_rate}, then one field per line.
void write_ensemble(std::ostream& os, const GibbsEnsemble& ens);
GibbsEnsemble read_ensemble(std::istream& is);

/// Header line {t0, dt, stride, variant, count}, then one field per line.
void write_trajectory_jsonl(std::ostream& os, const Trajectory& traj, std::size_t stride = 1);
Trajectory read_trajectory_jsonl(std::istream& is);
/// Columns t, k, abs: per-mode magnitudes, one row per (sample, mode).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t stride = 1);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

/// Minimal CSV table with a fixed header. Cells containing commas or quotes
/// are quoted.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  class Row {
   public:
    Row& operator<<(const std::string& s);
    Row& operator<<(const char* s) { return *this << std::string(s); }
    Row& operator<<(double x);
    Row& operator<<(long long x);
    Row& operator<<(int x) { return *this << static_cast<long long>(x); }
    Row& operator<<(std::size_t x) { return *this << static_cast<long long>(x); }

   private:
    friend class CsvTable;
    explicit Row(std::vector<std::string>& cells) : cells_(cells) {}
    std::vector<std::string>& cells_;
  };

  /// Starts a new row; throws on write if the previous row is short.
  Row row();
  std::size_t rows() const { return rows_.size(); }
  void write(std::ostream& os) const;
  void save(const std::filesystem::path& path) const;

 private:
  void check_complete() const;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void save_json(const std::filesystem::path& path, const json& j);

}  // namespace fnls
