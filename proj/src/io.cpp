#include "fnls/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace fnls {

namespace {

json parse_line(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument(std::string("missing ") + what + " line");
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed ") + what + " line: " + e.what());
  }
}

template <class T>
T get_key(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

json field_to_json(const SpectralField& u) {
  json re = json::array(), im = json::array();
  for (const cplx& c : u.coeffs()) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  return {{"alpha", u.alpha()}, {"n_max", u.n_max()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

SpectralField field_from_json(const json& j) {
  const auto alpha = get_key<double>(j, "alpha");
  const auto n = get_key<int>(j, "n_max");
  const auto re = get_key<std::vector<double>>(j, "re");
  const auto im = get_key<std::vector<double>>(j, "im");
  require(n >= 0, "n_max must be non-negative");
  const auto len = static_cast<std::size_t>(2 * n + 1);
  require(re.size() == len && im.size() == len,
          "re/im must have 2 n_max + 1 = " + std::to_string(len) + " entries");
  std::vector<cplx> c(len);
  for (std::size_t i = 0; i < len; ++i) c[i] = {re[i], im[i]};
  return SpectralField(alpha, n, std::move(c));
}

void write_ensemble(std::ostream& os, const GibbsEnsemble& ens) {
  const json header = {{"n", ens.n},
                       {"alpha", ens.alpha},
                       {"master_seed", ens.master_seed},
                       {"count", ens.samples.size()},
                       {"acceptance_rate", ens.acceptance_rate}};
  os << header.dump() << '\n';
  for (const auto& u : ens.samples) os << field_to_json(u).dump() << '\n';
}

GibbsEnsemble read_ensemble(std::istream& is) {
  const json header = parse_line(is, "ensemble header");
  GibbsEnsemble ens;
  ens.n = get_key<int>(header, "n");
  ens.alpha = get_key<double>(header, "alpha");
  ens.master_seed = get_key<std::uint64_t>(header, "master_seed");
  ens.acceptance_rate = get_key<double>(header, "acceptance_rate");
  const auto count = get_key<std::size_t>(header, "count");
  for (std::size_t i = 0; i < count; ++i) ens.samples.push_back(field_from_json(parse_line(is, "field")));
  if (ens.acceptance_rate > 0.0)
    ens.proposals_used = static_cast<std::uint64_t>(std::llround(count / ens.acceptance_rate));
  return ens;
}

void write_trajectory_jsonl(std::ostream& os, const Trajectory& traj, std::size_t stride) {
  traj.validate();
  require(stride >= 1, "stride must be positive");
  const Trajectory thin = subsample(traj, stride);
  const json header = {{"t0", thin.t0},
                       {"dt", thin.dt},
                       {"stride", stride},
                       {"variant", to_string(traj.variant)},
                       {"count", thin.size()}};
  os << header.dump() << '\n';
  for (const auto& u : thin.fields) os << field_to_json(u).dump() << '\n';
}

Trajectory read_trajectory_jsonl(std::istream& is) {
  const json header = parse_line(is, "trajectory header");
  Trajectory traj;
  traj.t0 = get_key<double>(header, "t0");
  traj.dt = get_key<double>(header, "dt");
  traj.variant = parse_variant(get_key<std::string>(header, "variant"));
  const auto count = get_key<std::size_t>(header, "count");
  for (std::size_t i = 0; i < count; ++i) traj.fields.push_back(field_from_json(parse_line(is, "field")));
  traj.validate();
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t stride) {
  traj.validate();
  const Trajectory thin = subsample(traj, stride);
  CsvTable table({"t", "k", "abs"});
  const int n = thin[0].n_max();
  for (std::size_t i = 0; i < thin.size(); ++i)
    for (int k = -n; k <= n; ++k) table.row() << thin.time(i) << k << std::abs(thin[i][k]);
  table.write(os);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  require(!header_.empty(), "CSV header must not be empty");
}

CsvTable::Row& CsvTable::Row::operator<<(const std::string& s) {
  cells_.push_back(csv_escape(s));
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(double x) {
  cells_.push_back(format_number(x));
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(long long x) {
  cells_.push_back(std::to_string(x));
  return *this;
}

CsvTable::Row CsvTable::row() {
  check_complete();
  rows_.emplace_back();
  rows_.back().reserve(header_.size());
  return Row(rows_.back());
}

void CsvTable::check_complete() const {
  if (!rows_.empty() && rows_.back().size() != header_.size())
    throw InvalidArgument("CSV row has " + std::to_string(rows_.back().size()) + " cells, expected " +
                          std::to_string(header_.size()));
}

void CsvTable::write(std::ostream& os) const {
  check_complete();
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  std::vector<std::string> head;
  for (const auto& h : header_) head.push_back(csv_escape(h));
  line(head);
  for (const auto& r : rows_) line(r);
}

void CsvTable::save(const std::filesystem::path& path) const {
  auto os = open_out(path);
  write(os);
}

void save_json(const std::filesystem::path& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

}  // namespace fnls
