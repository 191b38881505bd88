#include "cutopt/cli_io/checkpoint.hpp"

#include "cutopt/cli_io/writers.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cutopt {

namespace {

constexpr const char* kMagic = "cutopt-checkpoint";
constexpr int kVersion = 1;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": malformed checkpoint: " + what);
}

// Reads "<key> <value>" and returns the value.
std::string field(std::istream& in, const std::string& key, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) bad(path, "missing '" + key + "'");
  if (line.rfind(key + " ", 0) != 0) bad(path, "expected '" + key + "', got '" + line + "'");
  return line.substr(key.size() + 1);
}

double to_double(const std::string& s, const std::string& path) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    bad(path, "not a number: '" + s + "'");
  }
  if (pos != s.size()) bad(path, "not a number: '" + s + "'");
  return v;
}

long to_long(const std::string& s, const std::string& path) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    bad(path, "not an integer: '" + s + "'");
  }
  if (pos != s.size() || v < 0) bad(path, "not a non-negative integer: '" + s + "'");
  return v;
}

HistoryRow parse_row(const std::string& line, const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 6) bad(path, "history row needs 6 columns: '" + line + "'");
  HistoryRow r;
  r.iter = static_cast<int>(to_long(parts[0], path));
  r.volume_target = to_double(parts[1], path);
  r.volume_actual = to_double(parts[2], path);
  r.compliance = to_double(parts[3], path);
  r.max_delta_rho = to_double(parts[4], path);
  r.eta = to_double(parts[5], path);
  return r;
}

}  // namespace

void write_checkpoint(const std::string& path, const ProblemConfig& config, const OptimizationState& state) {
  const std::string cfg = serialize_config(config);
  std::ostringstream os;
  os << kMagic << ' ' << kVersion << '\n';
  os << "config_hash " << config_hash(config) << '\n';
  os << "iteration " << state.iteration << '\n';
  os << "converged " << (state.converged ? 1 : 0) << '\n';
  os << "volume_target " << fmt(state.volume_target) << '\n';
  os << "change " << fmt(state.change) << '\n';
  os << "config_bytes " << cfg.size() << '\n' << cfg << '\n';
  os << "history " << state.history.size() << '\n';
  for (const auto& r : state.history) os << history_csv_row(r) << '\n';
  os << "rho " << state.rho.size() << '\n';
  for (Eigen::Index i = 0; i < state.rho.size(); ++i) os << fmt(state.rho[i]) << '\n';
  os << "end\n";
  // Write to a temporary name first so an interrupted dump never replaces
  // a good checkpoint.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out << os.str();
    out.flush();
    if (!out) throw IoError("error while writing '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw IoError("cannot rename '" + tmp + "' to '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) bad(path, "empty file");
  if (line != std::string(kMagic) + " " + std::to_string(kVersion)) bad(path, "unsupported header '" + line + "'");
  Checkpoint cp;
  cp.hash = field(in, "config_hash", path);
  cp.state.iteration = static_cast<int>(to_long(field(in, "iteration", path), path));
  cp.state.converged = to_long(field(in, "converged", path), path) != 0;
  cp.state.volume_target = to_double(field(in, "volume_target", path), path);
  cp.state.change = to_double(field(in, "change", path), path);
  const long bytes = to_long(field(in, "config_bytes", path), path);
  std::string cfg(static_cast<std::size_t>(bytes), '\0');
  in.read(cfg.data(), bytes);
  if (in.gcount() != bytes) bad(path, "truncated config");
  std::getline(in, line);
  cp.config = parse_config(cfg);
  if (config_hash(cp.config) != cp.hash) bad(path, "config hash does not match the embedded config");
  const long nh = to_long(field(in, "history", path), path);
  for (long k = 0; k < nh; ++k) {
    if (!std::getline(in, line)) bad(path, "truncated history");
    cp.state.history.push_back(parse_row(line, path));
  }
  const long nr = to_long(field(in, "rho", path), path);
  cp.state.rho.resize(nr);
  for (long k = 0; k < nr; ++k) {
    if (!std::getline(in, line)) bad(path, "truncated density vector");
    cp.state.rho[k] = to_double(line, path);
  }
  if (!std::getline(in, line) || line != "end") bad(path, "missing end marker");
  return cp;
}

void require_matching_config(const Checkpoint& cp, const ProblemConfig& config) {
  const std::string h = config_hash(config);
  if (h != cp.hash)
    throw ConfigError("checkpoint was written for config hash " + cp.hash + " but the current config hashes to " + h);
}

}  // namespace cutopt
