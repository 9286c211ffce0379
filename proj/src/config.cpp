#include "vortexsym/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace vortexsym {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& s) {
  try {
    size_t pos = 0;
    double x = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(x))
      throw ConfigError(key + ": not a finite number: '" + s + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a finite number: '" + s + "'");
  }
}

int parse_int(const std::string& key, const std::string& s) {
  try {
    size_t pos = 0;
    long x = std::stol(s, &pos);
    if (pos != s.size()) throw ConfigError(key + ": not an integer: '" + s + "'");
    return static_cast<int>(x);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + s + "'");
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  for (const std::string& item : split_list(s)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& s) {
  std::vector<int> out;
  for (const std::string& item : split_list(s)) out.push_back(parse_int(key, item));
  return out;
}

// Shortest representation that parses back to the same double.
std::string fmt(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, p);
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F f) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += f(xs[i]);
  }
  return out;
}

}  // namespace

void validate_config(const RunConfig& c) {
  if (!(c.profile_A > 0.0)) throw ConfigError("profile.A: must be > 0");
  if (!(c.grid_v_min < c.grid_v_max))
    throw ConfigError("grid.v_min: must be below grid.v_max");
  if (c.grid_n < 33) throw ConfigError("grid.n: must be >= 33");
  if (c.mode_k.empty()) throw ConfigError("mode.k: needs at least one mode");
  for (int k : c.mode_k)
    if (k < 1 || k > 8) throw ConfigError("mode.k: modes must lie in [1, 8]");
  if (c.data_shape != "basic" && c.data_shape != "sigma")
    throw ConfigError("data.shape: must be 'basic' or 'sigma'");
  if (!std::isfinite(c.data_sigma_k))
    throw ConfigError("data.sigma_k: must be finite");
  if (!(c.evolve_dt > 0.0)) throw ConfigError("evolve.dt: must be > 0");
  if (!(c.evolve_t_max > 0.0)) throw ConfigError("evolve.t_max: must be > 0");
  for (double t : c.evolve_snapshot_times)
    if (!(t >= 0.0) || t > c.evolve_t_max)
      throw ConfigError("evolve.snapshot_times: must lie in [0, evolve.t_max]");
  if (c.spectral_eps_ladder.size() < 3)
    throw ConfigError("spectral.eps_ladder: needs >= 3 entries");
  for (size_t i = 0; i < c.spectral_eps_ladder.size(); ++i) {
    double e = c.spectral_eps_ladder[i];
    if (!(e > 0.0)) throw ConfigError("spectral.eps_ladder: entries must be > 0");
    if (i > 0 && !(e < c.spectral_eps_ladder[i - 1]))
      throw ConfigError("spectral.eps_ladder: entries must be strictly decreasing");
  }
  if (c.spectral_w_stride < 1)
    throw ConfigError("spectral.w_stride: must be >= 1");
  if (!(c.fit_t_lo > 0.0)) throw ConfigError("fit.t_lo: must be > 0");
  if (!(c.fit_t_hi > c.fit_t_lo)) throw ConfigError("fit.t_hi: must exceed fit.t_lo");
  if (c.output_dir.empty()) throw ConfigError("output.dir: must be nonempty");
  if (c.runtime_workers < 0) throw ConfigError("runtime.workers: must be >= 0");
}

RunConfig load_config(std::istream& in) {
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "profile.A") c.profile_A = parse_double(key, val);
    else if (key == "grid.v_min") c.grid_v_min = parse_double(key, val);
    else if (key == "grid.v_max") c.grid_v_max = parse_double(key, val);
    else if (key == "grid.n") c.grid_n = parse_int(key, val);
    else if (key == "mode.k") c.mode_k = parse_int_list(key, val);
    else if (key == "data.shape") c.data_shape = val;
    else if (key == "data.sigma_k") c.data_sigma_k = parse_double(key, val);
    else if (key == "evolve.dt") c.evolve_dt = parse_double(key, val);
    else if (key == "evolve.t_max") c.evolve_t_max = parse_double(key, val);
    else if (key == "evolve.snapshot_times")
      c.evolve_snapshot_times = parse_double_list(key, val);
    else if (key == "spectral.eps_ladder")
      c.spectral_eps_ladder = parse_double_list(key, val);
    else if (key == "spectral.w_stride") c.spectral_w_stride = parse_int(key, val);
    else if (key == "fit.t_lo") c.fit_t_lo = parse_double(key, val);
    else if (key == "fit.t_hi") c.fit_t_hi = parse_double(key, val);
    else if (key == "output.dir") c.output_dir = val;
    else if (key == "runtime.workers") c.runtime_workers = parse_int(key, val);
    else throw ConfigError("unknown key: " + key);
  }
  validate_config(c);
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return load_config(in);
}

void save_config(std::ostream& out, const RunConfig& c) {
  out << "profile.A = " << fmt(c.profile_A) << "\n";
  out << "grid.v_min = " << fmt(c.grid_v_min) << "\n";
  out << "grid.v_max = " << fmt(c.grid_v_max) << "\n";
  out << "grid.n = " << c.grid_n << "\n";
  out << "mode.k = "
      << join(c.mode_k, [](int k) { return std::to_string(k); }) << "\n";
  out << "data.shape = " << c.data_shape << "\n";
  out << "data.sigma_k = " << fmt(c.data_sigma_k) << "\n";
  out << "evolve.dt = " << fmt(c.evolve_dt) << "\n";
  out << "evolve.t_max = " << fmt(c.evolve_t_max) << "\n";
  out << "evolve.snapshot_times = "
      << join(c.evolve_snapshot_times, fmt) << "\n";
  out << "spectral.eps_ladder = "
      << join(c.spectral_eps_ladder, fmt) << "\n";
  out << "spectral.w_stride = " << c.spectral_w_stride << "\n";
  out << "fit.t_lo = " << fmt(c.fit_t_lo) << "\n";
  out << "fit.t_hi = " << fmt(c.fit_t_hi) << "\n";
  out << "output.dir = " << c.output_dir << "\n";
  out << "runtime.workers = " << c.runtime_workers << "\n";
}

}  // namespace vortexsym
