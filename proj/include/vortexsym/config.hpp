#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace vortexsym {

// Raised on malformed files, unknown keys, or invalid values; the message
// names the offending key path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat dotted-key run configuration ("section.key = value", one per line,
// '#' comments, lists comma-separated).  Unknown keys are rejected; all
// values are validated on load.
struct RunConfig {
  double profile_A = 1.0;

  double grid_v_min = -9.0;
  double grid_v_max = 9.0;
  int grid_n = 4097;

  std::vector<int> mode_k = {1, 2};

  std::string data_shape = "basic";  // "basic" or "sigma"
  double data_sigma_k = 0.5;

  double evolve_dt = 0.01;
  double evolve_t_max = 50.0;
  std::vector<double> evolve_snapshot_times = {1.0, 5.0, 10.0};

  std::vector<double> spectral_eps_ladder = {2.8e-4, 1.4e-4, 7e-5};
  int spectral_w_stride = 4;

  double fit_t_lo = 20.0;
  double fit_t_hi = 200.0;

  std::string output_dir = "out";
  int runtime_workers = 0;  // 0 selects the hardware thread count
};

// Parses and validates; throws ConfigError naming the key path.
RunConfig load_config(std::istream& in);
RunConfig load_config_file(const std::string& path);

// Emits every key in a fixed order with round-trip-exact numeric formatting,
// so save(load(save(c))) is byte-identical to save(c).
void save_config(std::ostream& out, const RunConfig& cfg);

// Validation shared by load_config and programmatic construction.
void validate_config(const RunConfig& cfg);

}  // namespace vortexsym
