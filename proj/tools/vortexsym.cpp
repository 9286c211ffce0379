// Command-line front end: configuration loading, pipeline dispatch, and
// CSV/gnuplot artifact emission.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "vortexsym/acceptance.hpp"
#include "vortexsym/analysis.hpp"
#include "vortexsym/config.hpp"
#include "vortexsym/elliptic.hpp"
#include "vortexsym/evolution.hpp"
#include "vortexsym/grid.hpp"
#include "vortexsym/profile.hpp"
#include "vortexsym/spectral.hpp"

using namespace vortexsym;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Context {
  RunConfig cfg;
  VortexProfile profile;
  RadialGrid grid;
  int workers = 1;

  explicit Context(const RunConfig& c)
      : cfg(c),
        profile(make_canonical_profile(c.profile_A)),
        grid(make_grid(c.grid_v_min, c.grid_v_max, c.grid_n)) {
    workers = c.runtime_workers > 0
                  ? c.runtime_workers
                  : std::max(1u, std::thread::hardware_concurrency());
  }

  std::string path(const std::string& name) const {
    return (std::filesystem::path(cfg.output_dir) / name).string();
  }

  std::ofstream open(const std::string& name) const {
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream os(path(name));
    if (!os) throw std::runtime_error("cannot write " + path(name));
    return os;
  }

  SpectralDensityTable table(int k) const {
    return spectral_density(k, make_initial_data(k, DataShape::basic, grid, profile),
                            profile, grid, cfg.spectral_eps_ladder,
                            cfg.spectral_w_stride, workers);
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string tag(double t) {
  std::string s = num(t);
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i)
    t[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return t;
}

int cmd_profile_check(const Context& ctx) {
  {
    std::ofstream os = ctx.open("profile.csv");
    write_profile_csv(os, ctx.profile, ctx.grid);
  }
  AssumptionReport rep = verify_assumptions(ctx.profile, ctx.grid, 2);
  for (const auto& c : rep.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
              << " (fitted constant " << num(c.fitted_constant) << ")\n";
  std::cout << (rep.all_pass() ? "profile assumptions hold"
                               : "profile assumptions violated")
            << "\n";
  return rep.all_pass() ? kExitPass : kExitFail;
}

int cmd_evolve(const Context& ctx) {
  for (int k : ctx.cfg.mode_k) {
    ModeEvolver ev(k, ctx.profile, ctx.grid);
    InitialData data =
        ctx.cfg.data_shape == "sigma"
            ? make_initial_data(k, DataShape::sigma, ctx.grid, ctx.profile,
                                ctx.cfg.data_sigma_k)
            : make_initial_data(k, DataShape::basic, ctx.grid, ctx.profile);
    ModeState st = ev.initial_state(data);
    std::vector<double> stops = ctx.cfg.evolve_snapshot_times;
    std::sort(stops.begin(), stops.end());
    std::ofstream es = ctx.open("energy_k" + std::to_string(k) + ".csv");
    es << "t,energy\n" << num(st.t) << "," << num(ev.energy(st)) << "\n";
    for (double t : stops) {
      ev.advance(st, t, ctx.cfg.evolve_dt);
      es << num(st.t) << "," << num(ev.energy(st)) << "\n";
      std::vector<cplx> psi = ev.stream(st);
      std::ofstream os =
          ctx.open("state_k" + std::to_string(k) + "_t" + tag(t) + ".csv");
      os << "v,r,re_omega,im_omega,re_psi,im_psi\n";
      for (int i = 0; i < ctx.grid.n; ++i)
        os << num(ctx.grid.v[i]) << "," << num(ctx.grid.r[i]) << ","
           << num(st.omega[i].real()) << "," << num(st.omega[i].imag()) << ","
           << num(psi[i].real()) << "," << num(psi[i].imag()) << "\n";
    }
    if (ctx.cfg.evolve_t_max > (stops.empty() ? 0.0 : stops.back())) {
      ev.advance(st, ctx.cfg.evolve_t_max, ctx.cfg.evolve_dt);
      es << num(st.t) << "," << num(ev.energy(st)) << "\n";
    }
    std::cout << "k=" << k << ": evolved to t=" << num(st.t) << ", artifacts in "
              << ctx.cfg.output_dir << "\n";
  }
  return kExitPass;
}

int cmd_spectral_density(const Context& ctx) {
  for (int k : ctx.cfg.mode_k) {
    SpectralDensityTable tab = ctx.table(k);
    std::string base = "density_k" + std::to_string(k);
    {
      std::ofstream os = ctx.open(base + ".csv");
      write_density_csv(os, tab, ctx.grid);
    }
    {
      std::ofstream os = ctx.open(base + ".meta");
      write_density_meta(os, tab);
    }
    {
      // Matrix layout: rows follow v, columns follow w; first row/column
      // carry the coordinates.
      std::ofstream os = ctx.open(base + "_matrix.csv");
      os << "v_by_w";
      for (int j = 0; j < tab.cols(); ++j) os << "," << num(tab.w[j]);
      os << "\n";
      for (int i = 0; i < ctx.grid.n; ++i) {
        os << num(ctx.grid.v[i]);
        for (int j = 0; j < tab.cols(); ++j) os << "," << num(tab.gamma[j][i]);
        os << "\n";
      }
    }
    {
      std::ofstream os = ctx.open(base + ".plt");
      os << "# gnuplot: heatmap of the spectral density table\n"
         << "set datafile separator ','\n"
         << "set view map\n"
         << "set xlabel 'w'\nset ylabel 'v'\n"
         << "splot '" << base << ".csv' every ::1 using 1:2:3 with points "
         << "pt 5 ps 0.4 palette notitle\n";
    }
    int flagged = 0;
    for (char f : tab.col_flagged) flagged += f;
    std::cout << "k=" << k << ": " << tab.cols() << " columns, " << flagged
              << " flagged, artifacts in " << ctx.cfg.output_dir << "\n";
  }
  return kExitPass;
}

int cmd_represent(const Context& ctx) {
  for (int k : ctx.cfg.mode_k) {
    SpectralDensityTable tab = ctx.table(k);
    for (double t : ctx.cfg.evolve_snapshot_times) {
      std::vector<cplx> phi = stream_via_spectral(t, tab, ctx.profile, ctx.grid);
      std::vector<cplx> f = vorticity_via_spectral(t, tab, ctx.profile, ctx.grid);
      std::ofstream os = ctx.open("represent_k" + std::to_string(k) + "_t" +
                                  tag(t) + ".csv");
      os << "v,r,re_phi,im_phi,re_f,im_f\n";
      for (int i = 0; i < ctx.grid.n; ++i)
        os << num(ctx.grid.v[i]) << "," << num(ctx.grid.r[i]) << ","
           << num(phi[i].real()) << "," << num(phi[i].imag()) << ","
           << num(f[i].real()) << "," << num(f[i].imag()) << "\n";
    }
    std::cout << "k=" << k << ": representation snapshots written\n";
  }
  return kExitPass;
}

int cmd_split(const Context& ctx) {
  for (int k : ctx.cfg.mode_k) {
    SpectralDensityTable tab = ctx.table(k);
    for (double t : ctx.cfg.evolve_snapshot_times) {
      if (t <= 0.0) continue;
      SplitResult sp = local_nonlocal_split(t, tab, ctx.profile, ctx.grid);
      std::string base = "split_k" + std::to_string(k) + "_t" + tag(t);
      std::ofstream os = ctx.open(base + ".csv");
      os << "v,abs_f_loc,abs_f_nloc,re_f_loc,im_f_loc,re_f_nloc,im_f_nloc,"
            "window_clipped\n";
      for (size_t m = 0; m < sp.rows.size(); ++m) {
        int i = sp.rows[m];
        os << num(ctx.grid.v[i]) << "," << num(std::abs(sp.f_loc[m])) << ","
           << num(std::abs(sp.f_nloc[m])) << "," << num(sp.f_loc[m].real())
           << "," << num(sp.f_loc[m].imag()) << "," << num(sp.f_nloc[m].real())
           << "," << num(sp.f_nloc[m].imag()) << ","
           << int(sp.window_clipped[m]) << "\n";
      }
      std::ofstream plt = ctx.open(base + ".plt");
      plt << "# gnuplot: near-origin vanishing order of the local part\n"
          << "set datafile separator ','\n"
          << "set logscale y\n"
          << "set xlabel 'v = log r'\nset ylabel '|f_loc|'\n"
          << "plot '" << base << ".csv' every ::1 using 1:2 with lines "
          << "title 'local part', '' every ::1 using 1:3 with lines "
          << "title 'nonlocal part'\n";
    }
    std::cout << "k=" << k << ": split artifacts written\n";
  }
  return kExitPass;
}

int cmd_observable(const Context& ctx) {
  std::vector<double> times = log_spaced(ctx.cfg.fit_t_lo, ctx.cfg.fit_t_hi, 24);
  for (int k : ctx.cfg.mode_k) {
    SpectralDensityTable tab = ctx.table(k);
    std::vector<cplx> I = observable_decay_spectral(tab, ctx.profile, ctx.grid, times);
    std::string base = "observable_k" + std::to_string(k);
    std::ofstream os = ctx.open(base + ".csv");
    os << "t,abs_I,re_I,im_I\n";
    for (size_t i = 0; i < times.size(); ++i)
      os << num(times[i]) << "," << num(std::abs(I[i])) << ","
         << num(I[i].real()) << "," << num(I[i].imag()) << "\n";
    std::ofstream plt = ctx.open(base + ".plt");
    plt << "# gnuplot: weighted-average decay, log-log\n"
        << "set datafile separator ','\n"
        << "set logscale xy\n"
        << "set xlabel 't'\nset ylabel '|I(t)|'\n"
        << "plot '" << base << ".csv' every ::1 using 1:2 with linespoints "
        << "title 'k=" << k << "', " << num(std::abs(I[0]) * std::pow(times[0],
               expected_exponent(k)))
        << "*x**(-" << num(expected_exponent(k)) << ") title 'reference slope'\n";
    std::cout << "k=" << k << ": observable series written\n";
  }
  return kExitPass;
}

int cmd_fit(const Context& ctx) {
  std::vector<double> times = log_spaced(ctx.cfg.fit_t_lo, ctx.cfg.fit_t_hi, 16);
  std::ofstream os = ctx.open("results.csv");
  write_fit_csv_header(os);
  bool all_ok = true;
  for (int k : ctx.cfg.mode_k) {
    SpectralDensityTable tab = ctx.table(k);
    DecayFit fit =
        fit_decay(times, observable_decay_spectral(tab, ctx.profile, ctx.grid, times));
    double expect = expected_exponent(k);
    bool ok = std::abs(fit.exponent - expect) <= 0.2 + 0.1 * k;
    append_fit_csv(os, k, "spectral", fit, expect, ok);
    std::cout << "k=" << k << ": exponent " << num(fit.exponent) << " expected "
              << num(expect) << (ok ? " (pass)" : " (fail)") << "\n";
    all_ok = all_ok && ok;
  }
  return all_ok ? kExitPass : kExitFail;
}

int cmd_verify_all(const Context& ctx) {
  AcceptanceReport rep = run_acceptance(std::cerr, ctx.cfg);
  print_report(std::cout, rep);
  {
    std::ofstream os = ctx.open("verify_all.txt");
    print_report(os, rep);
  }
  return rep.all_pass() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vortexsym: linearized vortex dynamics verification suite"};
  app.require_subcommand(1);
  std::string config_path, out_override;
  app.add_option("--config", config_path, "path to key=value config file");
  app.add_option("--out", out_override, "output directory (overrides output.dir)");

  const std::vector<std::pair<std::string, int (*)(const Context&)>> commands = {
      {"profile-check", cmd_profile_check}, {"evolve", cmd_evolve},
      {"spectral-density", cmd_spectral_density}, {"represent", cmd_represent},
      {"split", cmd_split}, {"observable", cmd_observable},
      {"fit", cmd_fit}, {"verify-all", cmd_verify_all}};
  // fallthrough lets --config/--out appear after the subcommand name.
  for (const auto& [name, fn] : commands) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config_file(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    validate_config(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    Context ctx(cfg);
    for (const auto& [name, fn] : commands)
      if (app.get_subcommand(name)->parsed()) return fn(ctx);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitConfig;
}
