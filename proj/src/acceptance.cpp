#include "vortexsym/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <ostream>
#include <sstream>

#include "vortexsym/analysis.hpp"
#include "vortexsym/elliptic.hpp"
#include "vortexsym/evolution.hpp"
#include "vortexsym/grid.hpp"
#include "vortexsym/profile.hpp"
#include "vortexsym/spectral.hpp"

namespace vortexsym {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

// OLS slope of y against x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i)
    t[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return t;
}

struct Lcg {
  unsigned long long s = 0x9e3779b97f4a7c15ull;
  double next() {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return double(s >> 11) / 9007199254740992.0;
  }
};

// Fixtures shared across criteria; built on first use.
struct Suite {
  const RunConfig& cfg;
  std::ostream& log;
  VortexProfile profile = make_canonical_profile(1.0);
  RadialGrid grid_mid = make_grid(-9.0, 9.0, 2049);

  // Stride-1 mid-resolution tables with a four-step eps ladder: the split,
  // vanishing-order, and differential-identity checks need every w-column
  // and the extra extrapolation accuracy.
  SpectralDensityTable dense[2];  // k = 1, 2
  bool dense_built[2] = {false, false};

  const SpectralDensityTable& dense_table(int k) {
    std::vector<double> ladder = cfg.spectral_eps_ladder;
    ladder.push_back(ladder.back() / 2.0);
    if (!dense_built[k - 1]) {
      dense[k - 1] = spectral_density(
          k, make_initial_data(k, DataShape::basic, grid_mid, profile), profile,
          grid_mid, ladder, 1, cfg.runtime_workers > 0 ? cfg.runtime_workers : 1,
          16);
      dense_built[k - 1] = true;
    }
    return dense[k - 1];
  }

  std::vector<cplx> evolved(int k, double t, double dt = 0.01) {
    ModeEvolver ev(k, profile, grid_mid);
    ModeState s =
        ev.initial_state(make_initial_data(k, DataShape::basic, grid_mid, profile));
    ev.advance(s, t, dt);
    return s.omega;
  }
};

using Criterion = std::function<bool(Suite&, std::string&)>;

// --- 1: second-order convergence of both stream solvers ---------------------

bool crit_elliptic(Suite& s, std::string& detail) {
  bool ok = true;
  std::ostringstream d;
  for (int k : {1, 2, 3}) {
    double err[2][2];  // method x resolution
    for (int lev = 0; lev < 2; ++lev) {
      RadialGrid g = make_grid(-7.0, 4.0, lev == 0 ? 513 : 1025);
      std::vector<cplx> omega(g.n), exact(g.n);
      for (int i = 0; i < g.n; ++i) {
        double r = g.r[i], e = std::exp(-r * r), rk = std::pow(r, k);
        exact[i] = rk * e;
        omega[i] = 4.0 * (r * r - k - 1.0) * rk * e;
      }
      std::vector<cplx> via[2] = {stream_via_green(omega, k, g),
                                  stream_via_tridiag(omega, k, g)};
      for (int m = 0; m < 2; ++m) {
        double worst = 0.0;
        for (int i = 0; i < g.n; ++i)
          worst = std::max(worst, std::abs(via[m][i] - exact[i]));
        err[m][lev] = worst;
      }
    }
    for (int m = 0; m < 2; ++m) {
      double ratio = err[m][0] / err[m][1];
      d << " k=" << k << (m == 0 ? " green " : " tridiag ") << fmt(ratio);
      if (ratio < 3.5 || ratio > 4.5) ok = false;
    }
  }
  detail = "halving-error ratios:" + d.str() + " (need [3.5,4.5])";
  return ok;
}

// --- 2: conservation of the quadratic energy --------------------------------

bool crit_energy(Suite& s, std::string& detail) {
  RadialGrid g = make_grid(-9.0, 9.0, 4097);
  bool ok = true;
  std::ostringstream d;
  for (int k : {1, 2, 3}) {
    ModeEvolver ev(k, s.profile, g);
    ModeState st =
        ev.initial_state(make_initial_data(k, DataShape::basic, g, s.profile));
    double e0 = ev.energy(st), drift = 0.0;
    for (int chunk = 0; chunk < 10; ++chunk) {
      ev.advance(st, 5.0 * (chunk + 1), 0.1);
      drift = std::max(drift, std::abs(ev.energy(st) - e0) / e0);
    }
    d << " k=" << k << " " << fmt(drift);
    if (drift > 1e-6) ok = false;
  }
  detail = "max relative energy drift over [0,50]:" + d.str() + " (need <= 1e-6)";
  return ok;
}

// --- 3: k=1 table against the closed-form density ---------------------------

bool crit_k1_oracle(Suite& s, std::string& detail) {
  double t_start = now_seconds();
  RadialGrid g = make_grid(-9.0, 9.0, 4097);
  InitialData d1 = make_initial_data(1, DataShape::basic, g, s.profile);
  // Two rungs below the configured ladder plus doubled sub-grid refinement:
  // the columns where the density changes sign (norm two orders below the
  // global scale) are otherwise limited by the eps extrapolation residue,
  // and a five-rung ladder lets the extrapolation carry a quadratic term.
  std::vector<double> ladder = s.cfg.spectral_eps_ladder;
  ladder.push_back(ladder.back() / 2.0);
  ladder.push_back(ladder.back() / 2.0);
  SpectralDensityTable tab =
      spectral_density(1, d1, s.profile, g, ladder, 8,
                       s.cfg.runtime_workers > 0 ? s.cfg.runtime_workers : 1, 16);
  K1ExplicitDensity oracle(d1, s.profile, g);
  // Column L2 comparison over the full v-range, which includes the
  // zero-support half v > w.  Columns below 1e-4 of the largest norm are
  // held to that floor: their own norm is dominated by cross-column leakage.
  double max_nrm = 0.0;
  std::vector<double> err(tab.cols()), nrm(tab.cols());
  for (int j = 0; j < tab.cols(); ++j) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.n; ++i) {
      double ex = oracle(g.v[i], tab.w[j]);
      num += std::pow(tab.gamma[j][i] - ex, 2);
      den += ex * ex;
    }
    err[j] = std::sqrt(num);
    nrm[j] = std::sqrt(den);
    max_nrm = std::max(max_nrm, nrm[j]);
  }
  double worst = 0.0;
  for (int j = 0; j < tab.cols(); ++j)
    worst = std::max(worst, err[j] / std::max(nrm[j], 1e-4 * max_nrm));
  double elapsed = now_seconds() - t_start;
  detail = "worst column error " + fmt(worst) + " of column scale (need <= 1e-3), " +
           fmt(elapsed) + " s (need < 120)";
  return worst <= 1e-3 && elapsed < 120.0;
}

// --- 4: stream function, time-domain vs spectral representation -------------

bool crit_routes(Suite& s, std::string& detail) {
  bool ok = true;
  std::ostringstream d;
  for (int k : {1, 2}) {
    const SpectralDensityTable& tab = s.dense_table(k);
    ModeEvolver ev(k, s.profile, s.grid_mid);
    ModeState st = ev.initial_state(
        make_initial_data(k, DataShape::basic, s.grid_mid, s.profile));
    for (double t : {1.0, 5.0, 10.0}) {
      ev.advance(st, t, 0.01);
      std::vector<cplx> direct = ev.stream(st);
      std::vector<cplx> rep = stream_via_spectral(t, tab, s.profile, s.grid_mid);
      double num = 0.0, den = 0.0;
      for (int i = 0; i < s.grid_mid.n; ++i) {
        num = std::max(num, std::abs(rep[i] - direct[i]));
        den = std::max(den, std::abs(direct[i]));
      }
      d << " k=" << k << ",t=" << t << ": " << fmt(num / den);
      if (num / den > 1e-3) ok = false;
    }
  }
  detail = "relative stream mismatch:" + d.str() + " (need <= 1e-3)";
  return ok;
}

// --- 5: observable decay exponents ------------------------------------------

// k=1 evaluated through the closed-form density (assembled into a table so
// the same oscillatory-integral code runs); k=2,3 through extrapolated
// tables.  The time-domain k=1 fit is recorded for reference, not asserted.
bool crit_observable(Suite& s, std::string& detail) {
  std::vector<double> times = log_spaced(s.cfg.fit_t_lo, s.cfg.fit_t_hi, 16);
  bool ok = true;
  std::ostringstream d;

  {  // k = 1, closed form
    const RadialGrid& g = s.grid_mid;
    InitialData d1 = make_initial_data(1, DataShape::basic, g, s.profile);
    K1ExplicitDensity oracle(d1, s.profile, g);
    SpectralDensityTable tab;
    tab.k = 1;
    tab.w_stride = 1;
    tab.dB_ref = std::abs(s.profile.dB(0.0));
    for (int i = 16; i <= g.n - 17; ++i) {
      if (std::abs(s.profile.dB(g.v[i])) < 1e-6 * tab.dB_ref) continue;
      tab.w_index.push_back(i);
      tab.w.push_back(g.v[i]);
      tab.gamma.emplace_back(g.n);
      for (int iv = 0; iv < g.n; ++iv)
        tab.gamma.back()[iv] = oracle(g.v[iv], g.v[i]);
    }
    tab.jump.assign(tab.cols(), 0.0);
    tab.recon.assign(tab.cols(), 0.0);
    DecayFit fit =
        fit_decay(times, observable_decay_spectral(tab, s.profile, s.grid_mid, times));
    double expect = expected_exponent(1);
    d << " k=1: " << fmt(fit.exponent) << " (need " << fmt(expect) << "+-0.2)";
    if (std::abs(fit.exponent - expect) > 0.2) ok = false;
  }

  for (int k : {2, 3}) {
    SpectralDensityTable tab =
        k == 2 ? s.dense_table(2)
               : spectral_density(
                     3, make_initial_data(3, DataShape::basic, s.grid_mid, s.profile),
                     s.profile, s.grid_mid, s.cfg.spectral_eps_ladder, 2,
                     s.cfg.runtime_workers > 0 ? s.cfg.runtime_workers : 1);
    DecayFit fit =
        fit_decay(times, observable_decay_spectral(tab, s.profile, s.grid_mid, times));
    double expect = expected_exponent(k), tol = k == 2 ? 0.4 : 0.5;
    d << " k=" << k << ": " << fmt(fit.exponent) << " (need " << fmt(expect)
      << "+-" << fmt(tol) << ")";
    if (std::abs(fit.exponent - expect) > tol) ok = false;
  }

  {  // reference only: time-domain k=1 fit on its default window
    ModeEvolver ev(1, s.profile, s.grid_mid);
    ModeState st = ev.initial_state(
        make_initial_data(1, DataShape::basic, s.grid_mid, s.profile));
    std::vector<double> td_times = log_spaced(8.0, 80.0, 10);
    std::vector<cplx> vals;
    for (double t : td_times) {
      ev.advance(st, t, 0.01);
      vals.push_back(observable_via_stream(ev.stream(st), 1, s.grid_mid));
    }
    DecayFit fit = fit_decay(td_times, vals);
    s.log << "  [info] time-domain k=1 exponent over [8,80]: "
          << fmt(fit.exponent) << " (recorded, not asserted)\n";
  }

  detail = "fitted exponents over [" + fmt(s.cfg.fit_t_lo) + "," +
           fmt(s.cfg.fit_t_hi) + "]:" + d.str();
  return ok;
}

// --- 6: vanishing order of the local part near the origin -------------------

bool crit_vanishing(Suite& s, std::string& detail) {
  bool ok = true;
  std::ostringstream d;
  for (int k : {1, 2}) {
    SplitResult sp = local_nonlocal_split(10.0, s.dense_table(k), s.profile,
                                          s.grid_mid, nullptr, 8);
    std::vector<double> xs, ys;
    for (size_t m = 0; m < sp.rows.size(); ++m) {
      double v = s.grid_mid.v[sp.rows[m]];
      if (v < -7.0 || v > -4.0 || std::abs(sp.f_loc[m]) == 0.0) continue;
      xs.push_back(v);
      ys.push_back(std::log(std::abs(sp.f_loc[m])));
    }
    double slope = ols_slope(xs, ys);
    double expect = std::sqrt(k * k + 8.0), tol = k == 1 ? 0.15 : 0.2;
    d << " k=" << k << ": " << fmt(slope) << " (need " << fmt(expect) << "+-"
      << fmt(tol) << ")";
    if (std::abs(slope - expect) > tol) ok = false;
  }
  detail = "local-part slope of log|f| in v on [-7,-4] at t=10:" + d.str();
  return ok;
}

// --- 7: split identity -------------------------------------------------------

bool crit_split(Suite& s, std::string& detail) {
  bool ok = true;
  std::ostringstream d;
  for (int k : {1, 2}) {
    for (double t : {5.0, 10.0}) {
      std::vector<cplx> ref = s.evolved(k, t);
      SplitResult sp =
          local_nonlocal_split(t, s.dense_table(k), s.profile, s.grid_mid, &ref, 16);
      d << " k=" << k << ",t=" << t << ": " << fmt(sp.recombination_error);
      if (!(sp.recombination_error >= 0.0 && sp.recombination_error < 1e-3))
        ok = false;
    }
  }
  detail = "relative recombination error:" + d.str() + " (need < 1e-3)";
  return ok;
}

// --- 8: spectrum of the discretized advection operator ----------------------

bool crit_spectrum(Suite& s, std::string& detail) {
  RadialGrid g = make_grid(-9.0, 9.0, 1025);
  double b0 = s.profile.b0, tol = 1e-3 * b0;
  bool ok = true;
  std::ostringstream d;
  for (int k : {1, 2, 3}) {
    std::vector<cplx> eig = matrix_eigenvalues(operator_matrix(k, s.profile, g));
    double worst = 0.0;
    for (cplx z : eig) {
      double re = z.real();
      double dist = std::abs(z.imag());
      if (re < 0.0) dist = std::hypot(dist, -re);
      if (re > b0) dist = std::hypot(dist, re - b0);
      worst = std::max(worst, dist);
    }
    d << " k=" << k << ": " << fmt(worst / b0);
    if (worst > tol) ok = false;
  }
  detail = "max eigenvalue distance to [0,b0] over b0:" + d.str() +
           " (need <= 1e-3)";
  return ok;
}

// --- 9: off-diagonal differential identity of the density -------------------

bool crit_pv_residual(Suite& s, std::string& detail) {
  const RadialGrid& g = s.grid_mid;
  bool ok = true;
  std::ostringstream d;
  for (int k : {1, 2}) {
    const SpectralDensityTable& tab = s.dense_table(k);
    double gmax = 0.0;
    std::vector<double> colmax(tab.cols(), 0.0);
    for (int j = 0; j < tab.cols(); ++j) {
      for (double x : tab.gamma[j]) colmax[j] = std::max(colmax[j], std::abs(x));
      gmax = std::max(gmax, colmax[j]);
    }
    // 100 deterministic samples, restricted to points carrying signal: the
    // residual is meaningless where the column is cross-column leakage.
    Lcg rng;
    int accepted = 0;
    double worst = 0.0;
    while (accepted < 100) {
      int j = 1 + static_cast<int>(rng.next() * (tab.cols() - 2));
      int i = 1 + static_cast<int>(rng.next() * (g.n - 2));
      double v = g.v[i], w = tab.w[j];
      if (std::abs(v - w) < 0.5) continue;
      if (colmax[j] < 1e-4 * gmax) continue;
      const auto& col = tab.gamma[j];
      if (std::abs(col[i]) < 1e-6 * colmax[j]) continue;
      double gpp = (col[i + 1] - 2.0 * col[i] + col[i - 1]) / (g.h * g.h);
      double pot = std::exp(2.0 * v) * s.profile.D(v) * col[i] / s.profile.B_diff(v, w);
      double resid = k * k * col[i] - gpp + pot;
      double scale = k * k * std::abs(col[i]) + std::abs(gpp) + std::abs(pot);
      worst = std::max(worst, std::abs(resid) / scale);
      ++accepted;
    }
    d << " k=" << k << ": " << fmt(worst);
    if (worst > 1e-3) ok = false;
  }
  detail = "worst residual over 100 pairs with |v-w| >= 1/2:" + d.str() +
           " (need <= 1e-3)";
  return ok;
}

// --- 10: envelope decay rates ------------------------------------------------

bool crit_envelopes(Suite& s, std::string& detail) {
  bool ok = true;
  std::ostringstream d;
  for (int k : {1, 2, 3}) {
    SpectralDensityTable tab =
        k <= 2 ? s.dense_table(k)
               : spectral_density(
                     3, make_initial_data(3, DataShape::basic, s.grid_mid, s.profile),
                     s.profile, s.grid_mid, s.cfg.spectral_eps_ladder, 2,
                     s.cfg.runtime_workers > 0 ? s.cfg.runtime_workers : 1);
    const RadialGrid& g = s.grid_mid;
    // Large-w decay of the column maxima on w in [1, 5].
    std::vector<double> xs, ys;
    for (int j = 0; j < tab.cols(); ++j) {
      if (tab.w[j] < 1.0 || tab.w[j] > 5.0) continue;
      double cmax = 0.0;
      for (double x : tab.gamma[j]) cmax = std::max(cmax, std::abs(x));
      if (cmax <= 0.0) continue;
      xs.push_back(tab.w[j]);
      ys.push_back(std::log(cmax));
    }
    double w_rate = -ols_slope(xs, ys);
    // Below-diagonal decay in |v - w| at the column nearest w = 0.
    int j0 = tab.col_of(0.0, g);
    xs.clear();
    ys.clear();
    for (int i = g.index_of(tab.w[j0] - 4.0); i < g.index_of(tab.w[j0] - 0.5);
         i += 8) {
      double val = std::abs(tab.gamma[j0][i]);
      if (val <= 0.0) continue;
      xs.push_back(tab.w[j0] - g.v[i]);
      ys.push_back(std::log(val));
    }
    double vw_rate = -ols_slope(xs, ys);
    d << " k=" << k << ": w " << fmt(w_rate) << " (need >= " << fmt(k + 4 - 0.2)
      << "), |v-w| " << fmt(vw_rate) << " (need >= " << fmt(k - 0.2) << ")";
    if (w_rate < k + 4 - 0.2 || vw_rate < k - 0.2) ok = false;
  }
  detail = "fitted envelope decay rates:" + d.str();
  return ok;
}

}  // namespace

bool AcceptanceReport::all_pass() const {
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return true;
}

AcceptanceReport run_acceptance(std::ostream& log, const RunConfig& cfg) {
  validate_config(cfg);
  Suite suite{cfg, log};
  struct Entry {
    const char* name;
    Criterion fn;
  };
  const Entry entries[] = {
      {"stream solvers converge at second order", crit_elliptic},
      {"quadratic energy conserved along the flow", crit_energy},
      {"k=1 density table matches the closed form", crit_k1_oracle},
      {"stream function agrees across the two routes", crit_routes},
      {"observable decay exponents match 1+sqrt(k^2+8)", crit_observable},
      {"near-origin vanishing order of the local part", crit_vanishing},
      {"local/nonlocal split recombines to the vorticity", crit_split},
      {"discretized operator spectrum lies on [0, b0]", crit_spectrum},
      {"density satisfies its off-diagonal identity", crit_pv_residual},
      {"density envelope decay rates", crit_envelopes},
  };
  AcceptanceReport rep;
  int id = 0;
  double elapsed_start = now_seconds();
  for (const Entry& e : entries) {
    ++id;
    log << "[" << id << "/10] " << e.name << "...\n" << std::flush;
    CriterionResult r;
    r.id = id;
    r.name = e.name;
    double t0 = now_seconds();
    try {
      r.pass = e.fn(suite, r.detail);
    } catch (const std::exception& ex) {
      r.pass = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = now_seconds() - t0;
    rep.criteria.push_back(r);
  }
  log << "total " << fmt(now_seconds() - elapsed_start) << " s\n";
  return rep;
}

void print_report(std::ostream& os, const AcceptanceReport& rep) {
  int failed = 0;
  for (const auto& c : rep.criteria) {
    os << (c.pass ? "PASS" : "FAIL") << " [" << (c.id < 10 ? " " : "") << c.id
       << "] " << c.name << " -- " << c.detail << " (" << fmt(c.seconds)
       << " s)\n";
    if (!c.pass) ++failed;
  }
  os << (failed == 0 ? "ALL CRITERIA PASSED"
                     : std::to_string(failed) + " CRITERIA FAILED")
     << "\n";
}

}  // namespace vortexsym
