#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "vortexsym/analysis.hpp"
#include "vortexsym/cutoffs.hpp"
#include "vortexsym/evolution.hpp"
#include "vortexsym/grid.hpp"
#include "vortexsym/profile.hpp"
#include "vortexsym/spectral.hpp"

using namespace vortexsym;

namespace {

const std::vector<double> kLadder = {2.8e-4, 1.4e-4, 7e-5};

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i)
    t[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return t;
}

const RadialGrid& test_grid() {
  static RadialGrid g = make_grid(-9.0, 9.0, 2049);
  return g;
}

const VortexProfile& test_profile() {
  static VortexProfile p = make_canonical_profile(1.0);
  return p;
}

// Dense (every-column) k=1 table shared by the split tests.
const SpectralDensityTable& k1_dense_table() {
  static SpectralDensityTable tab = spectral_density(
      1, make_initial_data(1, DataShape::basic, test_grid(), test_profile()),
      test_profile(), test_grid(), kLadder, 1);
  return tab;
}

std::vector<cplx> evolved_vorticity(int k, double t, const RadialGrid& g,
                                    const VortexProfile& p) {
  ModeEvolver ev(k, p, g);
  ModeState s = ev.initial_state(make_initial_data(k, DataShape::basic, g, p));
  ev.advance(s, t, 0.01);
  return s.omega;
}

}  // namespace

TEST_CASE("exact power law is fitted to roundoff") {
  std::vector<double> t = log_spaced(10.0, 200.0, 16);
  std::vector<cplx> v;
  for (double x : t) v.push_back(std::pow(x, -4.0));
  DecayFit fit = fit_decay(t, v);
  CHECK(fit.exponent == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(fit.std_error < 1e-10);
  CHECK(fit.n_points == 16);
  CHECK(fit.t_lo == doctest::Approx(10.0));
  CHECK(fit.t_hi == doctest::Approx(200.0));
}

TEST_CASE("fit preconditions") {
  std::vector<double> t = log_spaced(10.0, 200.0, 16);
  std::vector<cplx> v(16, cplx(1.0, 0.0));
  CHECK_THROWS_AS(fit_decay(log_spaced(10.0, 200.0, 7), std::vector<cplx>(7, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_decay(log_spaced(10.0, 50.0, 16), v), std::invalid_argument);
  CHECK_THROWS_AS(fit_decay(t, std::vector<cplx>(15, 1.0)), std::invalid_argument);
  std::vector<double> bad = t;
  bad[5] = bad[4];
  CHECK_THROWS_AS(fit_decay(bad, v), std::invalid_argument);
  std::vector<cplx> floored = v;
  floored[9] = 1e-13;  // below 1e-12 * |first|
  CHECK_THROWS_AS(fit_decay(t, floored), std::runtime_error);
}

TEST_CASE("expected exponents") {
  CHECK(expected_exponent(1) == doctest::Approx(4.0));
  CHECK(expected_exponent(2) == doctest::Approx(1.0 + 2.0 * std::sqrt(3.0)));
  CHECK(expected_exponent(3) > expected_exponent(2));
}

TEST_CASE("zero table splits to zero") {
  const RadialGrid& g = test_grid();
  SpectralDensityTable tab;
  tab.k = 1;
  tab.w_stride = 1;
  int i0 = g.index_of(-1.0);
  for (int m = 0; m < 32; ++m) {
    tab.w_index.push_back(i0 + m);
    tab.w.push_back(g.v[i0 + m]);
    tab.gamma.emplace_back(g.n, 0.0);
    tab.jump.push_back(0.0);
    tab.recon.push_back(0.0);
  }
  SplitResult s = local_nonlocal_split(2.0, tab, test_profile(), g, nullptr, 4);
  for (size_t m = 0; m < s.rows.size(); ++m) {
    CHECK(std::abs(s.f_loc[m]) == 0.0);
    CHECK(std::abs(s.f_nloc[m]) == 0.0);
    CHECK(s.window_clipped[m] == 1);  // 32 columns cannot cover v ± 4
  }
}

TEST_CASE("split recombines to the evolved vorticity") {
  const RadialGrid& g = test_grid();
  const VortexProfile& p = test_profile();
  const SpectralDensityTable& tab = k1_dense_table();
  for (double t : {5.0, 10.0}) {
    std::vector<cplx> ref = evolved_vorticity(1, t, g, p);
    SplitResult s = local_nonlocal_split(t, tab, p, g, &ref, 16);
    INFO("t=", t);
    CHECK(s.recombination_error >= 0.0);
    CHECK(s.recombination_error < 1e-3);
  }
}

TEST_CASE("halving the diagonal exclusion radius moves the split by < 1e-4") {
  const RadialGrid& g = test_grid();
  const VortexProfile& p = test_profile();
  const SpectralDensityTable& tab = k1_dense_table();
  double excl = 3.0 * (tab.w[1] - tab.w[0]);
  SplitResult a = local_nonlocal_split(5.0, tab, p, g, nullptr, 16, excl);
  SplitResult b = local_nonlocal_split(5.0, tab, p, g, nullptr, 16, excl / 2.0);
  double scale = 0.0, diff = 0.0;
  for (size_t m = 0; m < a.rows.size(); ++m) {
    scale = std::max(scale, std::abs(a.f_loc[m]));
    diff = std::max(diff, std::abs(a.f_loc[m] - b.f_loc[m]));
  }
  CHECK(diff < 1e-4 * scale);
}

TEST_CASE("recombined sum is independent of the cutoff shape") {
  const RadialGrid& g = test_grid();
  const VortexProfile& p = test_profile();
  const SpectralDensityTable& tab = k1_dense_table();
  // C^2 smoothstep with the same support (-4, 4), identically 1 on [-2, 2].
  auto smooth3 = [](double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
  };
  auto cut2 = [smooth3](double vw) { return smooth3((4.0 - std::abs(vw)) / 2.0); };
  double t = 5.0;
  SplitResult a = local_nonlocal_split(t, tab, p, g, nullptr, 32);
  SplitResult b = local_nonlocal_split(t, tab, p, g, nullptr, 32, 0.0, cut2);
  double scale = 0.0, diff = 0.0, part_diff = 0.0;
  for (size_t m = 0; m < a.rows.size(); ++m) {
    cplx phase = std::polar(1.0, -1.0 * p.B(g.v[a.rows[m]]) * t);
    cplx sa = a.f_loc[m] * phase + a.f_nloc[m];
    cplx sb = b.f_loc[m] * phase + b.f_nloc[m];
    scale = std::max(scale, std::abs(sa));
    diff = std::max(diff, std::abs(sa - sb));
    part_diff = std::max(part_diff, std::abs(a.f_loc[m] - b.f_loc[m]));
  }
  CHECK(diff < 1e-6 * scale);
  CHECK(part_diff > 1e-3 * scale);  // the parts themselves do move
}

TEST_CASE("nonlocal part decays under phase mixing at fixed radius") {
  const RadialGrid& g = test_grid();
  const VortexProfile& p = test_profile();
  // The nonlocal integrand only sees |v - w| >= 2, where the angular
  // velocity is nearly constant; its phases decorrelate on the slow scale
  // 1/|B'| of those shells, so the decay shows up late.
  DecayFit fit = nonlocal_decay_check(0.0, k1_dense_table(), p, g,
                                      log_spaced(2e3, 2e4, 12));
  CHECK(fit.exponent >= 1.0);
  CHECK(fit.n_points == 12);
  // Early windows are rejected only when the phase is under-resolved.
  CHECK_THROWS(nonlocal_decay_check(0.0, k1_dense_table(), p, g,
                                    log_spaced(1e6, 1e7, 8)));
  CHECK_THROWS_AS(nonlocal_decay_check(30.0, k1_dense_table(), p, g,
                                       log_spaced(10.0, 100.0, 8)),
                  std::invalid_argument);
}

TEST_CASE("spectral observable matches the time-domain route at t = 10") {
  const RadialGrid& g = test_grid();
  const VortexProfile& p = test_profile();
  SpectralDensityTable tab = spectral_density(
      1, make_initial_data(1, DataShape::basic, g, p), p, g, kLadder, 4);
  std::vector<cplx> I = observable_decay_spectral(tab, p, g, log_spaced(10.0, 100.0, 8));

  ModeEvolver ev(1, p, g);
  ModeState s = ev.initial_state(make_initial_data(1, DataShape::basic, g, p));
  ev.advance(s, 10.0, 0.01);
  cplx direct = observable_via_stream(ev.stream(s), 1, g);
  CHECK(std::abs(I[0] - direct) < 1e-2 * std::abs(direct));
}

TEST_CASE("fitted observable exponents increase with the mode number") {
  const RadialGrid& g = test_grid();
  const VortexProfile& p = test_profile();
  std::vector<double> times = log_spaced(20.0, 200.0, 16);
  std::vector<double> expo;
  for (int k : {1, 2, 3}) {
    SpectralDensityTable tab = spectral_density(
        k, make_initial_data(k, DataShape::basic, g, p), p, g, kLadder, 2);
    std::vector<cplx> I = observable_decay_spectral(tab, p, g, times);
    DecayFit fit = fit_decay(times, I);
    INFO("k=", k, " exponent=", fit.exponent);
    CHECK(fit.exponent > 0.0);
    expo.push_back(fit.exponent);
  }
  CHECK(expo[0] < expo[1]);
  CHECK(expo[1] < expo[2]);
}

TEST_CASE("k=2 observable approaches its late-time rate") {
  // The power law emerges once t exceeds the inverse width of the spectral
  // peak (the angular-velocity scale b(0) = 1/16 sets ~16 units per core
  // rotation); fit over a late decade.
  const RadialGrid& g = test_grid();
  const VortexProfile& p = test_profile();
  SpectralDensityTable tab = spectral_density(
      2, make_initial_data(2, DataShape::basic, g, p), p, g, kLadder, 1);
  // The latest decade the phase-resolution guard admits on this grid.
  std::vector<double> times = log_spaced(85.0, 850.0, 16);
  DecayFit fit = fit_decay(times, observable_decay_spectral(tab, p, g, times));
  CHECK(fit.exponent > 2.5);
}
