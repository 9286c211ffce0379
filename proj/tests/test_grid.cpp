#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vortexsym/grid.hpp"

using namespace vortexsym;

TEST_CASE("make_grid spacing and monotonicity") {
  RadialGrid g = make_grid(-9.0, 9.0, 4097);
  CHECK(g.h == doctest::Approx(18.0 / 4096).epsilon(1e-15));
  CHECK(g.v.front() == doctest::Approx(-9.0));
  CHECK(g.v.back() == doctest::Approx(9.0));
  for (int i = 1; i < g.n; ++i) CHECK(g.r[i] > g.r[i - 1]);
  for (double w : g.w_dv) CHECK(w > 0.0);
}

TEST_CASE("make_grid rejects bad arguments") {
  CHECK_THROWS(make_grid(-1.0, 1.0, 32));
  CHECK_THROWS(make_grid(1.0, -1.0, 100));
  CHECK_THROWS(make_grid(1.0, 1.0, 100));
}

TEST_CASE("r dr quadrature integrates 1 to (r_max^2 - r_min^2)/2") {
  // Trapezoid in v on e^{2v}: relative error ~ h^2/3.
  RadialGrid g = make_grid(-6.0, 3.0, 4097);
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) s += g.w_rdr[i];
  double exact = (g.r.back() * g.r.back() - g.r.front() * g.r.front()) / 2.0;
  CHECK(s == doctest::Approx(exact).epsilon(1e-5));
}

TEST_CASE("gaussian integral against r dr") {
  RadialGrid g = make_grid(-9.0, 9.0, 4097);
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) s += std::exp(-g.r[i] * g.r[i]) * g.w_rdr[i];
  CHECK(std::abs(s - 0.5) < 1e-8);
}

TEST_CASE("rational moment matches Richardson-refined reference") {
  // ∫ r^3 (2+r^2)^{-7} r dr: reference from the same rule at 4x resolution
  // Richardson-combined with 2x (trapezoid error ~ h^2).
  auto quad = [](int n) {
    RadialGrid g = make_grid(-9.0, 9.0, n);
    double s = 0.0;
    for (int i = 0; i < g.n; ++i)
      s += std::pow(g.r[i], 3) * std::pow(2.0 + g.r[i] * g.r[i], -7) * g.w_rdr[i];
    return s;
  };
  double ref = (4.0 * quad(16385) - quad(8193)) / 3.0;
  CHECK(std::abs(quad(4097) - ref) < 1e-8 * std::abs(ref) + 1e-14);
}

TEST_CASE("trapezoid exact on linear functions of v") {
  RadialGrid g = make_grid(-2.0, 5.0, 65);
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) s += (3.0 * g.v[i] + 1.0) * g.w_dv[i];
  double exact = 1.5 * (25.0 - 4.0) + (5.0 - -2.0);
  CHECK(s == doctest::Approx(exact).epsilon(1e-14));
}

namespace {
// Brute-force interval-intersection length oracle.
double dvw_oracle(double v, double w) {
  double a1 = std::min(v, w), b1 = std::max(v, w);
  double a2 = std::min(w, 0.0), b2 = 0.0;
  const int m = 200000;
  double lo = std::min(a1, a2), hi = std::max(b1, b2);
  if (hi <= lo) return 0.0;
  double dh = (hi - lo) / m, count = 0.0;
  for (int i = 0; i < m; ++i) {
    double x = lo + (i + 0.5) * dh;
    if (x >= a1 && x <= b1 && x >= a2 && x <= b2) count += 1.0;
  }
  return count * dh;
}
}  // namespace

TEST_CASE("dvw fixed examples") {
  CHECK(dvw(1.0, 2.0) == doctest::Approx(0.0));
  CHECK(dvw(-3.0, -1.0) == doctest::Approx(0.0));
  CHECK(dvw(-1.0, -3.0) == doctest::Approx(2.0));
  CHECK(dvw(1.0, 2.0) == doctest::Approx(dvw_oracle(1.0, 2.0)).epsilon(1e-3));
  CHECK(dvw(-3.0, -1.0) == doctest::Approx(dvw_oracle(-3.0, -1.0)).epsilon(1e-3));
  CHECK(std::abs(dvw(-1.0, -3.0) - dvw_oracle(-1.0, -3.0)) < 1e-3);
}

TEST_CASE("dvw properties against oracle") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    double v = dist(rng), w = dist(rng);
    double d = dvw(v, w);
    CHECK(d >= 0.0);
    CHECK(d <= std::abs(v - w) + 1e-12);
    CHECK(d <= std::abs(w) + 1e-12);
    CHECK(std::abs(d - dvw_oracle(v, w)) < 2e-4);
    if (v >= 0.0 && w >= 0.0) CHECK(d == 0.0);
  }
}
