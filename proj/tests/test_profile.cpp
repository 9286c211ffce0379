#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vortexsym/grid.hpp"
#include "vortexsym/profile.hpp"

using namespace vortexsym;

TEST_CASE("canonical profile closed forms, A = 1") {
  VortexProfile p = make_canonical_profile(1.0);
  CHECK(p.d(1.0) == doctest::Approx(-6.0 / 81.0).epsilon(1e-14));
  CHECK(p.U(1.0) == doctest::Approx(5.0 / 144.0).epsilon(1e-14));
  CHECK(p.b0 == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(p.c_star == doctest::Approx(-6.0).epsilon(1e-14));
  // U -> 0 at both ends of the default grid.
  RadialGrid g = make_grid(-9.0, 9.0, 4097);
  CHECK(std::abs(p.U(g.r.front())) < 1e-5);
  CHECK(std::abs(p.U(g.r.back())) < 1e-3);
  CHECK_THROWS(make_canonical_profile(0.0));
  CHECK_THROWS(make_canonical_profile(-2.0));
}

TEST_CASE("canonical B_diff agrees with direct difference") {
  VortexProfile p = make_canonical_profile(1.7);
  for (double v : {-3.0, -0.5, 1.0})
    for (double w : {-2.0, 0.3, 2.5})
      CHECK(p.B_diff(v, w) == doctest::Approx(p.B(v) - p.B(w)).epsilon(1e-9).scale(0.0));
  CHECK(p.B_diff(1.0, 1.0) == 0.0);
}

TEST_CASE("velocity_from_vorticity on canonical vorticity") {
  RadialGrid g = make_grid(-9.0, 9.0, 4097);
  VortexProfile p = make_canonical_profile(1.0);
  std::vector<double> om(g.n);
  for (int i = 0; i < g.n; ++i) om[i] = p.Omega(g.r[i]);
  std::vector<double> U = velocity_from_vorticity(om, g);
  // Matches closed form away from the ends to the trapezoid accuracy O(h^2).
  for (int i = 64; i < g.n - 64; ++i)
    CHECK(U[i] == doctest::Approx(p.U(g.r[i])).epsilon(2e-5));
  // U(1) = 5/144.
  CHECK(U[g.index_of(0.0)] == doctest::Approx(5.0 / 144.0).epsilon(2e-5));
  // U/r -> A/16 as r -> 0.
  CHECK(U[32] / g.r[32] == doctest::Approx(1.0 / 16.0).epsilon(1e-5));
}

TEST_CASE("velocity_from_vorticity trivial and error cases") {
  RadialGrid g = make_grid(-6.0, 3.0, 257);
  std::vector<double> zero(g.n, 0.0);
  for (double u : velocity_from_vorticity(zero, g)) CHECK(u == 0.0);
  // Omega ~ r^{-3} is not integrable against r dr.
  std::vector<double> bad(g.n);
  for (int i = 0; i < g.n; ++i) bad[i] = std::pow(g.r[i], -3);
  CHECK_THROWS(velocity_from_vorticity(bad, g));
}

TEST_CASE("ODE residual of recovered velocity is O(h^2)") {
  VortexProfile p = make_canonical_profile(1.0);
  auto max_residual = [&p](int n) {
    RadialGrid g = make_grid(-6.0, 4.0, n);
    std::vector<double> om(g.n);
    for (int i = 0; i < g.n; ++i) om[i] = p.Omega(g.r[i]);
    std::vector<double> U = velocity_from_vorticity(om, g);
    double worst = 0.0;
    for (int i = 1; i + 1 < g.n; ++i) {
      double dU = (U[i + 1] - U[i - 1]) / (g.v[i + 1] - g.v[i - 1]) / g.r[i];
      worst = std::max(worst, std::abs(dU + U[i] / g.r[i] - om[i]));
    }
    return worst;
  };
  double r1 = max_residual(513), r2 = max_residual(1025);
  CHECK(r1 / r2 >= 3.5);
}

TEST_CASE("verify_assumptions passes on the canonical profile") {
  RadialGrid g = make_grid(-9.0, 9.0, 2049);
  VortexProfile p = make_canonical_profile(1.0);
  AssumptionReport rep = verify_assumptions(p, g, 2);
  for (const auto& c : rep.checks) {
    INFO(c.name, " fitted=", c.fitted_constant);
    CHECK(c.pass);
    CHECK(std::isfinite(c.fitted_constant));
  }
  CHECK(rep.all_pass());
}

TEST_CASE("small-r law of dB holds with the canonical constant") {
  VortexProfile p = make_canonical_profile(1.0);
  double d0 = p.D(-30.0);
  for (double v : {-5.0, -6.0, -8.0}) {
    double ratio = std::abs(p.dB(v) - 0.25 * d0 * std::exp(2.0 * v)) / std::exp(4.0 * v);
    CHECK(ratio < 1.0);  // bounded coefficient of the e^{4v} remainder
    CHECK(ratio > 1e-3);
  }
}

TEST_CASE("verify_assumptions fails on sign-changing vorticity") {
  RadialGrid g = make_grid(-6.0, 3.0, 513);
  VortexProfile p =
      make_profile_from_omega([](double r) { return std::exp(-r * r) * (r * r - 1.0); }, g);
  AssumptionReport rep = verify_assumptions(p, g, 1);
  bool pos_failed = false;
  for (const auto& c : rep.checks)
    if (c.name == "Omega positive" && !c.pass) pos_failed = true;
  CHECK(pos_failed);
  CHECK(!rep.all_pass());
}

TEST_CASE("b strictly decreasing and d negative on grid") {
  RadialGrid g = make_grid(-9.0, 9.0, 1025);
  VortexProfile p = make_canonical_profile(2.3);
  for (int i = 0; i + 1 < g.n; ++i) CHECK(p.b(g.r[i + 1]) < p.b(g.r[i]));
  for (int i = 0; i < g.n; ++i) CHECK(p.d(g.r[i]) < 0.0);
}

TEST_CASE("profile CSV header") {
  RadialGrid g = make_grid(-1.0, 1.0, 33);
  VortexProfile p = make_canonical_profile(1.0);
  std::ostringstream os;
  write_profile_csv(os, p, g);
  CHECK(os.str().substr(0, 23) == "v,r,Omega,U,b,d,B,D,dB\n");
}
