#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vortexsym/grid.hpp"

namespace vortexsym {

// Background vortex: vorticity Omega(r), induced angular velocity b = U/r,
// d = Omega'/r, and the same coefficients in v = log r variables
// (B, D, dB = ∂_vB).  B_diff(v, w) evaluates B(v) - B(w) without cancellation
// when a closed form is available.
struct VortexProfile {
  double amplitude = 0.0;
  double c_star = 0.0;  // coefficient of the <r>^-8 law for Omega'/r
  double b0 = 0.0;      // b(0+) = top of the continuous spectrum

  std::function<double(double)> Omega;   // of r
  std::function<double(double)> dOmega;  // Omega'(r)
  std::function<double(double)> U;       // of r
  std::function<double(double)> b;       // U/r
  std::function<double(double)> d;       // Omega'/r
  std::function<double(double)> B;       // b(e^v)
  std::function<double(double)> D;       // d(e^v)
  std::function<double(double)> dB;      // ∂_v B
  std::function<double(double, double)> B_diff;  // B(v) - B(w)
};

// Canonical family Omega = A / (2 + r^2)^3; satisfies the structural
// assumptions with identically zero remainder and c_star = -6A.
// Throws std::invalid_argument for A <= 0.
VortexProfile make_canonical_profile(double A);

// Biot-Savart in radial symmetry: U(r) = (1/r) ∫_0^r s Omega(s) ds by
// cumulative trapezoid quadrature with an analytic leading-order first cell.
// Throws std::invalid_argument when Omega is non-integrable against r dr
// near r = 0 (growth faster than r^{-2+delta}).
std::vector<double> velocity_from_vorticity(const std::vector<double>& omega,
                                            const RadialGrid& grid);

// Tabulation-backed profile for non-closed-form vorticities (linear
// interpolation in v, finite-difference derivatives).
VortexProfile make_profile_from_omega(const std::function<double(double)>& omega_of_r,
                                      const RadialGrid& grid);

struct AssumptionCheck {
  std::string name;
  bool pass = false;
  double fitted_constant = 0.0;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_pass() const;
};

// Structural checks on the background: positivity and monotonicity of Omega,
// the <r>^-8 remainder law for Omega'/r (j <= j_max v-derivatives), the D(v)
// derivative envelope, two-sided bounds on B and ∂_vB, and the small-r law
// ∂_vB = (d(0)/4) e^{2v} + O(e^{4v}).  Failures are reported, not thrown.
AssumptionReport verify_assumptions(const VortexProfile& p, const RadialGrid& grid,
                                    int j_max);

// CSV with columns v,r,Omega,U,b,d,B,D,dB.
void write_profile_csv(std::ostream& os, const VortexProfile& p, const RadialGrid& grid);

}  // namespace vortexsym
