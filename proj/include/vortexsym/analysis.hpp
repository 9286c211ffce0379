#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vortexsym/evolution.hpp"
#include "vortexsym/grid.hpp"
#include "vortexsym/profile.hpp"
#include "vortexsym/spectral.hpp"

namespace vortexsym {

// Least-squares power-law fit |I(t)| ~ t^{-exponent} over a time window.
struct DecayFit {
  double exponent = 0.0;   // minus the slope of log|I| against log t
  double std_error = 0.0;  // standard error of the fitted slope
  double t_lo = 0.0;
  double t_hi = 0.0;
  int n_points = 0;
};

// Requires >= 8 samples spanning at least one decade in t, strictly
// increasing positive times (throws std::invalid_argument otherwise).
// Throws std::runtime_error when any |value| falls at or below the
// quadrature noise floor 1e-12 * |values.front()|.
DecayFit fit_decay(const std::vector<double>& times, const std::vector<cplx>& values);

// Reference decay rate 1 + sqrt(k^2 + 8) of the symmetrization observable.
double expected_exponent(int k);

// Local/nonlocal decomposition of the vorticity at time t, evaluated on the
// v-nodes listed in `rows` (each must coincide with a table w-column):
//   f_loc(v)  = -(1/2π) D(v) PV∫ e^{-ik(B(w)-B(v))t} Γ(v,w)/(B(v)-B(w))
//                 Φ(v-w) ∂_wB dw  -  [D ϝ_k - F0k](v)
//   f_nloc(v) = -(1/2π) D(v) ∫ e^{-ikB(w)t} Γ(v,w)/(B(v)-B(w)) (1-Φ(v-w))
//                 ∂_wB dw
// so that f_loc·e^{-ikB(v)t} + f_nloc reassembles f_k(t,v).  [D ϝ_k - F0k]
// comes from the table's jump reconstruction.
struct SplitResult {
  int k = 0;
  double t = 0.0;
  std::vector<int> rows;  // v-node indices evaluated
  std::vector<cplx> f_loc;
  std::vector<cplx> f_nloc;
  std::vector<char> window_clipped;    // cutoff window leaves the w-grid
  double recombination_error = -1.0;   // vs reference, relative; -1 if none
};

// PV quadrature by singularity subtraction: the diagonal value Γ(v,v) is
// subtracted (its PV integral is evaluated in closed form via λ = B(w) on
// [v-2, v+2], plus regular quadrature on the annulus 2 <= |v-w| <= 4), and
// the remaining bounded integrand is integrated by trapezoid with one-sided
// limits at the diagonal.  Nodes within `exclusion` of the diagonal are
// replaced by one-sided linear extrapolation (exclusion <= 0 selects
// 3 w-gaps).  `cutoff` defaults to the standard window, identically 1 on
// [-2, 2] and supported in (-4, 4); any replacement must share that support.
// Every v-stride-th table column is used as an evaluation row.  Passing a
// full-grid reference f_k(t, ·) fills recombination_error.  Throws when the
// oscillatory phase is under-resolved on the w-grid.
SplitResult local_nonlocal_split(double t, const SpectralDensityTable& table,
                                 const VortexProfile& profile, const RadialGrid& grid,
                                 const std::vector<cplx>* reference = nullptr,
                                 int v_stride = 8, double exclusion = 0.0,
                                 const std::function<double(double)>& cutoff = nullptr);

// Power-law fit of |f_nloc(t, v0)| over the given times at fixed v0 (nearest
// table column).  Errors as fit_decay, plus the phase-resolution guard.
DecayFit nonlocal_decay_check(double v0, const SpectralDensityTable& table,
                              const VortexProfile& profile, const RadialGrid& grid,
                              const std::vector<double>& times);

// Symmetrization observable I(t) = ∫ ψ_k(t,v) H_k(v) r dr through the
// spectral representation: a single oscillatory w-integral of
// a(w) = ∫ Γ_k(v,w) H_k(v) r dr against e^{-ikB(w)t} ∂_wB(w), with H_k the
// compactly supported harmonic-lift weight.  Accurate at large t where the
// time-domain route loses precision.  Phase-resolution guard as in
// stream_via_spectral.
std::vector<cplx> observable_decay_spectral(const SpectralDensityTable& table,
                                            const VortexProfile& profile,
                                            const RadialGrid& grid,
                                            const std::vector<double>& times);

// Appends "k,route,t_lo,t_hi,exponent,stderr,expected,pass" rows.
void write_fit_csv_header(std::ostream& os);
void append_fit_csv(std::ostream& os, int k, const std::string& route,
                    const DecayFit& fit, double expected, bool pass);

}  // namespace vortexsym
