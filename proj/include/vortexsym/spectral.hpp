#pragma once

#include <iosfwd>
#include <vector>

#include "vortexsym/evolution.hpp"
#include "vortexsym/grid.hpp"
#include "vortexsym/profile.hpp"

namespace vortexsym {

// One limiting-absorption solve at spectral parameter B(w) + iota·i·eps:
// (k^2 - ∂_v^2)Γ + e^{2v}D(v)/(B(v)-B(w)+i·iota·eps)·Γ = rhs, with the same
// Robin ends as the elliptic module.
struct ResolventSolve {
  int k = 0;
  double w = 0.0;
  double epsilon = 0.0;
  int iota = +1;  // sign of the imaginary shift
  std::vector<cplx> gamma;
  double residual = 0.0;       // relative residual of the tridiagonal system
  double cond_estimate = 0.0;  // cheap one-solve estimate of ||A|| ||A^-1||
  bool near_singular = false;  // cond_estimate > 1e12
};

// Throws std::invalid_argument unless eps ∈ (0, 1/8], eps >= |∂_vB(w)|·h
// (critical layer resolved on the grid), and w lies in the grid interior.
// diagnostics=false skips the extra condition-estimate solve (used by bulk
// table assembly, where residuals are already checked per solve).
ResolventSolve solve_resolvent(int k, double w, double epsilon, int iota,
                               const InitialData& data, const VortexProfile& profile,
                               const RadialGrid& grid, bool diagnostics = true);

// Spectral density Γ_k(v, w) = 2 lim_{eps→0+} Im Γ^+ on a w-subgrid (every
// w_stride-th interior v-node), each column extrapolated linearly in eps over
// the ladder.  Columns are stored densely over all v-nodes.
struct SpectralDensityTable {
  int k = 0;
  int w_stride = 4;
  std::vector<int> w_index;                // indices into the v grid
  std::vector<double> w;                   // grid.v at those indices
  std::vector<std::vector<double>> gamma;  // [column j][row i], row = v-node
  std::vector<double> jump;                // J(w_j) = [∂_vΓ](v = w_j)
  std::vector<double> recon;               // J·∂_wB·e^{-2w}/(2π) = D·ϝ_k - F0k
  std::vector<double> col_err;             // eps-extrapolation error estimate
  std::vector<char> col_flagged;           // col_err > 1e-3 · column max
  std::vector<double> eps_ladder;          // reference ladder before scaling
  double dB_ref = 0.0;                     // |∂_vB(0)|, per-column eps scale

  int cols() const { return static_cast<int>(w.size()); }
  // Column index of the w node nearest to w0, or -1 when off the w-grid.
  int col_of(double w0, const RadialGrid& grid) const;
};

// Per-column eps ladder: eps_eff = ladder_m · |∂_wB(w)| / |∂_vB(0)|, so the
// critical layer is equally resolved at every w.  Requires a decreasing
// ladder with at least 3 entries.  Solves run on a grid refined by `refine`
// (the critical layer must stay several cells wide at the smallest eps);
// columns are restricted back to the caller's grid.  The eps→0 limit is
// taken by least squares against a + b·eps + c·eps·log(eps) — the eps·log eps
// term models the broadening of the derivative kink at v = w.  Columns solve
// independently (parallel map over w with deterministic slot writes).
SpectralDensityTable spectral_density(int k, const InitialData& data,
                                      const VortexProfile& profile, const RadialGrid& grid,
                                      const std::vector<double>& eps_ladder,
                                      int w_stride = 4, int workers = 1, int refine = 8);

// Closed-form k=1 density: Γ_1(v,w) = 2π (B(v)-B(w))/(∂_wB(w))^2 e^{v+w}
// 1_{v<w} { f0(w) - e^{-w} D(w)/∂_wB(w) ∫_{-∞}^w f0(ρ) e^{3ρ} dρ }, with the
// inner integral by cumulative trapezoid quadrature of the datum.
class K1ExplicitDensity {
 public:
  K1ExplicitDensity(const InitialData& data, const VortexProfile& profile,
                    const RadialGrid& grid);
  double operator()(double v, double w) const;

 private:
  double f0_at(double v) const;
  double cum_at(double w) const;

  const VortexProfile* profile_;
  std::vector<double> vgrid_, f0_, cum_;
};

double k1_explicit_density(double v, double w, const InitialData& data,
                           const VortexProfile& profile, const RadialGrid& grid);

// Representation formula φ_k(t,v) = -(1/2π) ∫ e^{-ikB(w)t} Γ_k(v,w) ∂_wB dw
// by trapezoid quadrature over the table's w-grid.  Throws when the phase is
// under-resolved: requires |k|·max|∂_wB|·t·h_w <= 0.5.
std::vector<cplx> stream_via_spectral(double t, const SpectralDensityTable& table,
                                      const VortexProfile& profile, const RadialGrid& grid);

// Companion vorticity f_k(t,v) = -e^{-2v}(k^2-∂_v^2)φ_k by centered
// differences (one-sided at the ends).
std::vector<cplx> vorticity_via_spectral(double t, const SpectralDensityTable& table,
                                         const VortexProfile& profile,
                                         const RadialGrid& grid);

// Dense sampled-basis matrix M[i][j] = b(r_i)δ_ij + d(r_i) G_k(r_i, r_j) w_dr_j
// of the advection operator.  Guarded to n <= 4097.
std::vector<std::vector<double>> operator_matrix(int k, const VortexProfile& profile,
                                                 const RadialGrid& grid);

// Eigenvalues of the dense matrix (nonsymmetric real solver).
std::vector<cplx> matrix_eigenvalues(const std::vector<std::vector<double>>& m);

// Long-format CSV (w,v,Gamma) and a key=value metadata sidecar.
void write_density_csv(std::ostream& os, const SpectralDensityTable& table,
                       const RadialGrid& grid);
void write_density_meta(std::ostream& os, const SpectralDensityTable& table);

}  // namespace vortexsym
