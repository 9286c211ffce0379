#pragma once

#include <complex>
#include <string>
#include <vector>

#include "vortexsym/grid.hpp"
#include "vortexsym/tridiag.hpp"

namespace vortexsym {

// Green's function of -∂_rr - r^{-1}∂_r + k^2 r^{-2} with decay at both ends.
// Throws std::invalid_argument for k = 0.
double green_kernel(int k, double r, double rho);

enum class EllipticMethod { green, tridiag };

struct EllipticSolve {
  int k = 0;
  EllipticMethod method = EllipticMethod::tridiag;
  std::vector<cplx> psi;
  double residual = 0.0;     // mode_laplacian_residual of the returned psi
  bool end_decay_ok = true;  // |ω| at grid ends < 1e-8 max|ω|
};

// Sign convention: ψ(r) = -∫ G_k(r, ρ) ω(ρ) dρ, so stream(Δ_k φ) returns φ.
EllipticSolve solve_stream(const std::vector<cplx>& omega, int k, const RadialGrid& grid,
                           EllipticMethod method);

// Convenience wrappers returning just the samples.
std::vector<cplx> stream_via_green(const std::vector<cplx>& omega, int k,
                                   const RadialGrid& grid);
std::vector<cplx> stream_via_tridiag(const std::vector<cplx>& omega, int k,
                                     const RadialGrid& grid);

// The discrete operator (∂_v^2 - k^2) with Robin rows ∂_vφ = +|k|φ at v_min
// and ∂_vφ = -|k|φ at v_max (ghost-point elimination, second order).  In these
// variables Δ_k ψ = ω reads (∂_v^2 - k^2) φ = e^{2v} ω.  Shared with the
// spectral module, which adds a potential on the diagonal.
Tridiag make_mode_laplacian(int k, const RadialGrid& grid);

// Interior centered-difference residual of (∂_v^2 - k^2)φ = e^{2v}ω,
// max-normed relative to max|e^{2v}ω|.
double mode_laplacian_residual(const std::vector<cplx>& psi, const std::vector<cplx>& omega,
                               int k, const RadialGrid& grid);

void write_stream_csv(std::ostream& os, const std::vector<cplx>& psi, const RadialGrid& grid);

}  // namespace vortexsym
