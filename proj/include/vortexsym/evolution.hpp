#pragma once

#include <complex>
#include <vector>

#include "vortexsym/elliptic.hpp"
#include "vortexsym/grid.hpp"
#include "vortexsym/profile.hpp"

namespace vortexsym {

// One azimuthal mode.  g is the unwound profile g = e^{ikB(v)t} ω, which the
// integrator advances; ω is kept in sync.
struct ModeState {
  int k = 0;
  double t = 0.0;
  std::vector<cplx> omega;
  std::vector<cplx> g;
};

enum class DataShape { basic, sigma, custom };

struct InitialData {
  int k = 0;
  double sigma_k = 0.0;
  std::vector<double> F0k;     // datum minus the (σ_k/c_*) D e^{|k|v} Φ_0 piece
  std::vector<cplx> omega0;
};

// basic: ω_0k = r^{k+2} (2+r^2)^{-(k+6)}.  sigma: adds (σ_k/c_*) D e^{|k|v} Φ_0.
// For k = 1 the r^2-moment is projected out so ∫ ω_01 r^2 dr = 0.
// Throws for k = 0 and for custom data violating end decay.
InitialData make_initial_data(int k, DataShape shape, const RadialGrid& grid,
                              const VortexProfile& profile, double sigma_k = 1.0,
                              const std::vector<cplx>* custom = nullptr);

// RK4 integrator for ∂_t g = ik d(r) e^{ikBt} ψ_k[e^{-ikBt} g] with the
// stream function from the tridiagonal solver at each stage.  Profile samples
// and the factored operator are cached per (k, grid).
class ModeEvolver {
 public:
  ModeEvolver(int k, const VortexProfile& profile, const RadialGrid& grid);

  ModeState initial_state(const InitialData& data) const;
  // Throws std::runtime_error if ||g|| grows by more than 1% in one step.
  void step(ModeState& state, double dt) const;
  void advance(ModeState& state, double t_end, double dt) const;
  double energy(const ModeState& state) const;  // ∫ |ω|^2 / (-d) r dr
  std::vector<cplx> stream(const ModeState& state) const;

  const RadialGrid& grid() const { return grid_; }

 private:
  std::vector<cplx> rhs(double t, const std::vector<cplx>& g) const;

  int k_;
  RadialGrid grid_;
  std::vector<double> B_, d_, e2v_;
  Tridiag T_;
};

// One-off wrappers matching the per-operation contracts.
void step(ModeState& state, double dt, const VortexProfile& profile, const RadialGrid& grid);
double conserved_energy(const ModeState& state, const VortexProfile& profile,
                        const RadialGrid& grid);

// ∫ ω_k η_k r dr.  Requires η_k = O(r^k) near 0 (log-log slope >= k - 0.1
// where η is nonzero near the origin); warns on stderr when the support of
// η reaches the grid ends.
cplx observable(const ModeState& state, const std::vector<double>& eta,
                const RadialGrid& grid);

// Mode form of Δ[r^k ϱ(r)], computed with the discrete mode Laplacian so the
// lift identity below holds to roundoff; identically zero for r <= 1/8.
std::vector<double> harmonic_weight(int k, const RadialGrid& grid);

// ∫ ψ_k H_k r dr — the harmonic lift of ∫ r^k ω_k ϱ r dr.
cplx observable_via_stream(const std::vector<cplx>& psi, int k, const RadialGrid& grid);

}  // namespace vortexsym
