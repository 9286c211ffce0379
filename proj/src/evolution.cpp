#include "vortexsym/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "vortexsym/cutoffs.hpp"

namespace vortexsym {

namespace {

const cplx I(0.0, 1.0);

double moment_r2(const std::vector<cplx>& om, const RadialGrid& g) {
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) s += om[i].real() * g.w_rdr[i] * g.r[i];
  return s;
}

}  // namespace

InitialData make_initial_data(int k, DataShape shape, const RadialGrid& grid,
                              const VortexProfile& profile, double sigma_k,
                              const std::vector<cplx>* custom) {
  if (k == 0) throw std::invalid_argument("make_initial_data: k = 0 mode does not evolve");
  int ak = std::abs(k);

  InitialData d;
  d.k = k;
  d.sigma_k = (shape == DataShape::sigma) ? sigma_k : 0.0;
  d.omega0.assign(grid.n, 0.0);
  d.F0k.assign(grid.n, 0.0);

  std::vector<double> sigma_piece(grid.n, 0.0);
  if (shape == DataShape::sigma) {
    for (int i = 0; i < grid.n; ++i)
      sigma_piece[i] = (d.sigma_k / profile.c_star) * profile.D(grid.v[i]) *
                       std::exp(ak * grid.v[i]) * phi0(grid.v[i]);
  }

  if (shape == DataShape::custom) {
    if (!custom || static_cast<int>(custom->size()) != grid.n)
      throw std::invalid_argument("make_initial_data: custom data missing or wrong size");
    double amax = 0.0;
    for (const auto& w : *custom) amax = std::max(amax, std::abs(w));
    if (std::abs(custom->front()) >= 1e-8 * amax || std::abs(custom->back()) >= 1e-8 * amax)
      throw std::invalid_argument("make_initial_data: custom data violates end decay");
    d.omega0 = *custom;
  } else {
    for (int i = 0; i < grid.n; ++i) {
      double r = grid.r[i];
      d.omega0[i] = std::pow(r, ak + 2) * std::pow(2.0 + r * r, -(ak + 6)) + sigma_piece[i];
    }
  }

  if (ak == 1) {
    // Project out the r^2 moment with p2 = r^3 (2+r^2)^{-8}.
    std::vector<cplx> p2(grid.n);
    for (int i = 0; i < grid.n; ++i)
      p2[i] = std::pow(grid.r[i], 3) * std::pow(2.0 + grid.r[i] * grid.r[i], -8);
    double mu = moment_r2(d.omega0, grid) / moment_r2(p2, grid);
    for (int i = 0; i < grid.n; ++i) d.omega0[i] -= mu * p2[i];
  }

  for (int i = 0; i < grid.n; ++i) d.F0k[i] = d.omega0[i].real() - sigma_piece[i];
  return d;
}

ModeEvolver::ModeEvolver(int k, const VortexProfile& profile, const RadialGrid& grid)
    : k_(k), grid_(grid) {
  if (k == 0) throw std::invalid_argument("ModeEvolver: k = 0 mode does not evolve");
  B_.resize(grid.n);
  d_.resize(grid.n);
  e2v_.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    B_[i] = profile.B(grid.v[i]);
    d_[i] = profile.d(grid.r[i]);
    e2v_[i] = grid.r[i] * grid.r[i];
  }
  T_ = make_mode_laplacian(k, grid);
}

ModeState ModeEvolver::initial_state(const InitialData& data) const {
  ModeState s;
  s.k = k_;
  s.t = 0.0;
  s.omega = data.omega0;
  s.g = data.omega0;  // e^{ikB·0} = 1
  return s;
}

std::vector<cplx> ModeEvolver::rhs(double t, const std::vector<cplx>& g) const {
  int n = grid_.n;
  std::vector<cplx> f(n);
  for (int i = 0; i < n; ++i)
    f[i] = e2v_[i] * std::exp(-I * (double(k_) * B_[i] * t)) * g[i];
  std::vector<cplx> psi = T_.solve(f);
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = I * double(k_) * d_[i] * std::exp(I * (double(k_) * B_[i] * t)) * psi[i];
  return out;
}

void ModeEvolver::step(ModeState& state, double dt) const {
  int n = grid_.n;
  double norm0 = 0.0;
  for (const auto& x : state.g) norm0 = std::max(norm0, std::abs(x));

  std::vector<cplx> k1 = rhs(state.t, state.g), tmp(n);
  for (int i = 0; i < n; ++i) tmp[i] = state.g[i] + 0.5 * dt * k1[i];
  std::vector<cplx> k2 = rhs(state.t + 0.5 * dt, tmp);
  for (int i = 0; i < n; ++i) tmp[i] = state.g[i] + 0.5 * dt * k2[i];
  std::vector<cplx> k3 = rhs(state.t + 0.5 * dt, tmp);
  for (int i = 0; i < n; ++i) tmp[i] = state.g[i] + dt * k3[i];
  std::vector<cplx> k4 = rhs(state.t + dt, tmp);

  double norm1 = 0.0;
  for (int i = 0; i < n; ++i) {
    state.g[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    norm1 = std::max(norm1, std::abs(state.g[i]));
  }
  state.t += dt;
  if (norm0 > 0.0 && norm1 > 1.01 * norm0) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "ModeEvolver::step: instability, ||g|| grew %.3g%% at t=%.6g (k=%d, dt=%.3g)",
                  100.0 * (norm1 / norm0 - 1.0), state.t, k_, dt);
    throw std::runtime_error(msg);
  }
  for (int i = 0; i < n; ++i)
    state.omega[i] = std::exp(-I * (double(k_) * B_[i] * state.t)) * state.g[i];
}

void ModeEvolver::advance(ModeState& state, double t_end, double dt) const {
  while (state.t < t_end - 1e-12) {
    double step_dt = std::min(dt, t_end - state.t);
    step(state, step_dt);
  }
}

double ModeEvolver::energy(const ModeState& state) const {
  double e = 0.0;
  for (int i = 0; i < grid_.n; ++i)
    e += std::norm(state.g[i]) / (-d_[i]) * grid_.w_rdr[i];
  return e;
}

std::vector<cplx> ModeEvolver::stream(const ModeState& state) const {
  std::vector<cplx> f(grid_.n);
  for (int i = 0; i < grid_.n; ++i) f[i] = e2v_[i] * state.omega[i];
  return T_.solve(f);
}

void step(ModeState& state, double dt, const VortexProfile& profile, const RadialGrid& grid) {
  ModeEvolver(state.k, profile, grid).step(state, dt);
}

double conserved_energy(const ModeState& state, const VortexProfile& profile,
                        const RadialGrid& grid) {
  double e = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    double d = profile.d(grid.r[i]);
    if (!(d < 0.0)) throw std::invalid_argument("conserved_energy: requires d(r) < 0");
    e += std::norm(state.omega[i]) / (-d) * grid.w_rdr[i];
  }
  return e;
}

cplx observable(const ModeState& state, const std::vector<double>& eta,
                const RadialGrid& grid) {
  int n = grid.n, ak = std::abs(state.k);
  double emax = 0.0;
  for (double x : eta) emax = std::max(emax, std::abs(x));

  // η must vanish at the origin at least like r^k where it is nonzero there.
  int i0 = 0;
  while (i0 < n && std::abs(eta[i0]) < 1e-300) ++i0;
  if (i0 < 8 && std::abs(eta[i0]) > 1e-12 * emax) {
    int i1 = i0 + 32;
    if (i1 < n && std::abs(eta[i1]) > 0.0) {
      double slope = (std::log(std::abs(eta[i1])) - std::log(std::abs(eta[i0]))) /
                     (grid.v[i1] - grid.v[i0]);
      if (slope < ak - 0.1)
        throw std::invalid_argument("observable: eta is not O(r^k) near r = 0");
    }
  }
  // A weight ~ r^k is still O(r_min^k) at the inner end; only flag values in
  // excess of that natural decay, or any mass at the outer end.
  double inner_floor = 10.0 * std::pow(grid.r.front(), ak) * emax;
  if (std::abs(eta.front()) > std::max(inner_floor, 1e-10 * emax) ||
      std::abs(eta.back()) > 1e-10 * emax)
    std::fprintf(stderr, "observable: warning, eta support reaches grid ends\n");

  cplx s = 0.0;
  for (int i = 0; i < n; ++i) s += state.omega[i] * eta[i] * grid.w_rdr[i];
  return s;
}

std::vector<double> harmonic_weight(int k, const RadialGrid& grid) {
  int n = grid.n, ak = std::abs(k);
  std::vector<cplx> eta(n);
  for (int i = 0; i < n; ++i) eta[i] = std::pow(grid.r[i], ak) * varrho(grid.r[i]);
  Tridiag T = make_mode_laplacian(k, grid);
  std::vector<cplx> lap = T.apply(eta);
  std::vector<double> H(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (grid.r[i] <= 0.125) continue;  // Δ_k[r^k] = 0 where ϱ ≡ 1
    H[i] = lap[i].real() / (grid.r[i] * grid.r[i]);
  }
  return H;
}

cplx observable_via_stream(const std::vector<cplx>& psi, int k, const RadialGrid& grid) {
  std::vector<double> H = harmonic_weight(k, grid);
  cplx s = 0.0;
  for (int i = 0; i < grid.n; ++i) s += psi[i] * H[i] * grid.w_rdr[i];
  return s;
}

}  // namespace vortexsym
