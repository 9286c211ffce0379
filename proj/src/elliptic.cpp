#include "vortexsym/elliptic.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace vortexsym {

double green_kernel(int k, double r, double rho) {
  if (k == 0) throw std::invalid_argument("green_kernel: k = 0 mode not supported");
  double ak = std::abs(k);
  double q = r < rho ? r / rho : rho / r;
  return rho / (2.0 * ak) * std::pow(q, ak);
}

Tridiag make_mode_laplacian(int k, const RadialGrid& grid) {
  if (k == 0) throw std::invalid_argument("make_mode_laplacian: k = 0 mode not supported");
  int n = grid.n;
  double h = grid.h, ak = std::abs(k);
  double ih2 = 1.0 / (h * h);
  Tridiag T;
  T.lower.assign(n, 0.0);
  T.diag.assign(n, 0.0);
  T.upper.assign(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    T.lower[i] = ih2;
    T.diag[i] = -2.0 * ih2 - ak * ak;
    T.upper[i] = ih2;
  }
  T.diag[0] = -2.0 * ih2 - 2.0 * ak / h - ak * ak;
  T.upper[0] = 2.0 * ih2;
  T.diag[n - 1] = -2.0 * ih2 - 2.0 * ak / h - ak * ak;
  T.lower[n - 1] = 2.0 * ih2;
  return T;
}

double mode_laplacian_residual(const std::vector<cplx>& psi, const std::vector<cplx>& omega,
                               int k, const RadialGrid& grid) {
  // Residual of the v-form (∂_v^2 - k^2)φ = e^{2v}ω; the r-form divides by
  // e^{2v} and would amplify roundoff near the origin without meaning.
  double h = grid.h, num = 0.0, den = 0.0;
  for (int i = 0; i < grid.n; ++i)
    den = std::max(den, grid.r[i] * grid.r[i] * std::abs(omega[i]));
  for (int i = 1; i + 1 < grid.n; ++i) {
    double e2v = grid.r[i] * grid.r[i];
    cplx lap = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) / (h * h);
    cplx res = lap - double(k) * double(k) * psi[i] - e2v * omega[i];
    num = std::max(num, std::abs(res));
  }
  return den > 0.0 ? num / den : num;
}

EllipticSolve solve_stream(const std::vector<cplx>& omega, int k, const RadialGrid& grid,
                           EllipticMethod method) {
  if (k == 0) throw std::invalid_argument("solve_stream: k = 0 mode not supported");
  if (static_cast<int>(omega.size()) != grid.n)
    throw std::invalid_argument("solve_stream: size mismatch");

  EllipticSolve out;
  out.k = k;
  out.method = method;

  double amax = 0.0;
  for (const auto& w : omega) amax = std::max(amax, std::abs(w));
  out.end_decay_ok =
      std::abs(omega.front()) < 1e-8 * amax && std::abs(omega.back()) < 1e-8 * amax;

  if (method == EllipticMethod::green) {
    // O(n^2) quadrature against the kernel, cross-validation path.
    out.psi.assign(grid.n, 0.0);
    for (int i = 0; i < grid.n; ++i) {
      cplx s = 0.0;
      for (int j = 0; j < grid.n; ++j)
        s += green_kernel(k, grid.r[i], grid.r[j]) * omega[j] * grid.w_dr[j];
      out.psi[i] = -s;
    }
  } else {
    Tridiag T = make_mode_laplacian(k, grid);
    std::vector<cplx> rhs(grid.n);
    for (int i = 0; i < grid.n; ++i) rhs[i] = grid.r[i] * grid.r[i] * omega[i];
    out.psi = T.solve(rhs);
  }
  out.residual = mode_laplacian_residual(out.psi, omega, k, grid);
  return out;
}

std::vector<cplx> stream_via_green(const std::vector<cplx>& omega, int k,
                                   const RadialGrid& grid) {
  return solve_stream(omega, k, grid, EllipticMethod::green).psi;
}

std::vector<cplx> stream_via_tridiag(const std::vector<cplx>& omega, int k,
                                     const RadialGrid& grid) {
  return solve_stream(omega, k, grid, EllipticMethod::tridiag).psi;
}

void write_stream_csv(std::ostream& os, const std::vector<cplx>& psi, const RadialGrid& grid) {
  os << "v,Re_psi,Im_psi\n";
  char buf[256];
  for (int i = 0; i < grid.n; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.v[i], psi[i].real(),
                  psi[i].imag());
    os << buf;
  }
}

}  // namespace vortexsym
