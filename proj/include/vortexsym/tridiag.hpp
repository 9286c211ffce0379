#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace vortexsym {

using cplx = std::complex<double>;

// Complex tridiagonal system solved by the Thomas algorithm.  lower[0] and
// upper[n-1] are unused.  The systems assembled in this project are strictly
// diagonally dominant in the real part away from critical layers; the
// residual is always checked by callers that need a guarantee.
struct Tridiag {
  std::vector<cplx> lower, diag, upper;

  int size() const { return static_cast<int>(diag.size()); }

  std::vector<cplx> solve(const std::vector<cplx>& rhs) const {
    int n = size();
    std::vector<cplx> c(n), d(n), x(n);
    cplx piv = diag[0];
    if (piv == cplx(0.0)) throw std::runtime_error("Tridiag::solve: zero pivot");
    c[0] = upper[0] / piv;
    d[0] = rhs[0] / piv;
    for (int i = 1; i < n; ++i) {
      piv = diag[i] - lower[i] * c[i - 1];
      if (piv == cplx(0.0)) throw std::runtime_error("Tridiag::solve: zero pivot");
      if (i < n - 1) c[i] = upper[i] / piv;
      d[i] = (rhs[i] - lower[i] * d[i - 1]) / piv;
    }
    x[n - 1] = d[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
    return x;
  }

  std::vector<cplx> apply(const std::vector<cplx>& x) const {
    int n = size();
    std::vector<cplx> y(n);
    for (int i = 0; i < n; ++i) {
      y[i] = diag[i] * x[i];
      if (i > 0) y[i] += lower[i] * x[i - 1];
      if (i + 1 < n) y[i] += upper[i] * x[i + 1];
    }
    return y;
  }

  // inf-norm relative residual ||Ax - b|| / ||b||.
  double residual(const std::vector<cplx>& x, const std::vector<cplx>& rhs) const {
    std::vector<cplx> y = apply(x);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < size(); ++i) {
      num = std::max(num, std::abs(y[i] - rhs[i]));
      den = std::max(den, std::abs(rhs[i]));
    }
    return den > 0.0 ? num / den : num;
  }
};

}  // namespace vortexsym
