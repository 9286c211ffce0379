#include "vortexsym/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vortexsym {

int RadialGrid::index_of(double v0) const {
  double x = (v0 - v_min) / h;
  int i = static_cast<int>(std::lround(x));
  return std::clamp(i, 0, n - 1);
}

RadialGrid make_grid(double v_min, double v_max, int n) {
  if (n < 33) throw std::invalid_argument("make_grid: need n >= 33");
  if (!(v_min < v_max)) throw std::invalid_argument("make_grid: need v_min < v_max");

  RadialGrid g;
  g.v_min = v_min;
  g.v_max = v_max;
  g.n = n;
  g.h = (v_max - v_min) / (n - 1);
  g.v.resize(n);
  g.r.resize(n);
  g.w_dv.resize(n);
  g.w_dr.resize(n);
  g.w_rdr.resize(n);
  for (int i = 0; i < n; ++i) {
    g.v[i] = v_min + i * g.h;
    g.r[i] = std::exp(g.v[i]);
    double w = (i == 0 || i == n - 1) ? 0.5 * g.h : g.h;
    g.w_dv[i] = w;
    g.w_dr[i] = w * g.r[i];
    g.w_rdr[i] = w * g.r[i] * g.r[i];
  }
  return g;
}

double dvw(double v, double w) {
  double lo = std::max(std::min(v, w), std::min(w, 0.0));
  double hi = std::min(std::max(v, w), 0.0);
  return std::max(0.0, hi - lo);
}

}  // namespace vortexsym
