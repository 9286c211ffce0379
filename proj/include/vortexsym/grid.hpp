#pragma once

#include <vector>

namespace vortexsym {

// Uniform grid in v = log r shared by all modules. Quadrature weights are
// trapezoid weights in v transformed by the Jacobians dr = e^v dv and
// r dr = e^{2v} dv.
struct RadialGrid {
  double v_min = 0.0;
  double v_max = 0.0;
  int n = 0;
  double h = 0.0;
  std::vector<double> v;      // nodes in v
  std::vector<double> r;      // r = e^v
  std::vector<double> w_dv;   // weights for  ∫ f dv
  std::vector<double> w_dr;   // weights for  ∫ f dr
  std::vector<double> w_rdr;  // weights for  ∫ f r dr

  // Index of the grid node closest to v0.
  int index_of(double v0) const;
};

// Throws std::invalid_argument for n < 33 or v_min >= v_max.
RadialGrid make_grid(double v_min, double v_max, int n);

// Length of [min{v,w}, max{v,w}] ∩ [min{w,0}, 0].
double dvw(double v, double w);

}  // namespace vortexsym
