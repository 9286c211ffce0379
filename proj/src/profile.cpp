#include "vortexsym/profile.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>

namespace vortexsym {

namespace {

// Linear interpolation of a tabulation on the uniform v-grid, clamped at the ends.
struct VTab {
  std::shared_ptr<std::vector<double>> y;
  double v_min, h;
  int n;
  double operator()(double v) const {
    double x = (v - v_min) / h;
    if (x <= 0.0) return (*y)[0];
    if (x >= n - 1) return (*y)[n - 1];
    int i = static_cast<int>(x);
    double f = x - i;
    return (1.0 - f) * (*y)[i] + f * (*y)[i + 1];
  }
};

VTab make_vtab(std::vector<double> vals, const RadialGrid& g) {
  return VTab{std::make_shared<std::vector<double>>(std::move(vals)), g.v_min, g.h, g.n};
}

// Centered first derivative in v; second-order one-sided at the ends.
std::vector<double> deriv_v(const std::vector<double>& y, double h) {
  int n = static_cast<int>(y.size());
  std::vector<double> d(n);
  for (int i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2 * h);
  d[0] = (-3 * y[0] + 4 * y[1] - y[2]) / (2 * h);
  d[n - 1] = (3 * y[n - 1] - 4 * y[n - 2] + y[n - 3]) / (2 * h);
  return d;
}

double sq(double x) { return x * x; }

}  // namespace

bool AssumptionReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

VortexProfile make_canonical_profile(double A) {
  if (!(A > 0.0)) throw std::invalid_argument("make_canonical_profile: need A > 0");

  VortexProfile p;
  p.amplitude = A;
  p.c_star = -6.0 * A;
  p.b0 = A / 16.0;
  p.Omega = [A](double r) { return A / std::pow(2.0 + r * r, 3); };
  p.dOmega = [A](double r) { return -6.0 * A * r / std::pow(2.0 + r * r, 4); };
  p.U = [A](double r) { return (A / (4.0 * r)) * (0.25 - 1.0 / sq(2.0 + r * r)); };
  // b = U/r simplified to A (r^2 + 4) / (16 (2 + r^2)^2), regular at r = 0.
  p.b = [A](double r) {
    double x = r * r;
    return A * (x + 4.0) / (16.0 * sq(2.0 + x));
  };
  p.d = [A](double r) { return -6.0 * A / std::pow(2.0 + r * r, 4); };
  p.B = [A](double v) {
    double x = std::exp(2.0 * v);
    return A * (x + 4.0) / (16.0 * sq(2.0 + x));
  };
  p.D = [A](double v) {
    double x = std::exp(2.0 * v);
    return -6.0 * A / std::pow(2.0 + x, 4);
  };
  p.dB = [A](double v) {
    double x = std::exp(2.0 * v);
    return -A * x * (x + 6.0) / (8.0 * std::pow(2.0 + x, 3));
  };
  // B(v) - B(w) = A (y - x)(12 + xy + 4(x + y)) / (16 (2+x)^2 (2+y)^2),
  // x = e^{2v}, y = e^{2w}; exact, no cancellation for v near w.
  p.B_diff = [A](double v, double w) {
    double x = std::exp(2.0 * v), y = std::exp(2.0 * w);
    return A * (y - x) * (12.0 + x * y + 4.0 * (x + y)) / (16.0 * sq(2.0 + x) * sq(2.0 + y));
  };
  return p;
}

std::vector<double> velocity_from_vorticity(const std::vector<double>& omega,
                                            const RadialGrid& grid) {
  if (static_cast<int>(omega.size()) != grid.n)
    throw std::invalid_argument("velocity_from_vorticity: size mismatch");

  // Integrability near r = 0: reject |Omega| growing faster than r^{-2+delta}.
  if (std::abs(omega[0]) > 0.0 && std::abs(omega[8]) > 0.0) {
    double slope = (std::log(std::abs(omega[8])) - std::log(std::abs(omega[0]))) /
                   (grid.v[8] - grid.v[0]);
    if (slope <= -2.0)
      throw std::invalid_argument("velocity_from_vorticity: Omega not integrable against r dr");
  }

  std::vector<double> U(grid.n);
  // First cell: integrand ~ s Omega(0), so ∫_0^{r_0} s Omega ds ≈ Omega(r_0) r_0^2 / 2.
  double cum = omega[0] * grid.r[0] * grid.r[0] / 2.0;
  U[0] = cum / grid.r[0];
  for (int i = 1; i < grid.n; ++i) {
    double dr = grid.r[i] - grid.r[i - 1];
    cum += 0.5 * dr * (grid.r[i] * omega[i] + grid.r[i - 1] * omega[i - 1]);
    U[i] = cum / grid.r[i];
  }
  return U;
}

VortexProfile make_profile_from_omega(const std::function<double(double)>& omega_of_r,
                                      const RadialGrid& grid) {
  std::vector<double> om(grid.n), b_tab(grid.n), d_tab(grid.n);
  for (int i = 0; i < grid.n; ++i) om[i] = omega_of_r(grid.r[i]);
  std::vector<double> U_tab = velocity_from_vorticity(om, grid);
  std::vector<double> dom_dv = deriv_v(om, grid.h);  // ∂_v Omega = r Omega'
  for (int i = 0; i < grid.n; ++i) {
    b_tab[i] = U_tab[i] / grid.r[i];
    d_tab[i] = dom_dv[i] / (grid.r[i] * grid.r[i]);  // Omega'/r
  }
  std::vector<double> dB_tab = deriv_v(b_tab, grid.h);

  VortexProfile p;
  p.amplitude = om[0];
  p.c_star = d_tab[0] * std::pow(2.0 + grid.r[0] * grid.r[0], 4);
  p.b0 = b_tab[0];
  VTab tom = make_vtab(om, grid), tU = make_vtab(U_tab, grid);
  VTab tb = make_vtab(b_tab, grid), td = make_vtab(d_tab, grid);
  VTab tdB = make_vtab(dB_tab, grid);
  VTab tdom = make_vtab(dom_dv, grid);
  p.Omega = [tom](double r) { return tom(std::log(r)); };
  p.dOmega = [tdom](double r) { return tdom(std::log(r)) / r; };
  p.U = [tU](double r) { return tU(std::log(r)); };
  p.b = [tb](double r) { return tb(std::log(r)); };
  p.d = [td](double r) { return td(std::log(r)); };
  p.B = tb;
  p.D = td;
  p.dB = tdB;
  p.B_diff = [tb](double v, double w) { return tb(v) - tb(w); };
  return p;
}

AssumptionReport verify_assumptions(const VortexProfile& p, const RadialGrid& grid,
                                    int j_max) {
  if (j_max > 4) throw std::invalid_argument("verify_assumptions: j_max <= 4");
  AssumptionReport rep;
  const int n = grid.n;
  auto add = [&rep](std::string name, bool pass, double c, std::string detail = "") {
    rep.checks.push_back({std::move(name), pass, c, std::move(detail)});
  };
  auto fact2 = [](int j) {
    double f = 1.0;
    for (int i = 2; i <= j; ++i) f *= i;
    return f * f;  // (j!)^2
  };

  // Positivity and monotonicity of Omega.
  bool pos = true, mono = true;
  for (int i = 0; i < n; ++i) {
    if (!(p.Omega(grid.r[i]) > 0.0)) pos = false;
    if (!(p.dOmega(grid.r[i]) < 0.0)) mono = false;
  }
  add("Omega positive", pos, 0.0);
  add("Omega strictly decreasing", mono, 0.0);

  // b strictly decreasing, d negative, b(2+r^2) two-sided.
  bool b_mono = true, d_neg = true;
  double blo = std::numeric_limits<double>::infinity(), bhi = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n && !(p.b(grid.r[i + 1]) < p.b(grid.r[i]))) b_mono = false;
    if (!(p.d(grid.r[i]) < 0.0)) d_neg = false;
    double ratio = p.b(grid.r[i]) * (2.0 + grid.r[i] * grid.r[i]);
    blo = std::min(blo, ratio);
    bhi = std::max(bhi, ratio);
  }
  add("b strictly decreasing", b_mono, 0.0);
  add("d negative", d_neg, 0.0);
  add("b*(2+r^2) two-sided", blo > 0.0 && std::isfinite(bhi), bhi,
      "lo=" + std::to_string(blo));

  // Remainder law: |∂_v^j (d(r) - c_*/<r>^8)| <= C^{j+1} (j!)^2 r^2 / <r>^10.
  {
    std::vector<double> R(n);
    for (int i = 0; i < n; ++i)
      R[i] = p.d(grid.r[i]) - p.c_star / std::pow(2.0 + grid.r[i] * grid.r[i], 4);
    double C = 0.0;
    bool ok = true;
    std::vector<double> cur = R;
    for (int j = 0; j <= j_max; ++j) {
      for (int i = 2 * j_max; i < n - 2 * j_max; ++i) {
        double x = grid.r[i] * grid.r[i];
        double env = fact2(j) * x / std::pow(2.0 + x, 5);
        double c = std::pow(std::abs(cur[i]) / env, 1.0 / (j + 1));
        if (!std::isfinite(c)) ok = false;
        C = std::max(C, c);
      }
      cur = deriv_v(cur, grid.h);
    }
    add("remainder law for Omega'/r", ok && std::isfinite(C), C);
  }

  // D(v) envelope for derivatives 1..j_max.
  {
    std::vector<double> Dv(n);
    for (int i = 0; i < n; ++i) Dv[i] = p.D(grid.v[i]);
    double C = 0.0;
    bool ok = true;
    std::vector<double> cur = Dv;
    for (int j = 1; j <= j_max; ++j) {
      cur = deriv_v(cur, grid.h);
      for (int i = 2 * j_max; i < n - 2 * j_max; ++i) {
        double x = std::exp(2.0 * grid.v[i]);
        double env = fact2(j) * x / std::pow(1.0 + x, 5);
        double c = std::pow(std::abs(cur[i]) / env, 1.0 / j);
        if (!std::isfinite(c)) ok = false;
        C = std::max(C, c);
      }
    }
    add("D derivative envelope", ok && std::isfinite(C), C);
  }

  // B two-sided and ∂_vB negative + two-sided.
  {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    double dlo = std::numeric_limits<double>::infinity(), dhi = 0.0;
    bool dB_neg = true;
    for (int i = 0; i < n; ++i) {
      double x = std::exp(2.0 * grid.v[i]);
      double rb = p.B(grid.v[i]) * (1.0 + x);
      lo = std::min(lo, rb);
      hi = std::max(hi, rb);
      double db = p.dB(grid.v[i]);
      if (!(db < 0.0)) dB_neg = false;
      double rd = std::abs(db) * sq(1.0 + x) / x;
      dlo = std::min(dlo, rd);
      dhi = std::max(dhi, rd);
    }
    add("B ~ 1/(1+e^{2v}) two-sided", lo > 0.0 && std::isfinite(hi), hi,
        "lo=" + std::to_string(lo));
    add("dB negative", dB_neg, 0.0);
    add("|dB| ~ e^{2v}/(1+e^{2v})^2 two-sided", dlo > 0.0 && std::isfinite(dhi), dhi,
        "lo=" + std::to_string(dlo));
  }

  // Small-r law: ∂_vB = (d(0)/4) e^{2v} + O(e^{4v}) for v < -2.  The fitted
  // constant must not grow as v -> v_min, else the e^{2v} coefficient is wrong.
  {
    double d0 = p.D(grid.v_min);
    double deep = 0.0, shallow = 0.0;
    double v_mid = 0.5 * (grid.v_min - 2.0);
    bool have = false;
    for (int i = 0; i < n; ++i) {
      double v = grid.v[i];
      if (v >= -2.0) break;
      double ratio = std::abs(p.dB(v) - 0.25 * d0 * std::exp(2.0 * v)) / std::exp(4.0 * v);
      if (v < v_mid) deep = std::max(deep, ratio);
      else shallow = std::max(shallow, ratio);
      have = true;
    }
    double C = std::max(deep, shallow);
    bool ok = have && std::isfinite(C) && deep <= 10.0 * shallow + 1e-12;
    add("small-r law dB = (d0/4) e^{2v} + O(e^{4v})", ok, C);
  }

  return rep;
}

void write_profile_csv(std::ostream& os, const VortexProfile& p, const RadialGrid& grid) {
  os << "v,r,Omega,U,b,d,B,D,dB\n";
  char buf[512];
  for (int i = 0; i < grid.n; ++i) {
    double v = grid.v[i], r = grid.r[i];
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", v, r,
                  p.Omega(r), p.U(r), p.b(r), p.d(r), p.B(v), p.D(v), p.dB(v));
    os << buf;
  }
}

}  // namespace vortexsym
