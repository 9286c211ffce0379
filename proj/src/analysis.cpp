#include "vortexsym/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "vortexsym/cutoffs.hpp"

namespace vortexsym {

namespace {

constexpr double kPi = std::numbers::pi;

// Trapezoid weights over the (possibly non-uniform) w-column abscissae.
std::vector<double> column_weights(const std::vector<double>& w) {
  int m = static_cast<int>(w.size());
  std::vector<double> q(m, 0.0);
  if (m < 2) return q;
  q[0] = 0.5 * (w[1] - w[0]);
  for (int j = 1; j + 1 < m; ++j) q[j] = 0.5 * (w[j + 1] - w[j - 1]);
  q[m - 1] = 0.5 * (w[m - 1] - w[m - 2]);
  return q;
}

void check_phase(double t, int k, const std::vector<double>& w, double dmax) {
  double hmax = 0.0;
  for (size_t j = 0; j + 1 < w.size(); ++j) hmax = std::max(hmax, w[j + 1] - w[j]);
  if (std::abs(k) * dmax * std::abs(t) * hmax > 0.5)
    throw std::runtime_error("oscillatory phase under-resolved on the w-grid");
}

double max_abs(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

struct ColumnCache {
  std::vector<double> q, Bw, dBw;
};

ColumnCache cache_columns(const SpectralDensityTable& tab, const VortexProfile& p) {
  ColumnCache c;
  c.q = column_weights(tab.w);
  c.Bw.resize(tab.w.size());
  c.dBw.resize(tab.w.size());
  for (size_t j = 0; j < tab.w.size(); ++j) {
    c.Bw[j] = p.B(tab.w[j]);
    c.dBw[j] = p.dB(tab.w[j]);
  }
  return c;
}

cplx nonlocal_row(double t, int i, const SpectralDensityTable& tab,
                  const ColumnCache& c, const VortexProfile& p, const RadialGrid& g,
                  const std::function<double(double)>& cutoff) {
  double v = g.v[i];
  double Bv = p.B(v);
  cplx s = 0.0;
  for (int j = 0; j < tab.cols(); ++j) {
    double far = 1.0 - cutoff(v - tab.w[j]);
    if (far == 0.0) continue;
    cplx phase = std::polar(1.0, -tab.k * c.Bw[j] * t);
    s += phase * tab.gamma[j][i] * far * c.dBw[j] / (Bv - c.Bw[j]) * c.q[j];
  }
  return s * (-p.D(v) / (2.0 * kPi));
}

// Linear fit through two samples, evaluated at x.
cplx extrapolate(double x, double x1, cplx y1, double x2, cplx y2) {
  return y1 + (y1 - y2) * ((x - x1) / (x1 - x2));
}

}  // namespace

DecayFit fit_decay(const std::vector<double>& times, const std::vector<cplx>& values) {
  int n = static_cast<int>(times.size());
  if (values.size() != times.size())
    throw std::invalid_argument("fit_decay: times/values size mismatch");
  if (n < 8) throw std::invalid_argument("fit_decay: needs at least 8 samples");
  for (int i = 0; i < n; ++i) {
    if (times[i] <= 0.0) throw std::invalid_argument("fit_decay: times must be positive");
    if (i > 0 && times[i] <= times[i - 1])
      throw std::invalid_argument("fit_decay: times must be strictly increasing");
  }
  if (times.back() < 10.0 * times.front() * (1.0 - 1e-12))
    throw std::invalid_argument("fit_decay: window must span at least one decade");
  double floor = 1e-12 * std::abs(values.front());
  for (const cplx& z : values)
    if (std::abs(z) <= floor)
      throw std::runtime_error("fit_decay: value at the quadrature noise floor");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = std::log(times[i]);
    ys[i] = std::log(std::abs(values[i]));
    sx += xs[i];
    sy += ys[i];
  }
  double xbar = sx / n, ybar = sy / n;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  double slope = sxy / sxx;
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = ys[i] - ybar - slope * (xs[i] - xbar);
    rss += r * r;
  }
  DecayFit fit;
  fit.exponent = -slope;
  fit.std_error = std::sqrt(rss / (n - 2) / sxx);
  fit.t_lo = times.front();
  fit.t_hi = times.back();
  fit.n_points = n;
  return fit;
}

double expected_exponent(int k) { return 1.0 + std::sqrt(double(k) * k + 8.0); }

SplitResult local_nonlocal_split(double t, const SpectralDensityTable& table,
                                 const VortexProfile& profile, const RadialGrid& grid,
                                 const std::vector<cplx>* reference, int v_stride,
                                 double exclusion,
                                 const std::function<double(double)>& cutoff) {
  if (table.cols() < 8) throw std::invalid_argument("split: table too small");
  if (v_stride < 1) throw std::invalid_argument("split: v_stride must be >= 1");
  const std::function<double(double)> window =
      cutoff ? cutoff : std::function<double(double)>(
                            [](double s) { return phi_star(s); });
  ColumnCache c = cache_columns(table, profile);
  check_phase(t, table.k, table.w, max_abs(c.dBw));
  double gap = table.w[1] - table.w[0];
  double excl = exclusion > 0.0 ? exclusion : 3.0 * gap;

  SplitResult out;
  out.k = table.k;
  out.t = t;
  for (int jv = 0; jv < table.cols(); jv += v_stride) {
    int i = table.w_index[jv];
    double v = grid.v[i];
    double Bv = profile.B(v);
    double Dv = profile.D(v);
    double diag = table.gamma[jv][i];
    bool clipped = (v - 4.0 < table.w.front() || v + 4.0 > table.w.back());

    // Columns inside the cutoff window (one spare node on each side so the
    // trapezoid covers the smooth vanishing of the window).
    int j_lo = jv, j_hi = jv;
    while (j_lo > 0 && table.w[j_lo - 1] > v - 4.0 - gap) --j_lo;
    while (j_hi + 1 < table.cols() && table.w[j_hi + 1] < v + 4.0 + gap) ++j_hi;

    // Bounded part: (e^{-ik(B(w)-B(v))t} Γ(v,w) - Γ(v,v)) Φ ∂_wB / (B(v)-B(w)),
    // with nodes within `excl` of the diagonal replaced by one-sided linear
    // extrapolation and one-sided limits at w = v.
    //
    // When Γ(v,v) != 0 the density carries a -C (w-v) ln|w-v| term across the
    // diagonal (C = e^{2v} D(v) Γ(v,v) / ∂_vB, fixed by the second-kind
    // equation), so the integrand diverges like C ln|w-v| there and the
    // one-sided extrapolation alone would miss an O(C·excl) chunk.  Subtract
    // the singular model before quadrature and add its integral back: the
    // bare C ln|w-v| part in closed form, the smooth remainder by trapezoid.
    double Cv = std::exp(2.0 * v) * Dv * diag / profile.dB(v);
    auto direct = [&](int j) -> cplx {
      double phi = window(v - table.w[j]);
      if (phi == 0.0) return 0.0;
      cplx phase = std::polar(1.0, -table.k * (c.Bw[j] - Bv) * t);
      cplx val = (phase * table.gamma[j][i] - diag) * phi * c.dBw[j] / (Bv - c.Bw[j]);
      if (Cv != 0.0 && j != jv) {
        double x = table.w[j] - v;
        val -= -Cv * x * std::log(std::abs(x)) * phase * phi * c.dBw[j] /
               (Bv - c.Bw[j]);
      }
      return val;
    };
    int l1 = jv, r1 = jv;
    while (l1 > j_lo && v - table.w[l1] < excl) --l1;
    while (r1 < j_hi && table.w[r1] - v < excl) ++r1;
    bool have_left = l1 > j_lo && v - table.w[l1] >= excl;
    bool have_right = r1 < j_hi && table.w[r1] - v >= excl;
    cplx gl1 = have_left ? direct(l1) : 0.0, gl2 = have_left ? direct(l1 - 1) : 0.0;
    cplx gr1 = have_right ? direct(r1) : 0.0, gr2 = have_right ? direct(r1 + 1) : 0.0;
    // Away from the diagonal the raw nodes are used even inside the
    // eps-broadened layer: the broadening error is even in w - v while the
    // principal-value kernel is odd, so symmetric node pairs cancel it.
    // Only the diagonal node itself is double-valued; its one-sided limits
    // come from extrapolation past the exclusion radius and carry a single
    // trapezoid weight h, so their own broadening bias is harmless.
    auto value_at = [&](int j, bool left_limit) -> cplx {
      if (j != jv) return direct(j);
      if (left_limit)
        return have_left
                   ? extrapolate(v, table.w[l1], gl1, table.w[l1 - 1], gl2)
                   : cplx(0.0);
      return have_right
                 ? extrapolate(v, table.w[r1], gr1, table.w[r1 + 1], gr2)
                 : cplx(0.0);
    };
    cplx i1 = 0.0;
    for (int j = j_lo; j < j_hi; ++j) {
      double dw = table.w[j + 1] - table.w[j];
      i1 += 0.5 * dw * (value_at(j, false) + value_at(j + 1, true));
    }
    if (Cv != 0.0) {
      // Integral of the subtracted singular model over the window:
      // Cv ln|w-v| exactly, remainder (which vanishes at w = v) by trapezoid.
      double L = v - table.w[j_lo], R = table.w[j_hi] - v;
      i1 += Cv * ((R * std::log(R) - R) + (L * std::log(L) - L));
      auto rem = [&](int j) -> cplx {
        if (j == jv) return 0.0;
        double x = table.w[j] - v;
        double lx = std::log(std::abs(x));
        cplx phase = std::polar(1.0, -table.k * (c.Bw[j] - Bv) * t);
        return -Cv * x * lx * phase * window(v - table.w[j]) * c.dBw[j] /
                   (Bv - c.Bw[j]) -
               Cv * lx;
      };
      for (int j = j_lo; j < j_hi; ++j)
        i1 += 0.5 * (table.w[j + 1] - table.w[j]) * (rem(j) + rem(j + 1));
    }

    // PV of the subtracted diagonal constant: closed form on [v-2, v+2]
    // (where the window is identically 1) after λ = B(w), plus regular
    // quadrature on the annulus 2 <= |v-w| <= 4 with the inner cell clipped
    // at the exact boundary.
    double i2 = 0.0;
    if (diag != 0.0) {
      i2 = std::log(profile.B_diff(v - 2.0, v) / profile.B_diff(v, v + 2.0));
      auto annulus = [&](int j) {
        return window(v - table.w[j]) * c.dBw[j] / (Bv - c.Bw[j]);
      };
      int jr = jv;
      while (jr < j_hi && table.w[jr] <= v + 2.0) ++jr;
      if (table.w[jr] > v + 2.0) {
        double clip = profile.dB(v + 2.0) / profile.B_diff(v, v + 2.0);
        i2 += 0.5 * (table.w[jr] - (v + 2.0)) * (clip + annulus(jr));
        for (int j = jr; j < j_hi; ++j)
          i2 += 0.5 * (table.w[j + 1] - table.w[j]) * (annulus(j) + annulus(j + 1));
      }
      int jl = jv;
      while (jl > j_lo && table.w[jl] >= v - 2.0) --jl;
      if (table.w[jl] < v - 2.0) {
        double clip = -profile.dB(v - 2.0) / profile.B_diff(v - 2.0, v);
        i2 += 0.5 * ((v - 2.0) - table.w[jl]) * (annulus(jl) + clip);
        for (int j = j_lo; j < jl; ++j)
          i2 += 0.5 * (table.w[j + 1] - table.w[j]) * (annulus(j) + annulus(j + 1));
      }
    }

    cplx floc = -(Dv / (2.0 * kPi) * (i1 + diag * i2) + table.recon[jv]);
    cplx fnloc = nonlocal_row(t, i, table, c, profile, grid, window);
    out.rows.push_back(i);
    out.f_loc.push_back(floc);
    out.f_nloc.push_back(fnloc);
    out.window_clipped.push_back(clipped ? 1 : 0);
  }

  if (reference != nullptr) {
    if (static_cast<int>(reference->size()) != grid.n)
      throw std::invalid_argument("split: reference must live on the grid");
    double num = 0.0, den = 0.0;
    for (size_t m = 0; m < out.rows.size(); ++m) {
      int i = out.rows[m];
      cplx phase = std::polar(1.0, -table.k * profile.B(grid.v[i]) * t);
      num = std::max(num, std::abs(out.f_loc[m] * phase + out.f_nloc[m] - (*reference)[i]));
      den = std::max(den, std::abs((*reference)[i]));
    }
    out.recombination_error = den > 0.0 ? num / den : num;
  }
  return out;
}

DecayFit nonlocal_decay_check(double v0, const SpectralDensityTable& table,
                              const VortexProfile& profile, const RadialGrid& grid,
                              const std::vector<double>& times) {
  int jv = table.col_of(v0, grid);
  if (jv < 0) throw std::invalid_argument("nonlocal_decay_check: v0 off the w-grid");
  int i = table.w_index[jv];
  ColumnCache c = cache_columns(table, profile);
  std::function<double(double)> window = [](double s) { return phi_star(s); };
  // The integrand vanishes for |v - w| <= 2, so only the phase speed on the
  // active columns limits t.
  double dmax = 0.0;
  for (int j = 0; j < table.cols(); ++j)
    if (window(grid.v[i] - table.w[j]) < 1.0)
      dmax = std::max(dmax, std::abs(c.dBw[j]));
  std::vector<cplx> values;
  values.reserve(times.size());
  for (double t : times) {
    check_phase(t, table.k, table.w, dmax);
    values.push_back(nonlocal_row(t, i, table, c, profile, grid, window));
  }
  return fit_decay(times, values);
}

std::vector<cplx> observable_decay_spectral(const SpectralDensityTable& table,
                                            const VortexProfile& profile,
                                            const RadialGrid& grid,
                                            const std::vector<double>& times) {
  ColumnCache c = cache_columns(table, profile);
  std::vector<double> H = harmonic_weight(table.k, grid);
  std::vector<double> a(table.cols(), 0.0);
  for (int j = 0; j < table.cols(); ++j)
    for (int i = 0; i < grid.n; ++i) a[j] += table.gamma[j][i] * H[i] * grid.w_rdr[i];
  std::vector<cplx> out;
  out.reserve(times.size());
  double dmax = max_abs(c.dBw);
  for (double t : times) {
    check_phase(t, table.k, table.w, dmax);
    cplx s = 0.0;
    for (int j = 0; j < table.cols(); ++j)
      s += std::polar(1.0, -table.k * c.Bw[j] * t) * a[j] * c.dBw[j] * c.q[j];
    out.push_back(-s / (2.0 * kPi));
  }
  return out;
}

void write_fit_csv_header(std::ostream& os) {
  os << "k,route,t_lo,t_hi,exponent,stderr,expected,pass\n";
}

void append_fit_csv(std::ostream& os, int k, const std::string& route,
                    const DecayFit& fit, double expected, bool pass) {
  os << k << ',' << route << ',' << std::setprecision(17) << fit.t_lo << ','
     << fit.t_hi << ',' << fit.exponent << ',' << fit.std_error << ',' << expected
     << ',' << (pass ? 1 : 0) << '\n';
}

}  // namespace vortexsym
