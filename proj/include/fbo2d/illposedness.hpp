#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbo2d/grid.hpp"
#include "fbo2d/propagator.hpp"
#include "fbo2d/quadrature.hpp"

namespace fbo2d {

struct Rect {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool empty() const { return !(x1 > x0) || !(y1 > y0); }
  double measure() const { return empty() ? 0.0 : (x1 - x0) * (y1 - y0); }
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
  static Rect intersect(const Rect& a, const Rect& b) {
    return {std::max(a.x0, b.x0), std::min(a.x1, b.x1), std::max(a.y0, b.y0), std::min(a.y1, b.y1)};
  }
};

// bound on eps from the second-iterate argument
inline double epsilon_upper_bound(double alpha) { return std::min(alpha, 8.0 / 15.0 - 7.0 * alpha / 15.0); }

struct PhiNSpec {
  double N = 1000.0;
  double eps = 0.05;
  double alpha = 0.5;
  double s = 1.6;
  double beta = 0.0;
  Rect i1, i2;  // [beta/2, beta] x [0, beta^1/4] and [N, N + beta] x [0, beta^1/4] unless snapped

  PhiNSpec() = default;
  PhiNSpec(double N_, double eps_, double alpha_, double s_) : N(N_), eps(eps_), alpha(alpha_), s(s_) {
    require_order(alpha);
    if (!(N > 1.0) || !std::isfinite(N)) throw std::invalid_argument("phi_N: N must be > 1");
    const double bound = epsilon_upper_bound(alpha);
    if (!(eps > 0.0 && eps < bound)) {
      std::ostringstream os;
      os << "phi_N: eps = " << eps << " is inadmissible, need 0 < eps < min(alpha, 8/15 - 7*alpha/15) = " << bound;
      throw std::invalid_argument(os.str());
    }
    if (!std::isfinite(s)) throw std::invalid_argument("phi_N: s must be finite");
    beta = std::pow(N, -alpha - eps);
    const double b4 = std::pow(beta, 0.25);
    i1 = {0.5 * beta, beta, 0.0, b4};
    i2 = {N, N + beta, 0.0, b4};
  }

  double amp1() const { return 1.0 / std::sqrt(beta); }
  double amp2() const { return std::pow(N, -s) / std::sqrt(beta); }

  // I1 + I2, containing the support of f3^
  Rect f3_support() const { return {i1.x0 + i2.x0, i1.x1 + i2.x1, i1.y0 + i2.y0, i1.y1 + i2.y1}; }
};

inline double phi_hat(const PhiNSpec& sp, double xi, double eta) {
  double v = 0.0;
  if (sp.i1.contains(xi, eta)) v += sp.amp1();
  if (sp.i2.contains(xi, eta)) v += sp.amp2();
  return v;
}

namespace detail {

template <class F>
double simpson_2d(F&& f, const Rect& r, int nx, int ny) {
  const auto wx = simpson_weights(nx), wy = simpson_weights(ny);
  const double hx = (r.x1 - r.x0) / nx, hy = (r.y1 - r.y0) / ny;
  double acc = 0.0;
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j) acc += wx[i] * wy[j] * f(r.x0 + hx * i, r.y0 + hy * j);
  return acc * hx * hy;
}

inline std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > 1e-15 * std::max(1.0, std::abs(x))) out.push_back(x);
  return out;
}

}  // namespace detail

// squared H^s norm of phi_N, 2-D Simpson over each rectangle
inline double phin_hs_norm_sq(const PhiNSpec& sp, int panels = 32) {
  auto w = [&](double xi, double eta) { return std::pow(1.0 + xi * xi + eta * eta, sp.s); };
  return sp.amp1() * sp.amp1() * detail::simpson_2d(w, sp.i1, panels, panels) +
         sp.amp2() * sp.amp2() * detail::simpson_2d(w, sp.i2, panels, panels);
}
inline double phin_hs_norm(const PhiNSpec& sp, int panels = 32) { return std::sqrt(phin_hs_norm_sq(sp, panels)); }

inline double resonance_psi(double xi, double eta, double xi1, double eta1, double alpha) {
  return dispersion_symbol(xi1, eta1, alpha) + dispersion_symbol(xi - xi1, eta - eta1, alpha) -
         dispersion_symbol(xi, eta, alpha);
}

// Same value, written without cancellation for 0 < xi1 < xi.
inline double resonance_psi_positive(double xi, double eta, double xi1, double eta1, double alpha) {
  if (!(xi1 > 0.0 && xi1 < xi)) return resonance_psi(xi, eta, xi1, eta1, alpha);
  const double a = 1.0 + alpha;
  return -std::pow(xi1, a) - std::pow(xi, a) * std::expm1(a * std::log1p(-xi1 / xi)) + 2.0 * eta1 * (eta - eta1);
}

// (e^{i t psi} - 1) / psi
inline cplx duhamel_kernel(double t, double psi) {
  const double th = t * psi;
  if (std::abs(th) < 1e-8) return cplx(0.0, t) * cplx(1.0, 0.5 * th);
  const double h = std::sin(0.5 * th);
  return cplx(-2.0 * h * h, std::sin(th)) / psi;
}

struct A12 {
  Rect region;
  double measure = 0.0;
};

// I1 intersected with (xi, eta) - I2
inline A12 a12_region(double xi, double eta, const PhiNSpec& sp) {
  Rect shifted{xi - sp.i2.x1, xi - sp.i2.x0, eta - sp.i2.y1, eta - sp.i2.y0};
  A12 r;
  r.region = Rect::intersect(sp.i1, shifted);
  r.measure = r.region.measure();
  return r;
}

// I2 intersected with (xi, eta) - I1
inline A12 a21_region(double xi, double eta, const PhiNSpec& sp) {
  Rect shifted{xi - sp.i1.x1, xi - sp.i1.x0, eta - sp.i1.y1, eta - sp.i1.y0};
  A12 r;
  r.region = Rect::intersect(sp.i2, shifted);
  r.measure = r.region.measure();
  return r;
}

inline cplx a12_integral(const Rect& r, double xi, double eta, double t, double alpha, int panels) {
  if (r.empty()) return 0.0;
  const auto w = simpson_weights(panels);
  const double hx = (r.x1 - r.x0) / panels, hy = (r.y1 - r.y0) / panels;
  cplx acc{};
  for (int i = 0; i <= panels; ++i) {
    const double x1 = r.x0 + hx * i;
    for (int j = 0; j <= panels; ++j) {
      const double y1 = r.y0 + hy * j;
      acc += (w[i] * w[j]) * duhamel_kernel(t, resonance_psi_positive(xi, eta, x1, y1, alpha));
    }
  }
  return acc * (hx * hy);
}

struct F3Result {
  double norm = 0.0;
  double residual = 0.0;  // relative change under panel doubling
};

namespace detail {

inline double f3_norm_once(const PhiNSpec& sp, double t, int outer, int inner, bool folded) {
  const Rect box = sp.f3_support();
  // the inner integral is piecewise smooth in (xi, eta) with kinks at sums of rectangle endpoints
  auto xs = sorted_unique({sp.i1.x0 + sp.i2.x0, sp.i1.x0 + sp.i2.x1, sp.i1.x1 + sp.i2.x0, sp.i1.x1 + sp.i2.x1});
  auto ys = sorted_unique({sp.i1.y0 + sp.i2.y0, sp.i1.y0 + sp.i2.y1, sp.i1.y1 + sp.i2.y0, sp.i1.y1 + sp.i2.y1});
  const double pref = folded ? 1.0 / (two_pi * sp.beta * std::pow(sp.N, sp.s))
                             : 1.0 / (2.0 * two_pi * sp.beta * std::pow(sp.N, sp.s));
  double total = 0.0;
  for (std::size_t a = 0; a + 1 < xs.size(); ++a)
    for (std::size_t b = 0; b + 1 < ys.size(); ++b) {
      Rect cell{xs[a], xs[a + 1], ys[b], ys[b + 1]};
      cell = Rect::intersect(cell, box);
      if (cell.empty()) continue;
      total += simpson_2d(
          [&](double xi, double eta) {
            cplx I = a12_integral(a12_region(xi, eta, sp).region, xi, eta, t, sp.alpha, inner);
            if (!folded) I += a12_integral(a21_region(xi, eta, sp).region, xi, eta, t, sp.alpha, inner);
            const double amp = pref * xi;
            return std::pow(1.0 + xi * xi + eta * eta, sp.s) * amp * amp * std::norm(I);
          },
          cell, outer, outer);
    }
  return std::sqrt(total);
}

}  // namespace detail

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ||f3(t)||_{H^s}; gate: doubling all panel counts must move the value by <= 1%.
inline F3Result f3_hs_norm(const PhiNSpec& sp, double t, int outer = 8, int inner = 8, bool folded = true) {
  if (!(t > 0.0)) throw std::invalid_argument("f3_hs_norm: t must be > 0");
  require_even_panels(outer, "f3_hs_norm");
  require_even_panels(inner, "f3_hs_norm");
  const double a = detail::f3_norm_once(sp, t, outer, inner, folded);
  const double b = detail::f3_norm_once(sp, t, 2 * outer, 2 * inner, folded);
  F3Result r;
  r.norm = b;
  r.residual = b > 0 ? std::abs(a - b) / b : 0.0;
  if (r.residual > 0.01) {
    std::ostringstream os;
    os << "f3_hs_norm: panel doubling changed the value by " << 100 * r.residual
       << "% at N = " << sp.N << "; increase the panel counts (now " << outer << ", " << inner << ")";
    throw QuadratureError(os.str());
  }
  return r;
}

struct GrowthPoint {
  double N = 0, beta = 0, phi_norm = 0, f3_norm = 0, residual = 0;
};

struct GrowthFit {
  std::vector<GrowthPoint> points;
  LinearFit fit;
  double target = 0.0;  // 1/2 (2 - 7 alpha/4 - 15 eps/4)
  bool increasing = false;
  bool phi_bounded = false;  // max/min of ||phi_N|| within a factor 2
  bool within_band = false;  // |slope - target| <= 0.15
  bool pass = false;         // slope >= target - 0.15 and increasing
};

inline double growth_target(double alpha, double eps) { return 0.5 * (2.0 - 1.75 * alpha - 3.75 * eps); }

template <class ParallelFor>
GrowthFit growth_fit(double alpha, double eps, double s, double t, const std::vector<double>& ladder, int outer,
                     int inner, ParallelFor&& pfor) {
  if (ladder.size() < 5) throw std::invalid_argument("growth_fit: need at least 5 ladder points");
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i)
    if (!(ladder[i + 1] > ladder[i])) throw std::invalid_argument("growth_fit: ladder must be increasing");
  PhiNSpec probe(ladder.front(), eps, alpha, s);  // admissibility check before any work
  GrowthFit g;
  g.points.resize(ladder.size());
  pfor(ladder.size(), [&](std::size_t i) {
    PhiNSpec sp(ladder[i], eps, alpha, s);
    auto r = f3_hs_norm(sp, t, outer, inner);
    g.points[i] = {sp.N, sp.beta, phin_hs_norm(sp), r.norm, r.residual};
  });
  std::vector<double> lx, ly;
  double pmin = 1e300, pmax = 0;
  g.increasing = true;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    lx.push_back(std::log(g.points[i].N));
    ly.push_back(std::log(g.points[i].f3_norm));
    pmin = std::min(pmin, g.points[i].phi_norm);
    pmax = std::max(pmax, g.points[i].phi_norm);
    if (i > 0 && !(g.points[i].f3_norm > g.points[i - 1].f3_norm)) g.increasing = false;
  }
  g.fit = least_squares(lx, ly);
  g.target = growth_target(alpha, eps);
  g.phi_bounded = pmax <= 2.0 * pmin;
  g.within_band = std::abs(g.fit.slope - g.target) <= 0.15;
  g.pass = g.fit.slope >= g.target - 0.15 && g.increasing;
  return g;
}

inline GrowthFit growth_fit(double alpha, double eps, double s, double t, const std::vector<double>& ladder,
                            int outer = 8, int inner = 8) {
  return growth_fit(alpha, eps, s, t, ladder, outer, inner, [](std::size_t n, auto&& f) {
    for (std::size_t i = 0; i < n; ++i) f(i);
  });
}

// Replace I1, I2 by the unions of lattice cells whose centres they contain.
inline PhiNSpec snap_to_lattice(PhiNSpec sp, const GridSpec& g) {
  auto snap = [&](const Rect& r) {
    const double dx = g.dxi(), dy = g.deta();
    const double j0 = std::ceil(r.x0 / dx), j1 = std::floor(r.x1 / dx);
    const double k0 = std::ceil(r.y0 / dy), k1 = std::floor(r.y1 / dy);
    return Rect{(j0 - 0.5) * dx, (j1 + 0.5) * dx, (k0 - 0.5) * dy, (k1 + 0.5) * dy};
  };
  sp.i1 = snap(sp.i1);
  sp.i2 = snap(sp.i2);
  return sp;
}

// Real lattice datum: indicator of the snapped rectangles plus its conjugate mirror.
inline SpectralField phi_on_lattice(const PhiNSpec& snapped, const GridSpec& g) {
  SpectralField f(g);
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      if (g.is_nyquist_x(ix) || g.is_nyquist_y(iy)) continue;
      const double xi = g.xi(ix), eta = g.eta(iy);
      double v = 0.0;
      if (snapped.i1.contains(xi, eta)) v += snapped.amp1();
      if (snapped.i2.contains(xi, eta)) v += snapped.amp2();
      if (snapped.i1.contains(-xi, -eta)) v += snapped.amp1();
      if (snapped.i2.contains(-xi, -eta)) v += snapped.amp2();
      f.at(ix, iy) = v;
    }
  return f;
}

// H^s norm restricted to modes inside `box`
inline double hs_norm_in_box(const SpectralField& f, double s, const Rect& box) {
  const auto& g = f.grid;
  double acc = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double xi = g.xi(ix), eta = g.eta(iy);
      if (!box.contains(xi, eta)) continue;
      acc += std::pow(1.0 + xi * xi + eta * eta, s) * std::norm(f.at(ix, iy));
    }
  return std::sqrt(acc * g.dual_cell_area());
}

}  // namespace fbo2d
