#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbo2d/fft.hpp"
#include "fbo2d/norms.hpp"
#include "fbo2d/parallel.hpp"
#include "fbo2d/propagator.hpp"
#include "fbo2d/quadrature.hpp"

namespace fbo2d {

struct AdmissiblePair {
  double q = 4.0;
  double p = 4.0;

  AdmissiblePair() = default;
  AdmissiblePair(double q_, double p_) : q(q_), p(p_) {
    if (q == 2.0 && std::isinf(p))
      throw std::invalid_argument("(q, p) = (2, inf) is not an admissible pair");
    if (!(q > 2.0) || !(p >= 2.0))
      throw std::invalid_argument("admissible pair needs q > 2 and p >= 2");
    const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
    const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
    if (std::abs(iq + ip - 0.5) > 1e-12) throw std::invalid_argument("admissible pair needs 1/q + 1/p = 1/2");
  }
  static AdmissiblePair from_q(double q) {
    return {q, std::isinf(q) ? 2.0 : 1.0 / (0.5 - 1.0 / q)};
  }
};

// ---------------------------------------------------------------------------
// J(lambda) = \int_0^inf xi^{(alpha-1)/2} e^{i xi lambda} e^{-i xi^{1+alpha}} dxi
//
// With xi = u^m, m = 2/(1+alpha), this becomes m \int_0^inf exp(i lambda u^m - i u^2) du:
// the endpoint singularity disappears. Damping e^{-delta xi} is added and removed by
// Richardson extrapolation in delta. The integral is taken along a deformed contour:
// a ray out of the origin and the steepest-descent line through the saddle
// u* = (lambda m / 2)^{1/(2-m)}, so the cost does not grow with the saddle's distance.
// sigma = -1 flips the sign of the quadratic phase.

struct OscillatoryResult {
  cplx value;
  double residual = 0.0;  // |three-point - two-point extrapolant|
  double delta0 = 0.0;
};

namespace detail {

struct OscPhase {
  double lambda, m, sigma, delta;
  cplx g(cplx u) const {
    const cplx um = std::pow(u, m);
    return cplx(0.0, lambda) * um - cplx(0.0, sigma) * u * u - delta * um;
  }
  cplx dg(cplx u) const {
    const cplx um1 = std::pow(u, m - 1.0);
    return (cplx(0.0, lambda) - delta) * m * um1 - cplx(0.0, 2.0 * sigma) * u;
  }
  cplx d2g(cplx u) const {
    const cplx um2 = m == 1.0 ? cplx(0.0) : std::pow(u, m - 2.0);
    return (cplx(0.0, lambda) - delta) * m * (m - 1.0) * um2 - cplx(0.0, 2.0 * sigma);
  }
};

// \int exp(g(z0 + s d)) d ds over s in [0, len], graded panels, stops once the integrand is below e^-50.
inline cplx osc_segment(const OscPhase& ph, cplx z0, cplx d, double len, bool singular_start) {
  const auto [x, w] = gauss_legendre(16);
  cplx acc{};
  double s = 0.0;
  double h_prev = singular_start ? 1e-9 : 1e-3;
  int panels = 0;
  while (s < len) {
    const cplx z = z0 + (s + h_prev) * d;  // never the branch point itself
    const double scale = std::abs(ph.dg(z)) + std::sqrt(std::abs(ph.d2g(z))) + 1e-12;
    double h = std::min(2.0 / scale, 2.0 * h_prev);
    if (singular_start) h = std::min(h, std::max(2.0 * h_prev, 1e-9));
    h = std::min(h, len - s);
    cplx part{};
    for (int i = 0; i < 16; ++i) {
      const double si = s + 0.5 * h * (x[i] + 1.0);
      part += w[i] * std::exp(ph.g(z0 + si * d));
    }
    acc += part * (0.5 * h) * d;
    s += h;
    h_prev = h;
    if (++panels > 2000000) throw std::runtime_error("oscillatory_J: panel budget exhausted");
    if (std::real(ph.g(z0 + s * d)) < -50.0 && s > 0.0) break;
  }
  return acc;
}

inline cplx osc_damped(double lambda, double alpha, double sigma, double delta) {
  const double m = 2.0 / (1.0 + alpha);
  OscPhase ph{lambda, m, sigma, delta};
  const double inf = std::numeric_limits<double>::infinity();
  if (lambda * sigma <= 0.0) {
    // no real saddle: straight ray into the decaying sector
    const cplx d = std::polar(1.0, -sigma * std::numbers::pi / 4.0);
    return m * osc_segment(ph, 0.0, d, inf, true);
  }
  const double us = std::pow(std::abs(lambda) * m / 2.0, 1.0 / (2.0 - m));
  const cplx p1 = us * cplx(0.5, 0.5 * sigma);  // corner between ray and descent line
  const cplx dl = std::polar(1.0, -sigma * std::numbers::pi / 4.0);
  const cplx ray = m * osc_segment(ph, 0.0, p1 / std::abs(p1), std::abs(p1), true);
  const cplx back = m * osc_segment(ph, us, -dl, std::abs(p1 - us), false);
  const cplx out = m * osc_segment(ph, us, dl, inf, false);
  return ray - back + out;
}

}  // namespace detail

// Saddle in the original variable, xi* = (|lambda| / (1 + alpha))^{1/alpha}; 0 if none.
inline double oscillatory_saddle(double lambda, double alpha, double sigma = 1.0) {
  if (lambda * sigma <= 0.0) return 0.0;
  return std::pow(std::abs(lambda) / (1.0 + alpha), 1.0 / alpha);
}

inline OscillatoryResult oscillatory_J(double lambda, double alpha, double sigma = 1.0) {
  require_order(alpha);
  if (!std::isfinite(lambda)) throw std::invalid_argument("oscillatory_J: lambda must be finite");
  if (sigma != 1.0 && sigma != -1.0) throw std::invalid_argument("oscillatory_J: sigma must be +-1");
  OscillatoryResult r;
  r.delta0 = 0.05 / std::max(1.0, oscillatory_saddle(lambda, alpha, sigma));
  const cplx j1 = detail::osc_damped(lambda, alpha, sigma, r.delta0);
  const cplx j2 = detail::osc_damped(lambda, alpha, sigma, 0.5 * r.delta0);
  const cplx j3 = detail::osc_damped(lambda, alpha, sigma, 0.25 * r.delta0);
  const cplx two = 2.0 * j3 - j2;
  const cplx three = (8.0 * j3 - 6.0 * j2 + j1) / 3.0;
  r.value = three;
  r.residual = std::abs(three - two);
  if (r.residual > 0.05 * std::abs(three)) {
    std::ostringstream os;
    os << "oscillatory_J: extrapolation residual " << r.residual << " exceeds 5% of |J| = " << std::abs(three)
       << " at lambda = " << lambda;
    throw std::runtime_error(os.str());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Lemma 3.1 decay

inline constexpr double low_xi_tolerance = 1e-3;

// ||P_{|xi| < xi_min} f|| / ||f||, xi_min = 4 * 2 pi / lx
inline double low_xi_fraction(const SpectralField& f) {
  const double xi_min = 4.0 * f.grid.dxi();
  const double total = l2_norm(f);
  if (total == 0.0) return 0.0;
  auto low = apply_multiplier(f, [xi_min](double xi, double) { return std::abs(xi) < xi_min ? 1.0 : 0.0; });
  return l2_norm(low) / total;
}

inline void require_xi_separated(const SpectralField& f, const char* who) {
  const double fr = low_xi_fraction(f);
  if (fr > low_xi_tolerance) {
    std::ostringstream os;
    os << who << ": datum has " << fr << " of its L2 amplitude at |xi| < 4*2pi/lx; the negative-order x-derivative "
       << "is singular there, filter the low x-frequencies first";
    throw std::invalid_argument(os.str());
  }
}

// |t| ||D_x^{(alpha-1)/2} U(t) phi||_inf / ||phi||_1
inline double decay_ratio(const SpectralField& phi, double t, double alpha) {
  require_order(alpha);
  if (t == 0.0) throw std::invalid_argument("decay_ratio: t must be nonzero");
  require_xi_separated(phi, "decay_ratio");
  const double l1 = l1_norm(synthesize_real(phi));
  const auto v = apply_dx_alpha(propagate(phi, t, alpha), 0.5 * (alpha - 1.0));
  return std::abs(t) * linf_norm(synthesize_real(v)) / l1;
}

// Box traversal time: min(lx / max|v_x|, ly / max|v_y|) over modes with |phi^| > 1e-6 max,
// group velocity |v_x| = (1 + alpha)|xi|^alpha, |v_y| = 2|eta|.
inline double decay_horizon(const SpectralField& phi, double alpha) {
  const auto& g = phi.grid;
  const double cut = 1e-6 * phi.max_abs();
  double vx = 0, vy = 0;
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      if (std::abs(phi.at(ix, iy)) <= cut) continue;
      vx = std::max(vx, (1.0 + alpha) * abs_pow(g.xi(ix), alpha));
      vy = std::max(vy, 2.0 * std::abs(g.eta(iy)));
    }
  const double tx = vx > 0 ? g.lx / vx : std::numeric_limits<double>::infinity();
  const double ty = vy > 0 ? g.ly / vy : std::numeric_limits<double>::infinity();
  return std::min(tx, ty);
}

// ---------------------------------------------------------------------------
// Mixed norms along the free flow

inline void require_zero_x_mean(const SpectralField& f, const char* who) {
  double zero_line = 0.0;
  for (std::size_t iy = 0; iy < f.grid.ny; ++iy) zero_line += std::norm(f.at(0, iy));
  const double n = l2_norm(f);
  if (std::sqrt(zero_line * f.grid.dual_cell_area()) > 1e-12 * n)
    throw std::invalid_argument(std::string(who) + ": datum must have zero x-mean (no xi = 0 modes)");
}

// L^q over [0, T] (trapezoid, nt panels, q = inf is the sample max) of h(t)
template <class H>
double time_lq(H&& h, double T, int nt, double q) {
  std::vector<double> v(nt + 1);
  for (int i = 0; i <= nt; ++i) v[i] = h(T * i / nt);
  if (std::isinf(q)) return *std::max_element(v.begin(), v.end());
  double acc = 0.0;
  for (int i = 0; i <= nt; ++i) acc += (i == 0 || i == nt ? 0.5 : 1.0) * std::pow(v[i], q);
  return std::pow(acc * T / nt, 1.0 / q);
}

inline double strichartz_ratio(const SpectralField& phi, const AdmissiblePair& pair, double alpha, double T,
                               int nt = 64) {
  require_order(alpha);
  if (!(T > 0.0)) throw std::invalid_argument("strichartz_ratio: T must be > 0");
  if (nt < 64) throw std::invalid_argument("strichartz_ratio: need at least 64 time samples");
  require_zero_x_mean(phi, "strichartz_ratio");
  const double order = std::isinf(pair.q) ? 0.0 : (alpha - 1.0) / (2.0 * pair.q);
  const auto d = apply_dx_alpha(phi, order);
  PhaseTable step(phi.grid, alpha, T / nt);
  auto cur = d;
  std::vector<double> lp(nt + 1);
  for (int i = 0; i <= nt; ++i) {
    lp[i] = lp_norm(synthesize_real(cur), pair.p);
    if (i < nt) cur = step.apply(cur);
  }
  const double left = time_lq([&](double t) { return lp[static_cast<int>(std::lround(t * nt / T))]; }, T, nt, pair.q);
  return left / l2_norm(phi);
}

// Cor 3.3 with p = 4/delta (so delta > 2/p) and q = 4/(2 - delta): k~ = (q - 2)/(2q) = delta/4.
inline double cor33_exponent(double delta) { return 0.25 * delta; }

struct RatioParts {
  double left = 0.0;
  double right = 0.0;
  double ratio = 0.0;
};

inline RatioParts cor33_ratio(const SpectralField& phi, double alpha, double T, double delta, int nt = 64) {
  require_order(alpha);
  if (!(delta > 0.0)) throw std::invalid_argument("cor33_ratio: delta must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("cor33_ratio: T must be > 0");
  require_zero_x_mean(phi, "cor33_ratio");
  PhaseTable step(phi.grid, alpha, T / nt);
  auto cur = phi;
  std::vector<double> sup(nt + 1);
  for (int i = 0; i <= nt; ++i) {
    sup[i] = linf_norm(synthesize_real(cur));
    if (i < nt) cur = step.apply(cur);
  }
  RatioParts r;
  r.left = time_lq([&](double t) { return sup[static_cast<int>(std::lround(t * nt / T))]; }, T, nt, 2.0);
  const double a = 0.25 * (1.0 - alpha);
  r.right = std::pow(T, cor33_exponent(delta)) *
            (l2_norm(phi) + l2_norm(apply_dx_alpha(phi, a + delta)) + l2_norm(apply_dy_delta(phi, delta)) +
             l2_norm(apply_dx_alpha(apply_dy_delta(phi, delta), a)));
  r.ratio = r.left / r.right;
  return r;
}

// ---------------------------------------------------------------------------
// Lemma 3.4

inline double refined_exponent(double delta) { return 0.5 + cor33_exponent(delta); }

struct RefinedResult {
  double left_x = 0.0;   // \int_0^T ||d_x w||_inf
  double left_y = 0.0;   // \int_0^T ||d_y w||_inf
  double right = 0.0;    // T^k (sup ||w||_{H^{s+2d}} + \int ||F||_{H^{s-1+2d}})
  double ratio_x = 0.0;
  double ratio_y = 0.0;
  double ratio() const { return std::max(ratio_x, ratio_y); }
};

using Forcing = std::function<SpectralField(double)>;

// w_t + D_x^alpha w_x + H w_yy = F, w(0) = w0, on nt (even) steps: w(t_i) = U(h) w(t_{i-1}) + Simpson on
// [t_{i-1}, t_i] of U(t_i - t') F(t').
inline RefinedResult refined_strichartz_check(const SpectralField& w0, const Forcing& F, double alpha, double T,
                                              double delta, int nt = 64) {
  require_order(alpha);
  if (!(T > 0.0) || !(delta > 0.0)) throw std::invalid_argument("refined_strichartz_check: T, delta must be > 0");
  if (nt < 2) throw std::invalid_argument("refined_strichartz_check: nt too small");
  const double sa = sobolev_threshold(alpha);
  const double h = T / nt;
  PhaseTable full(w0.grid, alpha, h), half(w0.grid, alpha, 0.5 * h);
  std::vector<double> gx(nt + 1), gy(nt + 1), fnorm(nt + 1);
  double sup_w = 0.0;
  auto w = w0;
  auto record = [&](int i, const SpectralField& cur, const SpectralField& Fi) {
    gx[i] = linf_norm(synthesize_real(apply_dx(cur)));
    gy[i] = linf_norm(synthesize_real(apply_dy(cur)));
    sup_w = std::max(sup_w, sobolev_norm(cur, sa + 2.0 * delta));
    fnorm[i] = sobolev_norm(Fi, sa - 1.0 + 2.0 * delta);
  };
  auto Fprev = F(0.0);
  record(0, w, Fprev);
  for (int i = 1; i <= nt; ++i) {
    const double t0 = h * (i - 1);
    const auto Fmid = F(t0 + 0.5 * h);
    const auto Fend = F(t0 + h);
    auto next = full.apply(w);
    next.axpy(h / 6.0, full.apply(Fprev));
    next.axpy(4.0 * h / 6.0, half.apply(Fmid));
    next.axpy(h / 6.0, Fend);
    w = std::move(next);
    record(i, w, Fend);
    Fprev = Fend;
  }
  auto trap = [&](const std::vector<double>& v) {
    double a = 0;
    for (int i = 0; i <= nt; ++i) a += (i == 0 || i == nt ? 0.5 : 1.0) * v[i];
    return a * h;
  };
  RefinedResult r;
  r.left_x = trap(gx);
  r.left_y = trap(gy);
  r.right = std::pow(T, refined_exponent(delta)) * (sup_w + trap(fnorm));
  r.ratio_x = r.right > 0 ? r.left_x / r.right : 0.0;
  r.ratio_y = r.right > 0 ? r.left_y / r.right : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Kato-Ponce and Leibniz

inline RatioParts kato_ponce_ratio(const SpectralField& f, const SpectralField& g, double s) {
  if (!(s >= 1.0)) throw std::invalid_argument("kato_ponce_ratio: s must be >= 1");
  auto comm = apply_bessel(dealiased_product(f, g), s);
  comm -= dealiased_product(f, apply_bessel(g, s));
  RatioParts r;
  r.left = l2_norm(comm);
  r.right = grad_linf(f) * l2_norm(apply_bessel(g, s - 1.0)) +
            l2_norm(apply_bessel(f, s)) * linf_norm(synthesize_real(g));
  r.ratio = r.right < 1e-14 ? 0.0 : r.left / r.right;
  return r;
}

// Real samples on a periodic line of length L.
struct Line {
  double L = two_pi;
  std::vector<double> values;

  std::size_t n() const { return values.size(); }
  double dk() const { return two_pi / L; }
  long wavenumber(std::size_t i) const {
    const long h = static_cast<long>(n() / 2), ii = static_cast<long>(i);
    return ii < h ? ii : ii - static_cast<long>(n());
  }
  template <class F>
  static Line sample(std::size_t n, double L, F&& f) {
    if (!is_power_of_two(n) || n < 4) throw std::invalid_argument("line: n must be a power of two >= 4");
    Line l{L, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) l.values[i] = f(L * i / n);
    return l;
  }
};

namespace detail {

// coefficients with sum |c|^2 (2 pi / L) = \int |f|^2
inline std::vector<cplx> line_forward(const Line& f) {
  std::vector<cplx> a(f.values.begin(), f.values.end());
  dft_inplace(a, 1, static_cast<int>(f.n()), FFTW_FORWARD);
  const double sc = f.L / (static_cast<double>(f.n()) * std::sqrt(two_pi));
  for (auto& c : a) c *= sc;
  return a;
}

inline Line line_inverse(const Line& shape, std::vector<cplx> a) {
  dft_inplace(a, 1, static_cast<int>(shape.n()), FFTW_BACKWARD);
  const double sc = std::sqrt(two_pi) / shape.L;
  Line out{shape.L, std::vector<double>(shape.n())};
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = (a[i] * sc).real();
  return out;
}

inline void line_truncate(const Line& shape, std::vector<cplx>& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (3 * std::labs(shape.wavenumber(i)) >= static_cast<long>(shape.n())) a[i] = 0.0;
}

}  // namespace detail

inline double line_l2(const std::vector<cplx>& c, double L) {
  double s = 0;
  for (auto& v : c) s += std::norm(v);
  return std::sqrt(s * two_pi / L);
}

inline double line_sup(const Line& f) {
  double m = 0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

inline std::vector<cplx> line_dsigma(const Line& shape, std::vector<cplx> c, double sigma) {
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= abs_pow(shape.dk() * shape.wavenumber(i), sigma);
  return c;
}

// ||D^s(fg)||_2 / (||D^s f||_2 ||g||_inf + ||D^s g||_2 ||f||_inf), product on the 2/3-truncated line
inline RatioParts leibniz_ratio(const Line& f, const Line& g, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("leibniz_ratio: sigma must lie in (0, 1)");
  if (f.n() != g.n() || f.L != g.L) throw std::invalid_argument("leibniz_ratio: line mismatch");
  auto cf = detail::line_forward(f), cg = detail::line_forward(g);
  detail::line_truncate(f, cf);
  detail::line_truncate(g, cg);
  auto ft = detail::line_inverse(f, cf), gt = detail::line_inverse(g, cg);
  Line prod{f.L, std::vector<double>(f.n())};
  for (std::size_t i = 0; i < f.n(); ++i) prod.values[i] = ft.values[i] * gt.values[i];
  auto cp = detail::line_forward(prod);
  detail::line_truncate(f, cp);
  RatioParts r;
  r.left = line_l2(line_dsigma(f, cp, sigma), f.L);
  r.right = line_l2(line_dsigma(f, cf, sigma), f.L) * line_sup(gt) + line_l2(line_dsigma(g, cg, sigma), g.L) * line_sup(ft);
  r.ratio = r.right < 1e-14 ? 0.0 : r.left / r.right;
  return r;
}

inline Line random_line(std::size_t n, double L, std::uint64_t seed, long kmax, double rolloff = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> a(kmax + 1), b(kmax + 1);
  for (long k = 1; k <= kmax; ++k) {
    const double amp = std::exp(-rolloff * double(k * k) / double(kmax * kmax));
    a[k] = amp * nd(rng);
    b[k] = amp * nd(rng);
  }
  return Line::sample(n, L, [&](double x) {
    double v = 0;
    for (long k = 1; k <= kmax; ++k) v += a[k] * std::cos(two_pi * k * x / L) + b[k] * std::sin(two_pi * k * x / L);
    return v;
  });
}

// ---------------------------------------------------------------------------
// Skew-adjointness of L u = D_x^alpha u_x + H u_yy

// |(Lu, u)| / (||u|| ||Lu||) via Parseval, complex inner product so tampered data show up.
inline double skew_adjoint_residual(const SpectralField& u, double alpha) {
  const auto& g = u.grid;
  cplx ip{};
  double nu = 0, nl = 0;
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      if (g.is_nyquist_x(ix) || g.is_nyquist_y(iy)) continue;
      const double xi = g.xi(ix), eta = g.eta(iy);
      const cplx m(0.0, abs_pow(xi, alpha) * xi - sgn(xi) * eta * eta);
      const double a2 = std::norm(u.at(ix, iy));
      ip += m * a2;
      nu += a2;
      nl += std::norm(m) * a2;
    }
  const double den = std::sqrt(nu * nl);
  return den > 0.0 ? std::abs(ip) / den : 0.0;
}

inline double skew_adjoint_residual(const RealField& u, double alpha) {
  return skew_adjoint_residual(forward_transform(u), alpha);
}

// ---------------------------------------------------------------------------
// Ensemble protocol: >= 50 seeded draws, PASS iff max/median < 10 and the max moves < 30% when the grid is refined once.

struct EnsembleResult {
  std::string name;
  std::vector<std::uint64_t> seeds;
  std::vector<double> coarse;
  std::vector<double> fine;
  double max_coarse = 0, median_coarse = 0, max_fine = 0;
  double spread = 0;  // max/median on the coarse grid
  double drift = 0;   // |max_fine - max_coarse| / max_coarse
  bool pass = false;
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// draw(seed, grid) -> ratio
template <class Draw>
EnsembleResult run_ensemble(const std::string& name, int draws, std::uint64_t base_seed, const GridSpec& coarse,
                            Draw&& draw, const ParallelFor& pfor = ParallelFor(1)) {
  if (draws < 50) throw std::invalid_argument(name + ": ensembles need at least 50 draws");
  EnsembleResult r;
  r.name = name;
  r.seeds.resize(draws);
  for (int i = 0; i < draws; ++i) r.seeds[i] = base_seed + static_cast<std::uint64_t>(i);
  r.coarse.resize(draws);
  r.fine.resize(draws);
  const GridSpec fine = coarse.refined(2);
  pfor(static_cast<std::size_t>(2 * draws), [&](std::size_t k) {
    const std::size_t i = k / 2;
    if (k % 2 == 0)
      r.coarse[i] = draw(r.seeds[i], coarse);
    else
      r.fine[i] = draw(r.seeds[i], fine);
  });
  for (double v : r.coarse)
    if (!std::isfinite(v)) throw std::runtime_error(name + ": non-finite ratio in ensemble");
  r.max_coarse = *std::max_element(r.coarse.begin(), r.coarse.end());
  r.max_fine = *std::max_element(r.fine.begin(), r.fine.end());
  r.median_coarse = median_of(r.coarse);
  r.spread = r.median_coarse > 0 ? r.max_coarse / r.median_coarse : std::numeric_limits<double>::infinity();
  r.drift = std::abs(r.max_fine - r.max_coarse) / r.max_coarse;
  r.pass = r.spread < 10.0 && r.drift < 0.3;
  return r;
}

}  // namespace fbo2d
