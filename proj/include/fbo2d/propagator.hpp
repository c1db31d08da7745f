#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbo2d/multipliers.hpp"
#include "fbo2d/quadrature.hpp"
#include "fbo2d/spectral_field.hpp"

namespace fbo2d {

// rho(xi, eta) = -(|xi|^alpha xi + sgn(xi) eta^2)
inline double dispersion_symbol(double xi, double eta, double alpha) {
  return -(abs_pow(xi, alpha) * xi + sgn(xi) * eta * eta);
}

struct BlowUpError : std::runtime_error {
  double t;
  BlowUpError(double t_, const std::string& what) : std::runtime_error(what), t(t_) {}
};

// Phase table e^{i t rho} for one grid, order and time.
class PhaseTable {
 public:
  PhaseTable() = default;
  PhaseTable(const GridSpec& g, double alpha, double t) : grid_(g), t_(t) {
    phase_.resize(g.size());
    for (std::size_t iy = 0; iy < g.ny; ++iy)
      for (std::size_t ix = 0; ix < g.nx; ++ix) {
        const auto i = g.index(ix, iy);
        if (g.is_nyquist_x(ix) || g.is_nyquist_y(iy)) {
          phase_[i] = 0.0;
          continue;
        }
        const double r = dispersion_symbol(g.xi(ix), g.eta(iy), alpha);
        phase_[i] = std::polar(1.0, t * r);
      }
  }

  SpectralField apply(SpectralField f) const {
    if (!(f.grid == grid_)) throw std::invalid_argument("propagate: grid mismatch");
    for (std::size_t i = 0; i < phase_.size(); ++i) f.coeffs[i] *= phase_[i];
    return f;
  }

  double t() const { return t_; }

 private:
  GridSpec grid_;
  double t_ = 0.0;
  std::vector<cplx> phase_;
};

inline SpectralField propagate(const SpectralField& f, double t, double alpha) {
  if (t == 0.0) {
    auto g = f;
    zero_nyquist(g);
    return g;
  }
  return PhaseTable(f.grid, alpha, t).apply(f);
}

// -u u_x = -1/2 d_x(u^2), product formed on the 2/3-truncated lattice.
inline SpectralField nonlinear_tendency(const SpectralField& u) {
  auto r = synthesize_real(dealias(u));
  for (auto& v : r.values) v *= v;
  auto sq = dealias(forward_transform(r));
  return apply_multiplier(std::move(sq), [](double xi, double) { return cplx(0.0, -0.5 * xi); });
}

namespace detail {

inline SpectralField picard_at(const SpectralField& phi, int k, double t, double alpha, int q) {
  if (k == 0) return propagate(phi, t, alpha);
  auto u = propagate(phi, t, alpha);
  if (t == 0.0) return u;
  const auto w = simpson_weights(q);
  const double h = t / q;
  for (int i = 0; i <= q; ++i) {
    const double tp = h * i;
    const auto prev = picard_at(phi, k - 1, tp, alpha, q);
    // nonlinear_tendency is -u u_x, so adding it realizes the minus sign of the Duhamel term
    u.axpy(w[i] * h, propagate(nonlinear_tendency(prev), t - tp, alpha));
  }
  return u;
}

}  // namespace detail

// u^0 = U(t) phi, u^k = U(t) phi - \int_0^t U(t - t') (u^{k-1} u^{k-1}_x)(t') dt'.
// Cost grows like (quad_steps + 1)^k.
inline SpectralField picard_iterate(const SpectralField& phi, int k, double t, double alpha,
                                    int quad_steps) {
  if (k < 0) throw std::invalid_argument("picard_iterate: k must be >= 0");
  require_even_panels(quad_steps, "picard_iterate");
  return detail::picard_at(phi, k, t, alpha, quad_steps);
}

// Integrating-factor RK4 for v = U(-t) u. Phase tables for dt and dt/2 are built once.
class IfRk4 {
 public:
  IfRk4(const GridSpec& g, double alpha, double dt, bool nonlinear = true)
      : alpha_(alpha), dt_(dt), nonlinear_(nonlinear), full_(g, alpha, dt), half_(g, alpha, 0.5 * dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step_if_rk4: dt must be > 0");
  }

  SpectralField step(const SpectralField& u, double t_now = 0.0) const {
    SpectralField out;
    if (!nonlinear_) {
      out = full_.apply(u);
    } else {
      const double h = dt_;
      const auto k1 = nonlinear_tendency(u);
      auto a = u;
      a.axpy(0.5 * h, k1);
      const auto k2 = nonlinear_tendency(half_.apply(a));
      auto b = half_.apply(u);
      b.axpy(0.5 * h, k2);
      const auto k3 = nonlinear_tendency(b);
      auto c = full_.apply(u);
      c.axpy(h, half_.apply(k3));
      const auto k4 = nonlinear_tendency(c);

      out = full_.apply(u);
      out.axpy(h / 6.0, full_.apply(k1));
      auto mid = k2;
      mid += k3;
      out.axpy(h / 3.0, half_.apply(mid));
      out.axpy(h / 6.0, k4);
    }
    if (!out.all_finite())
      throw BlowUpError(t_now + dt_, "non-finite field values at t = " + std::to_string(t_now + dt_));
    return out;
  }

  double dt() const { return dt_; }
  double alpha() const { return alpha_; }
  bool nonlinear() const { return nonlinear_; }

 private:
  double alpha_;
  double dt_;
  bool nonlinear_;
  PhaseTable full_;
  PhaseTable half_;
};

inline SpectralField step_if_rk4(const SpectralField& u, double dt, double alpha, bool nonlinear = true) {
  return IfRk4(u.grid, alpha, dt, nonlinear).step(u);
}

}  // namespace fbo2d
