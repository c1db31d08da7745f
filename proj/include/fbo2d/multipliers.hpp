#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "fbo2d/spectral_field.hpp"

namespace fbo2d {

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// |x|^a with |0|^a := 0 for every a, negative orders included.
inline double abs_pow(double x, double a) {
  if (x == 0.0) return 0.0;
  if (a == 0.0) return 1.0;
  return std::pow(std::abs(x), a);
}

inline void zero_nyquist(SpectralField& f) {
  const auto& g = f.grid;
  for (std::size_t ix = 0; ix < g.nx; ++ix) f.at(ix, g.ny / 2) = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy) f.at(g.nx / 2, iy) = 0.0;
}

// m(xi, eta) may return double or complex. Nyquist lines are zeroed afterwards.
template <class Symbol>
SpectralField apply_multiplier(SpectralField f, Symbol&& m) {
  const auto& g = f.grid;
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    const double eta = g.eta(iy);
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double xi = g.xi(ix);
      const auto v = m(xi, eta);
      cplx mv;
      if constexpr (std::is_convertible_v<decltype(v), double>)
        mv = cplx(static_cast<double>(v), 0.0);
      else
        mv = cplx(v);
      if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag()))
        throw std::domain_error("apply_multiplier: symbol is not finite at (xi, eta) = (" +
                                std::to_string(xi) + ", " + std::to_string(eta) + ")");
      f.at(ix, iy) *= mv;
    }
  }
  zero_nyquist(f);
  return f;
}

inline SpectralField apply_dx_alpha(const SpectralField& f, double alpha) {
  if (!(alpha >= -0.5))
    throw std::invalid_argument("apply_dx_alpha: order " + std::to_string(alpha) +
                                " < -1/2 gives a non-integrable symbol");
  return apply_multiplier(f, [alpha](double xi, double) { return abs_pow(xi, alpha); });
}

inline SpectralField apply_hilbert_x(const SpectralField& f) {
  return apply_multiplier(f, [](double xi, double) { return cplx(0.0, -sgn(xi)); });
}

inline SpectralField apply_dx(const SpectralField& f) {
  return apply_multiplier(f, [](double xi, double) { return cplx(0.0, xi); });
}

inline SpectralField apply_dy(const SpectralField& f) {
  return apply_multiplier(f, [](double, double eta) { return cplx(0.0, eta); });
}

// J^s = (1 + xi^2 + eta^2)^{s/2}
inline SpectralField apply_bessel(const SpectralField& f, double s) {
  return apply_multiplier(
      f, [s](double xi, double eta) { return std::pow(1.0 + xi * xi + eta * eta, 0.5 * s); });
}

inline SpectralField apply_dy_delta(const SpectralField& f, double delta) {
  if (!(delta >= -0.5)) throw std::invalid_argument("apply_dy_delta: order < -1/2");
  return apply_multiplier(f, [delta](double, double eta) { return abs_pow(eta, delta); });
}

// Linear part of the equation: L u = D_x^alpha u_x + H u_yy, symbol i(|xi|^alpha xi - sgn(xi) eta^2).
inline SpectralField apply_linear_operator(const SpectralField& f, double alpha) {
  return apply_multiplier(f, [alpha](double xi, double eta) {
    return cplx(0.0, abs_pow(xi, alpha) * xi - sgn(xi) * eta * eta);
  });
}

// 2/3 rule: keep 3|j| < nx and 3|k| < ny.
inline bool dealias_keep(const GridSpec& g, std::size_t ix, std::size_t iy) {
  const long j = std::labs(g.wavenumber_x(ix));
  const long k = std::labs(g.wavenumber_y(iy));
  return 3 * j < static_cast<long>(g.nx) && 3 * k < static_cast<long>(g.ny);
}

inline SpectralField dealias(SpectralField f) {
  const auto& g = f.grid;
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix)
      if (!dealias_keep(g, ix, iy)) f.at(ix, iy) = 0.0;
  return f;
}

inline RealField pointwise_product(const RealField& a, const RealField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("pointwise_product: grid mismatch");
  RealField out(a.grid);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
  return out;
}

// Product of the truncated inputs, exact (alias-free) after the output truncation.
inline SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  f.check_same(g);
  const auto a = synthesize_real(dealias(f));
  const auto b = synthesize_real(dealias(g));
  return dealias(forward_transform(pointwise_product(a, b)));
}

}  // namespace fbo2d
