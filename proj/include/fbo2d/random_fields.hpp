#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "fbo2d/multipliers.hpp"
#include "fbo2d/spectral_field.hpp"

namespace fbo2d {

// Band-limited random real field. Draws happen over integer wavenumbers in a fixed
// order, so the same seed gives the same function on every grid of the same box
// as long as the band fits (kmax < n/6 keeps products alias-free under the 2/3 rule).
struct BandSpec {
  long kmax_x = 4;
  long kmax_y = 4;
  long jmin = 0;          // |j| < jmin suppressed (jmin = 1 gives zero x-mean)
  double rolloff = 0.0;   // amplitude factor exp(-rolloff * (j^2 + k^2) / kmax^2)
  double amplitude = 1.0;
};

inline SpectralField random_band_limited(const GridSpec& g, std::uint64_t seed, const BandSpec& b) {
  if (b.kmax_x < 0 || b.kmax_y < 0) throw std::invalid_argument("random field: negative band");
  if (2 * b.kmax_x >= static_cast<long>(g.nx) || 2 * b.kmax_y >= static_cast<long>(g.ny))
    throw std::invalid_argument("random field: band does not fit the grid");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  SpectralField f(g);
  const double km2 = static_cast<double>(std::max<long>(1, b.kmax_x * b.kmax_x + b.kmax_y * b.kmax_y));
  for (long k = 0; k <= b.kmax_y; ++k)
    for (long j = -b.kmax_x; j <= b.kmax_x; ++j) {
      if (k == 0 && j < 0) continue;
      const double re = nd(rng), im = nd(rng);
      if (std::labs(j) < b.jmin) continue;
      const double amp = b.amplitude * std::exp(-b.rolloff * static_cast<double>(j * j + k * k) / km2);
      cplx c = amp * cplx(re, (j == 0 && k == 0) ? 0.0 : im);
      f.coeffs[*g.index_of_wavenumber(j, k)] = c;
      if (j != 0 || k != 0) f.coeffs[*g.index_of_wavenumber(-j, -k)] = std::conj(c);
    }
  return f;
}

inline RealField gaussian_bump(const GridSpec& g, double amp, double x0, double y0, double sx,
                               double sy) {
  return RealField::sample(g, [&](double x, double y) {
    const double a = (x - x0) / sx, b = (y - y0) / sy;
    return amp * std::exp(-0.5 * (a * a + b * b));
  });
}

// exp(-((x-x0)/sx)^2/2 - ((y-y0)/sy)^2/2) cos(k0 (x-x0)), with the |xi| < xi_min band removed.
inline SpectralField modulated_gaussian(const GridSpec& g, double x0, double y0, double sx, double sy,
                                        double k0, double xi_min) {
  auto u = RealField::sample(g, [&](double x, double y) {
    const double a = (x - x0) / sx, b = (y - y0) / sy;
    return std::exp(-0.5 * (a * a + b * b)) * std::cos(k0 * (x - x0));
  });
  auto f = forward_transform(u);
  return apply_multiplier(f, [xi_min](double xi, double) { return std::abs(xi) < xi_min ? 0.0 : 1.0; });
}

// Random phases with |u^| proportional to (1 + r^2)^{-(s + 1 + kappa)/2}; normalized to unit H^s norm
// on the grid. Lies in H^{s + kappa - 0} of the plane.
inline SpectralField synthetic_hs_data(const GridSpec& g, double s, double kappa, std::uint64_t seed,
                                       double kmax_fraction = 1.0 / 3.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(0.0, two_pi);
  SpectralField f(g);
  const long hx = static_cast<long>(static_cast<double>(g.nx) * kmax_fraction);
  const long hy = static_cast<long>(static_cast<double>(g.ny) * kmax_fraction);
  for (long k = 0; k <= hy; ++k)
    for (long j = -hx; j <= hx; ++j) {
      if (k == 0 && j < 0) continue;
      const double ph = ud(rng);
      if (j == 0 && k == 0) continue;
      if (2 * std::labs(j) >= static_cast<long>(g.nx) || 2 * k >= static_cast<long>(g.ny)) continue;
      const double xi = g.dxi() * j, eta = g.deta() * k;
      const double a = std::pow(1.0 + xi * xi + eta * eta, -0.5 * (s + 1.0 + kappa));
      const cplx c = std::polar(a, ph);
      f.coeffs[*g.index_of_wavenumber(j, k)] = c;
      f.coeffs[*g.index_of_wavenumber(-j, -k)] = std::conj(c);
    }
  double acc = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix)
      acc += std::pow(1.0 + g.xi(ix) * g.xi(ix) + g.eta(iy) * g.eta(iy), s) * std::norm(f.at(ix, iy));
  const double nrm = std::sqrt(acc * g.dual_cell_area());
  if (nrm > 0) f *= cplx(1.0 / nrm, 0.0);
  return f;
}

}  // namespace fbo2d
