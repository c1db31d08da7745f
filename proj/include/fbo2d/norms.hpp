#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fbo2d/multipliers.hpp"
#include "fbo2d/spectral_field.hpp"

namespace fbo2d {

inline double l2_norm(const RealField& u) {
  double s = 0.0;
  for (double v : u.values) s += v * v;
  return std::sqrt(s * u.grid.cell_area());
}

// Parseval form.
inline double l2_norm(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs) s += std::norm(c);
  return std::sqrt(s * f.grid.dual_cell_area());
}

inline double sobolev_norm(const SpectralField& f, const SobolevIndex& s) {
  const auto& g = f.grid;
  double acc = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    const double eta = g.eta(iy);
    for (std::size_t ix = 0; ix < g.nx; ++ix)
      acc += s.weight(g.xi(ix), eta) * std::norm(f.at(ix, iy));
  }
  return std::sqrt(acc * g.dual_cell_area());
}
inline double sobolev_norm(const SpectralField& f, double s) {
  return sobolev_norm(f, SobolevIndex(s));
}

inline double lp_norm(const RealField& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : u.values) s += std::pow(std::abs(v), p);
  return std::pow(s * u.grid.cell_area(), 1.0 / p);
}

inline double l1_norm(const RealField& u) { return lp_norm(u, 1.0); }
inline double linf_norm(const RealField& u) {
  return lp_norm(u, std::numeric_limits<double>::infinity());
}

// Real L2 inner product via coefficients; conj(a) * b summed.
inline cplx inner_product(const SpectralField& a, const SpectralField& b) {
  a.check_same(b);
  cplx s{};
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) s += std::conj(a.coeffs[i]) * b.coeffs[i];
  return s * a.grid.dual_cell_area();
}

struct SupNorms {
  double linf = 0.0;
  double grad = 0.0;   // ||d_x u||_inf + ||d_y u||_inf
  double w1inf = 0.0;  // linf + grad
};

inline SupNorms sup_norms(const SpectralField& f) {
  SupNorms r;
  r.linf = linf_norm(synthesize_real(f));
  r.grad = linf_norm(synthesize_real(apply_dx(f))) + linf_norm(synthesize_real(apply_dy(f)));
  r.w1inf = r.linf + r.grad;
  return r;
}

inline SupNorms sup_norms(const RealField& u) {
  SupNorms r;
  r.linf = linf_norm(u);
  const auto f = forward_transform(u);
  r.grad = linf_norm(synthesize_real(apply_dx(f))) + linf_norm(synthesize_real(apply_dy(f)));
  r.w1inf = r.linf + r.grad;
  return r;
}

inline double grad_linf(const SpectralField& f) {
  return linf_norm(synthesize_real(apply_dx(f))) + linf_norm(synthesize_real(apply_dy(f)));
}

// Zero-pad to a grid `factor` times finer (same box); Nyquist lines are dropped.
inline SpectralField zero_pad(const SpectralField& f, std::size_t factor) {
  const auto& g = f.grid;
  const GridSpec h = g.refined(factor);
  SpectralField out(h);
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      if (g.is_nyquist_x(ix) || g.is_nyquist_y(iy)) continue;
      auto idx = h.index_of_wavenumber(g.wavenumber_x(ix), g.wavenumber_y(iy));
      out.coeffs[*idx] = f.at(ix, iy);
    }
  return out;
}

}  // namespace fbo2d
