#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbo2d/fft.hpp"
#include "fbo2d/grid.hpp"

namespace fbo2d {

using cplx = std::complex<double>;

struct RealField {
  GridSpec grid;
  std::vector<double> values;

  RealField() = default;
  explicit RealField(const GridSpec& g) : grid(g), values(g.size(), 0.0) {}
  RealField(const GridSpec& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
      throw std::invalid_argument("real field: expected " + std::to_string(grid.size()) +
                                  " samples, got " + std::to_string(values.size()));
  }

  double& at(std::size_t ix, std::size_t iy) { return values[grid.index(ix, iy)]; }
  double at(std::size_t ix, std::size_t iy) const { return values[grid.index(ix, iy)]; }

  template <class F>
  static RealField sample(const GridSpec& g, F&& f) {
    RealField u(g);
    for (std::size_t iy = 0; iy < g.ny; ++iy)
      for (std::size_t ix = 0; ix < g.nx; ++ix) u.at(ix, iy) = f(g.x(ix), g.y(iy));
    return u;
  }
};

// Coefficients approximate the continuous transform
//   f^(xi, eta) = (2 pi)^-1 \int f(x, y) e^{-i(x xi + y eta)} dx dy
// so that sum |f^|^2 * dual_cell_area equals the grid L2 norm squared.
struct SpectralField {
  GridSpec grid;
  std::vector<cplx> coeffs;

  SpectralField() = default;
  explicit SpectralField(const GridSpec& g) : grid(g), coeffs(g.size(), cplx{}) {}
  SpectralField(const GridSpec& g, std::vector<cplx> c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.size() != grid.size())
      throw std::invalid_argument("spectral field: coefficient count does not match grid");
  }

  cplx& at(std::size_t ix, std::size_t iy) { return coeffs[grid.index(ix, iy)]; }
  const cplx& at(std::size_t ix, std::size_t iy) const { return coeffs[grid.index(ix, iy)]; }

  SpectralField& operator+=(const SpectralField& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
  }
  SpectralField& operator*=(cplx a) {
    for (auto& c : coeffs) c *= a;
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(cplx s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= cplx(s, 0.0); }

  // this += a * o
  void axpy(cplx a, const SpectralField& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += a * o.coeffs[i];
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs) m = std::max(m, std::abs(c));
    return m;
  }

  bool all_finite() const {
    for (const auto& c : coeffs)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
  }

  void check_same(const SpectralField& o) const {
    if (!(o.grid == grid)) throw std::invalid_argument("spectral fields live on different grids");
  }
};

inline double forward_scale(const GridSpec& g) {
  return g.lx * g.ly / (two_pi * static_cast<double>(g.size()));
}
inline double inverse_scale(const GridSpec& g) { return two_pi / (g.lx * g.ly); }

inline SpectralField forward_transform(const RealField& u) {
  const auto& g = u.grid;
  g.validate();
  if (u.values.size() != g.size())
    throw std::invalid_argument("forward_transform: sample count " +
                                std::to_string(u.values.size()) + " does not match grid " +
                                std::to_string(g.nx) + "x" + std::to_string(g.ny));
  std::vector<cplx> a(u.values.begin(), u.values.end());
  detail::dft_inplace(a, static_cast<int>(g.ny), static_cast<int>(g.nx), FFTW_FORWARD);
  const double sc = forward_scale(g);
  for (auto& c : a) c *= sc;
  return {g, std::move(a)};
}

// max |c(k) - conj(c(-k))| relative to max |c|; 0 for the zero field.
inline double hermitian_defect(const SpectralField& f) {
  const auto& g = f.grid;
  double worst = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const auto& a = f.coeffs[g.index(ix, iy)];
      const auto& b = f.coeffs[g.mirror_index(ix, iy)];
      worst = std::max(worst, std::abs(a - std::conj(b)));
    }
  const double m = f.max_abs();
  return m > 0.0 ? worst / m : 0.0;
}

inline void enforce_hermitian(SpectralField& f) {
  const auto& g = f.grid;
  std::vector<cplx> out(f.coeffs.size());
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const auto i = g.index(ix, iy);
      out[i] = 0.5 * (f.coeffs[i] + std::conj(f.coeffs[g.mirror_index(ix, iy)]));
    }
  f.coeffs = std::move(out);
}

// Complex samples of the inverse transform (no symmetry requirement).
inline std::vector<cplx> inverse_complex(const SpectralField& f) {
  std::vector<cplx> a = f.coeffs;
  detail::dft_inplace(a, static_cast<int>(f.grid.ny), static_cast<int>(f.grid.nx), FFTW_BACKWARD);
  const double sc = inverse_scale(f.grid);
  for (auto& c : a) c *= sc;
  return a;
}

// Real part of the inverse transform, no Hermitian check.
inline RealField synthesize_real(const SpectralField& f) {
  auto a = inverse_complex(f);
  RealField u(f.grid);
  for (std::size_t i = 0; i < a.size(); ++i) u.values[i] = a[i].real();
  return u;
}

inline constexpr double hermitian_tolerance = 1e-9;

inline RealField inverse_transform(const SpectralField& f) {
  f.grid.validate();
  if (f.coeffs.size() != f.grid.size())
    throw std::invalid_argument("inverse_transform: coefficient count does not match grid");
  const double d = hermitian_defect(f);
  if (d > hermitian_tolerance)
    throw std::domain_error("inverse_transform: coefficients are not Hermitian (defect " +
                            std::to_string(d) + "), samples would be complex");
  return synthesize_real(f);
}

}  // namespace fbo2d
