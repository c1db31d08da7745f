#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace fbo2d {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Periodic box [0,lx) x [0,ly) sampled on an nx-by-ny lattice.
///
/// Storage everywhere in the library is row-major with y as the slow index:
/// element (ix, iy) lives at iy * nx + ix, for samples and coefficients alike.
/// Coefficient index ix maps to the signed wavenumber j = ix for ix < nx/2 and
/// j = ix - nx otherwise, so the unpaired Nyquist index nx/2 carries j = -nx/2.
struct GridSpec {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double lx = two_pi;
  double ly = two_pi;

  GridSpec() = default;
  GridSpec(std::size_t nx_, std::size_t ny_, double lx_, double ly_)
      : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
    validate();
  }

  void validate() const {
    if (nx < 4 || ny < 4 || !is_power_of_two(nx) || !is_power_of_two(ny))
      throw std::invalid_argument("grid: nx and ny must be powers of two >= 4 (got " +
                                  std::to_string(nx) + "x" + std::to_string(ny) + ")");
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
      throw std::invalid_argument("grid: box lengths must be positive and finite");
  }

  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx + ix; }

  double dx() const { return lx / static_cast<double>(nx); }
  double dy() const { return ly / static_cast<double>(ny); }
  double x(std::size_t ix) const { return dx() * static_cast<double>(ix); }
  double y(std::size_t iy) const { return dy() * static_cast<double>(iy); }

  /// Physical-space quadrature weight dx*dy.
  double cell_area() const { return dx() * dy(); }
  /// Frequency-lattice cell d(xi)*d(eta) = (2 pi)^2 / (lx ly).
  double dual_cell_area() const { return two_pi * two_pi / (lx * ly); }
  double dxi() const { return two_pi / lx; }
  double deta() const { return two_pi / ly; }

  long wavenumber_x(std::size_t ix) const {
    const auto half = static_cast<long>(nx / 2);
    const auto i = static_cast<long>(ix);
    return i < half ? i : i - static_cast<long>(nx);
  }
  long wavenumber_y(std::size_t iy) const {
    const auto half = static_cast<long>(ny / 2);
    const auto i = static_cast<long>(iy);
    return i < half ? i : i - static_cast<long>(ny);
  }
  double xi(std::size_t ix) const { return dxi() * static_cast<double>(wavenumber_x(ix)); }
  double eta(std::size_t iy) const { return deta() * static_cast<double>(wavenumber_y(iy)); }

  bool is_nyquist_x(std::size_t ix) const { return ix == nx / 2; }
  bool is_nyquist_y(std::size_t iy) const { return iy == ny / 2; }

  /// Storage index of the wavenumber pair (j, k), or nullopt if it is not on the lattice
  /// (the Nyquist wavenumber +n/2 is identified with -n/2).
  std::optional<std::size_t> index_of_wavenumber(long j, long k) const {
    const auto hx = static_cast<long>(nx / 2);
    const auto hy = static_cast<long>(ny / 2);
    if (j < -hx || j > hx || k < -hy || k > hy) return std::nullopt;
    const auto ix = static_cast<std::size_t>((j + static_cast<long>(nx)) % static_cast<long>(nx));
    const auto iy = static_cast<std::size_t>((k + static_cast<long>(ny)) % static_cast<long>(ny));
    return index(ix, iy);
  }

  /// Storage index of (-xi, -eta).
  std::size_t mirror_index(std::size_t ix, std::size_t iy) const {
    return index((nx - ix) % nx, (ny - iy) % ny);
  }

  GridSpec refined(std::size_t factor = 2) const { return {nx * factor, ny * factor, lx, ly}; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Regularity index for H^s. When `anisotropic` is set, the weight becomes
/// (1 + xi^2)^a (1 + eta^2)^b instead of (1 + xi^2 + eta^2)^s.
struct SobolevIndex {
  double s = 0.0;
  struct Orders {
    double a;
    double b;
  };
  std::optional<Orders> anisotropic;

  SobolevIndex() = default;
  explicit SobolevIndex(double s_) : s(s_) {
    if (!std::isfinite(s)) throw std::invalid_argument("sobolev index must be finite");
  }
  static SobolevIndex aniso(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b))
      throw std::invalid_argument("sobolev orders must be finite");
    SobolevIndex idx(0.5 * (a + b));
    idx.anisotropic = Orders{a, b};
    return idx;
  }

  double weight(double xi, double eta) const {
    if (anisotropic)
      return std::pow(1.0 + xi * xi, anisotropic->a) * std::pow(1.0 + eta * eta, anisotropic->b);
    return std::pow(1.0 + xi * xi + eta * eta, s);
  }
};

/// Local well-posedness threshold 3/2 + (1 - alpha)/4.
inline double sobolev_threshold(double alpha) { return 1.5 + 0.25 * (1.0 - alpha); }

inline void require_order(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1], got " + std::to_string(alpha));
}

}  // namespace fbo2d
