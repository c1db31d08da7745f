#pragma once

#include <cmath>
#include <map>
#include <string>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fbo2d {

inline void require_even_panels(int n, const char* who) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument(std::string(who) + ": Simpson needs an even panel count >= 2");
}

// Composite Simpson weights for n panels (n+1 nodes), unit spacing.
inline std::vector<double> simpson_weights(int n) {
  require_even_panels(n, "simpson_weights");
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  for (auto& v : w) v /= 3.0;
  return w;
}

template <class F>
auto simpson(F&& f, double a, double b, int n) {
  const auto w = simpson_weights(n);
  const double h = (b - a) / n;
  auto acc = w[0] * f(a);
  for (int i = 1; i <= n; ++i) acc += w[i] * f(a + h * i);
  return acc * h;
}

// Gauss-Legendre nodes/weights on [-1, 1] via Newton on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

// Composite Gauss-Legendre, `panels` equal pieces of [a,b], order-point rule on each.
template <class F>
auto gauss_composite(F&& f, double a, double b, int panels, int order = 16) {
  static thread_local std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, gauss_legendre(order)).first;
  const auto* rule = &it->second;
  const double h = (b - a) / panels;
  decltype(f(a)) acc{};
  for (int p = 0; p < panels; ++p) {
    const double c = a + h * (p + 0.5);
    for (int i = 0; i < order; ++i) acc += rule->second[i] * f(c + 0.5 * h * rule->first[i]);
  }
  return acc * (0.5 * h);
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares: need at least two matching points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace fbo2d
