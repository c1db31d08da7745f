#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbo2d/multipliers.hpp"
#include "fbo2d/norms.hpp"

namespace fbo2d {

// sigma(x) = g(x) / (g(x) + g(1 - x)), g(x) = exp(-1/x) for x > 0.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

// 1 on r <= 1, 0 on r >= 2
inline double lp_chi(double r) { return smooth_step(2.0 - r); }

// phi(r) = chi(r) - chi(2r), supported in 1/2 < r < 2
inline double lp_phi(double r) { return lp_chi(r) - lp_chi(2.0 * r); }

// Block k: chi for k = 0, phi(r / 2^k) otherwise.
inline double block_symbol(int k, double r) {
  if (k < 0) return 0.0;
  if (k == 0) return lp_chi(r);
  const double sc = std::ldexp(1.0, -k);
  return lp_chi(r * sc) - lp_chi(2.0 * r * sc);
}

// Enlarged block: Q0 + Q1 at k = 0, Q_{k-1} + Q_k + Q_{k+1} otherwise.
inline double tilde_symbol(int k, double r) {
  double v = block_symbol(k, r) + block_symbol(k + 1, r);
  if (k >= 1) v += block_symbol(k - 1, r);
  return v;
}

// Blocks 0..count-1 cover every lattice radius.
inline int block_count(const GridSpec& g) {
  const double rmax = std::hypot(g.dxi() * (g.nx / 2), g.deta() * (g.ny / 2));
  int k = 0;
  while (std::ldexp(1.0, k) < rmax) ++k;
  return k + 1;
}

inline SpectralField dyadic_project(const SpectralField& u, int k) {
  if (k < 0) throw std::invalid_argument("dyadic_project: block index must be >= 0");
  return apply_multiplier(u, [k](double xi, double eta) { return block_symbol(k, std::hypot(xi, eta)); });
}

inline SpectralField tilde_project(const SpectralField& u, int k) {
  if (k < 0) throw std::invalid_argument("tilde_project: block index must be >= 0");
  return apply_multiplier(u, [k](double xi, double eta) { return tilde_symbol(k, std::hypot(xi, eta)); });
}

// max over the lattice of |chi + sum_k phi_k - 1|
inline double partition_residual(const GridSpec& g) {
  const int K = block_count(g);
  double worst = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double r = std::hypot(g.xi(ix), g.eta(iy));
      double s = 0.0;
      for (int k = 0; k < K; ++k) s += block_symbol(k, r);
      worst = std::max(worst, std::abs(s - 1.0));
    }
  return worst;
}

struct CommutatorResult {
  SpectralField commutator;
  double ratio = 0.0;
};

// [Q_k, v d_x] w = Q_k(v w_x) - v (Q_k w)_x, ratio against ||grad v||_inf ||w||_2.
inline CommutatorResult lp_commutator(int k, const SpectralField& v, const SpectralField& w) {
  const auto wx = apply_dx(w);
  auto left = dyadic_project(dealiased_product(v, wx), k);
  left -= dealiased_product(v, apply_dx(dyadic_project(w, k)));
  CommutatorResult r;
  const double den = grad_linf(v) * l2_norm(w);
  r.ratio = den > 0.0 ? l2_norm(left) / den : 0.0;
  r.commutator = std::move(left);
  return r;
}

struct WeightSequence {
  double s = 0.0;
  std::vector<int> breakpoints;  // N_0 < N_1 < ...
  std::vector<double> mu;        // mu_i, i = 0..i_max
  std::vector<double> w;         // w_{2^i}

  std::size_t size() const { return w.size(); }

  // pure power weights w = lambda^s
  static WeightSequence power(double s, int i_max) {
    WeightSequence ws;
    ws.s = s;
    ws.mu.assign(i_max + 1, 1.0);
    ws.fill_weights();
    return ws;
  }

  // w_{i+1} = w_i 2^s sqrt(mu_{i+1}/mu_i), so the doubling bounds hold bit-exactly.
  void fill_weights() {
    w.assign(mu.size(), 0.0);
    if (mu.empty()) return;
    const double p = std::pow(2.0, s);
    w[0] = std::sqrt(mu[0]);
    for (std::size_t i = 1; i < mu.size(); ++i) w[i] = (w[i - 1] * p) * std::sqrt(mu[i] / mu[i - 1]);
  }

  bool doubling_invariant() const {
    const double p = std::pow(2.0, s);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const double lo = w[i] * p;
      if (!(lo <= w[i + 1] && w[i + 1] <= lo * 2.0)) return false;
    }
    return true;
  }

  bool ratio_nondecreasing() const {
    for (std::size_t i = 0; i + 1 < mu.size(); ++i)
      if (mu[i + 1] < mu[i]) return false;
    return true;
  }
};

// Tail sum from index n onwards (entries past the end count as 0).
inline double tail_sum(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = a.size(); i-- > n;) s += a[i];
  return s;
}

struct WeightConstructionError : std::runtime_error {
  int level;
  WeightConstructionError(int k, const std::string& msg) : std::runtime_error(msg), level(k) {}
};

// Breakpoints: N_k is the least index >= N_{k-1} + 1 (N_{-1} = 0) with sup_n sum_{i >= N_k} a_i^n < 2^-k.
// Levels mu_i = 2^{k/2} on N_{k-1} <= i < N_k, and 2^{K/2} past the last breakpoint.
inline WeightSequence construct_weights(const std::vector<std::vector<double>>& family, double s,
                                        int i_max, int k_levels = 8) {
  if (family.empty()) throw std::invalid_argument("construct_weights: empty family");
  if (i_max < 1 || k_levels < 1) throw std::invalid_argument("construct_weights: bad range");
  for (const auto& a : family)
    for (double v : a)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("construct_weights: sequences must be finite and nonnegative");
  auto sup_tail = [&](std::size_t n) {
    double m = 0.0;
    for (const auto& a : family) m = std::max(m, tail_sum(a, n));
    return m;
  };
  WeightSequence ws;
  ws.s = s;
  int prev = 0;
  for (int k = 0; k < k_levels; ++k) {
    const double target = std::ldexp(1.0, -k);
    int n = prev + 1;
    while (n <= i_max && !(sup_tail(n) < target)) ++n;
    if (n > i_max)
      throw WeightConstructionError(k, "construct_weights: tail condition for level k = " +
                                           std::to_string(k) + " not reached within i_max = " +
                                           std::to_string(i_max));
    ws.breakpoints.push_back(n);
    prev = n;
  }
  ws.mu.assign(i_max + 1, 0.0);
  for (int i = 0; i <= i_max; ++i) {
    int k = 0;
    while (k < k_levels && i >= ws.breakpoints[k]) ++k;
    ws.mu[i] = std::pow(2.0, 0.5 * k);
  }
  ws.fill_weights();
  return ws;
}

// sum_{i < N_0} a_i + sqrt(2) / (1 - 2^{-1/2}) bounds sum_i mu_i a_i for every member.
inline double weighted_sum_bound(const WeightSequence& ws, const std::vector<double>& a) {
  double head = 0.0;
  for (int i = 0; i < ws.breakpoints.front() && i < static_cast<int>(a.size()); ++i) head += a[i];
  return head + std::sqrt(2.0) / (1.0 - std::sqrt(0.5));
}

inline double weighted_sum(const WeightSequence& ws, const std::vector<double>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size() && i < ws.mu.size(); ++i) s += ws.mu[i] * a[i];
  return s;
}

// sum_k w_{2^k}^2 ||Q_k u||^2
inline double weighted_lp_functional(const SpectralField& u, const WeightSequence& ws) {
  const int K = block_count(u.grid);
  double acc = 0.0;
  for (int k = 0; k < K; ++k) {
    const double b = l2_norm(dyadic_project(u, k));
    if (b == 0.0) continue;
    if (k >= static_cast<int>(ws.size()))
      throw std::invalid_argument("weighted_lp_functional: no weight for active block " + std::to_string(k));
    acc += ws.w[k] * ws.w[k] * b * b;
  }
  return acc;
}

// ||Q_k u||^2 for every block
inline std::vector<double> block_energies(const SpectralField& u) {
  const int K = block_count(u.grid);
  std::vector<double> e(K);
  for (int k = 0; k < K; ++k) {
    const double b = l2_norm(dyadic_project(u, k));
    e[k] = b * b;
  }
  return e;
}

}  // namespace fbo2d
