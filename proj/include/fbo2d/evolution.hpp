#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbo2d/littlewood_paley.hpp"
#include "fbo2d/norms.hpp"
#include "fbo2d/parallel.hpp"
#include "fbo2d/propagator.hpp"
#include "fbo2d/quadrature.hpp"

namespace fbo2d {

struct Diagnostics {
  double t = 0.0;
  double integral = 0.0;  // \int u dx dy
  double l2 = 0.0;
  double linf = 0.0;
  double grad = 0.0;      // ||u_x||_inf + ||u_y||_inf
  std::vector<double> hs; // one per configured order
};

inline Diagnostics diagnose(const SpectralField& u, double t, const std::vector<double>& orders) {
  Diagnostics d;
  d.t = t;
  d.integral = two_pi * u.coeffs[0].real();
  d.l2 = l2_norm(u);
  const auto sn = sup_norms(u);
  d.linf = sn.linf;
  d.grad = sn.grad;
  for (double s : orders) d.hs.push_back(sobolev_norm(u, s));
  return d;
}

struct SolverConfig {
  double alpha = 1.0;
  double T = 1.0;
  double dt = 1e-2;
  bool nonlinear = true;
  std::vector<double> orders;  // Sobolev orders tracked every step; empty means {s_alpha}
  int snapshot_every = 0;      // 0: max(1, floor(T / (64 dt)))
  bool keep_partial = false;   // on blow-up return what was computed instead of throwing
};

struct Trajectory {
  GridSpec grid;
  double alpha = 1.0;
  double dt = 0.0;  // effective step, T / steps
  double T = 0.0;
  bool nonlinear = true;
  std::vector<double> orders;
  std::vector<Diagnostics> steps;        // every step, steps[0] at t = 0
  std::vector<double> snapshot_times;    // t_m
  std::vector<SpectralField> snapshots;  // u(t_m)
  std::vector<std::string> warnings;
  std::optional<double> blowup_time;     // last valid time if the run stopped early

  double t_end() const { return steps.empty() ? 0.0 : steps.back().t; }
};

// Advective CFL number dt * ||u||_inf * xi_max over the dealiased band.
inline double cfl_number(const SpectralField& u, double dt) {
  const double kx = u.grid.dxi() * std::floor((static_cast<double>(u.grid.nx) - 1.0) / 3.0);
  return dt * linf_norm(synthesize_real(u)) * kx;
}

inline int snapshot_cadence(double T, double dt) {
  return std::max(1, static_cast<int>(std::floor(T / (64.0 * dt) + 1e-9)));
}

inline Trajectory solve_ivp(const SpectralField& u0, const SolverConfig& cfg) {
  require_order(cfg.alpha);
  if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) throw std::invalid_argument("solve_ivp: T must be > 0");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw std::invalid_argument("solve_ivp: dt must be > 0");
  const int nsteps = std::max(1, static_cast<int>(std::ceil(cfg.T / cfg.dt - 1e-9)));
  Trajectory tr;
  tr.grid = u0.grid;
  tr.alpha = cfg.alpha;
  tr.T = cfg.T;
  tr.dt = cfg.T / nsteps;
  tr.nonlinear = cfg.nonlinear;
  tr.orders = cfg.orders.empty() ? std::vector<double>{sobolev_threshold(cfg.alpha)} : cfg.orders;
  if (std::abs(tr.dt - cfg.dt) > 1e-12 * cfg.dt) {
    std::ostringstream os;
    os << "dt adjusted from " << cfg.dt << " to " << tr.dt << " to land on T";
    tr.warnings.push_back(os.str());
  }
  const int every = cfg.snapshot_every > 0 ? cfg.snapshot_every : snapshot_cadence(cfg.T, tr.dt);
  if (cfg.nonlinear) {
    const double c = cfl_number(u0, tr.dt);
    if (c > 1.0) {
      std::ostringstream os;
      os << "CFL number " << c << " > 1 at t = 0 (dt ||u||_inf xi_max)";
      tr.warnings.push_back(os.str());
    }
  }
  IfRk4 rk(u0.grid, cfg.alpha, tr.dt, cfg.nonlinear);
  auto u = u0;
  zero_nyquist(u);
  tr.steps.reserve(nsteps + 1);
  tr.steps.push_back(diagnose(u, 0.0, tr.orders));
  tr.snapshot_times.push_back(0.0);
  tr.snapshots.push_back(u);
  for (int i = 1; i <= nsteps; ++i) {
    const double t_prev = tr.dt * (i - 1);
    try {
      u = rk.step(u, t_prev);
    } catch (const BlowUpError&) {
      tr.blowup_time = t_prev;
      if (cfg.keep_partial) return tr;
      throw BlowUpError(t_prev, "solve_ivp: blow-up, last valid time t = " + std::to_string(t_prev));
    }
    const double t = i == nsteps ? cfg.T : tr.dt * i;
    tr.steps.push_back(diagnose(u, t, tr.orders));
    if (i % every == 0 || i == nsteps) {
      tr.snapshot_times.push_back(t);
      tr.snapshots.push_back(u);
    }
  }
  return tr;
}

// trapezoid of a per-step series over the first `upto` + 1 steps
template <class Get>
double integrate_steps(const Trajectory& tr, std::size_t upto, Get&& get) {
  double acc = 0.0;
  for (std::size_t i = 1; i <= upto && i < tr.steps.size(); ++i)
    acc += 0.5 * (get(tr.steps[i - 1]) + get(tr.steps[i])) * (tr.steps[i].t - tr.steps[i - 1].t);
  return acc;
}

inline double grad_integral(const Trajectory& tr, std::size_t upto) {
  return integrate_steps(tr, upto, [](const Diagnostics& d) { return d.grad; });
}

// f(T) = ||u||_{L^1_T L^inf} + ||grad u||_{L^1_T L^inf}
inline double ft_norm(const Trajectory& tr, std::size_t upto) {
  return integrate_steps(tr, upto, [](const Diagnostics& d) { return d.linf + d.grad; });
}
inline double ft_norm(const Trajectory& tr) { return ft_norm(tr, tr.steps.size() - 1); }

// ---------------------------------------------------------------------------
// Energy inequality d/dt ||u||_{H^s}^2 <= C ||grad u||_inf ||u||_{H^s}^2

struct EnergyReport {
  double s = 0.0;
  std::vector<double> t;
  std::vector<double> ratio;  // centered dE/dt / (grad E)
  std::vector<double> excluded_t;
  double C = 0.0;             // max(0, max ratio)
  double worst_integrated = 0.0;  // max over t of (E(t) - E(0)) - C \int grad sup E, normalized by E(0)
  bool integrated_holds = true;
};

inline std::size_t order_slot(const Trajectory& tr, double s) {
  for (std::size_t i = 0; i < tr.orders.size(); ++i)
    if (tr.orders[i] == s) return i;
  throw std::invalid_argument("energy_track: order " + std::to_string(s) + " was not tracked by the run");
}

inline EnergyReport energy_track(const Trajectory& tr, double s) {
  if (tr.steps.size() < 5) throw std::invalid_argument("energy_track: need at least 5 time levels");
  const std::size_t slot = order_slot(tr, s);
  auto E = [&](std::size_t i) { return tr.steps[i].hs[slot] * tr.steps[i].hs[slot]; };
  EnergyReport r;
  r.s = s;
  double cmax = 0.0;
  for (std::size_t i = 1; i + 1 < tr.steps.size(); ++i) {
    const double dE = (E(i + 1) - E(i - 1)) / (tr.steps[i + 1].t - tr.steps[i - 1].t);
    const double den = tr.steps[i].grad * E(i);
    if (den < 1e-14) {
      r.excluded_t.push_back(tr.steps[i].t);
      continue;
    }
    r.t.push_back(tr.steps[i].t);
    r.ratio.push_back(dE / den);
    cmax = std::max(cmax, dE / den);
  }
  r.C = cmax;
  // integrated form: E(t) <= E(0) + C \int_0^t grad * sup_{[0,t]} E
  const double e0 = E(0);
  double sup_e = e0, g_int = 0.0;
  for (std::size_t i = 1; i < tr.steps.size(); ++i) {
    g_int += 0.5 * (tr.steps[i - 1].grad + tr.steps[i].grad) * (tr.steps[i].t - tr.steps[i - 1].t);
    sup_e = std::max(sup_e, E(i));
    const double excess = E(i) - e0 - r.C * g_int * sup_e;
    const double scale = std::max(e0, 1e-300);
    r.worst_integrated = std::max(r.worst_integrated, excess / scale);
  }
  r.integrated_holds = r.worst_integrated <= 1e-9;
  return r;
}

// ---------------------------------------------------------------------------
// f(T) <= C T^k (1 + f(T)) ||u||_{L^inf_T H^s} across a T-ladder on one run

struct FtFit {
  std::vector<double> T, f, hs_sup, R;
  double k = 0.75;
  double C = 0.0;
  double raw_slope = 0.0;
  bool holds = true;
};

inline FtFit lemma51_fit(const Trajectory& tr, double s, int ladder = 8) {
  const std::size_t slot = order_slot(tr, s);
  const std::size_t n = tr.steps.size() - 1;
  if (n < static_cast<std::size_t>(ladder)) throw std::invalid_argument("lemma51_fit: run too short for the ladder");
  FtFit r;
  std::vector<double> lx, ly;
  for (int j = 1; j <= ladder; ++j) {
    const std::size_t upto = n * j / ladder;
    double sup = 0;
    for (std::size_t i = 0; i <= upto; ++i) sup = std::max(sup, tr.steps[i].hs[slot]);
    const double f = ft_norm(tr, upto), T = tr.steps[upto].t;
    r.T.push_back(T);
    r.f.push_back(f);
    r.hs_sup.push_back(sup);
    const double R = sup > 0 ? f / ((1.0 + f) * sup) : 0.0;
    r.R.push_back(R);
    if (R > 0) {
      lx.push_back(std::log(T));
      ly.push_back(std::log(R));
    }
  }
  if (lx.size() >= 2) {
    r.raw_slope = least_squares(lx, ly).slope;
    r.k = std::clamp(r.raw_slope, 0.5 + 1e-6, 1.0 - 1e-6);
  }
  for (std::size_t j = 0; j < r.T.size(); ++j) r.C = std::max(r.C, r.R[j] / std::pow(r.T[j], r.k));
  for (std::size_t j = 0; j < r.T.size(); ++j)
    if (r.f[j] > r.C * std::pow(r.T[j], r.k) * (1.0 + r.f[j]) * r.hs_sup[j] * (1.0 + 1e-12)) r.holds = false;
  return r;
}

// ---------------------------------------------------------------------------
// A-priori doubling bound on T = (A ||u0||_{H^s} + 1)^{-2}

struct AprioriPoint {
  double A = 0.0;
  double T = 0.0;
  double hs0 = 0.0;
  double hs_sup = 0.0;
  double ft = 0.0;
  bool blew_up = false;
  bool doubling_holds = false;
};

struct AprioriReport {
  double s = 0.0;
  std::vector<AprioriPoint> points;
  std::optional<double> smallest_passing_A;
};

inline AprioriReport apriori_experiment(const SpectralField& u0, double s, double alpha, std::vector<double> A_values,
                                        double dt, const ParallelFor& pfor = ParallelFor(1)) {
  require_order(alpha);
  if (A_values.empty()) throw std::invalid_argument("apriori_experiment: empty A_s sweep");
  for (double A : A_values)
    if (!(A > 0.0)) throw std::invalid_argument("apriori_experiment: A_s values must be > 0");
  std::sort(A_values.begin(), A_values.end());
  AprioriReport rep;
  rep.s = s;
  rep.points.resize(A_values.size());
  const double h0 = sobolev_norm(u0, s);
  pfor(A_values.size(), [&](std::size_t i) {
    AprioriPoint p;
    p.A = A_values[i];
    p.hs0 = h0;
    p.T = std::pow(p.A * h0 + 1.0, -2.0);
    SolverConfig cfg;
    cfg.alpha = alpha;
    cfg.T = p.T;
    cfg.dt = std::min(dt, p.T / 8.0);
    cfg.orders = {s};
    cfg.keep_partial = true;
    const auto tr = solve_ivp(u0, cfg);
    p.blew_up = tr.blowup_time.has_value();
    for (const auto& d : tr.steps) p.hs_sup = std::max(p.hs_sup, d.hs[0]);
    p.ft = ft_norm(tr);
    p.doubling_holds = !p.blew_up && p.hs_sup <= 2.0 * h0 * (1.0 + 1e-12);
    rep.points[i] = p;
  });
  for (const auto& p : rep.points)
    if (p.doubling_holds) {
      rep.smallest_passing_A = p.A;
      break;
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Bona-Smith regularization u_{0,n} = (rho(|(xi, eta)| / n) u0^)

inline double bona_smith_profile(double r) { return smooth_step(2.0 * (1.0 - r)); }

inline SpectralField bona_smith_regularize(const SpectralField& u0, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("bona_smith_regularize: n must be > 0");
  return apply_multiplier(u0, [n](double xi, double eta) { return bona_smith_profile(std::hypot(xi, eta) / n); });
}

struct TailReport {
  double s = 0.0;
  std::vector<double> n;
  std::vector<double> l2_tail;
  std::vector<double> sigma;                  // interpolation orders
  std::vector<std::vector<double>> hs_tail;   // [sigma][n]
  double l2_rate = 0.0;                       // -slope of log tail vs log n
  std::vector<double> sigma_rate;
  bool pass = false;                          // l2_rate >= s - 0.1 and sigma rates >= s - sigma - 0.1
};

inline TailReport bona_smith_tail(const SpectralField& u0, double s, const std::vector<double>& n_ladder,
                                  const std::vector<double>& sigmas = {}) {
  if (n_ladder.size() < 3) throw std::invalid_argument("bona_smith_tail: need at least 3 ladder points");
  TailReport r;
  r.s = s;
  r.n = n_ladder;
  r.sigma = sigmas;
  r.hs_tail.assign(sigmas.size(), {});
  std::vector<double> lx;
  std::vector<double> ly;
  std::vector<std::vector<double>> lys(sigmas.size());
  for (double n : n_ladder) {
    auto d = bona_smith_regularize(u0, n);
    d -= u0;
    const double e = l2_norm(d);
    r.l2_tail.push_back(e);
    lx.push_back(std::log(n));
    ly.push_back(std::log(e));
    for (std::size_t j = 0; j < sigmas.size(); ++j) {
      const double h = sobolev_norm(d, sigmas[j]);
      r.hs_tail[j].push_back(h);
      lys[j].push_back(std::log(h));
    }
  }
  r.l2_rate = -least_squares(lx, ly).slope;
  r.pass = std::isfinite(r.l2_rate) && r.l2_rate >= s - 0.1;
  for (std::size_t j = 0; j < sigmas.size(); ++j) {
    r.sigma_rate.push_back(-least_squares(lx, lys[j]).slope);
    r.pass = r.pass && r.sigma_rate.back() >= s - sigmas[j] - 0.1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Uniqueness: ||u1 - u2||^2 <= ||phi1 - phi2||^2 e^K, K = max_i \int ||grad u_i||_inf

struct UniquenessReport {
  std::vector<double> t;
  std::vector<double> diff_sq;
  std::vector<double> bound;
  double K = 0.0;
  double d0_sq = 0.0;
  double t_common = 0.0;
  bool partial = false;
  bool holds = true;
  double max_diff = 0.0;  // sup_t ||u1 - u2||
};

inline UniquenessReport uniqueness_experiment(const SpectralField& phi1, const SpectralField& phi2, double alpha,
                                              double T, double dt, bool nonlinear = true) {
  phi1.check_same(phi2);
  SolverConfig cfg;
  cfg.alpha = alpha;
  cfg.T = T;
  cfg.dt = dt;
  cfg.nonlinear = nonlinear;
  cfg.keep_partial = true;
  const auto a = solve_ivp(phi1, cfg);
  const auto b = solve_ivp(phi2, cfg);
  UniquenessReport r;
  r.partial = a.blowup_time || b.blowup_time;
  const std::size_t m = std::min(a.snapshots.size(), b.snapshots.size());
  const std::size_t steps = std::min(a.steps.size(), b.steps.size()) - 1;
  r.t_common = a.steps[steps].t;
  auto d0 = phi1;
  d0 -= phi2;
  zero_nyquist(d0);
  r.d0_sq = std::pow(l2_norm(d0), 2);
  r.K = std::max(grad_integral(a, steps), grad_integral(b, steps));
  const double eK = std::exp(r.K);
  const double slack = 1e-24 + 1e-12 * std::pow(l2_norm(phi1), 2);
  for (std::size_t i = 0; i < m; ++i) {
    if (a.snapshot_times[i] > r.t_common) break;
    auto d = a.snapshots[i];
    d -= b.snapshots[i];
    const double q = std::pow(l2_norm(d), 2);
    r.t.push_back(a.snapshot_times[i]);
    r.diff_sq.push_back(q);
    r.bound.push_back(r.d0_sq * eK);
    r.max_diff = std::max(r.max_diff, std::sqrt(q));
    if (q > r.d0_sq * eK + slack) r.holds = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Continuous dependence along the Bona-Smith ladder

struct ConvergenceReport {
  double s = 0.0;
  std::vector<double> n;
  std::vector<double> sup_err;     // sup_t ||u_n(t) - u_ref(t)||_{H^s}
  double floor = 0.0;
  bool monotone = true;
  // weighted functional sum_k w_k^2 ||Q_k u_n(t)||^2
  WeightSequence weights;
  std::vector<double> functional_t0;
  std::vector<double> functional_sup;
  std::vector<double> weighted_sums;  // sum_i mu_i a_i^n
  std::vector<double> weighted_bounds;
  bool functional_finite = true;
  bool bound_at_t0 = true;
  double growth_spread = 0.0;  // sup_{n,t} F / sup_n F(0)
  bool functional_bounded = false;
  bool invariants_hold = false;
  std::string reference;
  bool pass() const { return monotone && functional_bounded && invariants_hold; }
};

inline ConvergenceReport convergence_experiment(const SpectralField& u0, double s, double alpha, double T, double dt,
                                                std::vector<double> n_ladder, int k_levels = 0,
                                                const ParallelFor& pfor = ParallelFor(1)) {
  require_order(alpha);
  if (n_ladder.size() < 2) throw std::invalid_argument("convergence_experiment: need at least 2 ladder points");
  std::sort(n_ladder.begin(), n_ladder.end());
  ConvergenceReport r;
  r.s = s;
  r.n = n_ladder;
  const int every = snapshot_cadence(T, dt);
  SolverConfig cfg;
  cfg.alpha = alpha;
  cfg.T = T;
  cfg.dt = dt;
  cfg.orders = {s};
  cfg.snapshot_every = every;
  SolverConfig ref_cfg = cfg;
  ref_cfg.dt = 0.5 * dt;
  ref_cfg.snapshot_every = 2 * every;
  std::ostringstream os;
  os << "reference: n = " << n_ladder.back() << " with dt/2 = " << ref_cfg.dt;
  r.reference = os.str();

  const std::size_t L = n_ladder.size();
  std::vector<Trajectory> runs(L + 1);
  std::vector<SpectralField> data(L);
  for (std::size_t i = 0; i < L; ++i) data[i] = bona_smith_regularize(u0, n_ladder[i]);
  pfor(L + 1, [&](std::size_t i) {
    runs[i] = i < L ? solve_ivp(data[i], cfg) : solve_ivp(data.back(), ref_cfg);
  });
  const auto& ref = runs[L];
  for (std::size_t i = 0; i < L; ++i) {
    if (runs[i].snapshots.size() != ref.snapshots.size())
      throw std::logic_error("convergence_experiment: snapshot schedules differ");
    double e = 0;
    for (std::size_t m = 0; m < ref.snapshots.size(); ++m) {
      auto d = runs[i].snapshots[m];
      d -= ref.snapshots[m];
      e = std::max(e, sobolev_norm(d, s));
    }
    r.sup_err.push_back(e);
  }
  r.floor = 1e-9 * std::max(1.0, sobolev_norm(u0, s));
  for (std::size_t i = 0; i + 1 < L; ++i)
    if (r.sup_err[i + 1] > 1.05 * r.sup_err[i] + r.floor) r.monotone = false;

  // family a_i^n = 4^{is} ||Q_i u_{0,n}||^2, normalized by the largest total
  std::vector<std::vector<double>> family(L);
  double Z = 0;
  for (std::size_t i = 0; i < L; ++i) {
    family[i] = block_energies(data[i]);
    for (std::size_t k = 0; k < family[i].size(); ++k) family[i][k] *= std::pow(4.0, s * double(k));
    double tot = 0;
    for (double v : family[i]) tot += v;
    Z = std::max(Z, tot);
  }
  if (Z > 0)
    for (auto& a : family)
      for (auto& v : a) v /= Z;
  const int i_max = block_count(u0.grid) - 1;
  if (Z == 0) {
    r.weights = WeightSequence::power(s, i_max);
  } else if (k_levels > 0) {
    r.weights = construct_weights(family, s, i_max, k_levels);
  } else {
    // as many levels as the finite block range supports
    for (int k = i_max; k >= 1; --k) {
      try {
        r.weights = construct_weights(family, s, i_max, k);
        break;
      } catch (const WeightConstructionError&) {
        if (k == 1) throw;
      }
    }
  }
  r.invariants_hold = r.weights.doubling_invariant() && r.weights.ratio_nondecreasing();
  double sup_all = 0, sup_t0 = 0;
  for (std::size_t i = 0; i < L; ++i) {
    double f0 = 0, fs = 0;
    for (std::size_t m = 0; m < runs[i].snapshots.size(); ++m) {
      const double f = weighted_lp_functional(runs[i].snapshots[m], r.weights);
      if (!std::isfinite(f)) r.functional_finite = false;
      if (m == 0) f0 = f;
      fs = std::max(fs, f);
    }
    r.functional_t0.push_back(f0);
    r.functional_sup.push_back(fs);
    sup_all = std::max(sup_all, fs);
    sup_t0 = std::max(sup_t0, f0);
    if (Z > 0) {
      r.weighted_sums.push_back(weighted_sum(r.weights, family[i]));
      r.weighted_bounds.push_back(weighted_sum_bound(r.weights, family[i]));
      if (r.weighted_sums.back() > r.weighted_bounds.back()) r.bound_at_t0 = false;
    }
  }
  r.growth_spread = sup_t0 > 0 ? sup_all / sup_t0 : 1.0;
  r.functional_bounded = r.functional_finite && r.bound_at_t0 && r.growth_spread < 2.0;
  return r;
}

// ---------------------------------------------------------------------------
// Lemma 6.5 along one run: log(F(t)/F(tau)) <= log C + C^ \int_tau^t ||grad u||_inf, fitted per window.

struct WindowFit {
  std::vector<double> C_hat;  // one per window
  double C = 1.0;
};

inline WindowFit lemma65_fit(const Trajectory& tr, const WeightSequence& ws, int windows = 2) {
  if (windows < 1 || tr.snapshots.size() < static_cast<std::size_t>(2 * windows + 1))
    throw std::invalid_argument("lemma65_fit: not enough snapshots for the windows");
  std::vector<double> F;
  for (const auto& u : tr.snapshots) F.push_back(weighted_lp_functional(u, ws));
  // gradient integral at each snapshot time
  std::vector<double> G;
  for (double ts : tr.snapshot_times) {
    std::size_t i = 0;
    while (i + 1 < tr.steps.size() && tr.steps[i].t < ts - 1e-12) ++i;
    G.push_back(grad_integral(tr, i));
  }
  WindowFit r;
  const std::size_t M = F.size() - 1;
  for (int w = 0; w < windows; ++w) {
    const std::size_t a = M * w / windows, b = M * (w + 1) / windows;
    double ch = 0;
    for (std::size_t i = a; i <= b; ++i)
      for (std::size_t j = i + 1; j <= b; ++j) {
        if (F[i] <= 0 || F[j] <= 0) continue;
        const double y = std::log(F[j] / F[i]), x = G[j] - G[i];
        if (x > 1e-14) ch = std::max(ch, y / x);
      }
    r.C_hat.push_back(ch);
  }
  return r;
}

}  // namespace fbo2d
