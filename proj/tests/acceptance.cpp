// One line per criterion: PASS/FAIL, measured values, wall time against the limit.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fbo2d/ensembles.hpp"
#include "fbo2d/evolution.hpp"
#include "fbo2d/illposedness.hpp"
#include "fbo2d/littlewood_paley.hpp"
#include "fbo2d/random_fields.hpp"

using namespace fbo2d;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel_l2(const SpectralField& a, const SpectralField& b) {
  auto d = a;
  d -= b;
  return l2_norm(d) / l2_norm(b);
}

double max_rel(const RealField& a, const RealField& b) {
  double m = 0, s = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
    s = std::max(s, std::abs(b.values[i]));
  }
  return m / s;
}

std::string fmt(const char* f, double v) {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

// ---------------------------------------------------------------------------

Outcome spectral_exactness() {
  const std::size_t sizes[] = {16, 32, 64, 128, 256};
  double parseval = 0, roundtrip = 0, compose = 0, hilbert = 0, skew = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t nx = sizes[i % 5], ny = sizes[(i / 5) % 5];
    GridSpec g(nx, ny, 1.0 + 0.37 * i, 2.0 + 0.11 * i);
    std::mt19937_64 rng(1000 + i);
    std::normal_distribution<double> nd;
    auto u = RealField::sample(g, [&](double, double) { return nd(rng); });
    const auto c = forward_transform(u);
    double phys = 0;
    for (double v : u.values) phys += v * v;
    phys *= g.cell_area();
    parseval = std::max(parseval, std::abs(std::pow(l2_norm(c), 2) - phys) / phys);
    roundtrip = std::max(roundtrip, max_rel(synthesize_real(c), u));

    const auto f = random_band_limited(g, 2000 + i, {static_cast<long>(nx / 2 - 1), static_cast<long>(ny / 2 - 1)});
    const double a = 0.1 + 0.008 * i, b = 0.9 - 0.005 * i;
    compose = std::max(compose, rel_l2(apply_dx_alpha(apply_dx_alpha(f, a), b), apply_dx_alpha(f, a + b)));
    auto hh = apply_hilbert_x(apply_hilbert_x(f));
    auto ref = apply_multiplier(f, [](double xi, double) { return xi == 0.0 ? 0.0 : -1.0; });
    hilbert = std::max(hilbert, rel_l2(hh, ref));
    skew = std::max(skew, skew_adjoint_residual(inverse_transform(f), 0.01 + 0.0099 * i));
  }
  Outcome o;
  o.pass = parseval < 1e-12 && roundtrip < 1e-12 && compose < 1e-12 && hilbert < 1e-12 && skew < 1e-12;
  o.detail = "parseval " + fmt("%.2e", parseval) + ", round trip " + fmt("%.2e", roundtrip) + ", D^a D^b " +
             fmt("%.2e", compose) + ", H^2 " + fmt("%.2e", hilbert) + ", skew " + fmt("%.2e", skew) +
             " (100 fields, up to 256x256)";
  return o;
}

Outcome propagator_group() {
  double unit = 0, group = 0, phase = 0;
  for (int i = 0; i < 20; ++i) {
    GridSpec g(64 << (i % 3), 64, 5.0 + i, 4.0 + 0.5 * i);
    const double alpha = 0.05 + 0.0475 * i;
    const auto phi = random_band_limited(g, 300 + i, {20, 20});
    const double t1 = 0.3 + 0.21 * i, t2 = 1.7 - 0.05 * i;
    const auto u = propagate(phi, t1, alpha);
    // physical-space L2
    auto l2phys = [&](const SpectralField& f) {
      const auto r = inverse_transform(f);
      double s = 0;
      for (double v : r.values) s += v * v;
      return std::sqrt(s * g.cell_area());
    };
    unit = std::max(unit, std::abs(l2phys(u) - l2phys(phi)) / l2phys(phi));
    group = std::max(group, rel_l2(propagate(propagate(phi, t1, alpha), t2, alpha), propagate(phi, t1 + t2, alpha)));
    // per-mode phase e^{i t rho}, rho = -(|xi|^a xi + sgn(xi) eta^2)
    SpectralField ref(g);
    for (std::size_t iy = 0; iy < g.ny; ++iy)
      for (std::size_t ix = 0; ix < g.nx; ++ix) {
        if (g.is_nyquist_x(ix) || g.is_nyquist_y(iy)) continue;
        const double xi = g.xi(ix), eta = g.eta(iy);
        const double sg = xi > 0 ? 1.0 : (xi < 0 ? -1.0 : 0.0);
        const double rho = -(std::pow(std::abs(xi), alpha) * xi + sg * eta * eta);
        ref.at(ix, iy) = std::exp(cplx(0.0, t1 * rho)) * phi.at(ix, iy);
      }
    phase = std::max(phase, rel_l2(u, ref));
  }
  Outcome o;
  o.pass = unit < 1e-12 && group < 1e-12 && phase < 1e-12;
  o.detail = "unitarity " + fmt("%.2e", unit) + ", group law " + fmt("%.2e", group) + ", per-mode phase " +
             fmt("%.2e", phase);
  return o;
}

Outcome solver_order() {
  GridSpec g(128, 128, 20.0, 20.0);
  const auto u0 = forward_transform(gaussian_bump(g, 2.0, 10.0, 10.0, 1.5, 1.5));
  Outcome o;
  o.pass = true;
  std::ostringstream os;
  for (double alpha : {0.5, 1.0}) {
    std::vector<SpectralField> ends;
    double l2_dev = 0;
    for (double dt : {0.05, 0.025, 0.0125}) {
      SolverConfig c;
      c.alpha = alpha;
      c.T = 1.0;
      c.dt = dt;
      const auto tr = solve_ivp(u0, c);
      ends.push_back(tr.snapshots.back());
      if (dt == 0.0125)
        for (const auto& d : tr.steps) l2_dev = std::max(l2_dev, std::abs(d.l2 - tr.steps[0].l2) / tr.steps[0].l2);
    }
    auto e1 = ends[0];
    e1 -= ends[1];
    auto e2 = ends[1];
    e2 -= ends[2];
    const double ratio = l2_norm(e1) / l2_norm(e2);
    o.pass = o.pass && ratio >= 12.0 && ratio <= 20.0 && l2_dev < 1e-6;
    os << "alpha " << alpha << ": ratio " << fmt("%.3f", ratio) << ", L2 drift " << fmt("%.2e", l2_dev) << "; ";
  }
  o.detail = os.str() + "128x128, T = 1";
  return o;
}

Outcome illposed_growth() {
  const std::vector<double> ladder{1e3, std::pow(10.0, 3.5), 1e4, std::pow(10.0, 4.5), 1e5};
  Outcome o;
  try {
    const auto f = growth_fit(0.5, 0.05, 1.6, 0.75, ladder, 8, 8);
    double worst = 0;
    for (const auto& p : f.points) worst = std::max(worst, p.residual);
    o.pass = f.increasing && f.within_band && f.phi_bounded && worst < 0.01;
    o.detail = "slope " + fmt("%.4f", f.fit.slope) + " vs " + fmt("%.5f", f.target) + " +- 0.15, increasing " +
               (f.increasing ? "yes" : "no") + ", phi band " + (f.phi_bounded ? "yes" : "no") +
               ", worst quadrature change " + fmt("%.2e", worst);
  } catch (const std::exception& e) {
    o.detail = e.what();
  }
  return o;
}

Outcome decay() {
  GridSpec g(512, 256, 128.0, 64.0);
  const auto phi = modulated_gaussian(g, 64.0, 32.0, 1.0, 0.5, 4.0, 4.0 * g.dxi());
  Outcome o;
  o.pass = true;
  std::ostringstream os;
  for (double alpha : {0.25, 0.5, 1.0}) {
    const double tb = decay_horizon(phi, alpha);
    if (!(0.5 * tb > 0.5)) {
      o.pass = false;
      os << "alpha " << alpha << ": empty window; ";
      continue;
    }
    double lo = 1e300, hi = 0;
    for (int i = 0; i <= 16; ++i) {
      const double t = 0.5 + (0.5 * tb - 0.5) * i / 16.0;
      const double r = decay_ratio(phi, t, alpha);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    o.pass = o.pass && hi / lo < 3.0;
    os << "alpha " << alpha << ": spread " << fmt("%.3f", hi / lo) << " on [0.5, " << fmt("%.3f", 0.5 * tb) << "]; ";
  }
  o.detail = os.str();
  return o;
}

Outcome oscillatory() {
  Outcome o;
  try {
    const double j0 = std::abs(oscillatory_J(0.0, 1.0).value);
    const double fres = std::sqrt(std::numbers::pi) / 2.0;
    o.pass = std::abs(j0 - fres) <= 0.02 * fres;
    std::ostringstream os;
    os << "|J(0)| = " << fmt("%.6f", j0) << " (sqrt(pi)/2 = " << fmt("%.6f", fres) << "); ";
    for (double alpha : {0.25, 0.5, 1.0}) {
      double sup = 0, worst = 0;
      for (int l = -50; l <= 50; ++l) {
        const auto r = oscillatory_J(l, alpha);
        sup = std::max(sup, std::abs(r.value));
        worst = std::max(worst, r.residual / std::abs(r.value));
      }
      o.pass = o.pass && std::isfinite(sup) && worst < 0.05;
      os << "alpha " << alpha << ": sup " << fmt("%.4f", sup) << ", residual " << fmt("%.1e", worst) << "; ";
    }
    o.detail = os.str();
  } catch (const std::exception& e) {
    o.detail = e.what();
  }
  return o;
}

Outcome ensembles() {
  EnsembleSpec e;
  e.draws = 50;
  std::vector<EnsembleResult> rs;
  e.seed = 101;
  rs.push_back(strichartz_ensemble(e, 0.5, 1.0, {4.0, 4.0}));
  e.seed = 202;
  rs.push_back(cor33_ensemble(e, 0.5, 1.0, 0.1));
  e.seed = 303;
  rs.push_back(refined_ensemble(e, 0.5, 1.0, 0.1));
  for (double s : {1.0, 1.7, 2.5}) {
    e.seed = 400 + static_cast<std::uint64_t>(10 * s);
    rs.push_back(kato_ponce_ensemble(e, s));
    rs.back().name += " s=" + fmt("%g", s);
  }
  for (double sg : {0.2, 0.5, 0.8}) {
    e.seed = 500 + static_cast<std::uint64_t>(10 * sg);
    rs.push_back(leibniz_ensemble(e, sg));
    rs.back().name += " sigma=" + fmt("%g", sg);
  }
  e.seed = 606;
  rs.push_back(lp_commutator_ensemble(e));
  Outcome o;
  o.pass = true;
  std::ostringstream os;
  for (const auto& r : rs) {
    o.pass = o.pass && r.pass;
    os << r.name << " " << fmt("%.2f", r.spread) << "/" << fmt("%.3f", r.drift) << (r.pass ? "" : " FAIL") << "; ";
  }
  o.detail = "max/median / drift: " + os.str();
  return o;
}

Outcome energy() {
  std::vector<double> C;
  bool integrated = true;
  double linear_C = 0;
  for (std::size_t n : {128u, 256u}) {
    GridSpec g(n, n, two_pi, two_pi);
    SolverConfig c;
    c.alpha = 0.5;
    c.T = 1.0;
    c.dt = 0.01;
    c.orders = {2.0};
    const auto u0 = random_band_limited(g, 7, {4, 4, 0, 0, 0.1});
    const auto e = energy_track(solve_ivp(u0, c), 2.0);
    C.push_back(e.C);
    integrated = integrated && e.integrated_holds;
    if (n == 128) {
      c.nonlinear = false;
      linear_C = energy_track(solve_ivp(u0, c), 2.0).C;
    }
  }
  const double rel = std::abs(C[1] - C[0]) / C[0];
  Outcome o;
  o.pass = C[0] > 0 && rel <= 0.25 && integrated && linear_C < 1e-6;
  o.detail = "C(128) " + fmt("%.5f", C[0]) + ", C(256) " + fmt("%.5f", C[1]) + " (change " + fmt("%.2e", rel) +
             "), integrated form " + (integrated ? "holds" : "violated") + ", linear C " + fmt("%.2e", linear_C);
  return o;
}

Outcome uniqueness() {
  GridSpec g(128, 128, two_pi, two_pi);
  const auto p1 = random_band_limited(g, 5, {4, 4, 0, 0, 0.1});
  auto p2 = p1;
  p2.axpy(1e-4, random_band_limited(g, 6, {4, 4, 0, 0, 1.0}));
  const auto r = uniqueness_experiment(p1, p2, 0.5, 1.0, 0.01);
  const auto same = uniqueness_experiment(p1, p1, 0.5, 1.0, 0.01);
  double worst = 0;
  for (std::size_t i = 0; i < r.t.size(); ++i) worst = std::max(worst, r.diff_sq[i] / r.bound[i]);
  Outcome o;
  o.pass = r.holds && !r.partial && same.max_diff <= 1e-8 * l2_norm(p1);
  o.detail = "K " + fmt("%.4f", r.K) + ", max ||v||^2 / bound " + fmt("%.4f", worst) + " over " +
             std::to_string(r.t.size()) + " snapshots, equal data diff " + fmt("%.1e", same.max_diff);
  return o;
}

Outcome bona_smith() {
  const double s = 1.7;
  GridSpec big(256, 256, two_pi, two_pi);
  const auto tail = bona_smith_tail(synthetic_hs_data(big, s, 0.5, 42), s, {4, 6, 8, 12, 16, 24, 32}, {0.5, 1.0});
  GridSpec g(64, 64, two_pi, two_pi);
  const auto conv = convergence_experiment(synthetic_hs_data(g, s, 0.5, 43), s, 0.5, 0.5, 0.01, {2, 4, 8, 16, 24});
  Outcome o;
  o.pass = tail.pass && conv.monotone && conv.functional_bounded && conv.invariants_hold;
  std::ostringstream os;
  os << "tail rate " << fmt("%.3f", tail.l2_rate) << " (need >= " << s - 0.1 << "), H^0.5/H^1 rates "
     << fmt("%.3f", tail.sigma_rate[0]) << "/" << fmt("%.3f", tail.sigma_rate[1]) << "; errors";
  for (double e : conv.sup_err) os << " " << fmt("%.3g", e);
  os << (conv.monotone ? " monotone" : " NOT monotone") << "; functional spread " << fmt("%.4f", conv.growth_spread)
     << (conv.bound_at_t0 ? ", bound at t=0 ok" : ", bound at t=0 violated") << ", weight invariants "
     << (conv.invariants_hold ? "exact" : "violated") << " (" << conv.weights.breakpoints.size() << " levels)";
  o.detail = os.str();
  return o;
}

Outcome littlewood_paley() {
  double part = 0, recon = 0, tilde = 0;
  const GridSpec grids[] = {{32, 32, two_pi, two_pi}, {64, 128, 3.0, 9.0}, {256, 256, two_pi, two_pi},
                            {128, 64, 40.0, 20.0}};
  int seed = 0;
  for (const auto& g : grids) {
    part = std::max(part, partition_residual(g));
    for (int i = 0; i < 5; ++i) {
      const auto u = random_band_limited(g, 700 + seed++, {static_cast<long>(g.nx / 2 - 1), static_cast<long>(g.ny / 2 - 1)});
      SpectralField sum(g);
      for (int k = 0; k < block_count(g); ++k) {
        const auto q = dyadic_project(u, k);
        sum += q;
        auto d = dyadic_project(tilde_project(u, k), k);
        d -= q;
        tilde = std::max(tilde, l2_norm(d) / l2_norm(u));
      }
      sum -= u;
      recon = std::max(recon, l2_norm(sum) / l2_norm(u));
    }
  }
  Outcome o;
  o.pass = part < 1e-12 && recon < 1e-12 && tilde < 1e-12;
  o.detail = "partition " + fmt("%.2e", part) + ", reconstruction " + fmt("%.2e", recon) + ", Q Q~ = Q " +
             fmt("%.2e", tilde);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "spectral exactness", 30, spectral_exactness},
      {2, "propagator unitarity and group law", 10, propagator_group},
      {3, "IF-RK4 order and L2 conservation", 300, solver_order},
      {4, "ill-posedness growth exponent", 600, illposed_growth},
      {5, "dispersive decay", 120, decay},
      {6, "oscillatory integral", 60, oscillatory},
      {7, "estimate ensembles", 900, ensembles},
      {8, "energy inequality", 300, energy},
      {9, "uniqueness Gronwall bound", 180, uniqueness},
      {10, "Bona-Smith tail and convergence", 600, bona_smith},
      {11, "Littlewood-Paley identities", 30, littlewood_paley},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool ok = o.pass && in_time;
    if (!ok) ++failed;
    std::printf("%s [%d] %s: %s [%.2f s, limit %.0f s%s]\n", ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.limit_s, in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
