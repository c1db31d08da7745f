#include <gtest/gtest.h>

#include <cmath>

#include "fbo2d/evolution.hpp"
#include "fbo2d/random_fields.hpp"

using namespace fbo2d;

namespace {

SolverConfig config(double alpha, double T, double dt, bool nonlinear = true) {
  SolverConfig c;
  c.alpha = alpha;
  c.T = T;
  c.dt = dt;
  c.nonlinear = nonlinear;
  return c;
}

double rel_diff(const SpectralField& a, const SpectralField& b) {
  auto d = a;
  d -= b;
  return l2_norm(d) / std::max(l2_norm(b), 1e-300);
}

}  // namespace

TEST(Solve, ZeroStaysZero) {
  GridSpec g(32, 32, two_pi, two_pi);
  const auto tr = solve_ivp(SpectralField(g), config(0.5, 0.5, 0.05));
  for (const auto& u : tr.snapshots) EXPECT_EQ(u.max_abs(), 0.0);
}

TEST(Solve, LinearRunIsExactPropagator) {
  GridSpec g(32, 32, 8.0, 6.0);
  const auto u0 = random_band_limited(g, 3, {6, 6});
  const auto tr = solve_ivp(u0, config(0.7, 1.3, 0.1, false));
  for (std::size_t m = 0; m < tr.snapshots.size(); ++m)
    EXPECT_LT(rel_diff(tr.snapshots[m], propagate(u0, tr.snapshot_times[m], 0.7)), 1e-12);
}

TEST(Solve, ConservationAndCadence) {
  GridSpec g(64, 64, two_pi, two_pi);
  auto u0 = random_band_limited(g, 8, {4, 4, 0, 0, 0.1});
  u0.at(0, 0) = 0.3;  // nonzero mean
  const auto tr = solve_ivp(u0, config(0.5, 2.0, 0.01));
  EXPECT_EQ(snapshot_cadence(2.0, 0.01), 3);
  ASSERT_EQ(tr.snapshot_times.front(), 0.0);
  EXPECT_DOUBLE_EQ(tr.snapshot_times.back(), 2.0);
  for (std::size_t m = 1; m < tr.snapshot_times.size(); ++m) EXPECT_GT(tr.snapshot_times[m], tr.snapshot_times[m - 1]);
  EXPECT_NEAR(tr.snapshot_times[1], 0.03, 1e-14);
  const auto& a = tr.steps.front();
  const auto& b = tr.steps.back();
  EXPECT_LT(std::abs(b.integral - a.integral), 1e-10 * std::abs(a.integral));
  EXPECT_LT(std::abs(b.l2 - a.l2), 1e-6 * a.l2);
  EXPECT_TRUE(tr.warnings.empty());
}

TEST(Solve, SelfConvergenceRatio) {
  GridSpec g(64, 64, 20.0, 20.0);
  const auto u0 = forward_transform(gaussian_bump(g, 2.0, 10.0, 10.0, 1.5, 1.5));
  std::vector<SpectralField> ends;
  for (double dt : {0.05, 0.025, 0.0125}) ends.push_back(solve_ivp(u0, config(1.0, 1.0, dt)).snapshots.back());
  auto e1 = ends[0];
  e1 -= ends[1];
  auto e2 = ends[1];
  e2 -= ends[2];
  const double ratio = l2_norm(e1) / l2_norm(e2);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Solve, BlowUpReportsLastValidTime) {
  GridSpec g(16, 16, two_pi, two_pi);
  const auto u0 = random_band_limited(g, 1, {3, 3, 0, 0, 1e160});
  try {
    solve_ivp(u0, config(1.0, 1.0, 0.1));
    FAIL() << "no blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_EQ(e.t, 0.0);
    EXPECT_NE(std::string(e.what()).find("last valid"), std::string::npos);
  }
  auto c = config(1.0, 1.0, 0.1);
  c.keep_partial = true;
  const auto tr = solve_ivp(u0, c);
  ASSERT_TRUE(tr.blowup_time.has_value());
  EXPECT_EQ(tr.steps.size(), 1u);
}

TEST(Solve, CflWarning) {
  GridSpec g(64, 64, two_pi, two_pi);
  const auto u0 = random_band_limited(g, 1, {4, 4, 0, 0, 1.0});
  const auto tr = solve_ivp(u0, config(1.0, 0.05, 0.05));
  ASSERT_FALSE(tr.warnings.empty());
  EXPECT_NE(tr.warnings[0].find("CFL"), std::string::npos);
}

TEST(Ft, ZeroAndStationary) {
  GridSpec g(32, 32, two_pi, two_pi);
  EXPECT_EQ(ft_norm(solve_ivp(SpectralField(g), config(0.5, 1.0, 0.1))), 0.0);
  // u = cos(y) is stationary: H acts with sgn(0) = 0 and u u_x = 0
  const auto u = forward_transform(RealField::sample(g, [](double, double y) { return std::cos(y); }));
  const auto tr = solve_ivp(u, config(0.5, 1.5, 0.1));
  EXPECT_NEAR(ft_norm(tr), 1.5 * (1.0 + 1.0), 1e-12);
  // nondecreasing in T
  for (std::size_t i = 1; i < tr.steps.size(); ++i) EXPECT_GE(ft_norm(tr, i), ft_norm(tr, i - 1));
}

TEST(Energy, LinearRunHasZeroConstant) {
  GridSpec g(64, 64, two_pi, two_pi);
  auto c = config(0.5, 0.5, 0.01, false);
  c.orders = {2.0};
  const auto tr = solve_ivp(random_band_limited(g, 2, {4, 4, 0, 0, 0.1}), c);
  const auto e = energy_track(tr, 2.0);
  EXPECT_LT(e.C, 1e-6);
  EXPECT_TRUE(e.integrated_holds);
}

TEST(Energy, RefinementStableAndIntegratedFormHolds) {
  std::vector<double> C;
  for (std::size_t n : {64u, 128u}) {
    GridSpec g(n, n, two_pi, two_pi);
    auto c = config(0.5, 0.5, 0.01);
    c.orders = {2.0};
    const auto tr = solve_ivp(random_band_limited(g, 7, {4, 4, 0, 0, 0.1}), c);
    const auto e = energy_track(tr, 2.0);
    EXPECT_TRUE(e.integrated_holds);
    C.push_back(e.C);
  }
  EXPECT_GT(C[0], 0.0);
  EXPECT_LT(std::abs(C[1] - C[0]) / C[0], 0.25);
}

TEST(Energy, UntrackedOrderRejected) {
  GridSpec g(16, 16, two_pi, two_pi);
  const auto tr = solve_ivp(SpectralField(g), config(0.5, 0.5, 0.05));
  EXPECT_THROW(energy_track(tr, 3.0), std::invalid_argument);
}

TEST(Ft, Lemma51FitHolds) {
  GridSpec g(64, 64, two_pi, two_pi);
  auto c = config(0.5, 1.0, 0.01);
  c.orders = {2.0};
  const auto tr = solve_ivp(random_band_limited(g, 4, {4, 4, 0, 0, 0.1}), c);
  const auto f = lemma51_fit(tr, 2.0);
  EXPECT_GT(f.k, 0.5);
  EXPECT_LT(f.k, 1.0);
  EXPECT_TRUE(f.holds);
  EXPECT_GT(f.C, 0.0);
}

TEST(Apriori, ZeroDataPassesEverywhere) {
  GridSpec g(32, 32, two_pi, two_pi);
  const auto r = apriori_experiment(SpectralField(g), 2.0, 0.5, {0.5, 1.0, 4.0}, 0.01);
  for (const auto& p : r.points) EXPECT_TRUE(p.doubling_holds);
  ASSERT_TRUE(r.smallest_passing_A.has_value());
  EXPECT_EQ(*r.smallest_passing_A, 0.5);
}

TEST(Apriori, ScaledDataSweep) {
  GridSpec g(32, 32, two_pi, two_pi);
  const auto u0 = random_band_limited(g, 5, {3, 3, 0, 0, 0.3});
  std::vector<double> thresholds;
  for (double lam : {0.5, 1.0, 2.0}) {
    const auto r = apriori_experiment(lam * u0, 2.0, 0.5, {0.01, 0.03, 0.1, 0.3, 1.0, 3.0}, 0.01);
    ASSERT_TRUE(r.smallest_passing_A.has_value());
    EXPECT_TRUE(r.points.back().doubling_holds);
    thresholds.push_back(*r.smallest_passing_A);
  }
  // larger data need at least as large a constant
  EXPECT_LE(thresholds[0], thresholds[1]);
  EXPECT_LE(thresholds[1], thresholds[2]);
}

TEST(BonaSmith, PlateauAndContraction) {
  GridSpec g(64, 64, two_pi, two_pi);
  const auto u0 = random_band_limited(g, 9, {4, 4});
  EXPECT_EQ(rel_diff(bona_smith_regularize(u0, 12.0), u0), 0.0);  // |k| <= 4 sqrt 2 < 6
  const auto rough = synthetic_hs_data(g, 1.0, 0.5, 3);
  const auto r = bona_smith_regularize(rough, 8.0);
  for (double s : {0.0, 1.0, 2.5}) EXPECT_LE(sobolev_norm(r, s), sobolev_norm(rough, s));
  // zero outside radius n
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix)
      if (std::hypot(g.xi(ix), g.eta(iy)) > 8.0) EXPECT_EQ(r.at(ix, iy), cplx(0.0));
  EXPECT_EQ(bona_smith_profile(0.5), 1.0);
  EXPECT_EQ(bona_smith_profile(1.0), 0.0);
}

TEST(BonaSmith, TailRates) {
  GridSpec g(256, 256, two_pi, two_pi);
  const double s = 1.7;
  const auto u0 = synthetic_hs_data(g, s, 0.5, 42);
  const auto r = bona_smith_tail(u0, s, {4, 6, 8, 12, 16, 24, 32}, {0.5, 1.0});
  EXPECT_GE(r.l2_rate, s - 0.1);
  EXPECT_GE(r.sigma_rate[0], s - 0.5 - 0.1);
  EXPECT_GE(r.sigma_rate[1], s - 1.0 - 0.1);
  EXPECT_TRUE(r.pass);
}

TEST(Uniqueness, EqualDataAndLinearRuns) {
  GridSpec g(32, 32, two_pi, two_pi);
  const auto p1 = random_band_limited(g, 5, {4, 4, 0, 0, 0.1});
  const auto same = uniqueness_experiment(p1, p1, 0.5, 0.5, 0.01);
  EXPECT_LE(same.max_diff, 1e-8 * l2_norm(p1));
  auto p2 = p1;
  p2.axpy(0.01, random_band_limited(g, 6, {4, 4}));
  const auto lin = uniqueness_experiment(p1, p2, 0.5, 0.5, 0.01, false);
  for (double d : lin.diff_sq) EXPECT_NEAR(d, lin.d0_sq, 1e-12 * lin.d0_sq);
  EXPECT_TRUE(lin.holds);
}

TEST(Uniqueness, GronwallBoundForPerturbedPair) {
  GridSpec g(64, 64, two_pi, two_pi);
  const auto p1 = random_band_limited(g, 5, {4, 4, 0, 0, 0.1});
  auto p2 = p1;
  p2.axpy(1e-4, random_band_limited(g, 6, {4, 4, 0, 0, 0.1}));
  const auto r = uniqueness_experiment(p1, p2, 0.5, 1.0, 0.01);
  EXPECT_TRUE(r.holds);
  EXPECT_GT(r.K, 0.0);
  // the difference actually changes, so the check is not vacuous
  double lo = 1e300, hi = 0;
  for (double d : r.diff_sq) {
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  EXPECT_GT(hi / lo, 1.0 + 1e-6);
}

TEST(Convergence, BandLimitedDataSitAtTheFloor) {
  GridSpec g(32, 32, two_pi, two_pi);
  const auto u0 = random_band_limited(g, 5, {2, 2, 0, 0, 0.1});
  const auto r = convergence_experiment(u0, 1.7, 0.5, 0.3, 0.01, {6, 8, 10});
  // all ladder members see the same data, so only the dt vs dt/2 gap remains
  EXPECT_NEAR(r.sup_err[0], r.sup_err[2], 1e-12 * r.sup_err[0] + 1e-15);
  EXPECT_LT(r.sup_err[0], 1e-6);
  EXPECT_TRUE(r.monotone);
}

TEST(Convergence, RoughDataLadder) {
  GridSpec g(64, 64, two_pi, two_pi);
  const double s = 1.7;
  const auto r = convergence_experiment(synthetic_hs_data(g, s, 0.5, 43), s, 0.5, 0.5, 0.01, {2, 4, 8, 16, 24});
  EXPECT_TRUE(r.monotone);
  EXPECT_GT(r.sup_err.front(), 10.0 * r.sup_err.back());
  EXPECT_TRUE(r.invariants_hold);
  EXPECT_TRUE(r.functional_bounded);
  EXPECT_TRUE(r.pass());
}

TEST(Lemma65, WindowConstantsFinite) {
  GridSpec g(64, 64, two_pi, two_pi);
  auto c = config(0.5, 1.0, 0.01);
  const auto tr = solve_ivp(random_band_limited(g, 4, {4, 4, 0, 0, 0.1}), c);
  const auto f = lemma65_fit(tr, WeightSequence::power(1.7, block_count(g) - 1));
  ASSERT_EQ(f.C_hat.size(), 2u);
  for (double v : f.C_hat) EXPECT_TRUE(std::isfinite(v));
}
