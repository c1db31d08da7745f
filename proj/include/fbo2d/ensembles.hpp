#pragma once

#include <cstdint>
#include <string>

#include "fbo2d/estimates.hpp"
#include "fbo2d/littlewood_paley.hpp"
#include "fbo2d/random_fields.hpp"

namespace fbo2d {

// Draws are band-limited with kmax = 4 so that every draw is the same function on the
// coarse and the refined grid; only the discrete norms change under refinement.
struct EnsembleSpec {
  GridSpec coarse{32, 32, two_pi, two_pi};
  int draws = 50;
  std::uint64_t seed = 1;
  long kmax = 4;
};

inline BandSpec ensemble_band(long kmax, bool zero_x_mean) {
  BandSpec b;
  b.kmax_x = kmax;
  b.kmax_y = kmax;
  b.jmin = zero_x_mean ? 1 : 0;
  return b;
}

inline void check_ensemble_band(const EnsembleSpec& e) {
  if (6 * e.kmax >= static_cast<long>(std::min(e.coarse.nx, e.coarse.ny)))
    throw std::invalid_argument("ensemble: kmax must be < n/6 on the coarse grid");
}

inline EnsembleResult strichartz_ensemble(const EnsembleSpec& e, double alpha, double T, const AdmissiblePair& pair,
                                          const ParallelFor& pfor = ParallelFor(1)) {
  check_ensemble_band(e);
  return run_ensemble("strichartz", e.draws, e.seed, e.coarse, [&](std::uint64_t seed, const GridSpec& g) {
    return strichartz_ratio(random_band_limited(g, seed, ensemble_band(e.kmax, true)), pair, alpha, T);
  }, pfor);
}

inline EnsembleResult cor33_ensemble(const EnsembleSpec& e, double alpha, double T, double delta,
                                     const ParallelFor& pfor = ParallelFor(1)) {
  check_ensemble_band(e);
  return run_ensemble("cor33", e.draws, e.seed, e.coarse, [&](std::uint64_t seed, const GridSpec& g) {
    return cor33_ratio(random_band_limited(g, seed, ensemble_band(e.kmax, true)), alpha, T, delta).ratio;
  }, pfor);
}

// w0 and F(t) = cos(t) f with independent draws
inline EnsembleResult refined_ensemble(const EnsembleSpec& e, double alpha, double T, double delta,
                                       const ParallelFor& pfor = ParallelFor(1)) {
  check_ensemble_band(e);
  return run_ensemble("refined", e.draws, e.seed, e.coarse, [&](std::uint64_t seed, const GridSpec& g) {
    const auto w0 = random_band_limited(g, seed, ensemble_band(e.kmax, false));
    const auto f = random_band_limited(g, seed + 1000003, ensemble_band(e.kmax, false));
    return refined_strichartz_check(w0, [&](double t) { return std::cos(t) * f; }, alpha, T, delta).ratio();
  }, pfor);
}

inline EnsembleResult kato_ponce_ensemble(const EnsembleSpec& e, double s, const ParallelFor& pfor = ParallelFor(1)) {
  check_ensemble_band(e);
  return run_ensemble("kato-ponce", e.draws, e.seed, e.coarse, [&](std::uint64_t seed, const GridSpec& g) {
    const auto f = random_band_limited(g, seed, ensemble_band(e.kmax, false));
    const auto h = random_band_limited(g, seed + 1000003, ensemble_band(e.kmax, false));
    return kato_ponce_ratio(f, h, s).ratio;
  }, pfor);
}

// 1-D lines of n = coarse.nx points; refinement doubles n
inline EnsembleResult leibniz_ensemble(const EnsembleSpec& e, double sigma, const ParallelFor& pfor = ParallelFor(1)) {
  check_ensemble_band(e);
  const double L = e.coarse.lx;
  return run_ensemble("leibniz", e.draws, e.seed, e.coarse, [&](std::uint64_t seed, const GridSpec& g) {
    const auto f = random_line(g.nx, L, seed, e.kmax);
    const auto h = random_line(g.nx, L, seed + 1000003, e.kmax);
    return leibniz_ratio(f, h, sigma).ratio;
  }, pfor);
}

// v with half the band of w; block index alternates between 1 and 2
inline EnsembleResult lp_commutator_ensemble(const EnsembleSpec& e, const ParallelFor& pfor = ParallelFor(1)) {
  check_ensemble_band(e);
  return run_ensemble("lp-commutator", e.draws, e.seed, e.coarse, [&](std::uint64_t seed, const GridSpec& g) {
    const auto v = random_band_limited(g, seed, ensemble_band(std::max<long>(1, e.kmax / 2), false));
    const auto w = random_band_limited(g, seed + 1000003, ensemble_band(e.kmax, false));
    return lp_commutator(1 + static_cast<int>(seed % 2), v, w).ratio;
  }, pfor);
}

}  // namespace fbo2d
