#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bbm/experiment.hpp"
#include "bbm/initial_data.hpp"
#include "bbm/picard.hpp"
#include "bbm/solver.hpp"

using namespace bbm;

namespace {

const FrequencyGrid& smooth_grid() {
  static const FrequencyGrid g(128, 0.125, GridMode::line_approx);
  return g;
}

SpectralField smooth() { return smooth_test_data(smooth_grid()); }

}  // namespace

TEST(Rhs, ZeroAndLinearPart) {
  const auto& g = smooth_grid();
  EXPECT_EQ(l2_norm(rhs(SpectralField(g))), 0.0);
  // Tiny data: the quadratic term is negligible and rhs ~ -i phi u.
  const auto u = 1e-9 * smooth();
  const auto lin = apply_multiplier(u, [](double xi) { return Complex(0.0, -phi(xi)); });
  EXPECT_LE(l2_norm(rhs(u) - lin), 1e-8 * l2_norm(lin));
  EXPECT_EQ(rhs(u).at(0), Complex{});
}

TEST(Rhs, MatchesDirectConvolution) {
  const FrequencyGrid g(24, 0.25, GridMode::line_approx);
  const auto u = field_from_symbol(g, [](double xi) { return xi * xi < 9.0 ? std::exp(-xi * xi) : 0.0; });
  const auto sq = quadratic_product_direct(u, u);
  const auto expected = apply_multiplier(u + 0.5 * sq, [](double xi) { return Complex(0.0, -phi(xi)); });
  EXPECT_LE(l2_norm(rhs(u) - expected), 1e-14);
}

TEST(Evolve, ZeroDataStaysZero) {
  const auto tr = evolve(SpectralField(smooth_grid()), SolverConfig::to_time(0.5, 0.01));
  ASSERT_EQ(tr.fields.size(), 51u);
  for (const auto& f : tr.fields) EXPECT_EQ(l2_norm(f), 0.0);
}

TEST(Evolve, Rk4IsFourthOrder) {
  const auto u0 = smooth();
  const auto a = flow_map(u0, 1.0, 0.1), b = flow_map(u0, 1.0, 0.05), c = flow_map(u0, 1.0, 0.025);
  const double ratio = l2_norm(a - b) / l2_norm(b - c);
  EXPECT_GE(std::log2(ratio), 3.8);
  EXPECT_NEAR(ratio, 16.0, 2.0);
}

TEST(Evolve, LinearLimitIsTheSemigroup) {
  const auto u0 = 1e-8 * smooth();
  const auto u = flow_map(u0, 0.5, 0.01);
  EXPECT_LE(relative_l2_difference(u, semigroup(u0, 0.5)), 1e-7);
}

TEST(Evolve, ConservesMeanAndEnergy) {
  const auto u0 = smooth();
  const auto tr = evolve(u0, SolverConfig::to_time(1.0, 1e-3));
  const double m0 = invariant_mean(u0), e0 = invariant_h1(u0);
  for (const auto& f : tr.fields) {
    EXPECT_LE(std::abs(invariant_mean(f) - m0), 1e-14);
    EXPECT_LE(std::abs(invariant_h1(f) - e0) / e0, 1e-8);
  }
}

TEST(Evolve, ResidualOfOriginalEquation) {
  const auto u0 = smooth();
  const auto fine = evolve(u0, SolverConfig::to_time(1.0, 1e-3));
  EXPECT_LE(residual_ivp1(fine), 1e-8);
  // The finite-difference residual is itself fourth order in the step.
  const auto c1 = evolve(u0, SolverConfig::to_time(1.0, 0.04));
  const auto c2 = evolve(u0, SolverConfig::to_time(1.0, 0.02));
  EXPECT_GE(std::log2(residual_ivp1(c1) / residual_ivp1(c2)), 3.5);
}

TEST(Evolve, ForwardBackwardRoundTrip) {
  const auto u0 = smooth();
  const auto cfg = SolverConfig::to_time(1.0, 1e-3);
  const auto fwd = evolve(u0, cfg);
  const auto back = evolve(fwd.final_field(), cfg, TimeDirection::backward);
  EXPECT_LE(l2_norm(back.final_field() - u0), 1e-8);
  EXPECT_LT(back.t_final, 0.0);
}

TEST(Evolve, StoreEvery) {
  auto cfg = SolverConfig::to_time(0.1, 0.01);
  cfg.store_every = 5;
  const auto tr = evolve(smooth(), cfg);
  EXPECT_EQ(tr.fields.size(), 3u);
  EXPECT_NEAR(tr.step(), 0.05, 1e-15);
  cfg.store_every = 3;
  EXPECT_THROW(evolve(smooth(), cfg), InvalidArgument);
}

TEST(Evolve, AgreesWithPicardSeries) {
  const double eps = 0.05;
  for (double N : {16.0, 64.0}) {
    const auto g = grid_reaching(std::max(4 * N, 6 * (N + 1)), 0.125, GridMode::line_approx);
    const auto h = phi_sharp(N, g);
    const auto exp = picard_terms(h, 0.5, 6, 64);
    const auto u = flow_map(eps * h, 0.5, 1e-3);
    EXPECT_LE(relative_l2_difference(u, series_sum(exp, eps)), 1e-5) << N;
  }
}

TEST(Evolve, Errors) {
  const auto& g = smooth_grid();
  std::vector<Complex> c(g.size());
  c[g.index(3)] = 1.0;
  EXPECT_THROW(evolve(SpectralField(g, c), SolverConfig::to_time(0.1, 0.01)), InvalidArgument);
  SolverConfig big;
  big.dt = 0.2;
  big.n_steps = 2;
  EXPECT_THROW(evolve(smooth(), big), InvalidArgument);
  SolverConfig none;
  none.dt = 0.0;
  EXPECT_THROW(evolve(smooth(), none), InvalidArgument);
  EXPECT_THROW(SolverConfig::to_time(0.105, 0.01), InvalidArgument);
  EXPECT_THROW(residual_ivp1(evolve(smooth(), SolverConfig::to_time(0.03, 0.01))), InvalidArgument);
}

TEST(Invariants, MeanIsZeroModeIntegral) {
  const auto& g = smooth_grid();
  std::vector<Complex> c(g.size());
  c[g.index(0)] = 2.0;
  const SpectralField u(g, c);
  EXPECT_DOUBLE_EQ(invariant_mean(u), 2.0 * std::sqrt(2.0 * std::numbers::pi));
  // Single node weighted by delta_xi.
  EXPECT_NEAR(invariant_h1(u), 4.0 * g.delta_xi(), 1e-15);
}
