#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bbm/initial_data.hpp"
#include "bbm/picard.hpp"
#include "bbm/spectral.hpp"

using namespace bbm;

namespace {

FrequencyGrid line(double N, double dxi = 0.125) { return grid_reaching(4 * N, dxi, GridMode::line_approx); }

// Wide enough for K-fold products of sharp data at N.
FrequencyGrid series_line(double N, int K) {
  return grid_reaching(std::max(4 * N, K * (N + 1)), 0.125, GridMode::line_approx);
}

SpectralField mode_pair(const FrequencyGrid& g, int j0, double amp = 1.0) {
  std::vector<Complex> c(g.size());
  c[g.index(j0)] = amp;
  c[g.index(-j0)] = amp;
  return SpectralField(g, std::move(c));
}

SpectralField random_hermitian(const FrequencyGrid& g, int support, std::mt19937& rng) {
  std::normal_distribution<double> d;
  std::vector<Complex> c(g.size());
  c[g.index(0)] = d(rng);
  for (int j = 1; j <= support; ++j) {
    const Complex z(d(rng), d(rng));
    c[g.index(j)] = z;
    c[g.index(-j)] = std::conj(z);
  }
  return SpectralField(g, std::move(c));
}

// Nonzero lattice indices of a field, relative to its largest coefficient.
std::vector<int> support_set(const SpectralField& u, double rel = 1e-13) {
  double scale = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) scale = std::max(scale, std::abs(u[i]));
  std::vector<int> out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > rel * scale) out.push_back(u.grid().lattice(i));
  }
  return out;
}

}  // namespace

TEST(Duhamel, ZeroCasesAndSymmetry) {
  std::mt19937 rng(1);
  const auto g = make_grid(32, 0.25, GridMode::line_approx);
  const auto h1 = random_hermitian(g, 10, rng);
  const auto h2 = random_hermitian(g, 10, rng);
  const auto v = free_trajectory(h1, 0.8, 16);
  const auto w = free_trajectory(h2, 0.8, 16);
  const auto zero = free_trajectory(SpectralField(g), 0.8, 16);
  EXPECT_EQ(l2_norm(duhamel(v, zero, 0.8)), 0.0);
  const auto vw = duhamel(v, w, 0.8);
  const auto wv = duhamel(w, v, 0.8);
  EXPECT_LE(l2_norm(vw - wv), 1e-13);
  const auto v0 = free_trajectory(h1, 0.0, 16);
  EXPECT_EQ(l2_norm(duhamel(v0, v0, 0.0)), 0.0);
}

TEST(Duhamel, Bilinear) {
  std::mt19937 rng(2);
  const auto g = make_grid(32, 0.25, GridMode::line_approx);
  const auto a = random_hermitian(g, 10, rng), b = random_hermitian(g, 10, rng), c = random_hermitian(g, 10, rng);
  const double alpha = -1.7;
  const auto ta = free_trajectory(a, 0.5, 8), tb = free_trajectory(b, 0.5, 8), tc = free_trajectory(c, 0.5, 8);
  const auto scaled = free_trajectory(alpha * a, 0.5, 8);
  const auto sum = free_trajectory(a + c, 0.5, 8);
  const auto ref = duhamel(ta, tb, 0.5);
  EXPECT_LE(l2_norm(duhamel(scaled, tb, 0.5) - alpha * ref), 1e-12 * l2_norm(ref));
  EXPECT_LE(l2_norm(duhamel(sum, tb, 0.5) - (ref + duhamel(tc, tb, 0.5))), 1e-12 * l2_norm(ref));
}

TEST(Duhamel, LatticeErrors) {
  const auto g = make_grid(16, 0.5, GridMode::line_approx);
  const auto h = mode_pair(g, 2);
  const auto odd = free_trajectory(h, 0.5, 9);
  EXPECT_THROW(duhamel(odd, odd, 0.5), InvalidArgument);
  const auto a = free_trajectory(h, 0.5, 8), b = free_trajectory(h, 0.5, 10);
  EXPECT_THROW(duhamel(a, b, 0.5), GridMismatch);
  EXPECT_THROW(duhamel(a, a, 0.4), GridMismatch);
}

TEST(I2Duhamel, ZeroTimeAndModeArithmetic) {
  const auto g = make_grid(64, 0.25, GridMode::line_approx);
  const auto h = mode_pair(g, 12);
  EXPECT_EQ(l2_norm(i2_duhamel(h, 0.0, 16)), 0.0);
  const auto i2 = i2_duhamel(h, 0.5, 16);
  // Output lives on {0, +-2 xi0}; the 0 mode is killed by phi(0) = 0.
  for (int j : support_set(i2)) EXPECT_EQ(std::abs(j), 24) << j;
  EXPECT_EQ(i2.at(0), Complex{});
}

TEST(I2ClosedForm, ZeroTimeAndZeroMode) {
  const auto h = phi_sharp(16.0, line(16.0));
  EXPECT_EQ(l2_norm(i2_closed_form(h, 0.0)), 0.0);
  EXPECT_EQ(i2_closed_form(h, 0.5).at(0), Complex{});
}

TEST(I2ClosedForm, AgreesWithDuhamelRoute) {
  const auto h = phi_sharp(16.0, line(16.0));
  const auto closed = i2_closed_form(h, 0.5);
  const auto quad = i2_duhamel(h, 0.5, 256);
  EXPECT_LE(relative_l2_difference(quad, closed), 1e-8);
}

TEST(I2ClosedForm, AgreesOnRandomDataAndPeriodicGrid) {
  std::mt19937 rng(9);
  const auto g = make_grid(48, 0.25, GridMode::line_approx);
  for (double t : {0.3, 1.0}) {
    const auto h = random_hermitian(g, 20, rng);
    EXPECT_LE(relative_l2_difference(i2_duhamel(h, t, 128), i2_closed_form(h, t)), 1e-8);
  }
  const auto gp = make_grid(128, 1.0, GridMode::periodic);
  const auto hp = phi_periodic(32, 2, gp);
  EXPECT_LE(relative_l2_difference(i2_duhamel(hp, 0.5, 128), i2_closed_form(hp, 0.5)), 1e-8);
}

TEST(I2ClosedForm, SimpsonConvergesAtFourthOrder) {
  const auto h = phi_sharp(16.0, line(16.0));
  const auto closed = i2_closed_form(h, 0.5);
  std::vector<double> err;
  for (int Q : {32, 64, 128, 256}) err.push_back(relative_l2_difference(i2_duhamel(h, 0.5, Q), closed));
  for (std::size_t i = 1; i < err.size(); ++i) EXPECT_GE(std::log2(err[i - 1] / err[i]), 3.5) << i;
}

TEST(I2ClosedForm, RefinementConvergesForIndicatorData) {
  // Refined sums approach the continuous-xi1 integral; the gap to refine=1 is
  // the lattice boundary effect and must shrink as delta_xi does.
  const double N = 16.0;
  double prev = 0.0;
  for (double dxi : {0.25, 0.125}) {
    const auto h = phi_sharp(N, line(N, dxi));
    const double coarse = hs_norm(i2_closed_form(h, 0.5, 1), SobolevIndex{-0.5});
    const double fine = hs_norm(i2_closed_form(h, 0.5, 4), SobolevIndex{-0.5});
    const double gap = std::abs(coarse - fine) / fine;
    if (prev > 0.0) {
      EXPECT_LT(gap, prev);
    }
    prev = gap;
  }
  EXPECT_THROW(i2_closed_form(phi_periodic(16, 1, make_grid(64, 1.0, GridMode::periodic)), 0.5, 2),
               InvalidArgument);
}

TEST(I2ClosedForm, SupportOverflowIsAnError) {
  const auto g = make_grid(16, 1.0, GridMode::line_approx);
  EXPECT_THROW(i2_closed_form(mode_pair(g, 12), 0.5), SupportOverflow);
}

TEST(I2, NoDecayInNForSharpData) {
  std::vector<double> n;
  for (double N : {16.0, 32.0, 64.0, 128.0}) {
    n.push_back(hs_norm(i2_duhamel(phi_sharp(N, line(N)), 0.5, 64), SobolevIndex{-0.5}));
  }
  const auto [lo, hi] = std::minmax_element(n.begin(), n.end());
  EXPECT_GE(*lo / *hi, 0.5);
  EXPECT_LE(*hi / *lo, 2.0);
}

TEST(AXiSet, Measures) {
  const auto at0 = a_xi_set(0.0, 50.0);
  ASSERT_EQ(at0.intervals.size(), 2u);
  EXPECT_DOUBLE_EQ(at0.measure, 4.0);
  EXPECT_DOUBLE_EQ(at0.intervals[0].lo, -51.0);
  EXPECT_DOUBLE_EQ(at0.intervals[1].hi, 51.0);
  EXPECT_DOUBLE_EQ(a_xi_set(0.25, 100.0).measure, 3.5);
  EXPECT_DOUBLE_EQ(a_xi_set(0.25, 1000.0).measure, a_xi_set(0.25, 100.0).measure);
  for (double xi = -0.25; xi <= 0.25; xi += 0.01) EXPECT_GE(a_xi_set(xi, 64.0).measure, 1.0);
  EXPECT_THROW(a_xi_set(0.75, 64.0), InvalidArgument);
}

TEST(AXiSet, BruteForceMembership) {
  const double N = 20.0;
  for (double xi : {-0.3, 0.0, 0.17}) {
    const auto set = a_xi_set(xi, N);
    const double h = 1e-4;
    double count = 0.0;
    for (double x1 = -N - 3; x1 <= N + 3; x1 += h) {
      const auto in = [&](double v) { return v >= N - 1 && v <= N + 1; };
      if ((in(x1) && in(-(xi - x1))) || (in(xi - x1) && in(-x1))) count += h;
    }
    EXPECT_NEAR(set.measure, count, 1e-3);
  }
}

TEST(PicardTerms, BaseAndSecondTerm) {
  const auto h = phi_sharp(16.0, line(16.0));
  const auto exp = picard_terms(h, 0.5, 3, 64);
  EXPECT_EQ(l2_norm(exp.term(1) - semigroup(h, 0.5)), 0.0);
  // term(2) is the Taylor coefficient: half of the second derivative.
  EXPECT_LE(relative_l2_difference(2.0 * exp.term(2), i2_duhamel(h, 0.5, 64)), 1e-12);
  EXPECT_THROW(picard_terms(h, 0.5, 1, 64), InvalidArgument);
}

TEST(PicardTerms, TrilinearFrequencySet) {
  const auto g = make_grid(64, 0.25, GridMode::line_approx);
  const auto exp = picard_terms(mode_pair(g, 10), 0.5, 4, 16);
  for (int j : support_set(exp.term(3))) EXPECT_TRUE(std::abs(j) == 10 || std::abs(j) == 30) << j;
  for (int j : support_set(exp.term(4))) EXPECT_TRUE(std::abs(j) == 20 || std::abs(j) == 40) << j;
}

TEST(PicardTerms, ZeroModeAndHermitian) {
  std::mt19937 rng(31);
  const auto g = make_grid(64, 0.25, GridMode::line_approx);
  const auto exp = picard_terms(random_hermitian(g, 12, rng), 0.7, 5, 16);
  for (int k = 2; k <= 5; ++k) {
    EXPECT_EQ(exp.term(k).at(0), Complex{}) << k;
    EXPECT_TRUE(exp.term(k).hermitian()) << k;
  }
}

TEST(PicardTerms, SeriesIsAbsolutelySummableAtSmallEps) {
  const auto exp = picard_terms(phi_sharp(16.0, series_line(16.0, 6)), 0.5, 6, 64);
  double sum = 0.0;
  for (int k = 3; k <= 6; ++k) sum += std::pow(0.1, k) * l2_norm(exp.term(k));
  EXPECT_LT(sum, 0.1 * std::pow(0.1, 2) * l2_norm(exp.term(2)));
  EXPECT_LT(std::pow(0.1, 6) * l2_norm(exp.term(6)), 1e-3 * std::pow(0.1, 2) * l2_norm(exp.term(2)));
}

TEST(PicardTerms, GridMustHoldEveryTerm) {
  const auto h = phi_sharp(16.0, line(16.0));
  EXPECT_NO_THROW(picard_terms(h, 0.5, 3, 8));
  EXPECT_THROW(picard_terms(h, 0.5, 4, 8), SupportOverflow);
}

TEST(PicardTerms, BudgetGuard) {
  const auto h = phi_sharp(16.0, line(16.0));
  PicardOptions opts;
  opts.budget = 1000;
  EXPECT_THROW(picard_terms(h, 0.5, 3, 16, opts), BudgetExceeded);
}

TEST(SeriesSum, Examples) {
  const auto h = phi_sharp(16.0, series_line(16.0, 4));
  const auto exp = picard_terms(h, 0.5, 4, 32);
  EXPECT_EQ(l2_norm(series_sum(exp, 0.0)), 0.0);
  PicardExpansion first{h, 0.5, {exp.term(1)}};
  EXPECT_LE(l2_norm(series_sum(first, 0.05) - 0.05 * semigroup(h, 0.5)), 1e-15);
}

TEST(TailNorm, EmptyTailAndCubicScaling) {
  const auto h = phi_sharp(64.0, series_line(64.0, 6));
  const auto exp = picard_terms(h, 0.5, 6, 64);
  EXPECT_EQ(tail_norm(exp, 0.05, 7, SobolevIndex{-0.5}), 0.0);
  const double ratio = tail_norm(exp, 0.05, 3, SobolevIndex{0.0}) / tail_norm(exp, 0.025, 3, SobolevIndex{0.0});
  EXPECT_GE(ratio, 7.0);
  EXPECT_LE(ratio, 9.0);
  const double eps = 0.05;
  EXPECT_LT(tail_norm(exp, eps, 3, SobolevIndex{-0.5}), eps * eps * hs_norm(exp.term(2), SobolevIndex{-0.5}));
}
