#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "bbm/symbols.hpp"

using namespace bbm;

namespace {

// Van der Corput radical inverse in base b: low-discrepancy points in [0, 1).
double radical_inverse(unsigned long n, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (n > 0) {
    r += f * static_cast<double>(n % base);
    n /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

TEST(Phi, Values) {
  EXPECT_EQ(phi(0.0), 0.0);
  EXPECT_EQ(phi(1.0), 0.5);
  EXPECT_DOUBLE_EQ(phi(2.0), 0.4);
}

TEST(Phi, OddAndBounded) {
  for (double xi = -50.0; xi <= 50.0; xi += 0.37) {
    EXPECT_EQ(phi(-xi), -phi(xi));
    EXPECT_LE(std::abs(phi(xi)), 0.5);
  }
}

TEST(Theta, DirectExamples) {
  for (double N : {1.0, 16.0, 1e3}) EXPECT_EQ(theta_direct({0.0, N}), 0.0);
  EXPECT_NEAR(theta_direct({2.0, 1.0}), 0.6, 1e-15);
  for (double xi : {-3.0, 0.4, 7.5}) {
    for (double xi1 : {-2.0, 0.1, 11.0}) {
      EXPECT_NEAR(theta_direct({xi, xi1}), theta_direct({xi, xi - xi1}), 1e-15);
    }
  }
}

TEST(Theta, RationalExamples) {
  EXPECT_NEAR(theta_rational({2.0, 1.0}), 0.6, 1e-15);
  EXPECT_EQ(theta_rational({0.0, 5.0}), 0.0);
  EXPECT_EQ(theta_rational({3.5, 3.5}), 0.0);
}

TEST(Theta, DirectAndRationalAgree) {
  double worst = 0.0;
  for (unsigned long i = 1; i <= 100000; ++i) {
    const double xi = 2000.0 * radical_inverse(i, 2) - 1000.0;
    const double xi1 = 2000.0 * radical_inverse(i, 3) - 1000.0;
    const double d = theta_direct({xi, xi1});
    worst = std::max(worst, std::abs(d - theta_rational({xi, xi1})) / (1.0 + std::abs(d)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Theta, NearResonanceShrinksWithN) {
  // xi1 in [N-1, N+1], xi - xi1 in [-N-1, -N+1], |xi| <= 1/4: same relative positions.
  for (double xi : {-0.25, -0.1, 0.05, 0.2}) {
    for (double off : {-0.5, 0.0, 0.6}) {
      const auto at = [&](double N) { return std::abs(theta_direct({xi, N + off})); };
      EXPECT_LT(at(1024.0), at(16.0)) << "xi=" << xi << " off=" << off;
      // The limit is |phi(xi)|: the N-dependent part vanishes like 1/N^2.
      EXPECT_NEAR(at(1024.0), std::abs(phi(xi)), 1e-5);
    }
  }
}

TEST(PsiKernel, Values) {
  EXPECT_EQ(psi_kernel(0.0), std::complex<double>(1.0, 0.0));
  EXPECT_NEAR(psi_kernel(std::log(2.0)).real(), 1.0 / std::log(2.0), 1e-15);
  EXPECT_NEAR(1.0 / std::log(2.0), 1.442695, 1e-6);
  const auto small = psi_kernel({0.0, -1e-9});
  EXPECT_NEAR(small.real(), 1.0, 1e-15);
  EXPECT_NEAR(small.imag(), -5e-10, 1e-15);
}

TEST(PsiKernel, ContinuousAcrossSeriesSwitch) {
  for (double angle = 0.0; angle < 6.28; angle += 0.3) {
    const std::complex<double> dir = std::polar(1.0, angle);
    const auto inside = psi_kernel(dir * (psi_series_radius * (1.0 - 1e-12)));
    const auto outside = psi_kernel(dir * (psi_series_radius * (1.0 + 1e-12)));
    EXPECT_LE(std::abs(inside - outside) / std::abs(inside), 1e-12);
  }
}

TEST(PsiKernel, AccurateAgainstDirectFormulaAwayFromZero) {
  for (double y : {0.01, 0.5, 3.0, 40.0}) {
    const std::complex<double> z(0.0, -y);
    const auto ref = (std::exp(z) - 1.0) / z;
    EXPECT_LE(std::abs(psi_kernel(z) - ref), 1e-13);
  }
}

TEST(OscillatoryBracket, BoundsInT) {
  for (double t = -2.0; t <= 2.0; t += 0.125) {
    for (double th = -3.0; th <= 3.0; th += 0.0625) {
      const double mag = std::abs(oscillatory_bracket(t, th));
      EXPECT_LE(mag, std::abs(t) * (1.0 + 1e-14));
      if (std::abs(t * th) <= 1.0) {
        EXPECT_GE(mag, 0.5 * std::abs(t));
      }
      if (th != 0.0) {
        const auto direct = (std::exp(std::complex<double>(0.0, -t * th)) - 1.0) / th;
        EXPECT_LE(std::abs(oscillatory_bracket(t, th) - direct), 1e-13);
      }
    }
  }
}
