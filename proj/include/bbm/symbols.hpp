#pragma once

#include <cmath>
#include <complex>

namespace bbm {

/// Dispersion symbol of BBM: phi(xi) = xi / (1 + xi^2). Odd, |phi| <= 1/2.
inline double phi(double xi) noexcept { return xi / (1.0 + xi * xi); }

/// A pair (output frequency xi, internal frequency xi1) of a quadratic interaction.
struct ResonancePoint {
  double xi = 0.0;
  double xi1 = 0.0;
};

/// Resonance function phi(xi1) + phi(xi - xi1) - phi(xi).
inline double theta_direct(ResonancePoint p) noexcept {
  return phi(p.xi1) + phi(p.xi - p.xi1) - phi(p.xi);
}

/// Factored form of the resonance function; used only to cross-check theta_direct.
inline double theta_rational(ResonancePoint p) noexcept {
  const double xi = p.xi;
  const double xi1 = p.xi1;
  const double xi2 = xi - xi1;
  const double num = xi * xi1 * xi2 * (xi * xi - xi * xi1 + xi1 * xi1 + 3.0);
  const double den = (1.0 + xi1 * xi1) * (1.0 + xi2 * xi2) * (1.0 + xi * xi);
  return num / den;
}

inline constexpr double psi_series_radius = 1e-4;

/// (e^z - 1) / z with the removable singularity at 0 filled in.
inline std::complex<double> psi_kernel(std::complex<double> z) noexcept {
  if (std::abs(z) < psi_series_radius) {
    return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0)));
  }
  // e^z - 1 without cancellation: e^x cos y - 1 = expm1(x) cos y - 2 sin^2(y/2).
  const double x = z.real();
  const double y = z.imag();
  const double half = std::sin(0.5 * y);
  const std::complex<double> em1(std::expm1(x) * std::cos(y) - 2.0 * half * half, std::exp(x) * std::sin(y));
  return em1 / z;
}

/// (e^{-i t theta} - 1) / theta evaluated through psi_kernel; equals -i t at theta = 0.
inline std::complex<double> oscillatory_bracket(double t, double theta) noexcept {
  const std::complex<double> z(0.0, -t * theta);
  return std::complex<double>(0.0, -t) * psi_kernel(z);
}

}  // namespace bbm
