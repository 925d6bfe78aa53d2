#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "bbm/error.hpp"
#include "bbm/field.hpp"
#include "bbm/grid.hpp"

namespace bbm {

enum class DataFamily { sharp, bt_scaled, periodic };

inline std::string_view to_string(DataFamily f) {
  switch (f) {
    case DataFamily::sharp: return "sharp";
    case DataFamily::bt_scaled: return "bt_scaled";
    case DataFamily::periodic: return "periodic";
  }
  return "sharp";
}

inline DataFamily data_family_from_string(std::string_view name) {
  if (name == "sharp") return DataFamily::sharp;
  if (name == "bt_scaled" || name == "bt") return DataFamily::bt_scaled;
  if (name == "periodic") return DataFamily::periodic;
  throw InvalidArgument("unknown data family '" + std::string(name) + "'");
}

/// Parameters of one member of a counterexample family.
struct DataFamilySpec {
  DataFamily family = DataFamily::sharp;
  double N = 16.0;
  double s = -0.5;      // bt_scaled only
  double sigma = 0.1;   // bt_scaled only, gamma = N^-sigma
  int width = 1;        // periodic only, band half-width
};

namespace detail {

inline void require_product_room(const FrequencyGrid& grid, double N, const char* who) {
  require(grid.xi_max() >= 2.0 * N + 4.0 - 1e-12,
          std::string(who) + ": grid must reach xi_max >= 2N+4 (got " + std::to_string(grid.xi_max()) + ")");
}

}  // namespace detail

/// Two unit boxes on |xi| in [N-1, N+1], closed at both ends.
inline SpectralField phi_sharp(double N, const FrequencyGrid& grid) {
  detail::require(grid.mode() == GridMode::line_approx, "phi_sharp: requires a line_approx grid");
  detail::require(N >= 8.0, "phi_sharp: N must be >= 8");
  int lo = 0, hi = 0;
  detail::require(grid.on_lattice(N - 1.0, &lo) && grid.on_lattice(N + 1.0, &hi),
                  "phi_sharp: N-1 and N+1 must fall on grid nodes");
  detail::require_product_room(grid, N, "phi_sharp");
  std::vector<Complex> c(grid.size());
  for (int j = lo; j <= hi; ++j) {
    c[grid.index(j)] = 1.0;
    c[grid.index(-j)] = 1.0;
  }
  return SpectralField(grid, std::move(c));
}

/// Inverse transform of phi_sharp on the line: (4/sqrt(2 pi)) cos(N x) sin(x)/x.
inline double phi_sharp_physical(double N, double x) noexcept {
  const double amp = 4.0 / std::sqrt(2.0 * std::numbers::pi);
  const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return amp * std::cos(N * x) * sinc;
}

/// gamma^{-1/2} N^{-s} on |xi| in [N - gamma, N + gamma], gamma = N^{-sigma}.
inline SpectralField phi_bt(double N, double s, double sigma, const FrequencyGrid& grid) {
  detail::require(grid.mode() == GridMode::line_approx, "phi_bt: requires a line_approx grid");
  detail::require(N >= 8.0, "phi_bt: N must be >= 8");
  detail::require(sigma > 0.0 && sigma < 1.0, "phi_bt: sigma must lie in (0, 1)");
  const double gamma = std::pow(N, -sigma);
  detail::require(grid.delta_xi() <= gamma / 8.0 + 1e-15,
                  "phi_bt: box half-width gamma must span at least 8 grid nodes");
  detail::require_product_room(grid, N, "phi_bt");
  const double amp = std::pow(gamma, -0.5) * std::pow(N, -s);
  const double tol = 1e-12 * N;
  return field_from_symbol(grid, [&](double xi) {
    const double a = std::abs(xi);
    return (a >= N - gamma - tol && a <= N + gamma + tol) ? amp : 0.0;
  });
}

/// Unit coefficients on N - width <= |n| <= N + width of the torus; zero mode is always 0.
inline SpectralField phi_periodic(int N, int width, const FrequencyGrid& grid) {
  detail::require(grid.mode() == GridMode::periodic, "phi_periodic: requires a periodic grid");
  detail::require(width >= 0, "phi_periodic: width must be non-negative");
  detail::require(N >= 8, "phi_periodic: N must be >= 8");
  detail::require(N + width <= grid.half_modes(), "phi_periodic: band exceeds grid");
  std::vector<Complex> c(grid.size());
  for (int n = std::max(N - width, 1); n <= N + width; ++n) {
    c[grid.index(n)] = 1.0;
    c[grid.index(-n)] = 1.0;
  }
  return SpectralField(grid, std::move(c));
}

inline SpectralField make_data(const DataFamilySpec& spec, const FrequencyGrid& grid) {
  switch (spec.family) {
    case DataFamily::sharp: return phi_sharp(spec.N, grid);
    case DataFamily::bt_scaled: return phi_bt(spec.N, spec.s, spec.sigma, grid);
    case DataFamily::periodic: {
      const int n = static_cast<int>(std::lround(spec.N));
      detail::require(std::abs(spec.N - n) < 1e-12, "phi_periodic: N must be an integer");
      return phi_periodic(n, spec.width, grid);
    }
  }
  throw InvalidArgument("make_data: unknown family");
}

}  // namespace bbm
