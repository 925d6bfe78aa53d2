#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "bbm/error.hpp"

namespace bbm {

enum class GridMode { line_approx, periodic };

inline std::string_view to_string(GridMode mode) {
  return mode == GridMode::periodic ? "periodic" : "line_approx";
}

inline GridMode grid_mode_from_string(std::string_view name) {
  if (name == "periodic") return GridMode::periodic;
  if (name == "line_approx" || name == "line") return GridMode::line_approx;
  throw InvalidArgument("unknown grid mode '" + std::string(name) + "'");
}

/// Uniform symmetric frequency lattice xi_j = j * delta_xi, j in [-M, M].
///
/// In line_approx mode the lattice samples the Fourier transform on the real
/// line (equivalently a torus of period 2*pi/delta_xi); in periodic mode it
/// holds the integer wavenumbers of the 2*pi torus and delta_xi is exactly 1.
class FrequencyGrid {
 public:
  FrequencyGrid(int half_modes, double delta_xi, GridMode mode)
      : half_modes_(half_modes), delta_xi_(delta_xi), mode_(mode) {
    detail::require(half_modes >= 4, "grid: half_modes must be >= 4");
    detail::require(std::isfinite(delta_xi) && delta_xi > 0.0,
                    "grid: delta_xi must be a positive finite number");
    detail::require(mode != GridMode::periodic || delta_xi == 1.0,
                    "grid: periodic mode requires delta_xi == 1");
  }

  int half_modes() const noexcept { return half_modes_; }
  double delta_xi() const noexcept { return delta_xi_; }
  GridMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return 2 * static_cast<std::size_t>(half_modes_) + 1; }

  /// Storage index of lattice index j.
  std::size_t index(int j) const noexcept { return static_cast<std::size_t>(j + half_modes_); }
  /// Lattice index of storage position i.
  int lattice(std::size_t i) const noexcept { return static_cast<int>(i) - half_modes_; }

  double xi(int j) const noexcept { return j * delta_xi_; }
  double xi_at(std::size_t i) const noexcept { return xi(lattice(i)); }
  double xi_max() const noexcept { return half_modes_ * delta_xi_; }

  /// Quadrature weight attached to every node in norms and convolutions.
  double measure() const noexcept { return mode_ == GridMode::periodic ? 1.0 : delta_xi_; }

  std::vector<double> nodes() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = xi_at(i);
    return out;
  }

  /// Lattice index of frequency value xi if it lies on a node (to 1e-9 relative).
  bool on_lattice(double value, int* j_out = nullptr) const noexcept {
    const double q = value / delta_xi_;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q))) return false;
    if (j_out) *j_out = static_cast<int>(r);
    return true;
  }

  friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) noexcept {
    return a.half_modes_ == b.half_modes_ && a.delta_xi_ == b.delta_xi_ && a.mode_ == b.mode_;
  }

 private:
  int half_modes_;
  double delta_xi_;
  GridMode mode_;
};

inline FrequencyGrid make_grid(int half_modes, double delta_xi, GridMode mode) {
  return FrequencyGrid(half_modes, delta_xi, mode);
}

/// Smallest grid of spacing delta_xi whose edge reaches xi_max.
inline FrequencyGrid grid_reaching(double xi_max, double delta_xi, GridMode mode) {
  detail::require(xi_max > 0.0 && delta_xi > 0.0, "grid: xi_max and delta_xi must be positive");
  const int m = static_cast<int>(std::ceil(xi_max / delta_xi - 1e-9));
  return FrequencyGrid(std::max(m, 4), delta_xi, mode);
}

}  // namespace bbm
