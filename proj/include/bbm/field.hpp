#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bbm/error.hpp"
#include "bbm/grid.hpp"

namespace bbm {

using Complex = std::complex<double>;

/// Sobolev regularity exponent s of the weight (1 + xi^2)^s.
struct SobolevIndex {
  double s = 0.0;

  constexpr SobolevIndex() = default;
  constexpr explicit SobolevIndex(double value) : s(value) {}
};

inline constexpr double hermitian_tolerance = 1e-12;

/// Largest deviation |c(-j) - conj(c(j))| relative to max |c| (0 for a zero field).
inline double hermitian_defect(const FrequencyGrid& grid, const std::vector<Complex>& c) {
  double scale = 0.0;
  for (const auto& z : c) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  const int m = grid.half_modes();
  for (int j = 0; j <= m; ++j) {
    const Complex a = c[grid.index(j)];
    const Complex b = c[grid.index(-j)];
    worst = std::max(worst, std::abs(b - std::conj(a)));
  }
  return worst / scale;
}

/// Complex spectral coefficients on a FrequencyGrid.
///
/// Fields are immutable values; every operation returns a new field. The
/// hermitian flag is derived from the coefficients at construction, so it
/// always reflects the data.
class SpectralField {
 public:
  explicit SpectralField(FrequencyGrid grid)
      : grid_(grid), coeffs_(grid.size(), Complex{}), hermitian_(true) {}

  SpectralField(FrequencyGrid grid, std::vector<Complex> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size()) throw GridMismatch("field: coefficient count does not match grid");
    for (const auto& z : coeffs_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericalFault("field: non-finite coefficient");
    }
    hermitian_ = hermitian_defect(grid_, coeffs_) <= hermitian_tolerance;
  }

  const FrequencyGrid& grid() const noexcept { return grid_; }
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  bool hermitian() const noexcept { return hermitian_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Coefficient at lattice index j.
  Complex at(int j) const { return coeffs_.at(grid_.index(j)); }
  Complex operator[](std::size_t i) const noexcept { return coeffs_[i]; }

  /// Largest |xi_j| carrying a nonzero coefficient (0 for the zero field).
  double support_radius() const noexcept {
    for (int j = grid_.half_modes(); j > 0; --j) {
      if (coeffs_[grid_.index(j)] != Complex{} || coeffs_[grid_.index(-j)] != Complex{}) return grid_.xi(j);
    }
    return 0.0;
  }

 private:
  FrequencyGrid grid_;
  std::vector<Complex> coeffs_;
  bool hermitian_ = true;
};

inline void require_same_grid(const SpectralField& a, const SpectralField& b, const char* where) {
  if (!(a.grid() == b.grid())) throw GridMismatch(std::string(where) + ": fields live on different grids");
}

/// Samples f on every node: coeffs(j) = f(xi_j).
template <typename Symbol>
SpectralField field_from_symbol(const FrequencyGrid& grid, Symbol&& f) {
  std::vector<Complex> c(grid.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = Complex(f(grid.xi_at(i)));
  return SpectralField(grid, std::move(c));
}

/// ( sum_j (1 + xi_j^2)^s |c_j|^2 w )^(1/2), w = delta_xi on the line and 1 on the torus.
inline double hs_norm(const SpectralField& u, SobolevIndex s) {
  const auto& g = u.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double xi = g.xi_at(i);
    acc += std::pow(1.0 + xi * xi, s.s) * std::norm(u[i]);
  }
  return std::sqrt(acc * g.measure());
}

/// H^s norm restricted to nodes with |xi| <= radius.
inline double hs_norm_within(const SpectralField& u, SobolevIndex s, double radius) {
  const auto& g = u.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double xi = g.xi_at(i);
    if (std::abs(xi) <= radius) acc += std::pow(1.0 + xi * xi, s.s) * std::norm(u[i]);
  }
  return std::sqrt(acc * g.measure());
}

inline double l2_norm(const SpectralField& u) { return hs_norm(u, SobolevIndex{0.0}); }

/// coeffs(j) <- m(xi_j) * coeffs(j).
template <typename Symbol>
SpectralField apply_multiplier(const SpectralField& u, Symbol&& m) {
  const auto& g = u.grid();
  std::vector<Complex> c(u.coeffs());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Complex factor(m(g.xi_at(i)));
    if (!std::isfinite(factor.real()) || !std::isfinite(factor.imag())) {
      throw NumericalFault("apply_multiplier: symbol is not finite on the grid");
    }
    c[i] *= factor;
  }
  return SpectralField(g, std::move(c));
}

// Field algebra. Same-grid only.

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b, "field add");
  std::vector<Complex> c(a.coeffs());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return SpectralField(a.grid(), std::move(c));
}

inline SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b, "field subtract");
  std::vector<Complex> c(a.coeffs());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
  return SpectralField(a.grid(), std::move(c));
}

inline SpectralField operator*(Complex alpha, const SpectralField& u) {
  std::vector<Complex> c(u.coeffs());
  for (auto& z : c) z *= alpha;
  return SpectralField(u.grid(), std::move(c));
}

inline SpectralField operator*(double alpha, const SpectralField& u) { return Complex(alpha) * u; }

/// ||a - b||_{L2} / ||b||_{L2}; absolute difference when b vanishes.
inline double relative_l2_difference(const SpectralField& a, const SpectralField& b) {
  const double diff = l2_norm(a - b);
  const double ref = l2_norm(b);
  return ref > 0.0 ? diff / ref : diff;
}

/// Columnar text dump: header `# xi re im`, one row per node.
inline void write_columnar(std::ostream& os, const SpectralField& u) {
  std::ostringstream line;
  line.precision(17);
  os << "# xi re im\n";
  const auto& g = u.grid();
  for (std::size_t i = 0; i < u.size(); ++i) {
    line.str("");
    line << g.xi_at(i) << ' ' << u[i].real() << ' ' << u[i].imag() << '\n';
    os << line.str();
  }
}

/// Reads a columnar dump back onto `grid`; rows must match the grid nodes in order.
inline SpectralField read_columnar(std::istream& is, const FrequencyGrid& grid) {
  std::string header;
  std::getline(is, header);
  if (header.rfind("# xi re im", 0) != 0) throw InvalidArgument("columnar: missing '# xi re im' header");
  std::vector<Complex> c;
  c.reserve(grid.size());
  double xi = 0.0, re = 0.0, im = 0.0;
  while (is >> xi >> re >> im) {
    const std::size_t i = c.size();
    if (i >= grid.size() || std::abs(xi - grid.xi_at(i)) > 1e-9 * std::max(1.0, std::abs(xi))) {
      throw GridMismatch("columnar: row does not match grid node");
    }
    c.emplace_back(re, im);
  }
  if (c.size() != grid.size()) throw GridMismatch("columnar: row count does not match grid");
  return SpectralField(grid, std::move(c));
}

}  // namespace bbm
