#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "bbm/error.hpp"
#include "bbm/fft.hpp"
#include "bbm/field.hpp"
#include "bbm/symbols.hpp"

namespace bbm {

inline const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

/// Linear group S(t) = exp(-i t phi(D)). Unitary on every H^s.
inline SpectralField semigroup(const SpectralField& u, double t) {
  if (t == 0.0) return u;
  const auto& g = u.grid();
  std::vector<Complex> c(u.coeffs());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::polar(1.0, -t * phi(g.xi_at(i)));
  return SpectralField(g, std::move(c));
}

/// phi(D) u.
inline SpectralField apply_phi(const SpectralField& u) {
  return apply_multiplier(u, [](double xi) { return phi(xi); });
}

struct ProductOptions {
  /// Largest admissible norm of the product spectrum lying outside the grid,
  /// relative to the norm of the full (untruncated) product.
  double truncation_tolerance = 1e-10;
};

/// Spectrum of the pointwise product u*v: the discrete convolution
/// sum_k u(k) v(j-k), scaled by delta_xi/sqrt(2 pi) on the line and
/// 1/sqrt(2 pi) on the torus. The convolution is computed in full (no
/// aliasing); content beyond the grid edge is an error unless negligible.
inline SpectralField quadratic_product(const SpectralField& u, const SpectralField& v, ProductOptions opts = {}) {
  require_same_grid(u, v, "quadratic_product");
  const auto& g = u.grid();
  const std::size_t m = static_cast<std::size_t>(g.half_modes());
  const std::size_t len = g.size();
  const auto full = fft::linear_convolution(u.coeffs(), v.coeffs());
  const double scale = g.measure() * inv_sqrt_2pi;

  // full[n] sits at lattice index n - 2M.
  double lost = 0.0;
  double total = 0.0;
  std::vector<Complex> c(len);
  for (std::size_t n = 0; n < full.size(); ++n) {
    const double e = std::norm(full[n]);
    total += e;
    if (n >= m && n < m + len) {
      c[n - m] = full[n] * scale;
    } else {
      lost += e;
    }
  }
  if (lost > 0.0 && std::sqrt(lost) > opts.truncation_tolerance * std::sqrt(total)) {
    std::ostringstream msg;
    msg << "quadratic_product: product spectrum extends beyond xi_max = " << g.xi_max() << " (relative lost norm "
        << std::sqrt(lost / total) << ")";
    throw SupportOverflow(msg.str());
  }
  return SpectralField(g, std::move(c));
}

/// Direct O(M^2) convolution; reference implementation used to check quadratic_product.
inline SpectralField quadratic_product_direct(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u, v, "quadratic_product_direct");
  const auto& g = u.grid();
  const int m = g.half_modes();
  std::vector<Complex> c(g.size());
  for (int j = -m; j <= m; ++j) {
    Complex acc{};
    for (int k = -m; k <= m; ++k) {
      const int r = j - k;
      if (r < -m || r > m) continue;
      acc += u.at(k) * v.at(r);
    }
    c[g.index(j)] = acc * (g.measure() * inv_sqrt_2pi);
  }
  return SpectralField(g, std::move(c));
}

/// Physical period represented by the grid: 2 pi / delta_xi.
inline double physical_period(const FrequencyGrid& g) { return 2.0 * std::numbers::pi / g.delta_xi(); }

/// u(x) = (w / sqrt(2 pi)) sum_j c_j exp(i xi_j x), w the node measure.
inline Complex physical_value(const SpectralField& u, double x) {
  const auto& g = u.grid();
  Complex acc{};
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * std::polar(1.0, g.xi_at(i) * x);
  return acc * (g.measure() * inv_sqrt_2pi);
}

/// Samples of u at x_n = n * period / count, n = 0..count-1; count >= grid size.
inline std::vector<Complex> to_physical(const SpectralField& u, std::size_t count) {
  const auto& g = u.grid();
  detail::require(count >= g.size(), "to_physical: need at least as many samples as grid nodes");
  fft::Buffer in(count), out(count);
  // Lattice index j goes to slot j mod count.
  const int m = g.half_modes();
  for (int j = -m; j <= m; ++j) {
    const std::size_t slot = static_cast<std::size_t>((j % static_cast<int>(count) + static_cast<int>(count)) %
                                                      static_cast<int>(count));
    in[slot] += u.at(j);
  }
  fft::backward(in, out);
  std::vector<Complex> x(count);
  const double scale = g.measure() * inv_sqrt_2pi;
  for (std::size_t n = 0; n < count; ++n) x[n] = out[n] * scale;
  return x;
}

/// L2 norm over one physical period, by the rectangle rule on to_physical samples.
inline double physical_l2_norm(const SpectralField& u) {
  const std::size_t count = fft::good_size(u.grid().size());
  const auto x = to_physical(u, count);
  double acc = 0.0;
  for (const auto& z : x) acc += std::norm(z);
  return std::sqrt(acc * physical_period(u.grid()) / static_cast<double>(count));
}

}  // namespace bbm
