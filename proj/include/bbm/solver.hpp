#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "bbm/error.hpp"
#include "bbm/field.hpp"
#include "bbm/picard.hpp"
#include "bbm/spectral.hpp"
#include "bbm/symbols.hpp"

namespace bbm {

enum class TimeScheme { rk4 };

struct SolverConfig {
  double dt = 1e-3;
  int n_steps = 500;
  TimeScheme scheme = TimeScheme::rk4;
  int conservation_check_every = 50;
  /// Keep every store_every-th step in the trajectory (1 = every step).
  int store_every = 1;
  ProductOptions product{};

  double t_final() const noexcept { return dt * n_steps; }

  static SolverConfig to_time(double t_final, double dt) {
    detail::require(dt > 0.0 && t_final >= 0.0, "SolverConfig: need dt > 0 and t_final >= 0");
    SolverConfig cfg;
    cfg.n_steps = static_cast<int>(std::lround(t_final / dt));
    detail::require(std::abs(cfg.n_steps * dt - t_final) <= 1e-9 * std::max(1.0, t_final),
                    "SolverConfig: t_final must be a whole number of steps");
    cfg.dt = dt;
    return cfg;
  }
};

enum class TimeDirection { forward, backward };

/// u_t = -i phi(xi) (u + (1/2) spectrum(u^2)).
inline SpectralField rhs(const SpectralField& u, ProductOptions opts = {}) {
  const auto sq = quadratic_product(u, u, opts);
  const auto& g = u.grid();
  std::vector<Complex> c(g.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = Complex(0.0, -phi(g.xi_at(i))) * (u[i] + 0.5 * sq[i]);
  }
  return SpectralField(g, std::move(c));
}

namespace detail {

inline std::vector<Complex> axpy(const std::vector<Complex>& x, double a, const std::vector<Complex>& y) {
  std::vector<Complex> out(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * y[i];
  return out;
}

}  // namespace detail

/// One classical RK4 step of size dt (negative dt integrates backwards).
inline SpectralField rk4_step(const SpectralField& u, double dt, ProductOptions opts = {}) {
  const auto& g = u.grid();
  const auto k1 = rhs(u, opts);
  const auto k2 = rhs(SpectralField(g, detail::axpy(u.coeffs(), 0.5 * dt, k1.coeffs())), opts);
  const auto k3 = rhs(SpectralField(g, detail::axpy(u.coeffs(), 0.5 * dt, k2.coeffs())), opts);
  const auto k4 = rhs(SpectralField(g, detail::axpy(u.coeffs(), dt, k3.coeffs())), opts);
  std::vector<Complex> c(u.coeffs());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return SpectralField(g, std::move(c));
}

/// Integrates the multiplier form of BBM with RK4; the trajectory holds u0
/// and every store_every-th step. Throws on NaN or on loss of hermitian
/// symmetry beyond 1e-12 (no silent re-symmetrization).
inline Trajectory evolve(const SpectralField& u0, const SolverConfig& cfg,
                         TimeDirection direction = TimeDirection::forward) {
  detail::require(cfg.dt > 0.0 && cfg.dt <= 0.1, "evolve: dt must lie in (0, 0.1]");
  detail::require(cfg.n_steps >= 1, "evolve: n_steps must be >= 1");
  detail::require(cfg.store_every >= 1 && cfg.n_steps % cfg.store_every == 0,
                  "evolve: store_every must divide n_steps");
  if (!u0.hermitian()) throw InvalidArgument("evolve: initial data must be hermitian (real-valued)");
  const double dt = direction == TimeDirection::forward ? cfg.dt : -cfg.dt;

  Trajectory tr{u0.grid(), dt * cfg.n_steps, {}};
  tr.fields.reserve(static_cast<std::size_t>(cfg.n_steps / cfg.store_every) + 1);
  tr.fields.push_back(u0);
  SpectralField u = u0;
  for (int n = 1; n <= cfg.n_steps; ++n) {
    u = rk4_step(u, dt, cfg.product);
    if (!u.hermitian()) {
      throw NumericalFault("evolve: hermitian symmetry lost at step " + std::to_string(n) + " (defect " +
                           std::to_string(hermitian_defect(u.grid(), u.coeffs())) + ")");
    }
    if (n % cfg.store_every == 0) tr.fields.push_back(u);
  }
  return tr;
}

/// Integral of u over one period: sqrt(2 pi) Re c(0).
inline double invariant_mean(const SpectralField& u) {
  return std::sqrt(2.0 * std::numbers::pi) * u.at(0).real();
}

/// int (u^2 + u_x^2) dx = ||u||_{H^1}^2.
inline double invariant_h1(const SpectralField& u) {
  const double n = hs_norm(u, SobolevIndex{1.0});
  return n * n;
}

/// L2 norm at interior node q of (1 + xi^2) u_t + i xi u + (i xi / 2) spectrum(u^2),
/// with u_t from fourth-order central differences in time.
inline double residual_ivp1_at(const Trajectory& traj, std::size_t q, ProductOptions opts = {}) {
  const std::size_t n = traj.fields.size();
  detail::require(n >= 5, "residual_ivp1: need at least 5 time nodes");
  detail::require(q >= 2 && q + 2 < n, "residual_ivp1: node must be interior");
  const auto& g = traj.grid;
  const double h = traj.step();
  const auto& f = traj.fields;
  const auto sq = quadratic_product(f[q], f[q], opts);
  std::vector<Complex> r(g.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Complex ut = (-f[q + 2][i] + 8.0 * f[q + 1][i] - 8.0 * f[q - 1][i] + f[q - 2][i]) / (12.0 * h);
    const double xi = g.xi_at(i);
    r[i] = (1.0 + xi * xi) * ut + Complex(0.0, xi) * (f[q][i] + 0.5 * sq[i]);
  }
  return l2_norm(SpectralField(g, std::move(r)));
}

/// Maximum of residual_ivp1_at over all interior nodes.
inline double residual_ivp1(const Trajectory& traj, ProductOptions opts = {}) {
  detail::require(traj.fields.size() >= 5, "residual_ivp1: need at least 5 time nodes");
  double worst = 0.0;
  for (std::size_t q = 2; q + 2 < traj.fields.size(); ++q) worst = std::max(worst, residual_ivp1_at(traj, q, opts));
  return worst;
}

}  // namespace bbm
