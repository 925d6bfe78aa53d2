#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <set>
#include <vector>

#include "bbm/error.hpp"
#include "bbm/field.hpp"
#include "bbm/parallel.hpp"
#include "bbm/spectral.hpp"
#include "bbm/symbols.hpp"

namespace bbm {

/// A field sampled on the uniform time lattice t_q = q * t_final / Q, q = 0..Q.
struct Trajectory {
  FrequencyGrid grid;
  double t_final = 0.0;
  std::vector<SpectralField> fields;

  std::size_t intervals() const noexcept { return fields.empty() ? 0 : fields.size() - 1; }
  double step() const noexcept { return intervals() == 0 ? 0.0 : t_final / static_cast<double>(intervals()); }
  double time(std::size_t q) const noexcept { return static_cast<double>(q) * step(); }
  const SpectralField& final_field() const { return fields.back(); }
};

/// t' -> S(t') h on Q uniform intervals of [0, t_final].
inline Trajectory free_trajectory(const SpectralField& h, double t_final, int Q) {
  detail::require(Q >= 1, "free_trajectory: Q must be >= 1");
  Trajectory tr{h.grid(), t_final, {}};
  tr.fields.reserve(static_cast<std::size_t>(Q) + 1);
  for (int q = 0; q <= Q; ++q) tr.fields.push_back(semigroup(h, t_final * q / Q));
  return tr;
}

namespace detail {

inline void require_simpson_lattice(std::size_t intervals, const char* who) {
  require(intervals >= 8 && intervals % 2 == 0, std::string(who) + ": time lattice needs Q >= 8 even");
}

/// Composite Simpson weights (without the h/3 factor) for an even number of intervals.
inline double simpson_weight(std::size_t q, std::size_t intervals) {
  if (q == 0 || q == intervals) return 1.0;
  return q % 2 == 1 ? 4.0 : 2.0;
}

inline SpectralField accumulate(const FrequencyGrid& grid, const std::vector<std::vector<Complex>>& parts,
                                const std::vector<double>& weights, Complex prefactor) {
  std::vector<Complex> c(grid.size());
  for (std::size_t q = 0; q < parts.size(); ++q) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += weights[q] * parts[q][i];
  }
  for (auto& z : c) z *= prefactor;
  return SpectralField(grid, std::move(c));
}

}  // namespace detail

/// -(i/2) int_0^{t_final} S(t_final - t') phi(D)[v(t') w(t')] dt' by composite Simpson.
inline SpectralField duhamel(const Trajectory& v, const Trajectory& w, double t_final, ProductOptions opts = {}) {
  if (!(v.grid == w.grid)) throw GridMismatch("duhamel: trajectories live on different grids");
  if (v.fields.size() != w.fields.size() || v.t_final != w.t_final || v.t_final != t_final) {
    throw GridMismatch("duhamel: trajectories must share the time lattice ending at t_final");
  }
  const std::size_t Q = v.intervals();
  detail::require_simpson_lattice(Q, "duhamel");
  const auto& g = v.grid;
  if (t_final == 0.0) return SpectralField(g);

  std::vector<std::vector<Complex>> parts(Q + 1);
  parallel_for(Q + 1, [&](std::size_t q) {
    const double tq = v.time(q);
    const auto prod = quadratic_product(v.fields[q], w.fields[q], opts);
    std::vector<Complex> c(prod.coeffs());
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double p = phi(g.xi_at(i));
      c[i] *= p * std::polar(1.0, -(t_final - tq) * p);
    }
    parts[q] = std::move(c);
  });
  std::vector<double> weights(Q + 1);
  for (std::size_t q = 0; q <= Q; ++q) weights[q] = detail::simpson_weight(q, Q) * v.step() / 3.0;
  return detail::accumulate(g, parts, weights, Complex(0.0, -0.5));
}

/// Second Picard iterate -i int_0^t S(t-t') phi(D)[S(t')h]^2 dt', by time quadrature.
inline SpectralField i2_duhamel(const SpectralField& h, double t, int Q, ProductOptions opts = {}) {
  detail::require(t >= 0.0, "i2_duhamel: t must be non-negative");
  detail::require_simpson_lattice(Q > 0 ? static_cast<std::size_t>(Q) : 0, "i2_duhamel");
  if (t == 0.0) return SpectralField(h.grid());
  const auto tr = free_trajectory(h, t, Q);
  return 2.0 * duhamel(tr, tr, t, opts);
}

/// Second Picard iterate with the time integral done exactly:
///   -i e^{-i t phi(xi)} phi(xi) (w/sqrt(2 pi)) sum_{xi1} h(xi1) h(xi - xi1) int_0^t e^{-i t' theta} dt'.
/// The xi1 sum runs on the grid lattice refined `refine` times, with h
/// interpolated linearly between nodes. Cost grows with the square of the
/// support size of h, so this is meant for compactly supported data.
inline SpectralField i2_closed_form(const SpectralField& h, double t, int refine = 1) {
  detail::require(t >= 0.0, "i2_closed_form: t must be non-negative");
  detail::require(refine >= 1, "i2_closed_form: refine must be >= 1");
  const auto& g = h.grid();
  detail::require(refine == 1 || g.mode() == GridMode::line_approx,
                  "i2_closed_form: refine > 1 needs a line_approx grid");
  if (t == 0.0) return SpectralField(g);
  const int m = g.half_modes();
  const long long R = refine;

  // Sub-lattice positions p (xi1 = p * delta_xi / R) with nonzero interpolated h.
  std::set<long long> positions;
  for (int j = -m; j <= m; ++j) {
    if (h.at(j) == Complex{}) continue;
    for (long long p = (j - 1) * R + 1; p <= (j + 1) * R - 1; ++p) positions.insert(p);
  }
  const auto value_at = [&](long long p) -> Complex {
    const long long k = p >= 0 ? p / R : -((-p + R - 1) / R);  // floor(p / R)
    const long long r = p - k * R;
    const auto node = [&](long long n) -> Complex {
      return (n < -m || n > m) ? Complex{} : h.at(static_cast<int>(n));
    };
    if (r == 0) return node(k);
    const double f = static_cast<double>(r) / static_cast<double>(R);
    return (1.0 - f) * node(k) + f * node(k + 1);
  };
  const std::vector<long long> pos(positions.begin(), positions.end());
  std::vector<Complex> vals(pos.size());
  for (std::size_t a = 0; a < pos.size(); ++a) vals[a] = value_at(pos[a]);

  const double dxi_sub = g.delta_xi() / static_cast<double>(R);
  std::vector<Complex> sums(g.size());
  for (std::size_t a = 0; a < pos.size(); ++a) {
    if (vals[a] == Complex{}) continue;
    const double xi1 = static_cast<double>(pos[a]) * dxi_sub;
    for (std::size_t b = 0; b < pos.size(); ++b) {
      const long long total = pos[a] + pos[b];
      if (total % R != 0 || vals[b] == Complex{}) continue;
      const long long j = total / R;
      if (j < -m || j > m) throw SupportOverflow("i2_closed_form: interaction lands outside the grid");
      const double xi = g.xi(static_cast<int>(j));
      const double theta = theta_direct({xi, xi1});
      // int_0^t e^{-i t' theta} dt' = t * psi(-i t theta)
      sums[g.index(static_cast<int>(j))] += vals[a] * vals[b] * (t * psi_kernel(Complex(0.0, -t * theta)));
    }
  }
  const double weight = g.measure() / static_cast<double>(R) * inv_sqrt_2pi;
  std::vector<Complex> c(g.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double p = phi(g.xi_at(i));
    c[i] = Complex(0.0, -1.0) * std::polar(1.0, -t * p) * p * weight * sums[i];
  }
  return SpectralField(g, std::move(c));
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const noexcept { return hi - lo; }
};

struct AXiSet {
  std::vector<Interval> intervals;
  double measure = 0.0;
};

/// Internal frequencies xi1 with xi1 in I_N, xi - xi1 in -I_N, or xi1 in -I_N, xi - xi1 in I_N,
/// where I_N = [N-1, N+1].
inline AXiSet a_xi_set(double xi, double N) {
  detail::require(std::abs(xi) <= 0.5, "a_xi_set: requires |xi| <= 1/2");
  AXiSet out;
  const auto add = [&](double lo, double hi) {
    if (hi >= lo) {
      out.intervals.push_back({lo, hi});
      out.measure += hi - lo;
    }
  };
  add(std::max(N - 1.0, xi + N - 1.0), std::min(N + 1.0, xi + N + 1.0));
  add(std::max(-N - 1.0, xi - N - 1.0), std::min(-N + 1.0, xi - N + 1.0));
  std::sort(out.intervals.begin(), out.intervals.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return out;
}

/// Terms I_1..I_K of the amplitude expansion u(eps h, t) = sum_k eps^k I_k(t).
///
/// These are Taylor coefficients in eps, so term(2) is duhamel(S h, S h),
/// i.e. one half of the second derivative returned by i2_duhamel.
struct PicardExpansion {
  SpectralField data;
  double t_final = 0.0;
  std::vector<SpectralField> terms;  // terms[k-1] holds I_k(t_final)

  int order() const noexcept { return static_cast<int>(terms.size()); }
  const SpectralField& term(int k) const {
    detail::require(k >= 1 && k <= order(), "PicardExpansion: term index out of range");
    return terms[static_cast<std::size_t>(k - 1)];
  }
};

struct PicardOptions {
  /// Upper bound on (2M+1) * (Q+1) * K stored coefficients.
  std::size_t budget = std::size_t{1} << 26;
  ProductOptions product{};
};

/// Builds I_1 = S(t')h and I_k = sum_{j+l=k} duhamel(I_j, I_l) on the full
/// time lattice. Integrals to interior nodes use composite Simpson over the
/// even prefix plus one trapezoid panel at odd nodes.
/// Throws SupportOverflow unless the grid reaches K * support(h).
inline PicardExpansion picard_terms(const SpectralField& h, double t_final, int K, int Q, PicardOptions opts = {}) {
  detail::require(K >= 2, "picard_terms: K must be >= 2");
  detail::require(t_final >= 0.0, "picard_terms: t_final must be non-negative");
  detail::require_simpson_lattice(Q > 0 ? static_cast<std::size_t>(Q) : 0, "picard_terms");
  const auto& g = h.grid();
  const std::size_t nq = static_cast<std::size_t>(Q) + 1;
  if (g.size() * nq * static_cast<std::size_t>(K) > opts.budget) {
    throw BudgetExceeded("picard_terms: (2M+1)(Q+1)K exceeds the configured budget");
  }
  // I_k lives in |xi| <= k * support(h); products must stay on the grid.
  if (K * h.support_radius() > g.xi_max() + 1e-9 * g.delta_xi()) {
    throw SupportOverflow("picard_terms: K * support(h) = " + std::to_string(K * h.support_radius()) +
                          " exceeds xi_max = " + std::to_string(g.xi_max()));
  }
  const double dt = t_final / Q;
  const auto time = [&](std::size_t q) { return static_cast<double>(q) * dt; };

  std::vector<std::vector<SpectralField>> traj;  // traj[k-1][q]
  traj.push_back(free_trajectory(h, t_final, Q).fields);

  for (int k = 2; k <= K; ++k) {
    // F_q = S(-t_q) phi(D) sum_{j+l=k} I_j(t_q) I_l(t_q)
    std::vector<std::vector<Complex>> F(nq);
    parallel_for(nq, [&](std::size_t q) {
      std::vector<Complex> acc(g.size());
      for (int j = 1; 2 * j <= k; ++j) {
        const int l = k - j;
        const auto prod = quadratic_product(traj[j - 1][q], traj[l - 1][q], opts.product);
        const double mult = (j == l) ? 1.0 : 2.0;
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += mult * prod[i];
      }
      const double tq = time(q);
      for (std::size_t i = 0; i < acc.size(); ++i) {
        const double p = phi(g.xi_at(i));
        acc[i] *= p * std::polar(1.0, tq * p);
      }
      F[q] = std::move(acc);
    });

    std::vector<SpectralField> level;
    level.reserve(nq);
    std::vector<Complex> even(g.size());  // Simpson integral up to the last even node
    for (std::size_t q = 0; q < nq; ++q) {
      std::vector<Complex> integral(g.size());
      if (q >= 2 && q % 2 == 0) {
        for (std::size_t i = 0; i < even.size(); ++i) {
          even[i] += dt / 3.0 * (F[q - 2][i] + 4.0 * F[q - 1][i] + F[q][i]);
        }
        integral = even;
      } else if (q % 2 == 1) {
        for (std::size_t i = 0; i < even.size(); ++i) integral[i] = even[i] + 0.5 * dt * (F[q - 1][i] + F[q][i]);
      }
      const double tq = time(q);
      for (std::size_t i = 0; i < integral.size(); ++i) {
        integral[i] *= Complex(0.0, -0.5) * std::polar(1.0, -tq * phi(g.xi_at(i)));
      }
      level.emplace_back(g, std::move(integral));
    }
    traj.push_back(std::move(level));
  }

  PicardExpansion out{h, t_final, {}};
  for (auto& tr : traj) out.terms.push_back(tr.back());
  return out;
}

/// Sum of eps^k I_k over k = from_k..K.
inline SpectralField partial_series(const PicardExpansion& exp, double eps, int from_k) {
  std::vector<Complex> c(exp.data.grid().size());
  double power = std::pow(eps, from_k);
  for (int k = std::max(from_k, 1); k <= exp.order(); ++k, power *= eps) {
    const auto& term = exp.term(k);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += power * term[i];
  }
  return SpectralField(exp.data.grid(), std::move(c));
}

/// sum_{k=1}^{K} eps^k I_k(t_final).
inline SpectralField series_sum(const PicardExpansion& exp, double eps) { return partial_series(exp, eps, 1); }

/// H^s norm of sum_{k=from_k}^{K} eps^k I_k(t_final).
inline double tail_norm(const PicardExpansion& exp, double eps, int from_k, SobolevIndex s) {
  detail::require(from_k >= 1 && from_k <= exp.order() + 1, "tail_norm: from_k must lie in [1, K+1]");
  return hs_norm(partial_series(exp, eps, from_k), s);
}

}  // namespace bbm
