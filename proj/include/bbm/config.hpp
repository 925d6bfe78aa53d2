#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bbm/error.hpp"
#include "bbm/grid.hpp"
#include "bbm/initial_data.hpp"

namespace bbm {

inline constexpr std::string_view artifact_version = "bbm-lab 1.0.0";

enum class ExperimentKind { theta_scan, data_norms, i2_inflation, series_approx, discontinuity, solver_validate };

inline std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::theta_scan: return "theta_scan";
    case ExperimentKind::data_norms: return "data_norms";
    case ExperimentKind::i2_inflation: return "i2_inflation";
    case ExperimentKind::series_approx: return "series_approx";
    case ExperimentKind::discontinuity: return "discontinuity";
    case ExperimentKind::solver_validate: return "solver_validate";
  }
  return "data_norms";
}

inline ExperimentKind experiment_from_string(std::string_view name) {
  std::string n(name);
  std::replace(n.begin(), n.end(), '-', '_');
  for (auto k : {ExperimentKind::theta_scan, ExperimentKind::data_norms, ExperimentKind::i2_inflation,
                 ExperimentKind::series_approx, ExperimentKind::discontinuity, ExperimentKind::solver_validate}) {
    if (n == to_string(k)) return k;
  }
  throw InvalidArgument("unknown experiment '" + std::string(name) + "'");
}

/// Declarative description of one sweep. Zero-valued grid fields mean "pick
/// the default for this experiment"; resolve() materializes them.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::data_norms;
  DataFamily family = DataFamily::sharp;
  std::vector<double> N_list{16, 32, 64, 128};
  std::vector<double> s_list{-0.5};
  double t = 0.5;
  double eps = 0.05;
  int K = 6;
  int width = 1;
  double sigma = 0.1;

  struct Grid {
    int M = 0;              // 0: xi_max = 4 * max(N)
    double delta_xi = 0.0;  // 0: experiment default
    GridMode mode = GridMode::line_approx;
  } grid;

  struct Quadrature {
    int Q = 256;
    int refine = 1;
  } quadrature;

  struct Solver {
    double dt = 1e-3;
    double order_dt = 0.1;  // base step of the RK4 self-convergence study
  } solver;

  struct ThetaScan {
    double xi_min = -4.0, xi_max = 4.0;
    double xi1_min = -4.0, xi1_max = 4.0;
    int n = 81;
  } theta;

  std::string output_dir = "results";

  double max_N() const { return N_list.empty() ? 0.0 : *std::max_element(N_list.begin(), N_list.end()); }

  bool ill_posedness_experiment() const {
    return experiment == ExperimentKind::i2_inflation || experiment == ExperimentKind::series_approx ||
           experiment == ExperimentKind::discontinuity;
  }

  /// Harmonics of the data the lattice must hold: K for the Picard terms,
  /// five for the full flow (the sixth is below the product guard at eps <= 0.1).
  double nonlinear_reach() const {
    const double half_width = family == DataFamily::periodic ? std::max(1, width) : 1.0;
    const double band = max_N() + half_width;
    if (experiment == ExperimentKind::series_approx) return std::max(K, 5) * band;
    if (experiment == ExperimentKind::discontinuity) return 5.0 * band;
    return 0.0;
  }

  /// Fills experiment defaults and checks every invariant; throws InvalidArgument.
  ExperimentConfig resolved() const {
    ExperimentConfig c = *this;
    if (c.family == DataFamily::periodic) c.grid.mode = GridMode::periodic;
    if (c.grid.mode == GridMode::periodic) c.family = DataFamily::periodic;
    if (c.grid.delta_xi == 0.0) {
      if (c.grid.mode == GridMode::periodic) {
        c.grid.delta_xi = 1.0;
      } else if (c.experiment == ExperimentKind::data_norms || c.family == DataFamily::bt_scaled) {
        c.grid.delta_xi = 1.0 / 32.0;
      } else {
        c.grid.delta_xi = 1.0 / 8.0;
      }
    }
    if (c.experiment == ExperimentKind::solver_validate || c.experiment == ExperimentKind::theta_scan) {
      c.validate();
      return c;
    }
    if (c.grid.M == 0) {
      const double reach = std::max(4.0 * c.max_N(), c.nonlinear_reach());
      c.grid.M = static_cast<int>(std::ceil(reach / c.grid.delta_xi - 1e-9));
    }
    c.validate();
    return c;
  }

  void validate() const {
    using detail::require;
    require(grid.delta_xi > 0.0, "config: grid.delta_xi must be positive");
    require(grid.mode != GridMode::periodic || grid.delta_xi == 1.0, "config: periodic grids need delta_xi = 1");
    require(std::isfinite(t) && t > 0.0 && t <= 1.0, "config: t must lie in (0, 1]");
    require(std::isfinite(eps) && eps >= 0.0, "config: eps must be non-negative");
    require(quadrature.Q >= 8 && quadrature.Q % 2 == 0, "config: quadrature.Q must be even and >= 8");
    require(quadrature.refine >= 1, "config: quadrature.refine must be >= 1");
    require(K >= 2 && K <= 8, "config: K must lie in [2, 8]");
    require(solver.dt > 0.0 && solver.order_dt > 0.0, "config: solver steps must be positive");
    require(theta.n >= 2, "config: theta.n must be >= 2");
    if (experiment == ExperimentKind::solver_validate || experiment == ExperimentKind::theta_scan) return;
    require(!N_list.empty(), "config: N_list must not be empty");
    require(!s_list.empty(), "config: s_list must not be empty");
    require(grid.M >= 4, "config: grid.M must be >= 4");
    const double xi_max = grid.M * grid.delta_xi;
    for (double N : N_list) {
      require(N >= 8.0, "config: every N must be >= 8");
      require(xi_max >= 2.0 * N + 4.0 - 1e-12, "config: grid must reach 2N+4 for N = " + std::to_string(N));
      if (family == DataFamily::periodic) require(std::abs(N - std::round(N)) < 1e-12, "config: periodic N must be integer");
    }
    for (double s : s_list) {
      require(std::isfinite(s) && s >= -2.0 && s <= 2.0, "config: s must lie in [-2, 2]");
      if (ill_posedness_experiment()) {
        require(s < 0.0, "config: ill-posedness experiments need s < 0 (s >= 0 is the well-posed regime)");
      }
    }
    if (experiment == ExperimentKind::series_approx) {
      const double band = max_N() + (family == DataFamily::periodic ? std::max(1, width) : 1.0);
      require(xi_max >= K * band - 1e-12, "config: series_approx needs xi_max >= K (max N + 1)");
    }
    if (experiment == ExperimentKind::series_approx || experiment == ExperimentKind::discontinuity) {
      require(eps <= 0.1, "config: eps must be <= 0.1 for series-based experiments");
    }
  }
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  return nlohmann::json{
      {"experiment", std::string(to_string(c.experiment))},
      {"family", std::string(to_string(c.family))},
      {"N_list", c.N_list},
      {"s_list", c.s_list},
      {"t", c.t},
      {"eps", c.eps},
      {"K", c.K},
      {"width", c.width},
      {"sigma", c.sigma},
      {"grid", {{"M", c.grid.M}, {"delta_xi", c.grid.delta_xi}, {"mode", std::string(to_string(c.grid.mode))}}},
      {"quadrature", {{"Q", c.quadrature.Q}, {"refine", c.quadrature.refine}}},
      {"solver", {{"dt", c.solver.dt}, {"order_dt", c.solver.order_dt}}},
      {"theta",
       {{"xi_min", c.theta.xi_min},
        {"xi_max", c.theta.xi_max},
        {"xi1_min", c.theta.xi1_min},
        {"xi1_max", c.theta.xi1_max},
        {"n", c.theta.n}}},
      {"output_dir", c.output_dir},
  };
}

/// Overlays the keys present in j onto c; unknown keys are rejected.
inline void merge_json(ExperimentConfig& c, const nlohmann::json& j) {
  static const std::vector<std::string> known{"experiment", "family", "N_list", "s_list", "t",        "eps",
                                              "K",          "width",  "sigma",  "grid",   "quadrature", "solver",
                                              "theta",      "output_dir"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw InvalidArgument("config: unknown key '" + it.key() + "'");
    }
  }
  try {
    if (j.contains("experiment")) c.experiment = experiment_from_string(j["experiment"].get<std::string>());
    if (j.contains("family")) c.family = data_family_from_string(j["family"].get<std::string>());
    if (j.contains("N_list")) c.N_list = j["N_list"].get<std::vector<double>>();
    if (j.contains("s_list")) c.s_list = j["s_list"].get<std::vector<double>>();
    if (j.contains("t")) c.t = j["t"].get<double>();
    if (j.contains("eps")) c.eps = j["eps"].get<double>();
    if (j.contains("K")) c.K = j["K"].get<int>();
    if (j.contains("width")) c.width = j["width"].get<int>();
    if (j.contains("sigma")) c.sigma = j["sigma"].get<double>();
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      if (g.contains("M")) c.grid.M = g["M"].get<int>();
      if (g.contains("delta_xi")) c.grid.delta_xi = g["delta_xi"].get<double>();
      if (g.contains("mode")) c.grid.mode = grid_mode_from_string(g["mode"].get<std::string>());
    }
    if (j.contains("quadrature")) {
      const auto& q = j["quadrature"];
      if (q.contains("Q")) c.quadrature.Q = q["Q"].get<int>();
      if (q.contains("refine")) c.quadrature.refine = q["refine"].get<int>();
    }
    if (j.contains("solver")) {
      const auto& s = j["solver"];
      if (s.contains("dt")) c.solver.dt = s["dt"].get<double>();
      if (s.contains("order_dt")) c.solver.order_dt = s["order_dt"].get<double>();
    }
    if (j.contains("theta")) {
      const auto& th = j["theta"];
      if (th.contains("xi_min")) c.theta.xi_min = th["xi_min"].get<double>();
      if (th.contains("xi_max")) c.theta.xi_max = th["xi_max"].get<double>();
      if (th.contains("xi1_min")) c.theta.xi1_min = th["xi1_min"].get<double>();
      if (th.contains("xi1_max")) c.theta.xi1_max = th["xi1_max"].get<double>();
      if (th.contains("n")) c.theta.n = th["n"].get<int>();
    }
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("config: " + path + ": " + e.what());
  }
  ExperimentConfig c;
  merge_json(c, j);
  return c;
}

}  // namespace bbm
