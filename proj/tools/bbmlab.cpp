// Command-line front end: resonance scans, data dumps, I2 evaluation, solver
// runs and the experiment sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bbm/bbm.hpp"

namespace {

using bbm::ExperimentConfig;

constexpr int exit_ok = 0;
constexpr int exit_predicate_failed = 1;
constexpr int exit_error = 2;

struct ExperimentFlags {
  std::string config_path;
  std::vector<double> N_list;
  std::vector<double> s_list;
  double t = 0.0, eps = 0.0, delta_xi = 0.0, dt = 0.0, order_dt = 0.0, sigma = 0.0;
  int K = 0, M = 0, Q = 0, refine = 0, width = 0;
  std::string family, mode, out;
};

struct ExperimentCommand {
  bbm::ExperimentKind kind;
  CLI::App* app = nullptr;
  ExperimentFlags flags;
};

void add_experiment_flags(CLI::App* app, ExperimentFlags& f) {
  app->add_option("--config", f.config_path, "JSON config file (flags override its values)");
  app->add_option("--N", f.N_list, "Center frequencies N");
  app->add_option("--s", f.s_list, "Sobolev exponents s");
  app->add_option("--t", f.t, "Final time");
  app->add_option("--eps", f.eps, "Data amplitude epsilon");
  app->add_option("--K", f.K, "Picard truncation order");
  app->add_option("--family", f.family, "sharp | bt_scaled | periodic");
  app->add_option("--M", f.M, "Grid half-mode count (0 = automatic)");
  app->add_option("--delta-xi", f.delta_xi, "Frequency spacing (0 = experiment default)");
  app->add_option("--mode", f.mode, "line_approx | periodic");
  app->add_option("--Q", f.Q, "Time-quadrature intervals");
  app->add_option("--refine", f.refine, "Closed-form xi1 refinement factor");
  app->add_option("--dt", f.dt, "RK4 time step");
  app->add_option("--order-dt", f.order_dt, "Base step of the RK4 order study");
  app->add_option("--width", f.width, "Periodic band half-width");
  app->add_option("--sigma", f.sigma, "bt_scaled exponent sigma");
  app->add_option("--out", f.out, "Output directory");
}

ExperimentConfig build_config(const ExperimentCommand& cmd) {
  const auto& f = cmd.flags;
  const auto* app = cmd.app;
  ExperimentConfig c;
  if (!f.config_path.empty()) c = bbm::load_config(f.config_path);
  c.experiment = cmd.kind;
  const auto given = [&](const char* name) { return app->count(name) > 0; };
  if (given("--N")) c.N_list = f.N_list;
  if (given("--s")) c.s_list = f.s_list;
  if (given("--t")) c.t = f.t;
  if (given("--eps")) c.eps = f.eps;
  if (given("--K")) c.K = f.K;
  if (given("--family")) c.family = bbm::data_family_from_string(f.family);
  if (given("--M")) c.grid.M = f.M;
  if (given("--delta-xi")) c.grid.delta_xi = f.delta_xi;
  if (given("--mode")) c.grid.mode = bbm::grid_mode_from_string(f.mode);
  if (given("--Q")) c.quadrature.Q = f.Q;
  if (given("--refine")) c.quadrature.refine = f.refine;
  if (given("--dt")) c.solver.dt = f.dt;
  if (given("--order-dt")) c.solver.order_dt = f.order_dt;
  if (given("--width")) c.width = f.width;
  if (given("--sigma")) c.sigma = f.sigma;
  if (given("--out")) c.output_dir = f.out;
  return c.resolved();
}

int report_and_exit(const bbm::Report& rep) {
  bbm::emit_outputs(rep);
  for (const auto& p : rep.predicates) {
    std::cout << (p.passed ? "PASS  " : "FAIL  ") << p.name << ": " << p.detail << '\n';
  }
  std::cout << "outputs written to " << rep.config.output_dir << '\n';
  return rep.all_passed() ? exit_ok : exit_predicate_failed;
}

// Default lattice reaches reach_factor * N (the full flow needs five harmonics).
bbm::FrequencyGrid data_grid(const std::string& family, double N, int M, double delta_xi, double sigma,
                             double reach_factor = 4.0) {
  const auto fam = bbm::data_family_from_string(family);
  if (fam == bbm::DataFamily::periodic) {
    return bbm::FrequencyGrid(M > 0 ? M : static_cast<int>(std::ceil(reach_factor * N)), 1.0,
                              bbm::GridMode::periodic);
  }
  if (delta_xi <= 0.0) delta_xi = fam == bbm::DataFamily::bt_scaled ? std::pow(N, -sigma) / 8.0 : 0.125;
  if (M > 0) return bbm::FrequencyGrid(M, delta_xi, bbm::GridMode::line_approx);
  return bbm::grid_reaching(reach_factor * N, delta_xi, bbm::GridMode::line_approx);
}

}  // namespace

int main(int argc, char** argv) {
  bbm::configure_threads_from_env();
  CLI::App app{"BBM pseudospectral laboratory: norm inflation of the second Picard iterate"};
  app.require_subcommand(1);

  // theta-scan
  auto* theta = app.add_subcommand("theta-scan", "CSV of theta(xi, xi1) over a rectangular lattice");
  double xi_min = -4, xi_max = 4, xi1_min = -4, xi1_max = 4;
  int theta_n = 81;
  std::string theta_csv;
  theta->add_option("--xi-min", xi_min);
  theta->add_option("--xi-max", xi_max);
  theta->add_option("--xi1-min", xi1_min);
  theta->add_option("--xi1-max", xi1_max);
  theta->add_option("--n", theta_n, "Lattice points per axis");
  theta->add_option("--csv", theta_csv, "Write CSV here instead of stdout");

  // data
  auto* data = app.add_subcommand("data", "Spectrum and physical samples of one data family member");
  std::string data_family = "sharp";
  double data_N = 16, data_s = -0.5, data_sigma = 0.1, data_dxi = 0.0;
  int data_width = 1, data_M = 0, data_samples = 0;
  data->add_option("--family", data_family);
  data->add_option("--N", data_N);
  data->add_option("--s", data_s, "Sobolev exponent of the reported hs norm (and bt_scaled amplitude)");
  data->add_option("--sigma", data_sigma);
  data->add_option("--width", data_width);
  data->add_option("--delta-xi", data_dxi);
  data->add_option("--M", data_M);
  data->add_option("--samples", data_samples, "Physical samples (0 = next FFT size above grid size)");

  // i2
  auto* i2 = app.add_subcommand("i2", "Second Picard iterate of the sharp (or periodic) data");
  double i2_N = 16, i2_t = 0.5, i2_s = -0.5, i2_dxi = 0.0;
  int i2_Q = 256, i2_refine = 1, i2_M = 0, i2_width = 1;
  std::string i2_method = "both", i2_dump, i2_family = "sharp";
  i2->add_option("--N", i2_N);
  i2->add_option("--t", i2_t);
  i2->add_option("--s", i2_s);
  i2->add_option("--Q", i2_Q);
  i2->add_option("--method", i2_method)->check(CLI::IsMember({"duhamel", "closed", "both"}));
  i2->add_option("--refine", i2_refine);
  i2->add_option("--family", i2_family);
  i2->add_option("--width", i2_width);
  i2->add_option("--delta-xi", i2_dxi);
  i2->add_option("--M", i2_M);
  i2->add_option("--dump", i2_dump, "Write the I2 spectrum (columnar) to this file");

  // evolve
  auto* ev = app.add_subcommand("evolve", "RK4 evolution of eps * data with conservation diagnostics");
  double ev_N = 16, ev_eps = 0.05, ev_t = 0.5, ev_dt = 1e-3, ev_s = -0.5, ev_dxi = 0.0;
  int ev_every = 50, ev_M = 0, ev_width = 1;
  std::string ev_family = "sharp", ev_dump;
  ev->add_option("--N", ev_N);
  ev->add_option("--eps", ev_eps);
  ev->add_option("--t", ev_t);
  ev->add_option("--dt", ev_dt);
  ev->add_option("--s", ev_s);
  ev->add_option("--family", ev_family);
  ev->add_option("--width", ev_width);
  ev->add_option("--every", ev_every, "Steps between checkpoints");
  ev->add_option("--delta-xi", ev_dxi);
  ev->add_option("--M", ev_M);
  ev->add_option("--dump", ev_dump, "Write the final spectrum (columnar) to this file");

  std::vector<ExperimentCommand> experiments{
      {bbm::ExperimentKind::data_norms, nullptr, {}},    {bbm::ExperimentKind::i2_inflation, nullptr, {}},
      {bbm::ExperimentKind::series_approx, nullptr, {}}, {bbm::ExperimentKind::discontinuity, nullptr, {}},
      {bbm::ExperimentKind::solver_validate, nullptr, {}}};
  for (auto& e : experiments) {
    std::string name(bbm::to_string(e.kind));
    std::replace(name.begin(), name.end(), '_', '-');
    e.app = app.add_subcommand(name, "Run the " + name + " sweep and write results.csv/json and plot.gp");
    add_experiment_flags(e.app, e.flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_error;
  }

  try {
    if (*theta) {
      ExperimentConfig c;
      c.experiment = bbm::ExperimentKind::theta_scan;
      c.theta = {xi_min, xi_max, xi1_min, xi1_max, theta_n};
      c = c.resolved();
      std::ofstream file;
      if (!theta_csv.empty()) {
        file.open(theta_csv);
        if (!file) throw bbm::Error("cannot write " + theta_csv);
      }
      std::ostream& os = theta_csv.empty() ? std::cout : file;
      os.precision(17);
      os << "xi,xi1,theta\n";
      for (int a = 0; a < theta_n; ++a) {
        const double xi = xi_min + (xi_max - xi_min) * a / (theta_n - 1);
        for (int b = 0; b < theta_n; ++b) {
          const double xi1 = xi1_min + (xi1_max - xi1_min) * b / (theta_n - 1);
          os << xi << ',' << xi1 << ',' << bbm::theta_direct({xi, xi1}) << '\n';
        }
      }
      const auto rep = bbm::run_theta_scan(c);
      for (const auto& p : rep.predicates) {
        std::cerr << (p.passed ? "PASS  " : "FAIL  ") << p.name << ": " << p.detail << '\n';
      }
      return rep.all_passed() ? exit_ok : exit_predicate_failed;
    }

    if (*data) {
      const auto g = data_grid(data_family, data_N, data_M, data_dxi, data_sigma);
      bbm::DataFamilySpec spec{bbm::data_family_from_string(data_family), data_N, data_s, data_sigma, data_width};
      const auto h = bbm::make_data(spec, g);
      bbm::write_columnar(std::cout, h);
      const std::size_t count =
          data_samples > 0 ? static_cast<std::size_t>(data_samples) : bbm::fft::good_size(g.size());
      const auto x = bbm::to_physical(h, count);
      const double period = bbm::physical_period(g);
      std::cout << "\n# x re im\n";
      std::cout.precision(17);
      for (std::size_t n = 0; n < x.size(); ++n) {
        std::cout << period * n / count << ' ' << x[n].real() << ' ' << x[n].imag() << '\n';
      }
      const nlohmann::json summary{{"family", data_family}, {"N", data_N}, {"l2", bbm::l2_norm(h)},
                                   {"hs", bbm::hs_norm(h, bbm::SobolevIndex{data_s})}, {"s", data_s}};
      std::cout << '\n' << summary.dump() << '\n';
      return exit_ok;
    }

    if (*i2) {
      const auto g = data_grid(i2_family, i2_N, i2_M, i2_dxi, 0.1);
      bbm::DataFamilySpec spec{bbm::data_family_from_string(i2_family), i2_N, i2_s, 0.1, i2_width};
      const auto h = bbm::make_data(spec, g);
      std::optional<bbm::SpectralField> duh, closed;
      if (i2_method != "closed") duh = bbm::i2_duhamel(h, i2_t, i2_Q);
      if (i2_method != "duhamel") closed = bbm::i2_closed_form(h, i2_t, i2_refine);
      const auto& result = duh ? *duh : *closed;
      nlohmann::json out{{"N", i2_N}, {"t", i2_t}, {"s", i2_s}, {"method", i2_method},
                         {"hs_norm_I2", bbm::hs_norm(result, bbm::SobolevIndex{i2_s})},
                         {"method_discrepancy", nullptr}};
      if (duh && closed) out["method_discrepancy"] = bbm::relative_l2_difference(*duh, *closed);
      if (!i2_dump.empty()) {
        std::ofstream f(i2_dump);
        if (!f) throw bbm::Error("cannot write " + i2_dump);
        bbm::write_columnar(f, result);
      }
      std::cout << out.dump() << '\n';
      return exit_ok;
    }

    if (*ev) {
      const auto g = data_grid(ev_family, ev_N, ev_M, ev_dxi, 0.1, 5.0 * (ev_N + std::max(ev_width, 1)) / ev_N);
      bbm::DataFamilySpec spec{bbm::data_family_from_string(ev_family), ev_N, ev_s, 0.1, ev_width};
      const auto u0 = ev_eps * bbm::make_data(spec, g);
      auto cfg = bbm::SolverConfig::to_time(ev_t, ev_dt);
      cfg.conservation_check_every = ev_every;
      const auto traj = bbm::evolve(u0, cfg);
      const double m0 = bbm::invariant_mean(u0), e0 = bbm::invariant_h1(u0);
      for (std::size_t q = 0; q < traj.fields.size(); ++q) {
        const bool last = q + 1 == traj.fields.size();
        if (q % static_cast<std::size_t>(std::max(ev_every, 1)) != 0 && !last) continue;
        const auto& u = traj.fields[q];
        nlohmann::json row{{"t", traj.time(q)},
                           {"l2", bbm::l2_norm(u)},
                           {"hs", bbm::hs_norm(u, bbm::SobolevIndex{ev_s})},
                           {"mean_drift", std::abs(bbm::invariant_mean(u) - m0)},
                           {"h1_drift", e0 > 0 ? std::abs(bbm::invariant_h1(u) - e0) / e0 : 0.0},
                           {"residual", nullptr}};
        if (q >= 2 && q + 2 < traj.fields.size()) row["residual"] = bbm::residual_ivp1_at(traj, q);
        std::cout << row.dump() << '\n';
      }
      if (!ev_dump.empty()) {
        std::ofstream f(ev_dump);
        if (!f) throw bbm::Error("cannot write " + ev_dump);
        bbm::write_columnar(f, traj.final_field());
      }
      return exit_ok;
    }

    for (auto& e : experiments) {
      if (!*e.app) continue;
      const auto cfg = build_config(e);
      return report_and_exit(bbm::run_experiment(cfg));
    }
  } catch (const bbm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
  return exit_error;
}
