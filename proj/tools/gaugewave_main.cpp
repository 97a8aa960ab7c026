#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaugewave/electrodynamics.hpp"
#include "gaugewave/io.hpp"
#include "gaugewave/minimizer.hpp"
#include "gaugewave/nonlinearity.hpp"
#include "gaugewave/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoBoundState = 2;
constexpr int kExitAssumptionFailure = 3;
constexpr int kExitUsage = 64;

struct ModelFlags {
  std::string family = "saturable";
  double m0 = 1.0;
  double s0 = 1.0;
  std::string table_path;
};

void add_model_flags(CLI::App* cmd, ModelFlags& mf) {
  cmd->add_option("--w,--family", mf.family, "W family: saturable|quadratic|table");
  cmd->add_option("--m0", mf.m0, "mass parameter, W''(0) = m0^2");
  cmd->add_option("--s0", mf.s0, "saturation scale of the saturable family");
  cmd->add_option("--table", mf.table_path, "two-column CSV (s, W(s)) for --w table");
}

gw::NonlinearityModel build_model(const ModelFlags& mf) {
  const gw::WFamily fam = gw::parse_w_family(mf.family);
  switch (fam) {
    case gw::WFamily::saturable: return gw::NonlinearityModel::saturable(mf.m0, mf.s0);
    case gw::WFamily::quadratic: return gw::NonlinearityModel::quadratic(mf.m0);
    case gw::WFamily::tabulated: return gw::NonlinearityModel::tabulated_from_csv(mf.table_path);
    case gw::WFamily::custom: break;
  }
  throw std::runtime_error("unsupported W family on the command line");
}

void print_assumption_report(const gw::AssumptionReport& rep) {
  auto line = [](const char* name, bool ok, double value, const char* what) {
    std::cout << "  " << name << ": " << (ok ? "pass" : "FAIL") << "  (" << what << " = " << value
              << ")\n";
  };
  std::cout << "W assumption report (samples over [" << rep.s_min << ", " << rep.s_max << "]):\n";
  line("W1", rep.w1, 0.0, "W >= 0, W(0) = W'(0) = 0");
  line("W2", rep.w2, rep.m0_measured, "m0 measured");
  line("W3", rep.w3, rep.m1_measured, "m1 measured");
  line("W4", rep.w4, 0.0, "0 <= W'(s)s/2 <= W(s)");
  line("W5", rep.w5, rep.c2_envelope, "|W''| envelope");
  std::cout << "  Berestycki-Lions bullets at omega0 = " << rep.omega0_bl << ": "
            << (rep.bl_zero ? "zero " : "ZERO-FAIL ") << (rep.bl_mass ? "mass " : "MASS-FAIL ")
            << (rep.bl_growth ? "growth " : "GROWTH-FAIL ")
            << (rep.bl_negative ? "negative-set" : "NEGATIVE-SET-FAIL") << "\n";
  for (const auto& v : rep.violations)
    std::cout << "  violation " << v.assumption << " at s = " << v.sample << ": value " << v.value
              << " vs bound " << v.bound << "\n";
}

gw::SolverConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  nlohmann::json j;
  in >> j;
  gw::SolverConfig c;
  if (j.contains("q")) c.q = j["q"].get<double>();
  if (j.contains("sigma2")) c.sigma2 = j["sigma2"].get<double>();
  if (j.contains("n_points")) c.n_points = j["n_points"].get<int>();
  if (j.contains("r_max")) c.r_max = j["r_max"].get<double>();
  if (j.contains("step0")) c.step0 = j["step0"].get<double>();
  if (j.contains("step_policy"))
    c.step_policy = gw::parse_step_policy(j["step_policy"].get<std::string>());
  if (j.contains("tol_residual")) c.tol_residual = j["tol_residual"].get<double>();
  if (j.contains("max_iters")) c.max_iters = j["max_iters"].get<int>();
  if (j.contains("seed_profile"))
    c.seed_profile = gw::parse_seed_profile(j["seed_profile"].get<std::string>());
  if (j.contains("seed_file")) c.seed_file = j["seed_file"].get<std::string>();
  return c;
}

/// Resolves a file seed onto the configured grid (spline resample if needed).
void resolve_file_seed(gw::SolverConfig& cfg) {
  if (cfg.seed_profile != gw::SeedProfile::file) return;
  if (cfg.seed_file.empty()) throw std::runtime_error("seed profile 'file' needs --seed-file");
  gw::SolutionDocument doc = gw::load_solution(cfg.seed_file);
  if (doc.n_points == cfg.n_points && doc.r_max == cfg.r_max) {
    cfg.seed_values = doc.u;
    return;
  }
  auto src = gw::make_grid(doc.n_points, doc.r_max);
  gw::RadialField f = gw::make_field(src, doc.u);
  gw::CubicSpline spl(f);
  auto dst = gw::make_grid(cfg.n_points, cfg.r_max);
  cfg.seed_values.resize(static_cast<size_t>(cfg.n_points));
  for (int i = 0; i < cfg.n_points; ++i)
    cfg.seed_values[static_cast<size_t>(i)] = spl.eval(dst->nodes[static_cast<size_t>(i)]);
}

int threads_from_env(int njobs) {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("GAUGEWAVE_THREADS")) {
    try {
      cap = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      cap = 1;
    }
  }
  return std::min(cap, std::max(1, njobs));
}

int cmd_solve(const gw::SolverConfig& cfg_in, const ModelFlags& mf, const std::string& out_path,
              bool force) {
  gw::SolverConfig cfg = cfg_in;
  gw::NonlinearityModel model = build_model(mf);

  gw::AssumptionReport rep = gw::check_assumptions(model, 1e3, 4096);
  if (!rep.all_w()) {
    print_assumption_report(rep);
    if (!force) {
      std::cerr << "W assumptions failed; refusing to solve (use --force to override)\n";
      return kExitAssumptionFailure;
    }
  }

  resolve_file_seed(cfg);
  gw::SolitaryWaveSolution sol = gw::minimize(cfg, model);

  std::cout << "status: " << gw::solve_status_name(sol.status) << "\n";
  std::cout << "iterations: " << sol.iterations << "  residual: " << sol.residual << "\n";
  std::cout << "omega2: " << sol.omega2 << "  (pairing form " << sol.omega2_pairing << ")\n";
  std::cout << "J: " << sol.J_value << "  energy: " << sol.energy << "\n";

  gw::SolutionDocument doc = gw::make_document(cfg, gw::echo_model(model, mf.table_path), sol);
  const std::string csv_path = out_path + ".profile.csv";
  doc.artifact_paths = {out_path, csv_path};
  gw::write_profile_csv(csv_path, sol, model);
  gw::save_solution(doc, out_path);
  std::cout << "wrote " << out_path << " and " << csv_path << "\n";

  if (sol.status == gw::SolveStatus::no_bound_state) {
    std::cerr << "no bound state at this (q, sigma2, W)\n";
    return kExitNoBoundState;
  }
  if (sol.status != gw::SolveStatus::converged) {
    std::cerr << "solver did not converge (" << gw::solve_status_name(sol.status) << ")\n";
    return kExitError;
  }
  for (const auto& c : sol.diagnostics.checks)
    std::cout << "check " << c.name << ": " << (c.passed ? "pass" : "FAIL") << " (" << c.value
              << ")\n";
  if (!sol.diagnostics.all_passed) {
    std::cerr << "verification checks failed\n";
    return kExitError;
  }
  return kExitOk;
}

int cmd_validate(const std::string& in_path) {
  gw::SolutionDocument doc = gw::load_solution(in_path);
  gw::NonlinearityModel model = gw::model_from_echo(doc.model);
  gw::SolitaryWaveSolution sol = gw::solution_from_document(doc);
  sol.J_value = gw::eval_J(sol.u, model);  // re-derived, not trusted from the file

  gw::VerificationReport rep = gw::verify_solution(sol, model, doc.config.q);
  // Stored Phi must agree with a fresh solve.
  {
    gw::GaugeSolve gs = gw::solve_phi(sol.u, doc.config.q);
    double diff = 0.0, scale = 1e-300;
    for (int i = 0; i < sol.phi.size(); ++i) {
      diff = std::max(diff, std::abs(gs.phi[i] - sol.phi[i]));
      scale = std::max(scale, std::abs(gs.phi[i]));
    }
    const double rel = doc.config.q > 0.0 ? diff / scale : diff;
    rep.checks.push_back({"phi_stored_matches", rel <= 1e-10, rel, "stored vs fresh gauge solve"});
    rep.all_passed = rep.all_passed && rep.checks.back().passed;
  }

  std::cout << "validation of " << in_path << " (tool " << doc.tool_version << ")\n";
  for (const auto& c : rep.checks)
    std::cout << "  " << c.name << ": " << (c.passed ? "pass" : "FAIL") << "  value " << c.value
              << (c.detail.empty() ? "" : "  [" + c.detail + "]") << "\n";
  if (!rep.all_passed) {
    std::cerr << "validation failed\n";
    return kExitError;
  }
  return kExitOk;
}

int cmd_boost(const std::string& in_path, double v, double t, int grid_n, double halfwidth,
              const std::string& out_path, bool refine) {
  gw::SolutionDocument doc = gw::load_solution(in_path);
  gw::SolitaryWaveSolution sol = gw::solution_from_document(doc);

  gw::CartesianGrid grid = gw::make_cartesian_grid(grid_n, halfwidth);
  gw::CartesianFieldFrame frame = gw::boost(sol, v, t, grid);
  if (frame.decay_warning)
    std::cout << "warning: profile has not decayed at the box faces (grid too small/coarse)\n";
  gw::save_frame(frame, out_path);

  const double dt = grid.spacing / 4.0;
  gw::CartesianFieldFrame frame2 = gw::boost(sol, v, t + dt, grid);
  gw::MaxwellResidualReport res = gw::maxwell_residuals(frame, frame2);
  std::cout << "frame: n = " << grid_n << ", halfwidth = " << halfwidth << ", v = " << v
            << ", t = " << t << "\n";
  std::cout << "residuals: gauss " << res.gauss << ", ampere " << res.ampere << ", faraday "
            << res.faraday << ", monopole " << res.monopole << ", continuity " << res.continuity
            << "\n";

  nlohmann::json rj;
  rj["gauss"] = res.gauss;
  rj["ampere"] = res.ampere;
  rj["faraday"] = res.faraday;
  rj["monopole"] = res.monopole;
  rj["continuity"] = res.continuity;

  if (refine) {
    gw::MaxwellConvergence conv = gw::maxwell_convergence(sol, v, t, grid);
    static const char* names[] = {"gauss", "ampere", "faraday", "monopole", "continuity"};
    nlohmann::json orders;
    for (int i = 0; i < 5; ++i) {
      std::cout << "order " << names[i] << ": " << conv.orders[static_cast<size_t>(i)] << "\n";
      orders[names[i]] = conv.orders[static_cast<size_t>(i)];
    }
    rj["orders"] = orders;
  }
  const std::string report_path = out_path + ".report.json";
  std::ofstream rep_out(report_path, std::ios::binary);
  rep_out << rj.dump(2) << "\n";
  std::cout << "wrote " << out_path << " and " << report_path << "\n";
  return kExitOk;
}

int cmd_sweep(double qmin, double qmax, int steps, const gw::SolverConfig& base,
              const std::string& csv_path, const std::string& svg_path, const ModelFlags& mf) {
  gw::NonlinearityModel model = build_model(mf);
  std::vector<double> qs;
  for (int i = 0; i < steps; ++i)
    qs.push_back(steps == 1 ? qmin : qmin + (qmax - qmin) * i / (steps - 1));

  std::vector<gw::SweepRow> rows(qs.size());
  const int nthreads = threads_from_env(static_cast<int>(qs.size()));
  std::mutex mtx;
  size_t next = 0;
  auto worker = [&]() {
    for (;;) {
      size_t k;
      {
        std::lock_guard<std::mutex> lock(mtx);
        if (next >= qs.size()) return;
        k = next++;
      }
      gw::SolverConfig cfg = base;
      cfg.q = qs[k];
      gw::SolitaryWaveSolution sol = gw::minimize(cfg, model);
      rows[k] = {qs[k], sol.omega2, sol.J_value, sol.residual,
                 sol.status == gw::SolveStatus::converged};
    }
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  gw::write_sweep_csv(csv_path, rows);
  gw::PlotSeries series{"omega2(q)", {}, {}};
  double largest_converged = -1.0;
  for (const auto& r : rows) {
    if (!r.converged) continue;
    series.x.push_back(r.q);
    series.y.push_back(r.omega2);
    largest_converged = std::max(largest_converged, r.q);
  }
  if (!svg_path.empty())
    gw::write_svg_plot(svg_path, "frequency vs coupling", "q", "omega2", {series});
  if (largest_converged >= 0.0)
    std::cout << "largest converged q: " << gw::format_g17(largest_converged) << "\n";
  else
    std::cout << "no converged points in the sweep\n";
  std::cout << "wrote " << csv_path << (svg_path.empty() ? "" : " and " + svg_path) << "\n";
  return kExitOk;
}

int cmd_check_w(const ModelFlags& mf, double s_max, int samples, double omega0) {
  gw::NonlinearityModel model = build_model(mf);
  gw::AssumptionReport rep = omega0 > 0.0
                                 ? gw::check_assumptions(model, s_max, samples, omega0)
                                 : gw::check_assumptions(model, s_max, samples);
  print_assumption_report(rep);
  if (rep.w1 && rep.w2 && rep.w3) {
    auto win = gw::frequency_window(model);
    std::cout << "frequency window: (" << win.first << ", " << win.second << ")\n";
  } else {
    std::cout << "frequency window: degenerate (W1-W3 not satisfied)\n";
  }
  return rep.all_w() ? kExitOk : kExitAssumptionFailure;
}

int cmd_plot(const std::string& in_path, const std::string& out_path) {
  gw::SolutionDocument doc = gw::load_solution(in_path);
  auto grid = gw::make_grid(doc.n_points, doc.r_max);
  gw::PlotSeries su{"u(r)", {}, {}}, sp{"Phi(r)", {}, {}};
  for (int i = 0; i < doc.n_points; ++i) {
    su.x.push_back(grid->nodes[static_cast<size_t>(i)]);
    su.y.push_back(doc.u[static_cast<size_t>(i)]);
    sp.x.push_back(grid->nodes[static_cast<size_t>(i)]);
    sp.y.push_back(doc.phi[static_cast<size_t>(i)]);
  }
  gw::write_svg_plot(out_path, "solitary wave profile", "r", "field value", {su, sp});
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaugewave: solitary waves of the coupled Klein-Gordon-Maxwell system"};
  app.set_version_flag("--version", gw::kToolVersion);
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "minimize J on the constraint manifold");
  gw::SolverConfig cfg;
  ModelFlags mf;
  std::string out_path, config_path;
  bool force = false;
  solve->add_option("--q", cfg.q, "gauge coupling")->required();
  auto* sig = solve->add_option("--sigma2", cfg.sigma2, "constraint level sigma^2")->required();
  solve->add_option("--out", out_path, "solution output path")->required();
  solve->add_option("--config", config_path, "JSON config file (flags override)");
  solve->add_option("--n", cfg.n_points, "radial grid points");
  solve->add_option("--rmax", cfg.r_max, "truncation radius");
  solve->add_option("--tol", cfg.tol_residual, "residual tolerance");
  solve->add_option("--max-iters", cfg.max_iters, "iteration cap");
  solve->add_option("--step0", cfg.step0, "initial step bound");
  std::string policy = "armijo_backtracking", seed = "gaussian";
  solve->add_option("--step-policy", policy, "armijo_backtracking|fixed");
  solve->add_option("--seed", seed, "gaussian|compact_bump|file");
  solve->add_option("--seed-file", cfg.seed_file, "solution file used as seed");
  solve->add_flag("--force", force, "run even if W assumptions fail");
  add_model_flags(solve, mf);

  // validate
  auto* validate = app.add_subcommand("validate", "re-check a stored solution");
  std::string validate_in;
  validate->add_option("--in", validate_in, "solution file")->required();

  // boost
  auto* boost_cmd = app.add_subcommand("boost", "emit a Lorentz-boosted field frame");
  std::string boost_in, boost_out;
  double boost_v = 0.0, boost_t = 0.0, boost_hw = 12.0;
  int boost_n = 48;
  bool boost_refine = false;
  boost_cmd->add_option("--in", boost_in, "solution file")->required();
  boost_cmd->add_option("--v", boost_v, "boost velocity, |v| < 1")->required();
  boost_cmd->add_option("--t", boost_t, "frame time");
  boost_cmd->add_option("--grid", boost_n, "nodes per axis");
  boost_cmd->add_option("--halfwidth", boost_hw, "box half width");
  boost_cmd->add_option("--out", boost_out, "frame output path")->required();
  boost_cmd->add_flag("--refine", boost_refine, "double the grid and report convergence orders");

  // sweep-q
  auto* sweep = app.add_subcommand("sweep-q", "run the minimizer over a coupling range");
  double qmin = 0.0, qmax = 0.0;
  int steps = 0;
  gw::SolverConfig sweep_cfg;
  ModelFlags sweep_mf;
  std::string sweep_csv = "sweep.csv", sweep_svg = "sweep.svg";
  sweep->add_option("--qmin", qmin)->required();
  sweep->add_option("--qmax", qmax)->required();
  sweep->add_option("--steps", steps)->required();
  sweep->add_option("--sigma2", sweep_cfg.sigma2, "constraint level")->required();
  sweep->add_option("--n", sweep_cfg.n_points, "radial grid points");
  sweep->add_option("--rmax", sweep_cfg.r_max, "truncation radius");
  sweep->add_option("--tol", sweep_cfg.tol_residual, "residual tolerance");
  sweep->add_option("--max-iters", sweep_cfg.max_iters, "iteration cap");
  sweep->add_option("--out-csv", sweep_csv, "sweep CSV path");
  sweep->add_option("--out-svg", sweep_svg, "omega2(q) SVG path");
  add_model_flags(sweep, sweep_mf);

  // check-w
  auto* checkw = app.add_subcommand("check-w", "grade the W assumptions");
  ModelFlags check_mf;
  double check_smax = 1e3, check_omega0 = -1.0;
  int check_samples = 4096;
  checkw->add_option("--smax", check_smax, "sampling range");
  checkw->add_option("--samples", check_samples, "sample count");
  checkw->add_option("--omega0", check_omega0, "frequency for the Berestycki-Lions bullets");
  add_model_flags(checkw, check_mf);

  // plot
  auto* plot = app.add_subcommand("plot", "emit an SVG of a stored profile");
  std::string plot_in, plot_out;
  plot->add_option("--in", plot_in, "solution file")->required();
  plot->add_option("--out", plot_out, "SVG output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << app.help() << "\n";
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (solve->parsed()) {
      if (!config_path.empty()) {
        gw::SolverConfig file_cfg = config_from_json_file(config_path);
        // Flags given on the command line override the file.
        if (!solve->count("--q")) cfg.q = file_cfg.q;
        if (!sig->count()) cfg.sigma2 = file_cfg.sigma2;
        if (!solve->count("--n")) cfg.n_points = file_cfg.n_points;
        if (!solve->count("--rmax")) cfg.r_max = file_cfg.r_max;
        if (!solve->count("--tol")) cfg.tol_residual = file_cfg.tol_residual;
        if (!solve->count("--max-iters")) cfg.max_iters = file_cfg.max_iters;
        if (!solve->count("--step0")) cfg.step0 = file_cfg.step0;
        if (!solve->count("--step-policy")) cfg.step_policy = file_cfg.step_policy;
        if (!solve->count("--seed")) cfg.seed_profile = file_cfg.seed_profile;
        if (!solve->count("--seed-file") && cfg.seed_file.empty())
          cfg.seed_file = file_cfg.seed_file;
      }
      cfg.step_policy = gw::parse_step_policy(policy);
      cfg.seed_profile = gw::parse_seed_profile(seed);
      if (cfg.q < 0.0) {
        std::cerr << "usage error: --q must be >= 0\n";
        return kExitUsage;
      }
      if (cfg.sigma2 <= 0.0) {
        std::cerr << "usage error: --sigma2 must be positive\n";
        return kExitUsage;
      }
      return cmd_solve(cfg, mf, out_path, force);
    }
    if (validate->parsed()) return cmd_validate(validate_in);
    if (boost_cmd->parsed()) {
      if (!(std::abs(boost_v) < 1.0)) {
        std::cerr << "usage error: boost requires |v| < 1\n";
        return kExitUsage;
      }
      return cmd_boost(boost_in, boost_v, boost_t, boost_n, boost_hw, boost_out, boost_refine);
    }
    if (sweep->parsed()) {
      if (steps < 1 || qmin < 0.0 || qmax < qmin) {
        std::cerr << "usage error: sweep needs steps >= 1 and 0 <= qmin <= qmax\n";
        return kExitUsage;
      }
      return cmd_sweep(qmin, qmax, steps, sweep_cfg, sweep_csv, sweep_svg, sweep_mf);
    }
    if (checkw->parsed()) return cmd_check_w(check_mf, check_smax, check_samples, check_omega0);
    if (plot->parsed()) return cmd_plot(plot_in, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  std::cerr << "usage error: no command\n";
  return kExitUsage;
}
