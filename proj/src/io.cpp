#include "gaugewave/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gaugewave/version.hpp"

namespace gw {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

class JsonWriter {
 public:
  void begin_object() {
    sep();
    out_ << '{';
    fresh_ = true;
  }
  void end_object() {
    out_ << '}';
    fresh_ = false;
  }
  void begin_array() {
    sep();
    out_ << '[';
    fresh_ = true;
  }
  void end_array() {
    out_ << ']';
    fresh_ = false;
  }
  void key(const std::string& k) {
    sep();
    out_ << '"' << escape(k) << "\":";
    fresh_ = true;
  }
  void value(const std::string& v) {
    sep();
    out_ << '"' << escape(v) << '"';
  }
  void value(double v) {
    sep();
    out_ << format_g17(v);
  }
  void value(int v) {
    sep();
    out_ << v;
  }
  void value(bool v) {
    sep();
    out_ << (v ? "true" : "false");
  }
  std::string str() const { return out_.str(); }

 private:
  void sep() {
    if (!fresh_) out_ << ',';
    fresh_ = false;
  }
  std::ostringstream out_;
  bool fresh_ = true;
};

}  // namespace

ModelEcho echo_model(const NonlinearityModel& model, const std::string& table_path) {
  ModelEcho e;
  e.family = w_family_name(model.family());
  e.m0 = model.m0();
  e.s0 = model.s0();
  e.p_growth = model.p_growth();
  e.c1 = model.c1();
  e.c2 = model.c2();
  e.table_path = table_path;
  return e;
}

NonlinearityModel model_from_echo(const ModelEcho& echo) {
  const WFamily fam = parse_w_family(echo.family);
  switch (fam) {
    case WFamily::saturable: return NonlinearityModel::saturable(echo.m0, echo.s0);
    case WFamily::quadratic: return NonlinearityModel::quadratic(echo.m0);
    case WFamily::tabulated:
      if (echo.table_path.empty())
        throw std::runtime_error("model_from_echo: tabulated family without a table path");
      return NonlinearityModel::tabulated_from_csv(echo.table_path);
    case WFamily::custom:
      throw std::runtime_error("model_from_echo: custom families are not serializable");
  }
  throw std::logic_error("model_from_echo: unknown family");
}

SolutionDocument make_document(const SolverConfig& config, const ModelEcho& model,
                               const SolitaryWaveSolution& sol) {
  SolutionDocument d;
  d.tool_version = kToolVersion;
  d.config = config;
  d.model = model;
  d.omega2 = sol.omega2;
  d.omega2_pairing = sol.omega2_pairing;
  d.sigma2 = sol.sigma2;
  d.J = sol.J_value;
  d.energy = sol.energy;
  d.residual = sol.residual;
  d.iterations = sol.iterations;
  d.status = solve_status_name(sol.status);
  d.rayleigh_min = sol.rayleigh_min;
  d.lambda_drift_log10 = sol.lambda_drift_log10;
  d.checks = sol.diagnostics.checks;
  d.n_points = sol.u.grid ? sol.u.grid->n_points : 0;
  d.r_max = sol.u.grid ? sol.u.grid->r_max : 0.0;
  d.u = sol.u.values;
  d.phi = sol.phi.values;
  return d;
}

SolitaryWaveSolution solution_from_document(const SolutionDocument& doc) {
  auto grid = make_grid(doc.n_points, doc.r_max);
  SolitaryWaveSolution sol;
  sol.u = make_field(grid, doc.u);
  sol.phi = make_field(grid, doc.phi);
  sol.q = doc.config.q;
  sol.omega2 = doc.omega2;
  sol.omega2_pairing = doc.omega2_pairing;
  sol.sigma2 = doc.sigma2;
  sol.J_value = doc.J;
  sol.energy = doc.energy;
  sol.residual = doc.residual;
  sol.iterations = doc.iterations;
  sol.rayleigh_min = doc.rayleigh_min;
  sol.lambda_drift_log10 = doc.lambda_drift_log10;
  if (doc.status == "converged")
    sol.status = SolveStatus::converged;
  else if (doc.status == "no_bound_state")
    sol.status = SolveStatus::no_bound_state;
  else if (doc.status == "diverged")
    sol.status = SolveStatus::diverged;
  else if (doc.status == "stalled")
    sol.status = SolveStatus::stalled;
  else
    sol.status = SolveStatus::max_iterations;
  sol.diagnostics.checks = doc.checks;
  sol.diagnostics.all_passed = true;
  for (const auto& c : doc.checks) sol.diagnostics.all_passed &= c.passed;
  return sol;
}

std::string solution_to_string(const SolutionDocument& doc) {
  JsonWriter w;
  w.begin_object();
  w.key("format");
  w.value(doc.format);
  w.key("tool_version");
  w.value(doc.tool_version);

  w.key("config");
  w.begin_object();
  w.key("q");
  w.value(doc.config.q);
  w.key("sigma2");
  w.value(doc.config.sigma2);
  w.key("n_points");
  w.value(doc.config.n_points);
  w.key("r_max");
  w.value(doc.config.r_max);
  w.key("step0");
  w.value(doc.config.step0);
  w.key("step_policy");
  w.value(step_policy_name(doc.config.step_policy));
  w.key("tol_residual");
  w.value(doc.config.tol_residual);
  w.key("max_iters");
  w.value(doc.config.max_iters);
  w.key("seed_profile");
  w.value(seed_profile_name(doc.config.seed_profile));
  w.key("seed_file");
  w.value(doc.config.seed_file);
  w.end_object();

  w.key("model");
  w.begin_object();
  w.key("family");
  w.value(doc.model.family);
  w.key("m0");
  w.value(doc.model.m0);
  w.key("s0");
  w.value(doc.model.s0);
  w.key("p_growth");
  w.value(doc.model.p_growth);
  w.key("c1");
  w.value(doc.model.c1);
  w.key("c2");
  w.value(doc.model.c2);
  w.key("table_path");
  w.value(doc.model.table_path);
  w.end_object();

  w.key("summary");
  w.begin_object();
  w.key("omega2");
  w.value(doc.omega2);
  w.key("omega2_pairing");
  w.value(doc.omega2_pairing);
  w.key("sigma2");
  w.value(doc.sigma2);
  w.key("J");
  w.value(doc.J);
  w.key("energy");
  w.value(doc.energy);
  w.key("residual");
  w.value(doc.residual);
  w.key("iterations");
  w.value(doc.iterations);
  w.key("status");
  w.value(doc.status);
  w.key("rayleigh_min");
  w.value(doc.rayleigh_min);
  w.key("lambda_drift_log10");
  w.value(doc.lambda_drift_log10);
  w.end_object();

  w.key("checks");
  w.begin_array();
  for (const auto& c : doc.checks) {
    w.begin_object();
    w.key("name");
    w.value(c.name);
    w.key("passed");
    w.value(c.passed);
    w.key("value");
    w.value(c.value);
    w.key("detail");
    w.value(c.detail);
    w.end_object();
  }
  w.end_array();

  w.key("artifacts");
  w.begin_array();
  for (const auto& p : doc.artifact_paths) w.value(p);
  w.end_array();

  w.key("grid");
  w.begin_object();
  w.key("n_points");
  w.value(doc.n_points);
  w.key("r_max");
  w.value(doc.r_max);
  w.end_object();

  w.key("u");
  w.begin_array();
  for (double v : doc.u) w.value(v);
  w.end_array();

  w.key("phi");
  w.begin_array();
  for (double v : doc.phi) w.value(v);
  w.end_array();

  w.end_object();
  std::string s = w.str();
  s.push_back('\n');
  return s;
}

void save_solution(const SolutionDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_solution: cannot open '" + path + "'");
  out << solution_to_string(doc);
  if (!out) throw std::runtime_error("save_solution: write failed for '" + path + "'");
}

SolutionDocument load_solution(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_solution: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("load_solution: parse error: ") + e.what());
  }
  SolutionDocument d;
  try {
    d.format = j.at("format").get<std::string>();
    d.tool_version = j.at("tool_version").get<std::string>();
    const auto& c = j.at("config");
    d.config.q = c.at("q").get<double>();
    d.config.sigma2 = c.at("sigma2").get<double>();
    d.config.n_points = c.at("n_points").get<int>();
    d.config.r_max = c.at("r_max").get<double>();
    d.config.step0 = c.at("step0").get<double>();
    d.config.step_policy = parse_step_policy(c.at("step_policy").get<std::string>());
    d.config.tol_residual = c.at("tol_residual").get<double>();
    d.config.max_iters = c.at("max_iters").get<int>();
    d.config.seed_profile = parse_seed_profile(c.at("seed_profile").get<std::string>());
    d.config.seed_file = c.at("seed_file").get<std::string>();
    const auto& m = j.at("model");
    d.model.family = m.at("family").get<std::string>();
    d.model.m0 = m.at("m0").get<double>();
    d.model.s0 = m.at("s0").get<double>();
    d.model.p_growth = m.at("p_growth").get<double>();
    d.model.c1 = m.at("c1").get<double>();
    d.model.c2 = m.at("c2").get<double>();
    d.model.table_path = m.at("table_path").get<std::string>();
    const auto& s = j.at("summary");
    d.omega2 = s.at("omega2").get<double>();
    d.omega2_pairing = s.at("omega2_pairing").get<double>();
    d.sigma2 = s.at("sigma2").get<double>();
    d.J = s.at("J").get<double>();
    d.energy = s.at("energy").get<double>();
    d.residual = s.at("residual").get<double>();
    d.iterations = s.at("iterations").get<int>();
    d.status = s.at("status").get<std::string>();
    d.rayleigh_min = s.at("rayleigh_min").get<double>();
    d.lambda_drift_log10 = s.at("lambda_drift_log10").get<double>();
    for (const auto& cj : j.at("checks")) {
      SolutionCheck ck;
      ck.name = cj.at("name").get<std::string>();
      ck.passed = cj.at("passed").get<bool>();
      ck.value = cj.at("value").get<double>();
      ck.detail = cj.at("detail").get<std::string>();
      d.checks.push_back(std::move(ck));
    }
    for (const auto& a : j.at("artifacts")) d.artifact_paths.push_back(a.get<std::string>());
    const auto& g = j.at("grid");
    d.n_points = g.at("n_points").get<int>();
    d.r_max = g.at("r_max").get<double>();
    d.u = j.at("u").get<std::vector<double>>();
    d.phi = j.at("phi").get<std::vector<double>>();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("load_solution: malformed document: ") + e.what());
  }
  if (static_cast<int>(d.u.size()) != d.n_points || static_cast<int>(d.phi.size()) != d.n_points)
    throw std::runtime_error("load_solution: array lengths do not match the grid");
  return d;
}

void write_profile_csv(const std::string& path, const SolitaryWaveSolution& sol,
                       const NonlinearityModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_profile_csv: cannot open '" + path + "'");
  GaugeSolve gs;
  gs.phi = sol.phi;
  gs.q = sol.q;
  const double omega = sol.omega2 > 0.0 ? std::sqrt(sol.omega2) : 0.0;
  StaticEnergy en = eval_energy_static(sol.u, gs, omega, model);
  out << "r,u,phi,energy_density\n";
  const auto& nodes = sol.u.grid->nodes;
  for (int i = 0; i < sol.u.size(); ++i) {
    out << format_g17(nodes[static_cast<size_t>(i)]) << ',' << format_g17(sol.u[i]) << ','
        << format_g17(sol.phi[i]) << ',' << format_g17(en.density[i]) << '\n';
  }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_sweep_csv: cannot open '" + path + "'");
  out << "q,omega2,J,residual,converged\n";
  for (const auto& r : rows) {
    out << format_g17(r.q) << ',' << format_g17(r.omega2) << ',' << format_g17(r.J) << ','
        << format_g17(r.residual) << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

namespace {
std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}
}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  const double W = 800, H = 500, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        first = false;
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double px = (W - ml - mr) / (xmax - xmin);
  const double py = (H - mt - mb) / (ymax - ymin);
  auto X = [&](double x) { return ml + (x - xmin) * px; };
  auto Y = [&](double y) { return H - mb - (y - ymin) * py; };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_svg_plot: cannot open '" + path + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << H - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0;
    const double yv = ymin + (ymax - ymin) * k / 5.0;
    out << "<text x=\"" << svg_num(X(xv)) << "\" y=\"" << H - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << svg_num(xv) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << svg_num(Y(yv) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << svg_num(yv) << "</text>\n";
  }
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << H / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " << H / 2
      << ")\">" << y_label << "</text>\n";
  int ci = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[ci % 4] << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i)
      out << svg_num(X(s.x[i])) << ',' << svg_num(Y(s.y[i])) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16 + 16 * ci
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[ci % 4] << "\">" << s.name
        << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
}

namespace {

void write_block(std::ofstream& out, const std::string& name, const Scalar3d& data) {
  out << "field " << name << "\n";
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
}

Scalar3d read_block(std::ifstream& in, const std::string& expected, size_t count) {
  std::string line;
  if (!std::getline(in, line) || line != "field " + expected)
    throw std::runtime_error("load_frame: expected block '" + expected + "'");
  Scalar3d data(count);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw std::runtime_error("load_frame: truncated block '" + expected + "'");
  return data;
}

const char* const kFrameFields[] = {"u_amp", "phase",  "psi_re", "psi_im", "phi_pot", "rho",
                                    "a1",    "a2",     "a3",     "e1",     "e2",      "e3",
                                    "h1",    "h2",     "h3",     "j1",     "j2",      "j3"};

}  // namespace

void save_frame(const CartesianFieldFrame& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_frame: cannot open '" + path + "'");
  out << "GAUGEWAVE-FRAME 1\n";
  out << "n_per_axis " << f.grid.n_per_axis << "\n";
  out << "half_width " << format_g17(f.grid.half_width) << "\n";
  out << "time " << format_g17(f.time) << "\n";
  out << "q " << format_g17(f.q) << "\n";
  out << "velocity " << format_g17(f.velocity) << "\n";
  out << "omega0 " << format_g17(f.omega0) << "\n";
  out << "omega " << format_g17(f.omega) << "\n";
  out << "k1 " << format_g17(f.k1) << "\n";
  out << "layout x1-fastest little-endian float64\n";
  out << "fields 18\n";
  write_block(out, "u_amp", f.u_amp);
  write_block(out, "phase", f.phase);
  write_block(out, "psi_re", f.psi_re);
  write_block(out, "psi_im", f.psi_im);
  write_block(out, "phi_pot", f.phi_pot);
  write_block(out, "rho", f.rho);
  for (int c = 0; c < 3; ++c) write_block(out, kFrameFields[6 + c], f.a_pot[static_cast<size_t>(c)]);
  for (int c = 0; c < 3; ++c) write_block(out, kFrameFields[9 + c], f.e_field[static_cast<size_t>(c)]);
  for (int c = 0; c < 3; ++c) write_block(out, kFrameFields[12 + c], f.h_field[static_cast<size_t>(c)]);
  for (int c = 0; c < 3; ++c)
    write_block(out, kFrameFields[15 + c], f.j_current[static_cast<size_t>(c)]);
  if (!out) throw std::runtime_error("save_frame: write failed for '" + path + "'");
}

CartesianFieldFrame load_frame(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_frame: cannot open '" + path + "'");
  std::string line;
  auto expect_kv = [&](const std::string& k) -> std::string {
    if (!std::getline(in, line) || line.rfind(k + " ", 0) != 0)
      throw std::runtime_error("load_frame: malformed header, expected '" + k + "'");
    return line.substr(k.size() + 1);
  };
  if (!std::getline(in, line) || line != "GAUGEWAVE-FRAME 1")
    throw std::runtime_error("load_frame: not a frame file");
  CartesianFieldFrame f;
  const int n = std::stoi(expect_kv("n_per_axis"));
  const double hw = std::stod(expect_kv("half_width"));
  f.grid = make_cartesian_grid(n, hw);
  f.time = std::stod(expect_kv("time"));
  f.q = std::stod(expect_kv("q"));
  f.velocity = std::stod(expect_kv("velocity"));
  f.omega0 = std::stod(expect_kv("omega0"));
  f.omega = std::stod(expect_kv("omega"));
  f.k1 = std::stod(expect_kv("k1"));
  expect_kv("layout");
  expect_kv("fields");
  const size_t total = static_cast<size_t>(n) * n * n;
  f.u_amp = read_block(in, "u_amp", total);
  f.phase = read_block(in, "phase", total);
  f.psi_re = read_block(in, "psi_re", total);
  f.psi_im = read_block(in, "psi_im", total);
  f.phi_pot = read_block(in, "phi_pot", total);
  f.rho = read_block(in, "rho", total);
  for (int c = 0; c < 3; ++c) f.a_pot[static_cast<size_t>(c)] = read_block(in, kFrameFields[6 + c], total);
  for (int c = 0; c < 3; ++c) f.e_field[static_cast<size_t>(c)] = read_block(in, kFrameFields[9 + c], total);
  for (int c = 0; c < 3; ++c) f.h_field[static_cast<size_t>(c)] = read_block(in, kFrameFields[12 + c], total);
  for (int c = 0; c < 3; ++c)
    f.j_current[static_cast<size_t>(c)] = read_block(in, kFrameFields[15 + c], total);
  return f;
}

}  // namespace gw
