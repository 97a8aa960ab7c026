#include "gaugewave/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gw {

WFamily parse_w_family(const std::string& name) {
  if (name == "saturable") return WFamily::saturable;
  if (name == "quadratic") return WFamily::quadratic;
  if (name == "tabulated" || name == "table") return WFamily::tabulated;
  if (name == "custom") return WFamily::custom;
  throw std::invalid_argument("unknown W family '" + name + "'");
}

std::string w_family_name(WFamily f) {
  switch (f) {
    case WFamily::saturable: return "saturable";
    case WFamily::quadratic: return "quadratic";
    case WFamily::tabulated: return "tabulated";
    case WFamily::custom: return "custom";
  }
  return "unknown";
}

NonlinearityModel NonlinearityModel::saturable(double m0, double s0) {
  if (!(m0 > 0.0) || !(s0 > 0.0))
    throw std::invalid_argument("saturable W: m0 and s0 must be positive");
  NonlinearityModel m;
  m.family_ = WFamily::saturable;
  m.m0_ = m0;
  m.s0_ = s0;
  m.p_growth_ = 0.0;
  m.c1_ = 0.0;
  m.c2_ = m0 * m0;  // |W''| <= W''(0) globally for this family
  return m;
}

NonlinearityModel NonlinearityModel::quadratic(double m0) {
  if (!(m0 > 0.0)) throw std::invalid_argument("quadratic W: m0 must be positive");
  NonlinearityModel m;
  m.family_ = WFamily::quadratic;
  m.m0_ = m0;
  m.p_growth_ = 0.0;
  m.c1_ = 0.0;
  m.c2_ = m0 * m0;
  return m;
}

NonlinearityModel NonlinearityModel::tabulated(const std::vector<double>& s,
                                               const std::vector<double>& w) {
  if (s.size() != w.size() || s.size() < 4)
    throw std::invalid_argument("tabulated W: need >= 4 matching samples");
  if (s.front() != 0.0)
    throw std::invalid_argument("tabulated W: table must start at s = 0");
  for (size_t i = 1; i < s.size(); ++i)
    if (!(s[i] > s[i - 1])) throw std::invalid_argument("tabulated W: s must be strictly increasing");
  for (double v : w)
    if (!std::isfinite(v)) throw std::invalid_argument("tabulated W: non-finite value");

  // Natural cubic spline on the (non-uniform tolerated as uniform-checked) table.
  const size_t n = s.size();
  for (size_t i = 2; i < n; ++i) {
    const double h0 = s[i - 1] - s[i - 2], h1 = s[i] - s[i - 1];
    if (std::abs(h1 - h0) > 1e-9 * std::max(h0, h1))
      throw std::invalid_argument("tabulated W: table spacing must be uniform");
  }
  const double h = s[1] - s[0];
  std::vector<double> diag(n - 2, 4.0 * h), off(n - 3, h), rhs(n - 2);
  for (size_t i = 1; i + 1 < n; ++i)
    rhs[i - 1] = 6.0 / h * (w[i + 1] - 2.0 * w[i] + w[i - 1]);
  std::vector<double> mid = solve_tridiag_spd(diag, off, rhs);
  std::vector<double> m2(n, 0.0);
  for (size_t i = 0; i < mid.size(); ++i) m2[i + 1] = mid[i];

  NonlinearityModel m;
  m.family_ = WFamily::tabulated;
  m.tab_s_ = std::make_shared<const std::vector<double>>(s);
  m.tab_w_ = std::make_shared<const std::vector<double>>(w);
  m.tab_m_ = std::make_shared<const std::vector<double>>(std::move(m2));
  m.table_max_ = s.back();
  const double ddw0 = (2.0 * w[0] - 5.0 * w[1] + 4.0 * w[2] - w[3]) / (h * h);
  m.m0_ = ddw0 > 0.0 ? std::sqrt(ddw0) : 0.0;
  m.s0_ = s.back();
  m.p_growth_ = 0.0;
  m.c1_ = 0.0;
  m.c2_ = 0.0;  // measured by check_assumptions
  return m;
}

NonlinearityModel NonlinearityModel::tabulated_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("tabulated W: cannot open '" + path + "'");
  std::vector<double> s, w;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::string cell;
    std::stringstream ls(line);
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 2) throw std::runtime_error("tabulated W: expected two columns");
    try {
      s.push_back(std::stod(cells[0]));
      w.push_back(std::stod(cells[1]));
    } catch (const std::exception&) {
      if (first) {  // header row is allowed
        first = false;
        continue;
      }
      throw std::runtime_error("tabulated W: malformed row '" + line + "'");
    }
    first = false;
  }
  return tabulated(s, w);
}

NonlinearityModel NonlinearityModel::custom(std::function<double(double)> w,
                                            std::function<double(double)> dw,
                                            std::function<double(double)> ddw,
                                            double p_growth) {
  NonlinearityModel m;
  m.family_ = WFamily::custom;
  m.fw_ = std::move(w);
  m.fdw_ = std::move(dw);
  m.fddw_ = std::move(ddw);
  const double dd0 = m.fddw_(0.0);
  m.m0_ = dd0 > 0.0 ? std::sqrt(dd0) : 0.0;
  m.p_growth_ = p_growth;
  return m;
}

WEval NonlinearityModel::eval(double s) const {
  if (!std::isfinite(s)) throw std::invalid_argument("eval_W: non-finite argument");
  WEval out;
  switch (family_) {
    case WFamily::saturable: {
      const double t = (s / s0_) * (s / s0_);
      const double den = 1.0 + t;
      out.value = 0.5 * m0_ * m0_ * s0_ * s0_ * t / den;
      out.first = m0_ * m0_ * s / (den * den);
      out.second = m0_ * m0_ * (1.0 - 3.0 * t) / (den * den * den);
      return out;
    }
    case WFamily::quadratic:
      out.value = 0.5 * m0_ * m0_ * s * s;
      out.first = m0_ * m0_ * s;
      out.second = m0_ * m0_;
      return out;
    case WFamily::tabulated: {
      const double a = std::abs(s);
      const auto& xs = *tab_s_;
      const auto& ys = *tab_w_;
      const auto& ms = *tab_m_;
      if (a > xs.back())
        throw std::invalid_argument("eval_W: tabulated family queried outside its table");
      const double h = xs[1] - xs[0];
      size_t i = std::min(static_cast<size_t>(a / h), xs.size() - 2);
      const double t = a - xs[i], u = h - t;
      out.value = (ms[i] * u * u * u + ms[i + 1] * t * t * t) / (6.0 * h) +
                  (ys[i] / h - ms[i] * h / 6.0) * u + (ys[i + 1] / h - ms[i + 1] * h / 6.0) * t;
      double d = (-ms[i] * u * u + ms[i + 1] * t * t) / (2.0 * h) + (ys[i + 1] - ys[i]) / h -
                 (ms[i + 1] - ms[i]) * h / 6.0;
      out.first = (s < 0.0 ? -d : d);  // even extension
      out.second = (ms[i] * u + ms[i + 1] * t) / h;
      return out;
    }
    case WFamily::custom:
      out.value = fw_(s);
      out.first = fdw_(s);
      out.second = fddw_(s);
      return out;
  }
  throw std::logic_error("eval_W: unknown family");
}

namespace {

std::vector<double> sample_points(double s_max, int n_samples) {
  std::vector<double> pts;
  pts.reserve(static_cast<size_t>(2 * n_samples) + 3);
  const int half = n_samples / 2;
  for (int i = 1; i <= half; ++i)  // linear part
    pts.push_back(s_max * static_cast<double>(i) / half);
  const double lo = std::log(s_max * 1e-9), hi = std::log(s_max);
  for (int i = 0; i < n_samples - half; ++i)  // log part
    pts.push_back(std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                    std::max(1, n_samples - half - 1)));
  const size_t m = pts.size();
  for (size_t i = 0; i < m; ++i) pts.push_back(-pts[i]);
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

AssumptionReport check_assumptions(const NonlinearityModel& model, double s_max,
                                   int n_samples, double omega0_bl) {
  if (!(s_max > 0.0)) throw std::invalid_argument("check_assumptions: s_max must be positive");
  if (n_samples < 100) throw std::invalid_argument("check_assumptions: need n_samples >= 100");

  AssumptionReport rep;
  rep.s_min = -s_max;
  rep.s_max = s_max;
  rep.omega0_bl = omega0_bl;

  const WEval at0 = model.eval(0.0);
  const double scale0 = std::max(1.0, std::abs(at0.second));
  rep.w1 = std::abs(at0.value) <= 1e-12 * scale0 && std::abs(at0.first) <= 1e-10 * scale0;
  rep.w2 = at0.second > 0.0;
  rep.m0_measured = at0.second > 0.0 ? std::sqrt(at0.second) : 0.0;

  const std::vector<double> pts = sample_points(s_max, n_samples);
  double inf_quotient = std::numeric_limits<double>::infinity();
  double c2_env = std::abs(at0.second);
  bool w4_ok = true;
  double g_min = 0.0;       // min of G over samples
  double g5_max = -std::numeric_limits<double>::infinity();  // limsup proxy for G'(s)/s^5
  const double om2 = omega0_bl * omega0_bl;

  auto record = [&rep](const char* id, double s, double v, double bound) {
    if (rep.violations.size() < 64) rep.violations.push_back({id, s, v, bound});
  };

  for (double s : pts) {
    const WEval e = model.eval(s);
    const double w_tol = 1e-10 * std::max(1.0, std::abs(e.value));
    if (e.value < -w_tol) {
      if (rep.w1) record("W1", s, e.value, 0.0);
      rep.w1 = false;
    }
    if (s != 0.0) inf_quotient = std::min(inf_quotient, 2.0 * e.value / (s * s));
    const double half_ws = 0.5 * e.first * s;
    const double w4_tol = 1e-10 * std::max({1.0, std::abs(e.value), std::abs(half_ws)});
    if (half_ws < -w4_tol || half_ws > e.value + w4_tol) {
      if (w4_ok) record("W4", s, half_ws, e.value);
      w4_ok = false;
    }
    const double env = std::abs(e.second) - model.c1() * std::pow(std::abs(s), model.p_growth());
    c2_env = std::max(c2_env, env);
    const double g = e.value - 0.5 * om2 * s * s;
    g_min = std::min(g_min, g);
    if (s >= 0.1 * s_max) {
      const double gp = e.first - om2 * s;
      g5_max = std::max(g5_max, gp / std::pow(s, 5));
    }
  }

  rep.m1_measured = inf_quotient > 0.0 ? std::sqrt(inf_quotient) : 0.0;
  rep.w3 = rep.w2 && rep.m1_measured < rep.m0_measured * (1.0 - 1e-9);
  if (!rep.w3 && rep.w2) record("W3", s_max, rep.m1_measured, rep.m0_measured);
  rep.w4 = w4_ok;
  rep.c2_envelope = c2_env;
  // W5: p < 4 with the model's declared envelope constants; the measured
  // envelope is recorded either way.
  const double declared_c2 = model.c2() > 0.0 ? model.c2() : c2_env;
  rep.w5 = model.p_growth() < 4.0 && c2_env <= declared_c2 * (1.0 + 1e-9) + 1e-12;
  if (!rep.w5) record("W5", s_max, c2_env, declared_c2);

  rep.bl_zero = std::abs(at0.value) <= 1e-12 * scale0 && std::abs(at0.first) <= 1e-10 * scale0;
  rep.bl_mass = at0.second - om2 > 0.0;
  rep.bl_growth = g5_max >= -1e-9;
  rep.bl_negative = g_min < 0.0;
  return rep;
}

AssumptionReport check_assumptions(const NonlinearityModel& model, double s_max,
                                   int n_samples) {
  // Default probe frequency sits well inside (m1, m0) for admissible models.
  const double omega0 = 0.8 * model.m0();
  return check_assumptions(model, s_max, n_samples, omega0);
}

std::pair<double, double> frequency_window(const NonlinearityModel& model) {
  AssumptionReport rep = check_assumptions(model);
  if (!(rep.w1 && rep.w2 && rep.w3))
    throw std::invalid_argument(
        "frequency_window: degenerate window, W1-W3 do not hold (m1 >= m0)");
  return {rep.m1_measured, rep.m0_measured};
}

}  // namespace gw
