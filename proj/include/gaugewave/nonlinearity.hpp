#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gaugewave/radial.hpp"

namespace gw {

enum class WFamily { saturable, quadratic, tabulated, custom };

WFamily parse_w_family(const std::string& name);
std::string w_family_name(WFamily f);

struct WEval {
  double value = 0.0;   // W(s)
  double first = 0.0;   // W'(s)
  double second = 0.0;  // W''(s)
};

/// Lower-order term W with its derivatives. All built-in families are even in
/// s, vanish to second order at the origin, and have W''(0) = m0^2.
class NonlinearityModel {
 public:
  // W(s) = (m0^2 s0^2 / 2) t/(1+t), t = (s/s0)^2. Bounded, so W'' is globally
  // bounded (p = 0) and the admissible frequency window is the whole (0, m0).
  static NonlinearityModel saturable(double m0, double s0 = 1.0);

  // W(s) = m0^2 s^2 / 2. Negative fixture: no m1 < m0 satisfies W3.
  static NonlinearityModel quadratic(double m0);

  // Two-column CSV (s, W(s)) with strictly increasing s starting at 0;
  // extended evenly to s < 0 and cubic-interpolated. Queries outside the
  // table are rejected.
  static NonlinearityModel tabulated_from_csv(const std::string& path);
  static NonlinearityModel tabulated(const std::vector<double>& s,
                                     const std::vector<double>& w);

  // Arbitrary analytic triple, used for test fixtures.
  static NonlinearityModel custom(std::function<double(double)> w,
                                  std::function<double(double)> dw,
                                  std::function<double(double)> ddw,
                                  double p_growth = 0.0);

  WEval eval(double s) const;

  WFamily family() const { return family_; }
  double m0() const { return m0_; }
  double s0() const { return s0_; }
  double p_growth() const { return p_growth_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double table_max() const { return table_max_; }

 private:
  NonlinearityModel() = default;
  WFamily family_ = WFamily::saturable;
  double m0_ = 1.0;
  double s0_ = 1.0;
  double p_growth_ = 0.0;
  double c1_ = 0.0;
  double c2_ = 0.0;
  double table_max_ = 0.0;
  std::shared_ptr<const std::vector<double>> tab_s_, tab_w_, tab_m_;  // spline data
  std::function<double(double)> fw_, fdw_, fddw_;
};

inline WEval eval_W(const NonlinearityModel& model, double s) { return model.eval(s); }

struct AssumptionViolation {
  std::string assumption;  // "W1".."W5" or "BL1".."BL4"
  double sample = 0.0;
  double value = 0.0;
  double bound = 0.0;
};

struct AssumptionReport {
  bool w1 = false, w2 = false, w3 = false, w4 = false, w5 = false;
  double m0_measured = 0.0;
  double m1_measured = 0.0;
  double c2_envelope = 0.0;  // measured sup |W''| - c1 |s|^p
  bool bl_zero = false;       // G(0) = G'(0) = 0
  bool bl_mass = false;       // G''(0) > 0
  bool bl_growth = false;     // limsup G'(s)/s^5 >= 0
  bool bl_negative = false;   // exists u0 with G(u0) < 0
  double omega0_bl = 0.0;
  double s_min = 0.0, s_max = 0.0;
  std::vector<AssumptionViolation> violations;

  bool all_w() const { return w1 && w2 && w3 && w4 && w5; }
  bool all_bl() const { return bl_zero && bl_mass && bl_growth && bl_negative; }
};

/// Samples W over [-s_max, s_max] (log + linear mix) and grades W1..W5 plus
/// the Berestycki-Lions bullets for G(u) = W(u) - omega0^2 u^2 / 2.
AssumptionReport check_assumptions(const NonlinearityModel& model, double s_max,
                                   int n_samples, double omega0_bl);

/// Same, with omega0_bl defaulted inside the measured window.
AssumptionReport check_assumptions(const NonlinearityModel& model, double s_max = 1e3,
                                   int n_samples = 4096);

/// Admissible standing-wave window (m1, m0). Rejects when the window is
/// degenerate (m1 >= m0), i.e. hypothesis (iii) fails.
std::pair<double, double> frequency_window(const NonlinearityModel& model);

}  // namespace gw
