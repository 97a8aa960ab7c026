#include "gaugewave/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gw {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;
}

std::shared_ptr<const RadialGrid> make_grid(int n_points, double r_max) {
  if (n_points < 16) throw std::invalid_argument("RadialGrid: n_points must be >= 16");
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw std::invalid_argument("RadialGrid: r_max must be positive and finite");
  auto g = std::make_shared<RadialGrid>();
  g->n_points = n_points;
  g->r_max = r_max;
  g->spacing = r_max / n_points;
  g->nodes.resize(static_cast<size_t>(n_points));
  for (int i = 0; i < n_points; ++i)
    g->nodes[static_cast<size_t>(i)] = r_max * static_cast<double>(i + 1) / n_points;
  g->nodes.back() = r_max;
  return g;
}

RadialField make_field(std::shared_ptr<const RadialGrid> grid) {
  RadialField f;
  f.grid = std::move(grid);
  f.values.assign(static_cast<size_t>(f.grid->n_points), 0.0);
  return f;
}

RadialField make_field(std::shared_ptr<const RadialGrid> grid,
                       const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != grid->n_points)
    throw std::invalid_argument("RadialField: values length does not match grid");
  RadialField f;
  f.grid = std::move(grid);
  f.values = values;
  return f;
}

void require_finite(const RadialField& f, const std::string& who) {
  if (!f.grid) throw std::invalid_argument(who + ": field has no grid");
  if (static_cast<int>(f.values.size()) != f.grid->n_points)
    throw std::invalid_argument(who + ": values length does not match grid");
  for (size_t i = 0; i < f.values.size(); ++i) {
    if (!std::isfinite(f.values[i]))
      throw std::invalid_argument(who + ": non-finite value at index " + std::to_string(i));
  }
}

double integrate_volume(const RadialField& f) {
  require_finite(f, "integrate_volume");
  const auto& g = *f.grid;
  const int n = g.n_points;  // interval count on [0, r_max], integrand(0) = 0
  const double h = g.spacing;

  auto w = [&](int i) {  // integrand at node i (1-based node index; i = 0 is the origin)
    if (i == 0) return 0.0;
    const double r = g.nodes[static_cast<size_t>(i - 1)];
    return r * r * f.values[static_cast<size_t>(i - 1)];
  };

  double total = 0.0;
  int m = n;
  if (m % 2 == 1) {
    // Simpson 3/8 on the last three intervals, plain Simpson on the rest.
    total += 3.0 * h / 8.0 * (w(m - 3) + 3.0 * w(m - 2) + 3.0 * w(m - 1) + w(m));
    m -= 3;
  }
  double s = 0.0;
  for (int i = 1; i < m; i += 2) s += 4.0 * w(i);
  for (int i = 2; i < m; i += 2) s += 2.0 * w(i);
  if (m > 0) total += h / 3.0 * (w(0) + s + w(m));
  return kFourPi * total;
}

double volume_pairing(const RadialField& f, const RadialField& g) {
  if (f.grid != g.grid && (f.grid->n_points != g.grid->n_points || f.grid->r_max != g.grid->r_max))
    throw std::invalid_argument("volume_pairing: fields on different grids");
  const auto& gr = *f.grid;
  const int n = gr.n_points;
  const double h = gr.spacing;
  double s = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    const double r = gr.nodes[static_cast<size_t>(i)];
    s += r * r * f.values[static_cast<size_t>(i)] * g.values[static_cast<size_t>(i)];
  }
  const double rn = gr.r_max;
  s += 0.5 * rn * rn * f.values.back() * g.values.back();
  return kFourPi * h * s;
}

double dirichlet_energy(const RadialField& f) {
  const auto& gr = *f.grid;
  const int n = gr.n_points;
  const double h = gr.spacing;
  double prev = 0.0;  // g = r*f vanishes at the origin
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double gi = gr.nodes[static_cast<size_t>(i)] * f.values[static_cast<size_t>(i)];
    const double d = gi - prev;
    s += d * d;
    prev = gi;
  }
  const double gn = gr.r_max * f.values.back();
  return 2.0 * std::numbers::pi * (s / h - gn * gn / gr.r_max);
}

RadialField radial_laplacian(const RadialField& f) {
  require_finite(f, "radial_laplacian");
  const auto& gr = *f.grid;
  const int n = gr.n_points;
  if (n < 3) throw std::invalid_argument("radial_laplacian: need at least 3 nodes");
  const double h2 = gr.spacing * gr.spacing;

  RadialField out = make_field(f.grid);
  auto gval = [&](int i) {  // g = r*f with g(0) = 0 and zero extension past r_max
    if (i < 0) return 0.0;
    if (i >= n) return 0.0;
    return gr.nodes[static_cast<size_t>(i)] * f.values[static_cast<size_t>(i)];
  };
  for (int i = 0; i < n; ++i) {
    const double num = gval(i + 1) - 2.0 * gval(i) + gval(i - 1);
    out[i] = num / (h2 * gr.nodes[static_cast<size_t>(i)]);
  }
  return out;
}

RadialField radial_gradient(const RadialField& f) {
  require_finite(f, "radial_gradient");
  const auto& gr = *f.grid;
  const int n = gr.n_points;
  if (n < 3) throw std::invalid_argument("radial_gradient: need at least 3 nodes");
  const double h = gr.spacing;
  RadialField out = make_field(f.grid);
  // Even extension through the origin: fit f = a + c r^2 on the first two nodes.
  out[0] = 2.0 * (f[1] - f[0]) / (3.0 * h);
  for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return out;
}

Norm parse_norm(const std::string& name) {
  if (name == "L2") return Norm::L2;
  if (name == "L3") return Norm::L3;
  if (name == "L6") return Norm::L6;
  if (name == "L12_5") return Norm::L12_5;
  if (name == "D") return Norm::D;
  if (name == "H1") return Norm::H1;
  throw std::invalid_argument("field_norm: unknown norm '" + name + "'");
}

double field_norm(const RadialField& f, Norm which) {
  require_finite(f, "field_norm");
  auto lp = [&](double p) {
    RadialField a = make_field(f.grid);
    for (int i = 0; i < f.size(); ++i) a[i] = std::pow(std::abs(f[i]), p);
    return std::pow(integrate_volume(a), 1.0 / p);
  };
  switch (which) {
    case Norm::L2: return lp(2.0);
    case Norm::L3: return lp(3.0);
    case Norm::L6: return lp(6.0);
    case Norm::L12_5: return lp(12.0 / 5.0);
    case Norm::D: {
      RadialField g = radial_gradient(f);
      RadialField g2 = make_field(f.grid);
      for (int i = 0; i < g.size(); ++i) g2[i] = g[i] * g[i];
      return std::sqrt(integrate_volume(g2));
    }
    case Norm::H1: {
      const double l2 = field_norm(f, Norm::L2);
      const double d = field_norm(f, Norm::D);
      return std::sqrt(l2 * l2 + d * d);
    }
  }
  throw std::invalid_argument("field_norm: unknown enumeration value");
}

double h1_norm_consistent(const RadialField& f) {
  return std::sqrt(volume_pairing(f, f) + 2.0 * dirichlet_energy(f));
}

CubicSpline::CubicSpline(const RadialField& f) {
  const auto& gr = *f.grid;
  const int n = gr.n_points;
  h_ = gr.spacing;
  x_.resize(static_cast<size_t>(n + 1));
  y_.resize(static_cast<size_t>(n + 1));
  x_[0] = 0.0;
  y_[0] = (4.0 * f[0] - f[1]) / 3.0;  // even extrapolation, O(h^4)
  for (int i = 0; i < n; ++i) {
    x_[static_cast<size_t>(i + 1)] = gr.nodes[static_cast<size_t>(i)];
    y_[static_cast<size_t>(i + 1)] = f[i];
  }
  // Second derivatives: clamped S'(0) = 0 at the origin, natural at r_max.
  // The natural end decouples (M_n = 0); the leading block is SPD.
  const int m = n + 1;
  std::vector<double> diag(static_cast<size_t>(m - 1), 4.0 * h_);
  std::vector<double> off(static_cast<size_t>(m - 2), h_);
  std::vector<double> rhs(static_cast<size_t>(m - 1));
  diag[0] = 2.0 * h_;
  rhs[0] = 6.0 * (y_[1] - y_[0]) / h_;
  for (int i = 1; i < m - 1; ++i)
    rhs[static_cast<size_t>(i)] =
        6.0 / h_ * (y_[static_cast<size_t>(i + 1)] - 2.0 * y_[static_cast<size_t>(i)] +
                    y_[static_cast<size_t>(i - 1)]);
  m_ = solve_tridiag_spd(diag, off, rhs);
  m_.push_back(0.0);
}

double CubicSpline::eval(double r) const {
  if (r < 0.0) r = -r;  // even field
  if (r >= x_.back()) return 0.0;
  int i = static_cast<int>(r / h_);
  i = std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
  const double t = r - x_[static_cast<size_t>(i)];
  const double s = h_ - t;
  const double mi = m_[static_cast<size_t>(i)], mi1 = m_[static_cast<size_t>(i + 1)];
  const double yi = y_[static_cast<size_t>(i)], yi1 = y_[static_cast<size_t>(i + 1)];
  return (mi * s * s * s + mi1 * t * t * t) / (6.0 * h_) +
         (yi / h_ - mi * h_ / 6.0) * s + (yi1 / h_ - mi1 * h_ / 6.0) * t;
}

double CubicSpline::deriv(double r) const {
  double sign = 1.0;
  if (r < 0.0) {
    r = -r;
    sign = -1.0;
  }
  if (r >= x_.back()) return 0.0;
  int i = static_cast<int>(r / h_);
  i = std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
  const double t = r - x_[static_cast<size_t>(i)];
  const double s = h_ - t;
  const double mi = m_[static_cast<size_t>(i)], mi1 = m_[static_cast<size_t>(i + 1)];
  const double yi = y_[static_cast<size_t>(i)], yi1 = y_[static_cast<size_t>(i + 1)];
  return sign * ((-mi * s * s + mi1 * t * t) / (2.0 * h_) +
                 (yi1 - yi) / h_ - (mi1 - mi) * h_ / 6.0);
}

RadialField resample_scaled(const RadialField& u, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("resample_scaled: lambda must be positive");
  if (lambda == 1.0) return u;
  CubicSpline spl(u);
  RadialField out = make_field(u.grid);
  const auto& nodes = u.grid->nodes;
  for (int i = 0; i < out.size(); ++i)
    out[i] = lambda * spl.eval(lambda * nodes[static_cast<size_t>(i)]);
  out.values.back() = 0.0;  // keep the Dirichlet face exact
  return out;
}

std::vector<double> solve_tridiag_spd(const std::vector<double>& diag,
                                      const std::vector<double>& off,
                                      const std::vector<double>& rhs) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) return {};
  if (static_cast<int>(off.size()) != n - 1 || static_cast<int>(rhs.size()) != n)
    throw std::invalid_argument("solve_tridiag_spd: inconsistent sizes");
  std::vector<double> c(static_cast<size_t>(std::max(n - 1, 0))), d(static_cast<size_t>(n));
  double piv = diag[0];
  if (piv == 0.0) throw std::runtime_error("solve_tridiag_spd: zero pivot");
  if (n > 1) c[0] = off[0] / piv;
  d[0] = rhs[0] / piv;
  for (int i = 1; i < n; ++i) {
    piv = diag[static_cast<size_t>(i)] - off[static_cast<size_t>(i - 1)] * c[static_cast<size_t>(i - 1)];
    if (piv == 0.0) throw std::runtime_error("solve_tridiag_spd: zero pivot");
    if (i < n - 1) c[static_cast<size_t>(i)] = off[static_cast<size_t>(i)] / piv;
    d[static_cast<size_t>(i)] =
        (rhs[static_cast<size_t>(i)] - off[static_cast<size_t>(i - 1)] * d[static_cast<size_t>(i - 1)]) / piv;
  }
  for (int i = n - 2; i >= 0; --i)
    d[static_cast<size_t>(i)] -= c[static_cast<size_t>(i)] * d[static_cast<size_t>(i + 1)];
  return d;
}

std::vector<double> solve_tridiag_pivoting(std::vector<double> sub,
                                           std::vector<double> diag,
                                           std::vector<double> sup,
                                           std::vector<double> rhs) {
  const int n = static_cast<int>(diag.size());
  if (static_cast<int>(sub.size()) != n - 1 || static_cast<int>(sup.size()) != n - 1 ||
      static_cast<int>(rhs.size()) != n)
    throw std::invalid_argument("solve_tridiag_pivoting: inconsistent sizes");
  // Band LU with partial pivoting needs one extra superdiagonal of fill-in.
  std::vector<double> sup2(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n - 1; ++i) {
    double a = diag[static_cast<size_t>(i)];
    double b = sub[static_cast<size_t>(i)];
    if (std::abs(b) > std::abs(a)) {
      std::swap(diag[static_cast<size_t>(i)], sub[static_cast<size_t>(i)]);
      a = diag[static_cast<size_t>(i)];
      std::swap(sup[static_cast<size_t>(i)], diag[static_cast<size_t>(i + 1)]);
      if (i + 1 < n - 1) std::swap(sup2[static_cast<size_t>(i)], sup[static_cast<size_t>(i + 1)]);
      std::swap(rhs[static_cast<size_t>(i)], rhs[static_cast<size_t>(i + 1)]);
      b = sub[static_cast<size_t>(i)];
    }
    if (a == 0.0) throw std::runtime_error("solve_tridiag_pivoting: singular matrix");
    const double m = b / a;
    diag[static_cast<size_t>(i + 1)] -= m * sup[static_cast<size_t>(i)];
    if (i + 1 < n - 1) sup[static_cast<size_t>(i + 1)] -= m * sup2[static_cast<size_t>(i)];
    rhs[static_cast<size_t>(i + 1)] -= m * rhs[static_cast<size_t>(i)];
  }
  if (diag[static_cast<size_t>(n - 1)] == 0.0)
    throw std::runtime_error("solve_tridiag_pivoting: singular matrix");
  std::vector<double> x(static_cast<size_t>(n));
  x[static_cast<size_t>(n - 1)] = rhs[static_cast<size_t>(n - 1)] / diag[static_cast<size_t>(n - 1)];
  for (int i = n - 2; i >= 0; --i) {
    double v = rhs[static_cast<size_t>(i)] - sup[static_cast<size_t>(i)] * x[static_cast<size_t>(i + 1)];
    if (i + 2 < n) v -= sup2[static_cast<size_t>(i)] * x[static_cast<size_t>(i + 2)];
    x[static_cast<size_t>(i)] = v / diag[static_cast<size_t>(i)];
  }
  return x;
}

}  // namespace gw
