#pragma once

#include <memory>
#include <string>
#include <vector>

namespace gw {

/// Uniform radial grid on (0, r_max]: nodes r_i = i*h, i = 1..n, h = r_max/n.
/// The origin r = 0 is not a node; radial fields are extended evenly through it.
struct RadialGrid {
  int n_points = 0;
  double r_max = 0.0;
  double spacing = 0.0;
  std::vector<double> nodes;  // strictly increasing, nodes.back() == r_max
};

std::shared_ptr<const RadialGrid> make_grid(int n_points, double r_max);

enum class InnerBc { even };            // f'(0) = 0
enum class OuterBc { dirichlet_zero };  // f(r_max) = 0 (field extended by zero beyond)

/// A real scalar function sampled on a radial grid.
struct RadialField {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> values;
  InnerBc inner_bc = InnerBc::even;
  OuterBc outer_bc = OuterBc::dirichlet_zero;

  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  int size() const { return static_cast<int>(values.size()); }
};

RadialField make_field(std::shared_ptr<const RadialGrid> grid);
RadialField make_field(std::shared_ptr<const RadialGrid> grid,
                       const std::vector<double>& values);

template <typename Fn>
RadialField sample_field(std::shared_ptr<const RadialGrid> grid, Fn&& fn) {
  RadialField f = make_field(grid);
  for (int i = 0; i < f.size(); ++i) f[i] = fn(grid->nodes[static_cast<size_t>(i)]);
  return f;
}

/// Throws std::invalid_argument naming the first offending index if f has a
/// non-finite entry or does not match its grid length.
void require_finite(const RadialField& f, const std::string& who);

/// Volume integral 4*pi * int_0^rmax f(r) r^2 dr by composite Simpson
/// (3/8 tail when the interval count is odd). The r = 0 endpoint contributes
/// exactly zero through the r^2 weight.
double integrate_volume(const RadialField& f);

/// Trapezoid volume pairing <f, g> = 4*pi * sum_i w_i r_i^2 f_i g_i.
/// This is the discrete L^2 inner product under which the strong-form fields
/// returned by the functional gradients are exact gradients.
double volume_pairing(const RadialField& f, const RadialField& g);

/// 1/2 * int |grad f|^2 dx evaluated in conservative form through g = r*f:
/// 2*pi * [ (1/h) * sum (g_{k+1}-g_k)^2 - g_n^2 / r_n ].
/// Summation by parts against radial_laplacian is exact for Dirichlet data.
double dirichlet_energy(const RadialField& f);

/// Discrete 3-d radial Laplacian f'' + (2/r) f' in the form (r f)'' / r.
/// Even symmetry at the origin enters through (r f)(0) = 0; the outer node
/// uses the zero extension past r_max.
RadialField radial_laplacian(const RadialField& f);

/// Centered-difference radial derivative; one-sided second order at the ends
/// (even extension at the origin).
RadialField radial_gradient(const RadialField& f);

enum class Norm { L2, L3, L6, L12_5, D, H1 };

Norm parse_norm(const std::string& name);
double field_norm(const RadialField& f, Norm which);

/// H1 norm with the trapezoid pairing + conservative gradient energy; used by
/// solver stopping rules so the residual scale matches the variational core.
double h1_norm_consistent(const RadialField& f);

/// Clamped-at-origin cubic spline through (0, f0even) and the grid nodes,
/// where f0even is the even quadratic extrapolation of f to r = 0.
/// Evaluates to 0 beyond r_max.
class CubicSpline {
 public:
  explicit CubicSpline(const RadialField& f);
  double eval(double r) const;
  double deriv(double r) const;
  double r_max() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, m_;  // knots, values, second derivatives
  double h_ = 0.0;
};

/// u_lambda(r) = lambda * u(lambda * r) resampled on u's own grid.
RadialField resample_scaled(const RadialField& u, double lambda);

/// Solves the SPD tridiagonal system (diag, off-diagonal 'off') * x = rhs by
/// the Thomas algorithm. Throws on pivot breakdown.
std::vector<double> solve_tridiag_spd(const std::vector<double>& diag,
                                      const std::vector<double>& off,
                                      const std::vector<double>& rhs);

/// General tridiagonal solve with partial pivoting (used where the matrix may
/// be indefinite, e.g. Newton corrections around a ground state).
std::vector<double> solve_tridiag_pivoting(std::vector<double> sub,
                                           std::vector<double> diag,
                                           std::vector<double> sup,
                                           std::vector<double> rhs);

}  // namespace gw
