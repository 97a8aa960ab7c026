#include "gaugewave/gauge_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gw {

GaugeSolve solve_phi(const RadialField& u, double q) {
  require_finite(u, "solve_phi");
  if (q < 0.0 || !std::isfinite(q)) throw std::invalid_argument("solve_phi: q must be >= 0");

  GaugeSolve out;
  out.q = q;
  out.phi = make_field(u.grid);
  if (q == 0.0) return out;  // homogeneous equation with decay: Phi = 0

  const auto& gr = *u.grid;
  const int n = gr.n_points;
  const double h = gr.spacing;
  const double h2 = h * h;

  // Unknowns g_i = r_i Phi_i at nodes 1..n-1; g(0) = 0 and g_n = 0 (Dirichlet).
  std::vector<double> diag(static_cast<size_t>(n - 1)), off(static_cast<size_t>(n - 2), -1.0 / h2),
      rhs(static_cast<size_t>(n - 1));
  for (int i = 0; i < n - 1; ++i) {
    const double ui = u[i];
    const double ri = gr.nodes[static_cast<size_t>(i)];
    diag[static_cast<size_t>(i)] = 2.0 / h2 + q * q * ui * ui;
    rhs[static_cast<size_t>(i)] = q * ri * ui * ui;
  }
  std::vector<double> g = solve_tridiag_spd(diag, off, rhs);
  for (int i = 0; i < n - 1; ++i)
    out.phi[i] = g[static_cast<size_t>(i)] / gr.nodes[static_cast<size_t>(i)];
  out.phi[n - 1] = 0.0;

  // Strong residual over the equation rows.
  RadialField lap = radial_laplacian(out.phi);
  RadialField res = make_field(u.grid);
  for (int i = 0; i < n - 1; ++i)
    res[i] = -lap[i] + q * q * u[i] * u[i] * out.phi[i] - q * u[i] * u[i];
  out.residual_norm = std::sqrt(volume_pairing(res, res));
  return out;
}

PhiBoundsReport phi_bounds_check(const GaugeSolve& gs, double tol) {
  if (!(gs.q > 0.0)) throw std::invalid_argument("phi_bounds_check: requires q > 0");
  PhiBoundsReport rep;
  rep.upper_bound = 1.0 / gs.q;
  const auto& v = gs.phi.values;
  rep.min_index = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
  rep.max_index = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  rep.min_phi = v[static_cast<size_t>(rep.min_index)];
  rep.max_phi = v[static_cast<size_t>(rep.max_index)];
  rep.passed = rep.min_phi >= -tol && rep.max_phi <= rep.upper_bound + tol;
  const double scale = std::max(std::abs(rep.max_phi), 1e-300);
  rep.boundary_residue = std::abs(v[v.size() - 2]) / scale;
  rep.boundary_flagged = rep.boundary_residue > 1e-4;
  return rep;
}

EnergyIdentityReport energy_identity(const RadialField& u, const GaugeSolve& gs) {
  EnergyIdentityReport rep;
  rep.gradient_energy = 2.0 * dirichlet_energy(gs.phi);
  RadialField integrand = make_field(u.grid);
  for (int i = 0; i < u.size(); ++i) {
    const double ui2 = u[i] * u[i];
    const double p = gs.phi[i];
    integrand[i] = gs.q * ui2 * p - gs.q * gs.q * ui2 * p * p;
  }
  RadialField one = make_field(u.grid);
  for (auto& x : one.values) x = 1.0;
  rep.source_pairing = volume_pairing(integrand, one);
  const double scale = std::max({std::abs(rep.gradient_energy), std::abs(rep.source_pairing), 1e-300});
  rep.rel_error = std::abs(rep.gradient_energy - rep.source_pairing) / scale;
  return rep;
}

PhiScalingReport phi_scaling_check(const RadialField& u, double q, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("phi_scaling_check: lambda must be positive");
  PhiScalingReport rep;
  rep.lambda = lambda;

  const auto& gr = *u.grid;
  // Scaled domain [0, r_max/lambda] at (approximately) the original spacing;
  // r_max_scaled = r_max/lambda exactly so the Dirichlet faces correspond.
  const int n_scaled = std::max(16, static_cast<int>(std::lround(gr.n_points / lambda)));
  auto grid_s = make_grid(n_scaled, gr.r_max / lambda);
  rep.n_scaled = n_scaled;
  rep.r_max_scaled = grid_s->r_max;

  CubicSpline spl_u(u);
  RadialField u_l = make_field(grid_s);
  for (int i = 0; i < n_scaled; ++i)
    u_l[i] = lambda * spl_u.eval(lambda * grid_s->nodes[static_cast<size_t>(i)]);
  u_l.values.back() = 0.0;

  GaugeSolve gs_l = solve_phi(u_l, q);

  GaugeSolve gs = solve_phi(u, q);
  CubicSpline spl_phi(gs.phi);
  RadialField expected = make_field(grid_s);
  for (int i = 0; i < n_scaled; ++i)
    expected[i] = spl_phi.eval(lambda * grid_s->nodes[static_cast<size_t>(i)]);

  RadialField diff = make_field(grid_s);
  for (int i = 0; i < n_scaled; ++i) diff[i] = gs_l.phi[i] - expected[i];
  const double num = std::sqrt(volume_pairing(diff, diff));
  const double den = std::sqrt(volume_pairing(gs_l.phi, gs_l.phi));
  rep.rel_l2_discrepancy = den > 0.0 ? num / den : num;
  return rep;
}

PhiSmallQReport phi_smallq_check(const RadialField& u, const std::vector<double>& q_list) {
  if (q_list.empty()) throw std::invalid_argument("phi_smallq_check: empty q list");
  PhiSmallQReport rep;
  RadialField u2 = make_field(u.grid);
  for (int i = 0; i < u.size(); ++i) u2[i] = u[i] * u[i];

  for (double q : q_list) {
    if (!(q > 0.0)) throw std::invalid_argument("phi_smallq_check: q values must be positive");
    GaugeSolve gs = solve_phi(u, q);
    PhiSmallQEntry e;
    e.q = q;
    e.dnorm_over_q = std::sqrt(std::max(0.0, 2.0 * dirichlet_energy(gs.phi))) / q;
    e.screening_pairing = q * volume_pairing(u2, gs.phi);
    rep.entries.push_back(e);
  }

  double lo = rep.entries.front().dnorm_over_q, hi = lo;
  for (const auto& e : rep.entries) {
    lo = std::min(lo, e.dnorm_over_q);
    hi = std::max(hi, e.dnorm_over_q);
  }
  rep.dnorm_spread = lo > 0.0 ? hi / lo - 1.0 : 0.0;

  for (size_t i = 0; i + 1 < rep.entries.size(); ++i) {
    const auto& a = rep.entries[i];
    const auto& b = rep.entries[i + 1];
    if (a.screening_pairing <= 0.0 || b.screening_pairing <= 0.0) continue;
    const double ratio = b.screening_pairing / a.screening_pairing;
    const double expect = (b.q / a.q) * (b.q / a.q);
    rep.worst_q2_deviation = std::max(rep.worst_q2_deviation, std::abs(ratio / expect - 1.0));
  }
  return rep;
}

}  // namespace gw
