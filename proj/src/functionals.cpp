#include "gaugewave/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace gw {

namespace {

RadialField ones_like(const RadialField& f) {
  RadialField one = make_field(f.grid);
  for (auto& x : one.values) x = 1.0;
  return one;
}

double integrate_pairing(const RadialField& f) {
  return volume_pairing(f, ones_like(f));
}

}  // namespace

double eval_J(const RadialField& u, const NonlinearityModel& model) {
  require_finite(u, "eval_J");
  RadialField w = make_field(u.grid);
  for (int i = 0; i < u.size(); ++i) w[i] = model.eval(u[i]).value;
  return dirichlet_energy(u) + integrate_pairing(w);
}

double eval_A(const RadialField& u, const RadialField& phi, double q) {
  require_finite(u, "eval_A");
  require_finite(phi, "eval_A");
  RadialField m = make_field(u.grid);
  for (int i = 0; i < u.size(); ++i) {
    const double f = 1.0 - q * phi[i];
    m[i] = 0.5 * u[i] * u[i] * f * f;
  }
  return dirichlet_energy(phi) + integrate_pairing(m);
}

double eval_Lambda_given_phi(const RadialField& u, const RadialField& phi, double q) {
  RadialField m = make_field(u.grid);
  for (int i = 0; i < u.size(); ++i) m[i] = 0.5 * u[i] * u[i] * (1.0 - q * phi[i]);
  return integrate_pairing(m);
}

double eval_Lambda(const RadialField& u, double q) {
  require_finite(u, "eval_Lambda");
  if (q == 0.0) {
    RadialField m = make_field(u.grid);
    for (int i = 0; i < u.size(); ++i) m[i] = 0.5 * u[i] * u[i];
    return integrate_pairing(m);
  }
  GaugeSolve gs = solve_phi(u, q);
  return eval_Lambda_given_phi(u, gs.phi, q);
}

RadialField grad_J(const RadialField& u, const NonlinearityModel& model) {
  require_finite(u, "grad_J");
  RadialField lap = radial_laplacian(u);
  RadialField g = make_field(u.grid);
  for (int i = 0; i < u.size(); ++i) g[i] = -lap[i] + model.eval(u[i]).first;
  return g;
}

RadialField grad_Lambda_given_phi(const RadialField& u, const RadialField& phi, double q) {
  RadialField g = make_field(u.grid);
  for (int i = 0; i < u.size(); ++i) {
    const double f = 1.0 - q * phi[i];
    g[i] = u[i] * f * f;
  }
  return g;
}

RadialField grad_Lambda(const RadialField& u, double q) {
  require_finite(u, "grad_Lambda");
  if (q == 0.0) return u;
  GaugeSolve gs = solve_phi(u, q);
  return grad_Lambda_given_phi(u, gs.phi, q);
}

FunctionalValue evaluate_functionals(const RadialField& u, double q,
                                     const NonlinearityModel& model, double omega2) {
  FunctionalValue v;
  v.omega2 = omega2;
  v.J = eval_J(u, model);
  GaugeSolve gs = solve_phi(u, q);
  v.A = eval_A(u, gs.phi, q);
  v.Lambda = eval_Lambda_given_phi(u, gs.phi, q);
  v.I_omega = v.J - omega2 * v.Lambda;
  return v;
}

StaticEnergy eval_energy_static(const RadialField& u, const GaugeSolve& phi_solution,
                                double omega, const NonlinearityModel& model) {
  require_finite(u, "eval_energy_static");
  const double q = phi_solution.q;
  const RadialField& phi = phi_solution.phi;

  StaticEnergy out;
  out.total = eval_J(u, model) + omega * omega * eval_A(u, phi, q);

  RadialField du = radial_gradient(u);
  RadialField dphi = radial_gradient(phi);
  out.density = make_field(u.grid);
  for (int i = 0; i < u.size(); ++i) {
    const double f = 1.0 - q * phi[i];
    out.density[i] = 0.5 * du[i] * du[i] + model.eval(u[i]).value +
                     0.5 * omega * omega * u[i] * u[i] * f * f +
                     0.5 * omega * omega * dphi[i] * dphi[i];
  }
  return out;
}

DerrickPohozaev derrick_pohozaev(const RadialField& u, const NonlinearityModel& model,
                                 double omega2) {
  require_finite(u, "derrick_pohozaev");
  const double grad2 = 2.0 * dirichlet_energy(u);  // int |grad u|^2 dx
  RadialField w = make_field(u.grid);
  RadialField g = make_field(u.grid);
  for (int i = 0; i < u.size(); ++i) {
    const double wv = model.eval(u[i]).value;
    w[i] = wv;
    g[i] = wv - 0.5 * omega2 * u[i] * u[i];
  }
  DerrickPohozaev dp;
  dp.dp_W = grad2 / 6.0 + integrate_pairing(w);
  dp.dp_G = grad2 / 6.0 + integrate_pairing(g);
  return dp;
}

}  // namespace gw
