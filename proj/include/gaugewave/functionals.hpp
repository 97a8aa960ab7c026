#pragma once

#include "gaugewave/gauge_field.hpp"
#include "gaugewave/nonlinearity.hpp"
#include "gaugewave/radial.hpp"

namespace gw {

// Discrete action pieces. The Dirichlet parts use the conservative g = r*f
// energy and the matter parts the trapezoid volume pairing, so the strong-form
// fields below are the exact gradients of these discrete functionals under
// volume_pairing. That exactness is what the finite-difference certifications
// and the (per)/(imp) identities lean on.

/// J(u) = 1/2 int |grad u|^2 dx + int W(u) dx, >= 0 under W1.
double eval_J(const RadialField& u, const NonlinearityModel& model);

/// A(u, Phi) = 1/2 int |grad Phi|^2 dx + 1/2 int u^2 (1 - q Phi)^2 dx.
double eval_A(const RadialField& u, const RadialField& phi, double q);

/// Lambda(u) = 1/2 int u^2 (1 - q Phi(u)) dx with Phi(u) solved internally.
double eval_Lambda(const RadialField& u, double q);
double eval_Lambda_given_phi(const RadialField& u, const RadialField& phi, double q);

/// Strong form of J'(u): -lap(u) + W'(u).
RadialField grad_J(const RadialField& u, const NonlinearityModel& model);

/// Strong form of Lambda'(u): u (1 - q Phi(u))^2. The envelope cancellation
/// through dA/dPhi = 0 at Phi(u) removes the Phi'(u) term.
RadialField grad_Lambda(const RadialField& u, double q);
RadialField grad_Lambda_given_phi(const RadialField& u, const RadialField& phi, double q);

struct FunctionalValue {
  double J = 0.0;
  double A = 0.0;
  double Lambda = 0.0;
  double I_omega = 0.0;  // J - omega2 * Lambda
  double omega2 = 0.0;
};

FunctionalValue evaluate_functionals(const RadialField& u, double q,
                                     const NonlinearityModel& model, double omega2);

struct StaticEnergy {
  double total = 0.0;      // J(u) + omega^2 A(u, Phi(u))
  RadialField density;     // pointwise, nonnegative under W1
};

/// Energy of the standing-wave ansatz (S = -omega t, A = 0, phi = omega Phi):
/// density = 1/2 |grad u|^2 + W(u) + 1/2 omega^2 u^2 (1 - q Phi)^2
///           + 1/2 omega^2 |grad Phi|^2.
StaticEnergy eval_energy_static(const RadialField& u, const GaugeSolve& phi_solution,
                                double omega, const NonlinearityModel& model);

struct DerrickPohozaev {
  double dp_W = 0.0;  // (1/6) int |grad u|^2 + int W(u): > 0 for u != 0 under W1
  double dp_G = 0.0;  // same with G = W - omega2 u^2 / 2: ~0 on standing waves
};

DerrickPohozaev derrick_pohozaev(const RadialField& u, const NonlinearityModel& model,
                                 double omega2);

}  // namespace gw
