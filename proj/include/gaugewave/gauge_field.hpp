#pragma once

#include <vector>

#include "gaugewave/radial.hpp"

namespace gw {

/// Solution bundle of -lap(Phi) + q^2 u^2 Phi = q u^2 with even inner and
/// Dirichlet-zero outer conditions (direct tridiagonal solve).
struct GaugeSolve {
  RadialField phi;
  double q = 0.0;
  double residual_norm = 0.0;  // L2 norm of the strong residual over interior rows
  int iterations = 1;          // 1 for the direct solve
};

GaugeSolve solve_phi(const RadialField& u, double q);

struct PhiBoundsReport {
  bool passed = false;
  double min_phi = 0.0;
  double max_phi = 0.0;
  double upper_bound = 0.0;  // 1/q
  int min_index = 0;
  int max_index = 0;
  double boundary_residue = 0.0;   // |Phi| at the last interior node / max|Phi|
  bool boundary_flagged = false;   // truncation visible at r_max
};

/// Maximum-principle check 0 <= Phi <= 1/q (q > 0 required).
PhiBoundsReport phi_bounds_check(const GaugeSolve& gs, double tol = 1e-8);

struct EnergyIdentityReport {
  double gradient_energy = 0.0;  // int |grad Phi|^2 dx
  double source_pairing = 0.0;   // int (q u^2 Phi - q^2 u^2 Phi^2) dx
  double rel_error = 0.0;
};

/// Discrete identity obtained by pairing the Phi equation with Phi; exact to
/// rounding with the conservative energy + trapezoid pairing.
EnergyIdentityReport energy_identity(const RadialField& u, const GaugeSolve& gs);

struct PhiScalingReport {
  double lambda = 1.0;
  double rel_l2_discrepancy = 0.0;
  int n_scaled = 0;
  double r_max_scaled = 0.0;
};

/// Certifies Phi(u_lambda)(x) = Phi(u)(lambda x) with u_lambda(x) = lambda u(lambda x).
/// u_lambda is solved on the lambda-scaled domain [0, r_max/lambda] (same
/// spacing), where the truncated problems correspond exactly and the
/// discrepancy is pure discretization, O(h^2).
PhiScalingReport phi_scaling_check(const RadialField& u, double q, double lambda);

struct PhiSmallQEntry {
  double q = 0.0;
  double dnorm_over_q = 0.0;      // ||Phi_q(u)||_D / q
  double screening_pairing = 0.0; // q int u^2 Phi_q dx
};

struct PhiSmallQReport {
  std::vector<PhiSmallQEntry> entries;
  double dnorm_spread = 0.0;      // max/min - 1 of dnorm_over_q
  double worst_q2_deviation = 0.0;// worst |pairing ratio / q-ratio^2 - 1| over pairs
};

/// Small-coupling laws: ||Phi_q||_D / q near-constant and q int u^2 Phi_q dx = O(q^2).
PhiSmallQReport phi_smallq_check(const RadialField& u, const std::vector<double>& q_list);

}  // namespace gw
