#pragma once

#include <string>
#include <vector>

#include "gaugewave/functionals.hpp"
#include "gaugewave/gauge_field.hpp"
#include "gaugewave/nonlinearity.hpp"
#include "gaugewave/radial.hpp"

namespace gw {

enum class StepPolicy { armijo_backtracking, fixed };
enum class SeedProfile { gaussian, compact_bump, file };

StepPolicy parse_step_policy(const std::string& name);
SeedProfile parse_seed_profile(const std::string& name);
std::string step_policy_name(StepPolicy p);
std::string seed_profile_name(SeedProfile p);

struct SolverConfig {
  double q = 0.0;
  double sigma2 = 1.0;
  int n_points = 2000;
  double r_max = 50.0;
  double step0 = 1.0;
  StepPolicy step_policy = StepPolicy::armijo_backtracking;
  double tol_residual = 1e-8;  // on ||J'(u) - omega2 Lambda'(u)||_L2 / ||u||_H1
  int max_iters = 200000;
  SeedProfile seed_profile = SeedProfile::gaussian;
  std::string seed_file;               // echoed into run records
  std::vector<double> seed_values;     // resolved seed when seed_profile == file
};

enum class SolveStatus { converged, no_bound_state, diverged, stalled, max_iterations };
std::string solve_status_name(SolveStatus s);

struct SolutionCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<SolutionCheck> checks;
  bool all_passed = false;
  const SolutionCheck* find(const std::string& name) const;
};

struct SolitaryWaveSolution {
  RadialField u;
  RadialField phi;
  double q = 0.0;
  double omega2 = 0.0;          // least-squares multiplier (used for stepping)
  double omega2_pairing = 0.0;  // <J'(u), u> / (2 Lambda(u)), reported
  double sigma2 = 0.0;
  double J_value = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::max_iterations;
  double rayleigh_min = 0.0;    // min over iterations of J(u)/sigma2
  double lambda_drift_log10 = 0.0;
  VerificationReport diagnostics;
};

/// Rescales u along u_lambda(x) = lambda u(lambda x) onto the constraint
/// Lambda(u_lambda) = sigma2 (lambda = Lambda(u)/sigma2, exact in the
/// continuum; interpolation inexactness is removed by a Newton correction).
RadialField retract_to_constraint(const RadialField& u, double q, double sigma2);

struct MultiplierEstimate {
  double least_squares = 0.0;  // <J', L'> / <L', L'>
  double pairing_form = 0.0;   // <J'(u), u> / (2 Lambda(u))
};

MultiplierEstimate multiplier_estimate(const RadialField& u, double q,
                                       const NonlinearityModel& model);

/// Projected gradient descent of J on V_sigma with the scaling retraction;
/// omega2 is extracted as the Lagrange multiplier.
SolitaryWaveSolution minimize(const SolverConfig& config, const NonlinearityModel& model);

/// Independent q = 0 oracle: bisection shooting on u(0) for the standing-wave
/// profile of -lap(u) + W'(u) = omega0^2 u, followed by a Newton polish onto
/// the discrete system.
RadialField solve_shooting(const NonlinearityModel& model, double omega0,
                           std::shared_ptr<const RadialGrid> grid);

/// Re-derives every invariant of a solution bundle: strong residuals, Phi
/// bounds, constraint value, multiplier window, energy positivity and the
/// Derrick-Pohozaev diagnostics.
VerificationReport verify_solution(const SolitaryWaveSolution& sol,
                                   const NonlinearityModel& model, double q);

}  // namespace gw
