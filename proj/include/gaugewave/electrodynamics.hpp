#pragma once

#include <array>
#include <functional>
#include <vector>

#include "gaugewave/minimizer.hpp"
#include "gaugewave/nonlinearity.hpp"

namespace gw {

/// Collocated cubic grid [-half_width, half_width]^3, x1 fastest in memory.
struct CartesianGrid {
  int n_per_axis = 0;
  double half_width = 0.0;
  double spacing = 0.0;  // 2 half_width / (n_per_axis - 1)
};

CartesianGrid make_cartesian_grid(int n_per_axis, double half_width);

using Scalar3d = std::vector<double>;
using Vector3d = std::array<std::vector<double>, 3>;

/// Sampled snapshot of the boosted wave at a fixed time: matter amplitude and
/// phase, potentials, electromagnetic fields, charge and current, plus the
/// analytic time derivatives needed by the residual stencils.
struct CartesianFieldFrame {
  CartesianGrid grid;
  double time = 0.0;
  double q = 0.0;
  double velocity = 0.0;  // boost along x1; velocity vector is (v, 0, 0)
  double omega0 = 0.0;
  double omega = 0.0;  // gamma * omega0
  double k1 = 0.0;     // gamma * omega0 * v
  bool decay_warning = false;  // profile not decayed at the box faces

  Scalar3d psi_re, psi_im, u_amp, phase, phi_pot, rho;
  Vector3d a_pot, e_field, h_field, j_current;
  Scalar3d ds_dt, du_dt;  // analytic time derivatives of phase and amplitude
  Vector3d da_dt;

  size_t idx(int i, int j, int k) const {
    const size_t n = static_cast<size_t>(grid.n_per_axis);
    return (static_cast<size_t>(k) * n + static_cast<size_t>(j)) * n + static_cast<size_t>(i);
  }
  double coord(int i) const { return -grid.half_width + grid.spacing * i; }
};

/// Samples the standing wave boosted to velocity v along x1 at time t:
/// psi_v(t,x) = u(|x'|) e^{i(k1 x1 - omega t)}, phi_v = gamma omega0 Phi(|x'|),
/// A_v = gamma omega0 Phi(|x'|) (v,0,0), with x' the Lorentz-contracted frame.
/// E and H come from the potentials (analytic time derivative, centered space
/// differences); rho and j from the matter phase.
CartesianFieldFrame boost(const SolitaryWaveSolution& sol, double v, double t,
                          const CartesianGrid& grid);

struct MaxwellResidualReport {
  double gauss = 0.0;       // ||div E - rho||
  double ampere = 0.0;      // ||curl H - dE/dt - j||
  double faraday = 0.0;     // ||curl E + dH/dt||
  double monopole = 0.0;    // ||div H||
  double continuity = 0.0;  // ||drho/dt + div j||
  double dt = 0.0;
  double spacing = 0.0;

  std::array<double, 5> as_array() const { return {gauss, ampere, faraday, monopole, continuity}; }
};

/// Interior L2 residuals of the two Maxwell couples and charge continuity,
/// using symmetric two-frame time differences at the midpoint.
MaxwellResidualReport maxwell_residuals(const CartesianFieldFrame& frame,
                                        const CartesianFieldFrame& frame_dt);

struct MaxwellConvergence {
  MaxwellResidualReport coarse;
  MaxwellResidualReport fine;
  std::array<double, 5> orders{};  // log2(coarse/fine); exact-zero pairs report inf
};

/// Builds the four frames needed for one grid refinement (n -> 2n) and
/// returns both reports with per-residual convergence orders.
MaxwellConvergence maxwell_convergence(const SolitaryWaveSolution& sol, double v, double t,
                                       const CartesianGrid& grid);

struct MatterResidualReport {
  double masked_l2 = 0.0;
  double masked_fraction = 0.0;  // volume fraction below the floor
  double u_floor = 0.0;
};

/// Residual of box(u) + W'(u) + (j^2 - rho^2)/(q^2 u^3) = 0 from a three-frame
/// time stencil, masked where u < u_floor_rel * max(u).
MatterResidualReport matter_residual(const CartesianFieldFrame& frame_minus,
                                     const CartesianFieldFrame& frame,
                                     const CartesianFieldFrame& frame_plus,
                                     const NonlinearityModel& model, double q,
                                     double u_floor_rel = 1e-6);

/// chi(t, x1, x2, x3).
using GaugeFunction = std::function<double(double, double, double, double)>;

/// Applies psi -> psi e^{i q chi}, phi -> phi - dchi/dt, A -> A + grad chi.
/// u and rho are gauge invariant identically and are carried over; j, E, H are
/// recomputed from the transformed phase and potentials.
CartesianFieldFrame gauge_transform(const CartesianFieldFrame& frame, const GaugeFunction& chi);

struct FrameEnergy {
  Scalar3d density;
  double total = 0.0;
  double min_density = 0.0;
};

/// Field-theory energy density assembled from frame data; every term is a
/// square except W(u), so W >= 0 keeps it pointwise nonnegative.
FrameEnergy frame_energy(const CartesianFieldFrame& frame, const NonlinearityModel& model);

}  // namespace gw
