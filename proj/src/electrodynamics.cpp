#include "gaugewave/electrodynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gw {

CartesianGrid make_cartesian_grid(int n_per_axis, double half_width) {
  if (n_per_axis < 16) throw std::invalid_argument("CartesianGrid: n_per_axis must be >= 16");
  if (!(half_width > 0.0)) throw std::invalid_argument("CartesianGrid: half_width must be positive");
  CartesianGrid g;
  g.n_per_axis = n_per_axis;
  g.half_width = half_width;
  g.spacing = 2.0 * half_width / (n_per_axis - 1);
  return g;
}

namespace {

struct Stencil {
  int n;
  double inv2h;

  // Centered interior derivative, one-sided second order at the faces.
  template <typename F>
  double d(const F& f, int i, int j, int k, int axis) const {
    auto at = [&](int a, int b, int c) { return f(a, b, c); };
    int ia = i, ja = j, ka = k;
    int& m = axis == 0 ? ia : (axis == 1 ? ja : ka);
    const int orig = m;
    if (orig > 0 && orig < n - 1) {
      m = orig + 1;
      const double fp = at(ia, ja, ka);
      m = orig - 1;
      const double fm = at(ia, ja, ka);
      return (fp - fm) * inv2h;
    }
    if (orig == 0) {
      m = 0;
      const double f0 = at(ia, ja, ka);
      m = 1;
      const double f1 = at(ia, ja, ka);
      m = 2;
      const double f2 = at(ia, ja, ka);
      return (-3.0 * f0 + 4.0 * f1 - f2) * inv2h;
    }
    m = n - 1;
    const double f0 = at(ia, ja, ka);
    m = n - 2;
    const double f1 = at(ia, ja, ka);
    m = n - 3;
    const double f2 = at(ia, ja, ka);
    return (3.0 * f0 - 4.0 * f1 + f2) * inv2h;
  }
};

class FieldView {
 public:
  FieldView(const Scalar3d& v, int n) : v_(v), n_(static_cast<size_t>(n)) {}
  double operator()(int i, int j, int k) const {
    return v_[(static_cast<size_t>(k) * n_ + static_cast<size_t>(j)) * n_ + static_cast<size_t>(i)];
  }

 private:
  const Scalar3d& v_;
  size_t n_;
};

Scalar3d derivative(const Scalar3d& f, const CartesianGrid& g, int axis) {
  const int n = g.n_per_axis;
  Scalar3d out(f.size());
  Stencil st{n, 0.5 / g.spacing};
  FieldView view(f, n);
  size_t p = 0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i, ++p) out[p] = st.d(view, i, j, k, axis);
  return out;
}

Vector3d gradient(const Scalar3d& f, const CartesianGrid& g) {
  return {derivative(f, g, 0), derivative(f, g, 1), derivative(f, g, 2)};
}

Scalar3d divergence(const Vector3d& f, const CartesianGrid& g) {
  Scalar3d dx = derivative(f[0], g, 0);
  const Scalar3d dy = derivative(f[1], g, 1);
  const Scalar3d dz = derivative(f[2], g, 2);
  for (size_t p = 0; p < dx.size(); ++p) dx[p] += dy[p] + dz[p];
  return dx;
}

Vector3d curl(const Vector3d& f, const CartesianGrid& g) {
  Scalar3d dzy = derivative(f[2], g, 1);  // d f3 / d x2
  const Scalar3d dyz = derivative(f[1], g, 2);
  Scalar3d dxz = derivative(f[0], g, 2);
  const Scalar3d dzx = derivative(f[2], g, 0);
  Scalar3d dyx = derivative(f[1], g, 0);
  const Scalar3d dxy = derivative(f[0], g, 1);
  for (size_t p = 0; p < dzy.size(); ++p) {
    dzy[p] -= dyz[p];
    dxz[p] -= dzx[p];
    dyx[p] -= dxy[p];
  }
  return {std::move(dzy), std::move(dxz), std::move(dyx)};
}

/// Interior L2 norm (faces excluded, where the one-sided stencils live).
double interior_l2(const Scalar3d& f, const CartesianGrid& g) {
  const int n = g.n_per_axis;
  const double h3 = g.spacing * g.spacing * g.spacing;
  double s = 0.0;
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) {
        const size_t p = (static_cast<size_t>(k) * n + j) * n + i;
        s += f[p] * f[p];
      }
  return std::sqrt(s * h3);
}

double interior_l2(const Vector3d& f, const CartesianGrid& g) {
  const int n = g.n_per_axis;
  const double h3 = g.spacing * g.spacing * g.spacing;
  double s = 0.0;
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) {
        const size_t p = (static_cast<size_t>(k) * n + j) * n + i;
        s += f[0][p] * f[0][p] + f[1][p] * f[1][p] + f[2][p] * f[2][p];
      }
  return std::sqrt(s * h3);
}

void check_compatible(const CartesianFieldFrame& a, const CartesianFieldFrame& b) {
  if (a.grid.n_per_axis != b.grid.n_per_axis || a.grid.half_width != b.grid.half_width)
    throw std::invalid_argument("frames sampled on mismatched grids");
  if (a.q != b.q || a.velocity != b.velocity)
    throw std::invalid_argument("frames from mismatched configurations");
  if (!(b.time > a.time)) throw std::invalid_argument("frame_dt must be at a later time");
}

}  // namespace

CartesianFieldFrame boost(const SolitaryWaveSolution& sol, double v, double t,
                          const CartesianGrid& grid) {
  if (!(std::abs(v) < 1.0)) throw std::invalid_argument("boost: need |v| < 1");
  if (sol.u.size() == 0) throw std::invalid_argument("boost: empty solution");

  const double gamma = 1.0 / std::sqrt(1.0 - v * v);
  const double omega0 = sol.omega2 > 0.0 ? std::sqrt(sol.omega2) : 0.0;

  CartesianFieldFrame f;
  f.grid = grid;
  f.time = t;
  f.q = sol.q;
  f.velocity = v;
  f.omega0 = omega0;
  f.omega = gamma * omega0;
  f.k1 = gamma * omega0 * v;

  const int n = grid.n_per_axis;
  const size_t total = static_cast<size_t>(n) * n * n;
  f.psi_re.resize(total);
  f.psi_im.resize(total);
  f.u_amp.resize(total);
  f.phase.resize(total);
  f.phi_pot.resize(total);
  f.rho.resize(total);
  f.ds_dt.resize(total);
  f.du_dt.resize(total);
  for (int c = 0; c < 3; ++c) {
    f.a_pot[c].resize(total);
    f.e_field[c].resize(total);
    f.h_field[c].resize(total);
    f.j_current[c].resize(total);
    f.da_dt[c].resize(total);
  }

  CubicSpline spl_u(sol.u);
  CubicSpline spl_phi(sol.phi);
  const double q = sol.q;

  size_t p = 0;
  double face_max = 0.0, u_max = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x3 = f.coord(k);
    for (int j = 0; j < n; ++j) {
      const double x2 = f.coord(j);
      for (int i = 0; i < n; ++i, ++p) {
        const double x1 = f.coord(i);
        const double x1p = gamma * (x1 - v * t);
        const double rp = std::sqrt(x1p * x1p + x2 * x2 + x3 * x3);

        const double u = spl_u.eval(rp);
        const double phi_r = omega0 * spl_phi.eval(rp);  // phi = omega0 * Phi
        const double s_phase = f.k1 * x1 - f.omega * t;

        f.u_amp[p] = u;
        f.phase[p] = s_phase;
        f.psi_re[p] = u * std::cos(s_phase);
        f.psi_im[p] = u * std::sin(s_phase);
        f.phi_pot[p] = gamma * phi_r;
        f.a_pot[0][p] = gamma * phi_r * v;
        f.a_pot[1][p] = 0.0;
        f.a_pot[2][p] = 0.0;

        // Chain rule through x1' for the analytic time derivatives.
        const double drp_dt = rp > 1e-12 ? (x1p / rp) * (-gamma * v) : 0.0;
        const double dphi_dt = omega0 * spl_phi.deriv(rp) * drp_dt;
        f.du_dt[p] = spl_u.deriv(rp) * drp_dt;
        f.ds_dt[p] = -f.omega;
        f.da_dt[0][p] = gamma * v * dphi_dt;
        f.da_dt[1][p] = 0.0;
        f.da_dt[2][p] = 0.0;

        const double charge_factor = -(f.ds_dt[p] + q * f.phi_pot[p]) * q * u * u;
        f.rho[p] = charge_factor;
        // grad S = (k1, 0, 0) analytically at construction.
        f.j_current[0][p] = (f.k1 - q * f.a_pot[0][p]) * q * u * u;
        f.j_current[1][p] = 0.0;
        f.j_current[2][p] = 0.0;

        u_max = std::max(u_max, std::abs(u));
        if (i == 0 || i == n - 1 || j == 0 || j == n - 1 || k == 0 || k == n - 1)
          face_max = std::max(face_max, std::abs(u));
      }
    }
  }
  f.decay_warning = u_max > 0.0 && face_max > 1e-2 * u_max;

  Vector3d grad_phi = gradient(f.phi_pot, grid);
  Vector3d curl_a = curl(f.a_pot, grid);
  for (int c = 0; c < 3; ++c) {
    for (size_t m = 0; m < total; ++m)
      f.e_field[c][m] = -f.da_dt[c][m] - grad_phi[c][m];
    f.h_field[c] = std::move(curl_a[c]);
  }
  return f;
}

MaxwellResidualReport maxwell_residuals(const CartesianFieldFrame& a,
                                        const CartesianFieldFrame& b) {
  check_compatible(a, b);
  const CartesianGrid& g = a.grid;
  const double dt = b.time - a.time;
  const size_t total = a.rho.size();

  MaxwellResidualReport rep;
  rep.dt = dt;
  rep.spacing = g.spacing;

  {  // Gauss law, time-local: worst of the two frames.
    Scalar3d da = divergence(a.e_field, g);
    Scalar3d db = divergence(b.e_field, g);
    for (size_t p = 0; p < total; ++p) {
      da[p] -= a.rho[p];
      db[p] -= b.rho[p];
    }
    rep.gauss = std::max(interior_l2(da, g), interior_l2(db, g));
  }
  {  // Ampere at the midpoint: dE/dt - avg(curl H - j).
    Vector3d ca = curl(a.h_field, g);
    Vector3d cb = curl(b.h_field, g);
    Vector3d res;
    for (int c = 0; c < 3; ++c) {
      res[c].resize(total);
      for (size_t p = 0; p < total; ++p)
        res[c][p] = (b.e_field[c][p] - a.e_field[c][p]) / dt -
                    0.5 * (ca[c][p] + cb[c][p]) +
                    0.5 * (a.j_current[c][p] + b.j_current[c][p]);
    }
    rep.ampere = interior_l2(res, g);
  }
  {  // Faraday at the midpoint.
    Vector3d ca = curl(a.e_field, g);
    Vector3d cb = curl(b.e_field, g);
    Vector3d res;
    for (int c = 0; c < 3; ++c) {
      res[c].resize(total);
      for (size_t p = 0; p < total; ++p)
        res[c][p] = (b.h_field[c][p] - a.h_field[c][p]) / dt + 0.5 * (ca[c][p] + cb[c][p]);
    }
    rep.faraday = interior_l2(res, g);
  }
  {
    Scalar3d da = divergence(a.h_field, g);
    Scalar3d db = divergence(b.h_field, g);
    rep.monopole = std::max(interior_l2(da, g), interior_l2(db, g));
  }
  {  // Continuity at the midpoint.
    Scalar3d da = divergence(a.j_current, g);
    Scalar3d db = divergence(b.j_current, g);
    Scalar3d res(total);
    for (size_t p = 0; p < total; ++p)
      res[p] = (b.rho[p] - a.rho[p]) / dt + 0.5 * (da[p] + db[p]);
    rep.continuity = interior_l2(res, g);
  }
  return rep;
}

MaxwellConvergence maxwell_convergence(const SolitaryWaveSolution& sol, double v, double t,
                                       const CartesianGrid& grid) {
  MaxwellConvergence out;
  {
    const double dt = grid.spacing / 4.0;
    CartesianFieldFrame f1 = boost(sol, v, t, grid);
    CartesianFieldFrame f2 = boost(sol, v, t + dt, grid);
    out.coarse = maxwell_residuals(f1, f2);
  }
  CartesianGrid fine = make_cartesian_grid(2 * grid.n_per_axis, grid.half_width);
  {
    const double dt = fine.spacing / 4.0;
    CartesianFieldFrame f1 = boost(sol, v, t, fine);
    CartesianFieldFrame f2 = boost(sol, v, t + dt, fine);
    out.fine = maxwell_residuals(f1, f2);
  }
  const auto rc = out.coarse.as_array();
  const auto rf = out.fine.as_array();
  for (int i = 0; i < 5; ++i) {
    const double floor = 1e-12 * std::max(1.0, rc[i]);
    if (rc[i] <= floor && rf[i] <= floor) {
      out.orders[static_cast<size_t>(i)] = std::numeric_limits<double>::infinity();
    } else {
      out.orders[static_cast<size_t>(i)] = std::log2(rc[i] / rf[i]);
    }
  }
  return out;
}

MatterResidualReport matter_residual(const CartesianFieldFrame& fm,
                                     const CartesianFieldFrame& f0,
                                     const CartesianFieldFrame& fp,
                                     const NonlinearityModel& model, double q,
                                     double u_floor_rel) {
  if (!(q > 0.0)) throw std::invalid_argument("matter_residual: requires q > 0");
  check_compatible(fm, f0);
  check_compatible(f0, fp);
  const double dtm = f0.time - fm.time;
  const double dtp = fp.time - f0.time;
  if (std::abs(dtm - dtp) > 1e-12 * dtp)
    throw std::invalid_argument("matter_residual: frames must be equally spaced in time");

  const CartesianGrid& g = f0.grid;
  const int n = g.n_per_axis;
  const double h2 = g.spacing * g.spacing;
  const double dt2 = dtp * dtp;

  double u_max = 0.0;
  for (double u : f0.u_amp) u_max = std::max(u_max, std::abs(u));
  const double floor = u_floor_rel * u_max;

  double s = 0.0;
  size_t masked = 0, interior_count = 0;
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) {
        const size_t p = f0.idx(i, j, k);
        ++interior_count;
        const double u = f0.u_amp[p];
        if (u < floor) {
          ++masked;
          continue;
        }
        const double lap =
            (f0.u_amp[f0.idx(i + 1, j, k)] + f0.u_amp[f0.idx(i - 1, j, k)] +
             f0.u_amp[f0.idx(i, j + 1, k)] + f0.u_amp[f0.idx(i, j - 1, k)] +
             f0.u_amp[f0.idx(i, j, k + 1)] + f0.u_amp[f0.idx(i, j, k - 1)] - 6.0 * u) /
            h2;
        const double utt = (fp.u_amp[p] - 2.0 * u + fm.u_amp[p]) / dt2;
        const double j2 = f0.j_current[0][p] * f0.j_current[0][p] +
                          f0.j_current[1][p] * f0.j_current[1][p] +
                          f0.j_current[2][p] * f0.j_current[2][p];
        const double rho2 = f0.rho[p] * f0.rho[p];
        const double res = utt - lap + model.eval(u).first + (j2 - rho2) / (q * q * u * u * u);
        s += res * res;
      }

  MatterResidualReport rep;
  rep.u_floor = floor;
  rep.masked_fraction = interior_count > 0
                            ? static_cast<double>(masked) / static_cast<double>(interior_count)
                            : 0.0;
  const double h3 = g.spacing * g.spacing * g.spacing;
  rep.masked_l2 = std::sqrt(s * h3);
  return rep;
}

CartesianFieldFrame gauge_transform(const CartesianFieldFrame& frame, const GaugeFunction& chi) {
  CartesianFieldFrame out = frame;  // u, rho, du_dt carried over (gauge invariant)
  const CartesianGrid& g = frame.grid;
  const int n = g.n_per_axis;
  const size_t total = frame.rho.size();
  const double q = frame.q;
  const double t = frame.time;
  const double dt = g.spacing / 4.0;

  Scalar3d chi_now(total), chi_t(total);
  size_t p = 0;
  for (int k = 0; k < n; ++k) {
    const double x3 = frame.coord(k);
    for (int j = 0; j < n; ++j) {
      const double x2 = frame.coord(j);
      for (int i = 0; i < n; ++i, ++p) {
        const double x1 = frame.coord(i);
        chi_now[p] = chi(t, x1, x2, x3);
        chi_t[p] = (chi(t + dt, x1, x2, x3) - chi(t - dt, x1, x2, x3)) / (2.0 * dt);
      }
    }
  }

  Vector3d grad_chi = gradient(chi_now, g);
  Vector3d grad_chi_t = gradient(chi_t, g);

  for (size_t m = 0; m < total; ++m) {
    out.phase[m] = frame.phase[m] + q * chi_now[m];
    out.psi_re[m] = frame.u_amp[m] * std::cos(out.phase[m]);
    out.psi_im[m] = frame.u_amp[m] * std::sin(out.phase[m]);
    out.phi_pot[m] = frame.phi_pot[m] - chi_t[m];
    out.ds_dt[m] = frame.ds_dt[m] + q * chi_t[m];
  }
  for (int c = 0; c < 3; ++c)
    for (size_t m = 0; m < total; ++m) {
      out.a_pot[c][m] = frame.a_pot[c][m] + grad_chi[c][m];
      out.da_dt[c][m] = frame.da_dt[c][m] + grad_chi_t[c][m];
    }

  // Recompute the derived fields from the transformed phase and potentials.
  Vector3d grad_phi = gradient(out.phi_pot, g);
  Vector3d curl_a = curl(out.a_pot, g);
  Vector3d grad_s = gradient(out.phase, g);
  for (int c = 0; c < 3; ++c) {
    for (size_t m = 0; m < total; ++m) {
      out.e_field[c][m] = -out.da_dt[c][m] - grad_phi[c][m];
      const double u = out.u_amp[m];
      out.j_current[c][m] = (grad_s[c][m] - q * out.a_pot[c][m]) * q * u * u;
    }
    out.h_field[c] = std::move(curl_a[c]);
  }
  return out;
}

FrameEnergy frame_energy(const CartesianFieldFrame& frame, const NonlinearityModel& model) {
  const CartesianGrid& g = frame.grid;
  const size_t total = frame.rho.size();
  const double q = frame.q;

  Vector3d grad_u = gradient(frame.u_amp, g);
  Vector3d grad_s = gradient(frame.phase, g);

  FrameEnergy out;
  out.density.resize(total);
  out.min_density = 0.0;
  double sum = 0.0;
  for (size_t p = 0; p < total; ++p) {
    const double u = frame.u_amp[p];
    const double gu2 = grad_u[0][p] * grad_u[0][p] + grad_u[1][p] * grad_u[1][p] +
                       grad_u[2][p] * grad_u[2][p];
    const double dtS = frame.ds_dt[p] + q * frame.phi_pot[p];
    double gs2 = 0.0, e2 = 0.0, h2v = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double gsc = grad_s[c][p] - q * frame.a_pot[c][p];
      gs2 += gsc * gsc;
      e2 += frame.e_field[c][p] * frame.e_field[c][p];
      h2v += frame.h_field[c][p] * frame.h_field[c][p];
    }
    const double w = model.eval(u).value;
    // (rho^2 + j^2)/(2 q^2 u^2) written division-free through the phase.
    const double d = 0.5 * frame.du_dt[p] * frame.du_dt[p] + 0.5 * gu2 + w +
                     0.5 * u * u * (dtS * dtS + gs2) + 0.5 * (e2 + h2v);
    out.density[p] = d;
    out.min_density = std::min(out.min_density, d);
    sum += d;
  }
  out.total = sum * g.spacing * g.spacing * g.spacing;
  return out;
}

}  // namespace gw
