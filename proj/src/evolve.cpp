#include "hetero/evolve.hpp"

#include <cmath>
#include <sstream>

#include "hetero/errors.hpp"
#include "hetero/linalg.hpp"

namespace hetero {

void SchemeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ConfigError("scheme.dt must be positive");
  if (dt > 0.25)
    throw ConfigError("scheme.dt exceeds the stability guard 0.25");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw ConfigError("scheme.theta must lie in [0, 1]");
  if (!(t_max > 0.0) || !std::isfinite(t_max))
    throw ConfigError("scheme.t_max must be positive");
  if (store_stride < 1)
    throw ConfigError("scheme.store_stride must be >= 1");
  if (!(steady_tol >= 0.0))
    throw ConfigError("scheme.steady_tol must be >= 0");
  if (!(blowup_threshold > 0.0))
    throw ConfigError("scheme.blowup_threshold must be positive");
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::reached_t_max: return "reached_t_max";
    case Termination::steady_state: return "steady_state";
    case Termination::blow_up: return "blow_up";
  }
  return "unknown";
}

const TrajectorySlice* Trajectory::slice_at_step(long s) const {
  for (const auto& sl : slices)
    if (sl.step == s) return &sl;
  return nullptr;
}

// Implicit-diffusion matrix I - theta dt D2 on the interior nodes.
static Tridiagonal diffusion_matrix(int n, double h, double dt, double theta) {
  const double r = theta * dt / (h * h);
  Tridiagonal m = Tridiagonal::zeros(n - 2);
  for (int i = 0; i < n - 2; ++i) m.diag[i] = 1.0 + 2.0 * r;
  for (int i = 0; i < n - 3; ++i) {
    m.lower[i] = -r;
    m.upper[i] = -r;
  }
  return m;
}

GridFunction step(const GridFunction& u, const GridFunction& phi,
                  const SchemeConfig& scheme) {
  scheme.validate();
  require_same_grid(u, phi);
  require_finite(u, "step input");
  const int n = u.size();
  const double h = u.grid->spacing();
  const double ih2 = 1.0 / (h * h);
  const double dt = scheme.dt, th = scheme.theta;

  std::vector<double> rhs(n - 2);
  for (int i = 1; i < n - 1; ++i) {
    const double d2 = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * ih2;
    rhs[i - 1] = u[i] + dt * ((1.0 - th) * d2 - u[i] * u[i] + phi[i]);
  }
  // Boundary values of the new iterate equal u's own; fold the implicit
  // coupling into the right-hand side.
  rhs.front() += th * dt * ih2 * u[0];
  rhs.back() += th * dt * ih2 * u[n - 1];

  const Tridiagonal m = diffusion_matrix(n, h, dt, th);
  std::vector<double> xin = solve_tridiagonal(m, rhs);

  GridFunction out{u.grid, std::vector<double>(n)};
  out.values[0] = u[0];
  out.values[n - 1] = u[n - 1];
  for (int i = 1; i < n - 1; ++i) out.values[i] = xin[i - 1];
  return out;
}

Trajectory evolve(const GridFunction& U, const GridFunction& phi,
                  const SchemeConfig& scheme, double t0, long store_offset,
                  long store_offset2) {
  scheme.validate();
  require_same_grid(U, phi);
  require_finite(U, "initial condition");
  require_finite(first_difference(U), "initial first derivative");
  require_finite(second_difference(U), "initial second derivative");
  if (store_offset < 0 || store_offset >= scheme.store_stride)
    throw ConfigError("store_offset must lie in [0, store_stride)");
  if (store_offset2 >= scheme.store_stride)
    throw ConfigError("store_offset2 must lie below store_stride");

  const int n = U.size();
  const double h = U.grid->spacing();
  const double ih2 = 1.0 / (h * h);
  const double dt = scheme.dt, th = scheme.theta;
  const int center = U.grid->center_index();
  const long n_steps = static_cast<long>(std::ceil(scheme.t_max / dt - 1e-9));

  Trajectory traj;
  traj.scheme = scheme;
  traj.t0 = t0;
  traj.center_trace.reserve(n_steps + 1);

  auto store = [&](long n_step, const GridFunction& u) {
    if (!traj.slices.empty() && traj.slices.back().step == n_step) return;
    traj.slices.push_back({t0 + n_step * dt, n_step, u});
  };
  auto on_lattice = [&](long n_step) {
    const long r = n_step % scheme.store_stride;
    return r == store_offset || (store_offset2 >= 0 && r == store_offset2);
  };

  // Interior residual sup |D2 u - u^2 + phi|: both the steady detector and
  // the time derivative estimate (boundary nodes are frozen, u_t = 0 there).
  auto residual_sup = [&](const GridFunction& u) {
    double m = 0.0;
    for (int i = 1; i < n - 1; ++i) {
      const double d2 = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * ih2;
      const double r = std::abs(d2 - u[i] * u[i] + phi[i]);
      if (r > m) m = r;
    }
    return m;
  };

  GridFunction u_cur = U;
  traj.center_trace.push_back(u_cur[center]);
  store(0, u_cur);

  if (scheme.steady_tol > 0.0 && residual_sup(u_cur) < scheme.steady_tol) {
    traj.termination = Termination::steady_state;
    traj.termination_time = t0;
    return traj;
  }

  const TridiagonalFactor M(diffusion_matrix(n, h, dt, th));
  std::vector<double> rhs(n - 2);
  // Reaction history for the two-step extrapolation.
  std::vector<double> R_prev(n), R_cur(n);
  for (int i = 0; i < n; ++i) R_prev[i] = -U[i] * U[i] + phi[i];

  GridFunction u_next{U.grid, std::vector<double>(n)};
  u_next.values[0] = U[0];
  u_next.values[n - 1] = U[n - 1];

  for (long nstep = 1; nstep <= n_steps; ++nstep) {
    const bool startup = (nstep == 1);
    for (int i = 0; i < n; ++i) R_cur[i] = -u_cur[i] * u_cur[i] + phi[i];
    for (int i = 1; i < n - 1; ++i) {
      const double d2 =
          (u_cur[i - 1] - 2.0 * u_cur[i] + u_cur[i + 1]) * ih2;
      const double reaction =
          startup ? R_cur[i] : 1.5 * R_cur[i] - 0.5 * R_prev[i];
      rhs[i - 1] = u_cur[i] + dt * ((1.0 - th) * d2 + reaction);
    }
    rhs.front() += th * dt * ih2 * U[0];
    rhs.back() += th * dt * ih2 * U[n - 1];
    std::vector<double> xin = M.solve(rhs);
    for (int i = 1; i < n - 1; ++i) u_next.values[i] = xin[i - 1];
    R_prev.swap(R_cur);

    // Blow-up: record the last finite state and stop.
    double sup = 0.0;
    bool finite = true;
    for (double v : u_next.values) {
      if (!std::isfinite(v)) { finite = false; break; }
      sup = std::max(sup, std::abs(v));
    }
    if (!finite || sup > scheme.blowup_threshold) {
      traj.termination = Termination::blow_up;
      traj.termination_time = t0 + nstep * dt;
      if (finite) {
        traj.center_trace.push_back(u_next[center]);
        store(nstep, u_next);
      } else {
        store(nstep - 1, u_cur);
      }
      traj.steps_taken = nstep;
      return traj;
    }

    u_cur.values.swap(u_next.values);
    traj.center_trace.push_back(u_cur[center]);
    if (on_lattice(nstep)) store(nstep, u_cur);

    if (scheme.steady_tol > 0.0 && residual_sup(u_cur) < scheme.steady_tol) {
      traj.termination = Termination::steady_state;
      traj.termination_time = t0 + nstep * dt;
      store(nstep, u_cur);
      traj.steps_taken = nstep;
      return traj;
    }
  }

  traj.termination = Termination::reached_t_max;
  traj.termination_time = t0 + n_steps * dt;
  store(n_steps, u_cur);
  traj.steps_taken = n_steps;
  return traj;
}

}  // namespace hetero
