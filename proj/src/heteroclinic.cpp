#include "hetero/heteroclinic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hetero/errors.hpp"

namespace hetero {

void Window::validate() const {
  if (!(t_lo < t_hi) || !(x_lo < x_hi))
    throw ConfigError("window must satisfy t_lo < t_hi and x_lo < x_hi");
}

double family_parameter(int k) {
  if (k < 0) throw ConfigError("run index k must be >= 0");
  return std::ldexp(1.0, -k - 1);
}

GridFunction build_initial(int k, const EquilibriumPair& pair,
                           const std::vector<FamilyMember>& family) {
  const double c = family_parameter(k);
  const FamilyMember* member = nullptr;
  for (const auto& m : family)
    if (std::abs(m.c - c) < 1e-12) member = &m;
  if (!member) {
    std::ostringstream msg;
    msg << "family member for c = " << c << " (k = " << k << ") is missing";
    throw NumericalError(msg.str());
  }
  const GridFunction& g = member->g_c.f;
  const GridFunction& fp = pair.f_plus.f;
  require_same_grid(g, fp);
  GridFunction U{g.grid, std::vector<double>(g.size())};
  for (int i = 0; i < g.size(); ++i)
    U.values[i] = (1.0 - c) * g[i] + c * fp[i];
  return U;
}

AnchorMatch match_anchor(const GridFunction& U_k, double a_star,
                         const GridFunction& phi, const SchemeConfig& scheme,
                         double search_horizon, double post_anchor_horizon) {
  scheme.validate();
  const double dt = scheme.dt;

  // Phase 1: march in chunks, watching the per-step center trace for the
  // first upward crossing. Restarting between chunks perturbs the two-step
  // integrator by O(dt^2), far below the anchor tolerance.
  const double chunk_t = 40.0;
  GridFunction u = U_k;
  long base_step = 0;
  double sigma = -1.0;
  bool multiple = false;
  double prev = U_k[U_k.grid->center_index()];
  bool found = false;

  while (!found) {
    if (base_step * dt >= search_horizon) {
      std::ostringstream msg;
      msg << "anchor value " << a_star << " not crossed within the search "
          << "horizon " << search_horizon;
      throw NumericalError(msg.str());
    }
    SchemeConfig chunk = scheme;
    chunk.t_max = chunk_t;
    chunk.store_stride = 1000000;  // only the center trace matters here
    Trajectory part = evolve(u, phi, chunk);
    const auto& trace = part.center_trace;
    for (std::size_t j = 1; j < trace.size(); ++j) {
      const double cur = trace[j];
      if (!found && prev < a_star && cur >= a_star) {
        const double frac = (a_star - prev) / (cur - prev);
        sigma = (base_step + static_cast<long>(j) - 1 + frac) * dt;
        found = true;
      } else if (found && (prev - a_star) * (cur - a_star) < 0.0) {
        multiple = true;  // re-crossing within the continued margin
      }
      prev = cur;
    }
    if (!found) {
      if (part.termination == Termination::steady_state)
        throw NumericalError("anchor unreachable: run reached steady state "
                             "before crossing the anchor value");
      if (part.termination == Termination::blow_up)
        throw NumericalError("anchor unreachable: run blew up before "
                             "crossing the anchor value");
    }
    base_step += part.steps_taken;
    u = part.final_slice().u;
  }

  // Phase 2: one continuous run storing the two step classes that bracket
  // the (fractional) anchor step. Each shifted lattice slice is the linear
  // blend of the bracketing steps, so runs align in time to O(dt^2) rather
  // than the rounding floor |u_t| dt/2 — the deltas between deep runs sit
  // below that floor and would otherwise be noise.
  const long m_f = static_cast<long>(std::floor(sigma / dt));
  const double frac = sigma / dt - m_f;
  SchemeConfig full = scheme;
  full.t_max = (m_f + 1) * dt + post_anchor_horizon + 2.0 * dt;
  full.steady_tol = 0.0;  // must not stop short of the requested horizon
  const long stride = scheme.store_stride;
  const long off_a = m_f % stride;
  const long off_b = (m_f + 1) % stride;
  Trajectory raw = evolve(U_k, phi, full, 0.0, off_a,
                          off_b == off_a ? -1 : off_b);

  Trajectory traj;
  traj.scheme = raw.scheme;
  traj.termination = raw.termination;
  traj.steps_taken = raw.steps_taken;
  traj.t0 = -sigma;
  traj.termination_time = raw.termination_time - sigma;
  traj.center_trace = std::move(raw.center_trace);

  // Exact initial state at its true shifted time; off the step lattice
  // whenever frac != 0, which the window scans detect and skip. (With
  // frac = 0 the first blended slice below IS the initial state.)
  if (frac > 1e-9)
    traj.slices.push_back({-sigma, -m_f - 1, raw.slices.front().u});

  for (const auto& sl : raw.slices) {
    const long shifted = sl.step - m_f;
    if (((shifted % stride) + stride) % stride != 0) continue;
    const TrajectorySlice* partner = raw.slice_at_step(sl.step + 1);
    if (!partner) continue;  // trailing edge without a bracket
    GridFunction u{sl.u.grid, std::vector<double>(sl.u.size())};
    for (int i = 0; i < sl.u.size(); ++i)
      u.values[i] = (1.0 - frac) * sl.u[i] + frac * partner->u[i];
    traj.slices.push_back({shifted * dt, shifted, std::move(u)});
  }

  const TrajectorySlice* anchor = traj.slice_at_step(0);
  if (!anchor)
    throw NumericalError("anchor slice missing after the lattice-aligned "
                         "rerun");
  AnchorMatch out;
  out.sigma = sigma;
  out.shift_steps = m_f;
  out.multiple_crossings = multiple;
  out.anchor_error =
      std::abs(anchor->u[anchor->u.grid->center_index()] - a_star);
  out.trajectory = std::move(traj);
  return out;
}

// Stored steps of a run restricted to the window's time range, lattice only.
// A slice is on the lattice when its step is a stride multiple AND its time
// is the step time — the anchored runs carry one off-lattice slice (the
// exact initial state at t = -sigma) that must not enter lattice scans.
static bool on_lattice(const TrajectorySlice& sl, const SchemeConfig& sc) {
  return sl.step % sc.store_stride == 0 &&
         std::abs(sl.t - sl.step * sc.dt) < 0.01 * sc.dt;
}

static std::vector<long> window_steps(const Trajectory& traj,
                                      const Window& w) {
  std::vector<long> steps;
  for (const auto& sl : traj.slices) {
    if (!on_lattice(sl, traj.scheme)) continue;
    if (sl.t >= w.t_lo - 1e-12 && sl.t <= w.t_hi + 1e-12)
      steps.push_back(sl.step);
  }
  return steps;
}

HeteroclinicBundle assemble(std::vector<HeteroclinicRun> runs,
                            const Window& window, double a_star) {
  window.validate();
  if (runs.size() < 3)
    throw NumericalError("assemble requires at least three runs");
  std::sort(runs.begin(), runs.end(),
            [](const HeteroclinicRun& a, const HeteroclinicRun& b) {
              return a.k < b.k;
            });

  HeteroclinicBundle bundle;
  bundle.a_star = a_star;
  bundle.window = window;

  // Runs whose shifted trajectories cover the whole time range.
  std::vector<const HeteroclinicRun*> covering;
  for (const auto& r : runs) {
    const double start = r.trajectory.slices.front().t;
    const double end = r.trajectory.slices.back().t;
    if (start <= window.t_lo + 1e-12 && end >= window.t_hi - 1e-12)
      covering.push_back(&r);
  }
  if (covering.size() < 2)
    throw NumericalError("window not covered by at least two runs");

  for (const auto* r : covering) bundle.included_ks.push_back(r->k);

  // Window x-range as node indices (all runs share the grid).
  const GridPtr grid = covering.front()->trajectory.slices.front().u.grid;
  std::vector<int> xi;
  for (int i = 0; i < grid->node_count(); ++i)
    if (grid->node(i) >= window.x_lo - 1e-12 &&
        grid->node(i) <= window.x_hi + 1e-12)
      xi.push_back(i);

  for (std::size_t p = 0; p + 1 < covering.size(); ++p) {
    const Trajectory& ta = covering[p]->trajectory;
    const Trajectory& tb = covering[p + 1]->trajectory;
    std::vector<long> sa = window_steps(ta, window);
    std::vector<long> sb = window_steps(tb, window);
    std::vector<long> common;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::back_inserter(common));
    if (common.empty())
      throw NumericalError("no common lattice slices between consecutive "
                           "runs inside the window");
    double delta = 0.0;
    for (long s : common) {
      const TrajectorySlice* ua = ta.slice_at_step(s);
      const TrajectorySlice* ub = tb.slice_at_step(s);
      for (int i : xi)
        delta = std::max(delta, std::abs(ub->u[i] - ua->u[i]));
    }
    bundle.deltas.push_back(delta);
  }

  // Deepest covering run, slices restricted to the window's time range.
  const HeteroclinicRun* deep = covering.back();
  Trajectory lim;
  lim.scheme = deep->trajectory.scheme;
  lim.termination = deep->trajectory.termination;
  lim.termination_time = deep->trajectory.termination_time;
  lim.t0 = window.t_lo;
  for (const auto& sl : deep->trajectory.slices)
    if (sl.t >= window.t_lo - 1e-12 && sl.t <= window.t_hi + 1e-12)
      lim.slices.push_back(sl);
  bundle.limit_estimate = std::move(lim);
  bundle.runs = std::move(runs);
  return bundle;
}

bool verify_not_equilibrium(const HeteroclinicBundle& bundle,
                            const EquilibriumPair& pair, double anchor_tol) {
  const int c = pair.f_minus.f.grid->center_index();
  const double lo = pair.f_minus.f[c];
  const double hi = pair.f_plus.f[c];
  if (2.0 * anchor_tol >= std::abs(hi - lo)) return false;  // unresolvable
  return std::abs(bundle.a_star - lo) > anchor_tol &&
         std::abs(bundle.a_star - hi) > anchor_tol;
}

double window_pde_residual(const Trajectory& traj, const GridFunction& phi,
                           const Window& window) {
  const GridPtr grid = phi.grid;
  const double ih2 = 1.0 / (grid->spacing() * grid->spacing());
  // Lattice slices inside the window, uniformly spaced in time.
  std::vector<const TrajectorySlice*> sl;
  for (const auto& s : traj.slices) {
    if (!on_lattice(s, traj.scheme)) continue;
    if (s.t >= window.t_lo - 1e-12 && s.t <= window.t_hi + 1e-12)
      sl.push_back(&s);
  }
  if (sl.size() < 3)
    throw NumericalError("window holds fewer than three lattice slices");
  const double dtau = sl[1]->t - sl[0]->t;
  double res = 0.0;
  for (std::size_t j = 1; j + 1 < sl.size(); ++j) {
    for (int i = 1; i < grid->node_count() - 1; ++i) {
      const double x = grid->node(i);
      if (x <= window.x_lo || x >= window.x_hi) continue;
      const GridFunction& u = sl[j]->u;
      const double ut = (sl[j + 1]->u[i] - sl[j - 1]->u[i]) / (2.0 * dtau);
      const double uxx = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * ih2;
      res = std::max(res, std::abs(ut - uxx + u[i] * u[i] - phi[i]));
    }
  }
  return res;
}

double window_sup_distance(const Trajectory& traj, const GridFunction& g,
                           const Window& window, double at_time) {
  const TrajectorySlice* best = nullptr;
  double best_gap = 1e300;
  for (const auto& s : traj.slices) {
    const double gap = std::abs(s.t - at_time);
    if (gap < best_gap) {
      best_gap = gap;
      best = &s;
    }
  }
  if (!best) throw NumericalError("trajectory has no slices");
  double d = 0.0;
  const GridPtr grid = g.grid;
  for (int i = 0; i < grid->node_count(); ++i) {
    const double x = grid->node(i);
    if (x < window.x_lo - 1e-12 || x > window.x_hi + 1e-12) continue;
    d = std::max(d, std::abs(best->u[i] - g[i]));
  }
  return d;
}

HeteroclinicBundle run_construction(const GridFunction& phi,
                                    const EquilibriumPair& pair,
                                    const std::vector<FamilyMember>& family,
                                    int k_max, const Window& window,
                                    const SchemeConfig& scheme,
                                    double search_horizon) {
  window.validate();
  const double post = window.t_hi + 1.0;
  const int center = phi.grid->center_index();

  // The family may be truncated below some c (continuation fold), and c_k
  // decreases in k, so the missing members form a prefix of the k range. The
  // first feasible run takes over the anchor-defining role: any center value
  // strictly between the equilibria works as long as all deeper runs reach
  // it, and deeper runs start lower, so they all cross it on the way up.
  const auto has_member = [&family](int k) {
    const double c = family_parameter(k);
    for (const auto& m : family)
      if (std::abs(m.c - c) < 1e-12) return true;
    return false;
  };

  std::vector<int> skipped;
  int k0 = 0;
  while (k0 <= k_max && !has_member(k0)) skipped.push_back(k0++);
  if (k0 > k_max)
    throw NumericalError("no family member exists for any requested k");

  std::vector<HeteroclinicRun> runs;

  // First feasible run defines the anchor: its center value at its own t = 0.
  GridFunction U0 = build_initial(k0, pair, family);
  const double a_star = U0[center];
  {
    SchemeConfig s0 = scheme;
    s0.t_max = post;
    s0.steady_tol = 0.0;
    HeteroclinicRun r;
    r.k = k0;
    r.c_k = family_parameter(k0);
    r.U_k = U0;
    r.sigma_k = 0.0;
    r.T_k = 0.0;
    r.shift_steps = 0;
    r.anchor_error = 0.0;
    r.trajectory = evolve(U0, phi, s0);
    runs.push_back(std::move(r));
  }

  for (int k = k0 + 1; k <= k_max; ++k) {
    GridFunction U = build_initial(k, pair, family);
    AnchorMatch m = match_anchor(U, a_star, phi, scheme, search_horizon, post);
    HeteroclinicRun r;
    r.k = k;
    r.c_k = family_parameter(k);
    r.U_k = std::move(U);
    r.sigma_k = m.sigma;
    r.T_k = -m.sigma;
    r.shift_steps = m.shift_steps;
    r.multiple_crossings = m.multiple_crossings;
    r.anchor_error = m.anchor_error;
    r.trajectory = std::move(m.trajectory);
    runs.push_back(std::move(r));
  }

  HeteroclinicBundle bundle = assemble(std::move(runs), window, a_star);
  bundle.skipped_ks = std::move(skipped);
  return bundle;
}

}  // namespace hetero
