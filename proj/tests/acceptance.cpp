// Acceptance gate for the laboratory: every top-level numerical property
// checked at desk scale (L = 30, N = 1201, dt = 1e-3), one verdict line per
// criterion with the measured quantities inline. The exit status is the
// number of failed criteria, so the test harness stays red while any
// property is out of tolerance — failures here are findings, not noise, and
// the measured values in the output are the starting point for a diagnosis.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hetero/analysis.hpp"
#include "hetero/artifacts.hpp"
#include "hetero/config.hpp"
#include "hetero/duhamel.hpp"
#include "hetero/equilibria.hpp"
#include "hetero/errors.hpp"
#include "hetero/evolve.hpp"
#include "hetero/forcing.hpp"
#include "hetero/grid.hpp"
#include "hetero/heteroclinic.hpp"

using namespace hetero;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void verdict(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %-24s %s\n", ok ? "PASS" : "FAIL", id, name,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void note(const std::string& line) {
  std::printf("          %s\n", line.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Lab {
  GridPtr grid;
  GridFunction phi;
  EquilibriumPair pair;
  PerturbationDirection dir;
  std::vector<FamilyMember> family;  // default schedule 0, 0.1, ..., 0.5
  double action_plus = 0.0;
};

// ---------------------------------------------------------------- 1
void criterion_equilibria(const Lab& lab) {
  const double rm = lab.pair.f_minus.residual_sup;
  const double rp = lab.pair.f_plus.residual_sup;
  const double tm = tail_relative_error(lab.pair.f_minus.f, 20.0, 30.0);
  const double tp = tail_relative_error(lab.pair.f_plus.f, 20.0, 30.0);
  const bool ok = rm < 1e-8 && rp < 1e-8 && lab.pair.min_gap > 0.0 &&
                  tm < 0.10 && tp < 0.10;
  std::ostringstream d;
  d << "residuals " << fmt(rm) << "/" << fmt(rp) << ", min gap "
    << fmt(lab.pair.min_gap) << ", tail rel err on [20,30] " << fmt(tm) << "/"
    << fmt(tp) << " (need < 0.1)";
  verdict(1, "equilibrium pair", ok, d.str());
  if (tm >= 0.10)
    note("the lower solution's next tail order is C/|x|^3 with C ~ -32.6, "
         "so 10% needs |x| > 54; at x = 20 the deviation is ~27%");
}

// ---------------------------------------------------------------- 2
void criterion_family(const Lab& lab) {
  const std::vector<double> wanted = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  const auto& fam = lab.family;
  bool residuals_ok = true, ordered_ok = true;
  for (const auto& m : fam) residuals_ok &= m.g_c.residual_sup < 1e-8;
  const double g0_gap = sup_distance(fam.front().g_c.f, lab.pair.f_minus.f);
  for (std::size_t i = 0; i + 1 < fam.size(); ++i) {
    bool geq = true, strict = false;
    const auto& a = fam[i + 1].g_c.f;
    const auto& b = fam[i].g_c.f;
    for (int j = 0; j < a.size(); ++j) {
      if (a[j] < b[j]) geq = false;
      if (a[j] > b[j]) strict = true;
    }
    ordered_ok &= geq && strict;
  }
  const bool complete = fam.size() == wanted.size();
  const bool ok = complete && residuals_ok && g0_gap < 1e-7 && ordered_ok;
  std::ostringstream d;
  d << fam.size() << "/" << wanted.size() << " members solve; residuals "
    << (residuals_ok ? "ok" : "BAD") << ", |g_0 - f_minus| = " << fmt(g0_gap)
    << ", ordering " << (ordered_ok ? "ok" : "BAD");
  verdict(2, "forcing family", ok, d.str());
  if (!complete)
    note("continuation folds near c = 0.33: c = 0.4 and 0.5 have no "
         "stationary solution for this direction (last solved c = " +
         fmt(fam.back().c) + ")");
}

// ------------------------------------------------------------ 3, 7, 8
struct EnsembleStats {
  int n = 0;
  int funnel_pass = 0, sharp_pass = 0, curvature_pass = 0, descent_pass = 0;
  double worst_gap = 1e300;        // min over runs of funnel margin
  double worst_increase = -1e300;  // max over runs of action forward jump
  double min_action = 1e300;
};

EnsembleStats run_funnel_ensemble(const Lab& lab, int count) {
  EnsembleStats st;
  SplitMix64 rng(RunConfig{}.seed);
  SchemeConfig sc;  // defaults: dt 1e-3, t_max 50, stride 50
  for (int i = 0; i < count; ++i) {
    GridFunction U =
        random_funnel_state(lab.pair.f_minus.f, lab.pair.f_plus.f, rng);
    Trajectory traj = evolve(U, lab.phi, sc);

    FunnelReport fr =
        check_funnel(traj, lab.pair.f_minus.f, lab.pair.f_plus.f, 1e-10);
    st.funnel_pass += fr.passed;
    st.worst_gap =
        std::min({st.worst_gap, fr.min_gap_lower, fr.min_gap_upper});

    DerivativeReport dr = derivative_report(traj);
    st.sharp_pass += dr.all_sharp_ok;
    // Running max of the curvature supremum over t >= 1 may not rise by
    // more than 1%.
    double run_max = -1.0;
    bool curv_ok = true;
    for (const auto& sl : dr.slices) {
      if (sl.t < 1.0) continue;
      if (run_max > 0.0 && sl.sup_uxx > 1.01 * run_max) curv_ok = false;
      run_max = std::max(run_max, sl.sup_uxx);
    }
    st.curvature_pass += curv_ok;

    ActionSeries as = action_series(traj, lab.phi);
    st.descent_pass += as.max_increase <= 1e-6;
    st.worst_increase = std::max(st.worst_increase, as.max_increase);
    st.min_action = std::min(st.min_action, as.min_value);
    ++st.n;
  }
  return st;
}

void criterion_funnel(const EnsembleStats& st) {
  std::ostringstream d;
  d << st.funnel_pass << "/" << st.n
    << " seeded starts stay inside the order interval to t = 50 "
    << "(worst margin " << fmt(st.worst_gap) << ", slack 1e-10)";
  verdict(3, "funnel invariance", st.funnel_pass == st.n && st.n > 0, d.str());
}

void criterion_derivatives(const EnsembleStats& st) {
  std::ostringstream d;
  d << "sharp gradient bound " << st.sharp_pass << "/" << st.n
    << " runs, curvature envelope after t = 1 " << st.curvature_pass << "/"
    << st.n << " runs";
  verdict(7, "derivative bounds",
          st.sharp_pass == st.n && st.curvature_pass == st.n && st.n > 0,
          d.str());
}

void criterion_action(const EnsembleStats& st, const Lab& lab) {
  const bool bounded = st.min_action > lab.action_plus - 1e-3;
  std::ostringstream d;
  d << "monotone (tol 1e-6 per stored step) " << st.descent_pass << "/"
    << st.n << " runs, worst forward jump " << fmt(st.worst_increase)
    << ", min action " << fmt(st.min_action) << " vs A(f_plus) = "
    << fmt(lab.action_plus);
  verdict(8, "action descent",
          st.descent_pass == st.n && bounded && st.n > 0, d.str());
}

// ---------------------------------------------------------------- 4
void criterion_attraction(const Lab& lab) {
  const FamilyMember* g01 = nullptr;
  for (const auto& m : lab.family)
    if (std::abs(m.c - 0.1) < 1e-12) g01 = &m;
  if (!g01) throw NumericalError("family member c = 0.1 missing");

  SplitMix64 rng(RunConfig{}.seed);
  SchemeConfig sc;
  sc.t_max = 400.0;  // steady detection fires near t = 150
  int converged = 0;
  double worst = 0.0, last_t = 0.0;
  const int count = 10;
  for (int i = 0; i < count; ++i) {
    // Taper the random mix toward f_plus at the boundary: the scheme
    // freezes boundary values, so the initial offset there must already be
    // inside the final tolerance.
    GridFunction U = random_funnel_state(g01->g_c.f, lab.pair.f_plus.f, rng,
                                         0.1, 0.9, 0.005, 8.0);
    Trajectory traj = evolve(U, lab.phi, sc);
    const double dist = sup_distance(traj.final_slice().u, lab.pair.f_plus.f);
    worst = std::max(worst, dist);
    last_t = traj.termination_time;
    converged +=
        traj.termination == Termination::steady_state && dist < 1e-5;
  }
  std::ostringstream d;
  d << converged << "/" << count
    << " starts in the c = 0.1 interval reach steady state at sup distance "
    << "< 1e-5 from f_plus (worst " << fmt(worst) << ", t_steady ~ "
    << fmt(last_t) << ")";
  verdict(4, "attraction to f_plus", converged == count, d.str());
}

// ---------------------------------------------------------------- 5
void criterion_stepper_order(const Lab& lab) {
  GridFunction zero{lab.grid, std::vector<double>(lab.grid->node_count(), 0.0)};
  GridFunction one{lab.grid, std::vector<double>(lab.grid->node_count(), 1.0)};
  const int c = lab.grid->center_index();

  // Spatially constant start, zero forcing: u(t) = u0 / (1 + u0 t) exactly.
  // The frozen boundary only contaminates a sqrt(t) neighbourhood of the
  // ends, so the center node is clean.
  auto center_error = [&](double dt) {
    SchemeConfig sc;
    sc.dt = dt;
    sc.t_max = 1.0;
    sc.steady_tol = 0.0;
    Trajectory traj = evolve(one, zero, sc);
    return std::abs(traj.final_slice().u[c] - 0.5);
  };
  const double e1 = center_error(4e-3);
  const double e2 = center_error(2e-3);
  const double e3 = center_error(1e-3);
  const double p12 = std::log2(e1 / e2);
  const double p23 = std::log2(e2 / e3);

  GridFunction neg{lab.grid, std::vector<double>(lab.grid->node_count(), -1.0)};
  SchemeConfig sc;
  sc.t_max = 2.0;
  sc.steady_tol = 0.0;
  Trajectory bt = evolve(neg, zero, sc);
  const bool blew = bt.termination == Termination::blow_up;
  const double t_err = std::abs(bt.termination_time - 1.0);

  const bool ok = p12 >= 1.8 && p23 >= 1.8 && blew && t_err <= 0.02;
  std::ostringstream d;
  d << "orders " << fmt(p12) << ", " << fmt(p23)
    << " (need >= 1.8); blow-up from u0 = -1 at t = "
    << fmt(bt.termination_time) << " (|t - 1| = " << fmt(t_err)
    << ", need <= 0.02)";
  verdict(5, "stepper vs ODE oracle", ok, d.str());
}

// ---------------------------------------------------------------- 6
void criterion_duhamel(const Lab& lab) {
  SplitMix64 rng(RunConfig{}.seed);
  GridFunction U =
      random_funnel_state(lab.pair.f_minus.f, lab.pair.f_plus.f, rng);
  SchemeConfig sc;
  sc.t_max = 1.0;
  sc.steady_tol = 0.0;
  Trajectory traj = evolve(U, lab.phi, sc);
  DuhamelStats stats;
  GridFunction recon = duhamel_reconstruct(traj, lab.phi, 1.0, &stats);
  const double disc = sup_distance(traj.final_slice().u, recon);

  double mass_err = 0.0;
  for (double t : {0.1, 0.3, 1.0, 3.0, 10.0})
    mass_err = std::max(mass_err, std::abs(kernel_mass(t, lab.grid) - 1.0));

  const bool ok = disc < 1e-3 && mass_err < 1e-6;
  std::ostringstream d;
  d << "integral-form discrepancy at t = 1: " << fmt(disc)
    << " (need < 1e-3, " << stats.slices_used
    << " slices); worst kernel mass defect on [0.1, 10]: " << fmt(mass_err)
    << " (need < 1e-6)";
  verdict(6, "integral-form oracle", ok, d.str());
}

// ---------------------------------------------------------------- 9
void criterion_construction(const Lab& lab) {
  // Family resolved at the dyadic parameters the runs need.
  std::set<double> cs{0.0};
  for (int k = 0; k <= 12; ++k) cs.insert(family_parameter(k));
  const auto fam =
      solve_family(lab.pair, lab.dir, lab.phi, {cs.begin(), cs.end()},
                   RunConfig{}.tolerances.newton_tol, 60);

  const Window w{};  // [-5, 5] x [-10, 10]
  SchemeConfig sc;
  sc.steady_tol = 0.0;

  // Deeper runs than the criterion asks for, so the k <= 8 verdict and the
  // diagnostic below share one set of anchored trajectories (runs are
  // independent of k_max).
  HeteroclinicBundle deep =
      run_construction(lab.phi, lab.pair, fam, 12, w, sc);

  std::vector<HeteroclinicRun> runs8;
  for (const auto& r : deep.runs)
    if (r.k <= 8) runs8.push_back(r);

  bool t_decreasing = runs8.size() >= 2;
  for (std::size_t i = 0; i + 1 < runs8.size(); ++i)
    t_decreasing &= runs8[i + 1].T_k < runs8[i].T_k;

  bool ok = false;
  std::ostringstream d;
  d << runs8.size() << " runs (k <= 8), T_k "
    << (t_decreasing ? "strictly decreasing" : "NOT decreasing") << "; ";
  try {
    HeteroclinicBundle b = assemble(runs8, w, deep.a_star);
    bool deltas_ok = b.deltas.size() >= 3;
    for (std::size_t i = b.deltas.size() >= 3 ? b.deltas.size() - 3 : 0;
         deltas_ok && i + 1 < b.deltas.size(); ++i)
      deltas_ok &= b.deltas[i + 1] < b.deltas[i];
    const double h = lab.grid->spacing();
    const double res_bound = 10.0 * (sc.dt + h * h);
    const double res = window_pde_residual(b.limit_estimate, lab.phi, w);
    const double dist_plus =
        window_sup_distance(b.limit_estimate, lab.pair.f_plus.f, w, w.t_hi);
    const double deepest_start = b.runs.back().T_k;
    const double dist_minus = window_sup_distance(
        b.limit_estimate, lab.pair.f_minus.f, w, deepest_start);
    const double sep = sup_distance(lab.pair.f_plus.f, lab.pair.f_minus.f);
    const bool distinct = verify_not_equilibrium(b, lab.pair, 1e-3);
    ok = t_decreasing && deltas_ok && res < res_bound && dist_plus < 1e-3 &&
         dist_minus < sep / 10.0 && distinct;
    d << "deltas " << (deltas_ok ? "shrinking" : "BAD") << ", residual "
      << fmt(res) << " vs " << fmt(res_bound) << ", dist to f_plus at t = 5: "
      << fmt(dist_plus) << ", dist to f_minus: " << fmt(dist_minus)
      << ", distinct from equilibria: " << (distinct ? "yes" : "no");
  } catch (const NumericalError& e) {
    d << "assembly failed: " << e.what();
  }
  verdict(9, "heteroclinic window", ok, d.str());

  // Diagnostic only (not part of the verdict): the same pipeline with
  // k_max = 12, where five runs cover the window.
  std::ostringstream n1;
  n1 << "k_max = 12 diagnostic: covering runs k = {";
  for (std::size_t i = 0; i < deep.included_ks.size(); ++i)
    n1 << (i ? "," : "") << deep.included_ks[i];
  n1 << "}, deltas ";
  for (std::size_t i = 0; i < deep.deltas.size(); ++i)
    n1 << (i ? ", " : "") << fmt(deep.deltas[i]);
  note(n1.str());
  const double res12 = window_pde_residual(deep.limit_estimate, lab.phi, w);
  const double dp12 =
      window_sup_distance(deep.limit_estimate, lab.pair.f_plus.f, w, w.t_hi);
  const double dm12 = window_sup_distance(
      deep.limit_estimate, lab.pair.f_minus.f, w, deep.runs.back().T_k);
  std::ostringstream n2;
  n2 << "residual " << fmt(res12) << ", dist to f_minus at t = -5: "
     << fmt(dm12) << ", dist to f_plus at t = 5: " << fmt(dp12)
     << " (relaxation rate at f_plus is ~0.05, so 1e-3 needs t ~ 21)";
  note(n2.str());
}

// --------------------------------------------------------------- 10
void criterion_determinism(const Lab& lab) {
  const fs::path base = fs::temp_directory_path() / "hetero_acceptance_rerun";
  fs::remove_all(base);

  // One full suite re-executed from scratch: stationary solve, seeded
  // evolution, artifacts, manifest.
  auto emit = [&lab](const std::string& dir) {
    RunConfig rc;
    ArtifactWriter w(dir, config_text(rc), rc.seed);
    EquilibriumPair pair = find_pair(lab.phi, rc.tolerances.newton_tol, 60);
    w.write("f_minus.csv", grid_csv(pair.f_minus.f));
    w.write("f_plus.csv", grid_csv(pair.f_plus.f));
    SplitMix64 rng(rc.seed);
    GridFunction U = random_funnel_state(pair.f_minus.f, pair.f_plus.f, rng);
    SchemeConfig sc;
    sc.t_max = 1.0;
    Trajectory traj = evolve(U, lab.phi, sc);
    w.write("trajectory.csv", trajectory_csv(traj));
    w.record_suite(
        "funnel_trapped",
        check_funnel(traj, pair.f_minus.f, pair.f_plus.f, 1e-10).passed);
    return read_text_file(w.finalize());
  };

  const std::string m1 = emit((base / "one").string());
  const std::string m2 = emit((base / "two").string());
  const bool artifacts_equal =
      read_text_file((base / "one" / "trajectory.csv").string()) ==
      read_text_file((base / "two" / "trajectory.csv").string());
  const bool ok = m1 == m2 && artifacts_equal;
  std::ostringstream d;
  d << "repeated suite manifests "
    << (m1 == m2 ? "byte-identical" : "DIFFER") << ", artifacts "
    << (artifacts_equal ? "byte-identical" : "DIFFER");
  verdict(10, "determinism", ok, d.str());
  fs::remove_all(base);
}

}  // namespace

int main() {
  std::printf("acceptance gate: L = 30, N = 1201, dt = 1e-3\n");
  Lab lab;
  try {
    lab.grid = make_grid(30.0, 1201);
    lab.phi = build_phi(ForcingParams{}, lab.grid);
    lab.pair = find_pair(lab.phi, 1e-10, 60);
    lab.dir = default_direction(lab.pair.f_minus.f);
    lab.family = solve_family(lab.pair, lab.dir, lab.phi,
                              RunConfig{}.family.c_list, 1e-10, 60);
    lab.action_plus = action(lab.pair.f_plus.f, lab.phi);
  } catch (const std::exception& e) {
    std::printf("[FAIL] setup: %s\n", e.what());
    return 10;
  }

  // 3/7/8 share one ensemble of trajectories; everything else is a closed
  // check of its own.
  try {
    criterion_equilibria(lab);
  } catch (const std::exception& e) {
    verdict(1, "equilibrium pair", false, e.what());
  }
  try {
    criterion_family(lab);
  } catch (const std::exception& e) {
    verdict(2, "forcing family", false, e.what());
  }

  EnsembleStats st;
  try {
    st = run_funnel_ensemble(lab, 50);
    criterion_funnel(st);
  } catch (const std::exception& e) {
    verdict(3, "funnel invariance", false, e.what());
  }

  try {
    criterion_attraction(lab);
  } catch (const std::exception& e) {
    verdict(4, "attraction to f_plus", false, e.what());
  }
  try {
    criterion_stepper_order(lab);
  } catch (const std::exception& e) {
    verdict(5, "stepper vs ODE oracle", false, e.what());
  }
  try {
    criterion_duhamel(lab);
  } catch (const std::exception& e) {
    verdict(6, "integral-form oracle", false, e.what());
  }

  if (st.n > 0) {
    criterion_derivatives(st);
    criterion_action(st, lab);
  } else {
    verdict(7, "derivative bounds", false, "no ensemble trajectories");
    verdict(8, "action descent", false, "no ensemble trajectories");
  }

  try {
    criterion_construction(lab);
  } catch (const std::exception& e) {
    verdict(9, "heteroclinic window", false, e.what());
  }
  try {
    criterion_determinism(lab);
  } catch (const std::exception& e) {
    verdict(10, "determinism", false, e.what());
  }

  std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures;
}
