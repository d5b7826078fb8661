#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "hetero/equilibria.hpp"
#include "hetero/errors.hpp"
#include "hetero/evolve.hpp"
#include "hetero/forcing.hpp"
#include "hetero/grid.hpp"
#include "hetero/heteroclinic.hpp"

using namespace hetero;

TEST_CASE("family parameters halve toward zero") {
  CHECK(family_parameter(0) == 0.5);
  CHECK(family_parameter(1) == 0.25);
  CHECK(family_parameter(9) == doctest::Approx(1.0 / 1024.0).epsilon(1e-15));
  for (int k = 0; k < 20; ++k)
    CHECK(family_parameter(k + 1) < family_parameter(k));
  CHECK_THROWS_AS(family_parameter(-1), ConfigError);
}

TEST_CASE("window validation") {
  CHECK_NOTHROW(Window{}.validate());
  CHECK_THROWS_AS((Window{2.0, -2.0, -5.0, 5.0}.validate()), ConfigError);
  CHECK_THROWS_AS((Window{-2.0, 2.0, 5.0, 5.0}.validate()), ConfigError);
}

namespace {

// Everything downstream shares one coarse lab: quick to solve, and the
// construction still resolves all its qualitative features at N = 301.
struct CoarseLab {
  GridPtr grid;
  GridFunction phi;
  EquilibriumPair pair;
  PerturbationDirection dir;
  std::vector<FamilyMember> family;
};

const CoarseLab& coarse() {
  static const CoarseLab lab = [] {
    CoarseLab L;
    L.grid = make_grid(30.0, 301);
    L.phi = build_phi(ForcingParams{}, L.grid);
    L.pair = find_pair(L.phi, 1e-10, 60);
    L.dir = default_direction(L.pair.f_minus.f);
    std::set<double> cs{0.0};
    for (int k = 0; k <= 4; ++k) cs.insert(family_parameter(k));
    L.family = solve_family(L.pair, L.dir, L.phi,
                            {cs.begin(), cs.end()}, 1e-10, 60);
    return L;
  }();
  return lab;
}

SchemeConfig coarse_scheme() {
  SchemeConfig sc;
  sc.dt = 2e-3;
  sc.store_stride = 25;
  return sc;
}

Trajectory two_slice_traj(const GridFunction& u0, const GridFunction& u1) {
  Trajectory t;
  t.slices.push_back({0.0, 0, u0});
  t.slices.push_back({1.0, 500, u1});
  return t;
}

}  // namespace

TEST_CASE("initial states are exact convex combinations") {
  const auto& L = coarse();
  // c = 0.5 sits past the family fold at this forcing, so only k >= 1 have
  // members and k = 0 must be reported as missing.
  REQUIRE(L.family.size() == 5);
  CHECK(L.family.back().c == 0.25);

  const double c1 = family_parameter(1);
  GridFunction u = build_initial(1, L.pair, L.family);
  const GridFunction& g = L.family.back().g_c.f;
  double worst = 0.0;
  for (int i = 0; i < u.size(); ++i)
    worst = std::max(worst, std::abs(u[i] - ((1.0 - c1) * g[i] +
                                             c1 * L.pair.f_plus.f[i])));
  CHECK(worst < 1e-15);

  CHECK_THROWS_AS(build_initial(0, L.pair, L.family), NumericalError);
}

TEST_CASE("match_anchor refuses anchors the run cannot reach") {
  const auto& L = coarse();
  const double a_star = -0.4;

  // From f_plus the center value never crosses a_star upward; the run goes
  // steady almost immediately and that must surface as a failure.
  SchemeConfig sc = coarse_scheme();
  CHECK_THROWS_AS(match_anchor(L.pair.f_plus.f, a_star, L.phi, sc, 50.0, 1.0),
                  NumericalError);

  // Same run with steady detection off: the search horizon runs out.
  sc.steady_tol = 0.0;
  CHECK_THROWS_AS(match_anchor(L.pair.f_plus.f, a_star, L.phi, sc, 0.05, 0.1),
                  NumericalError);
}

TEST_CASE("assemble input validation") {
  const auto& L = coarse();
  Window w;

  std::vector<HeteroclinicRun> two(2);
  CHECK_THROWS_AS(assemble(std::move(two), w, -0.4), NumericalError);

  // Three runs, none starting early enough to cover t_lo = -5.
  GridFunction u = L.pair.f_plus.f;
  std::vector<HeteroclinicRun> runs(3);
  for (int k = 0; k < 3; ++k) {
    runs[k].k = k + 1;
    runs[k].T_k = 0.0;
    runs[k].trajectory.slices.push_back({0.0, 0, u});
    runs[k].trajectory.slices.push_back({1.0, 500, u});
  }
  CHECK_THROWS_AS(assemble(std::move(runs), w, -0.4), NumericalError);
}

TEST_CASE("verify_not_equilibrium separates anchor from center values") {
  const auto& L = coarse();
  const int c = L.grid->center_index();
  const double lo = L.pair.f_minus.f[c];
  const double hi = L.pair.f_plus.f[c];

  HeteroclinicBundle b;
  b.a_star = 0.5 * (lo + hi);
  CHECK(verify_not_equilibrium(b, L.pair, 1e-6));
  b.a_star = lo;
  CHECK(!verify_not_equilibrium(b, L.pair, 1e-6));
  b.a_star = hi + 1e-9;
  CHECK(!verify_not_equilibrium(b, L.pair, 1e-6));
  // Unresolvable tolerance: wider than half the center gap.
  b.a_star = 0.5 * (lo + hi);
  CHECK(!verify_not_equilibrium(b, L.pair, std::abs(hi - lo)));
}

TEST_CASE("window_sup_distance picks the nearest slice and clips in x") {
  const auto& L = coarse();
  const GridFunction& g = L.pair.f_plus.f;
  GridFunction far = g;
  far.values[L.grid->center_index()] += 0.2;        // inside |x| <= 2
  far.values[L.grid->nearest_index(4.0)] += 5.0;    // outside the window
  Trajectory traj = two_slice_traj(g, far);

  Window w{-5.0, 5.0, -2.0, 2.0};
  CHECK(window_sup_distance(traj, g, w, 0.1) == 0.0);
  CHECK(window_sup_distance(traj, g, w, 0.9) ==
        doctest::Approx(0.2).epsilon(1e-12));
  CHECK_THROWS_AS(window_sup_distance(Trajectory{}, g, w, 0.0),
                  NumericalError);
}

TEST_CASE("coarse end-to-end construction") {
  const auto& L = coarse();
  const Window w{-1.5, 2.0, -5.0, 5.0};
  const SchemeConfig sc = coarse_scheme();

  HeteroclinicBundle b = run_construction(L.phi, L.pair, L.family, 4, w, sc);

  // k = 0 wants the nonexistent c = 0.5 member; everything else runs.
  CHECK(b.skipped_ks == std::vector<int>{0});
  REQUIRE(b.runs.size() == 4);
  for (const auto& r : b.runs) {
    CHECK(r.c_k == family_parameter(r.k));
    CHECK(r.anchor_error < 1e-12);
    CHECK(!r.multiple_crossings);
  }
  // Later starts lie deeper in the past: T_k strictly decreasing.
  for (std::size_t i = 0; i + 1 < b.runs.size(); ++i)
    CHECK(b.runs[i + 1].T_k < b.runs[i].T_k);

  CHECK(b.a_star == doctest::Approx(-0.416624).epsilon(1e-3));

  // Only the two deepest runs reach back to t_lo = -1.5.
  CHECK(b.included_ks == std::vector<int>{3, 4});
  REQUIRE(b.deltas.size() == 1);
  CHECK(b.deltas[0] == doctest::Approx(7.816e-3).epsilon(2e-2));

  CHECK(verify_not_equilibrium(b, L.pair, 1e-6));

  // The limit candidate spans exactly the window's time range on the
  // shared lattice and satisfies the PDE to discretization accuracy.
  REQUIRE(!b.limit_estimate.slices.empty());
  CHECK(b.limit_estimate.slices.front().t == doctest::Approx(-1.5));
  CHECK(b.limit_estimate.slices.back().t == doctest::Approx(2.0));
  const double res = window_pde_residual(b.limit_estimate, L.phi, w);
  CHECK(res < 1e-3);
  // ... and is far from both equilibria mid-window.
  const double to_minus =
      window_sup_distance(b.limit_estimate, L.pair.f_minus.f, w, 0.0);
  const double to_plus =
      window_sup_distance(b.limit_estimate, L.pair.f_plus.f, w, 0.0);
  CHECK(to_minus > 0.05);
  CHECK(to_plus > 0.05);
}
