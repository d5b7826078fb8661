#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hetero/duhamel.hpp"
#include "hetero/equilibria.hpp"
#include "hetero/errors.hpp"
#include "hetero/evolve.hpp"
#include "hetero/forcing.hpp"
#include "hetero/grid.hpp"

using namespace hetero;

TEST_CASE("heat kernel pointwise") {
  CHECK(heat_kernel(0.25, 0.0) ==
        doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(heat_kernel(1.0, 2.0) ==
        doctest::Approx(std::exp(-1.0) / std::sqrt(4.0 * M_PI)));
  CHECK(heat_kernel(1.0, -2.0) == heat_kernel(1.0, 2.0));
  CHECK_THROWS_AS(heat_kernel(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(heat_kernel(-1.0, 1.0), ConfigError);
}

TEST_CASE("kernel mass is 1 up to truncation + quadrature") {
  auto g = make_grid(30.0, 1201);
  for (double t : {0.1, 0.5, 1.0, 5.0, 10.0})
    CHECK(std::abs(kernel_mass(t, g) - 1.0) < 1e-6);
  // Narrow grid loses real mass: sqrt(4t) comparable to L.
  auto tiny = make_grid(3.0, 121);
  CHECK(kernel_mass(10.0, tiny) < 0.9);
}

TEST_CASE("convolving a Gaussian reproduces the closed form") {
  // H(t) * e^{-x^2/(2a^2)} = a / sqrt(a^2 + 2t) e^{-x^2/(2(a^2 + 2t))}.
  auto g = make_grid(30.0, 1201);
  const double a = 1.0, t = 0.5;
  auto f = sample(g, [&](double x) { return std::exp(-x * x / (2 * a * a)); });
  auto conv = heat_convolve(f, t);
  const double s2 = a * a + 2.0 * t;
  double worst = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const double x = g->node(i);
    if (std::abs(x) > 10.0) continue;  // stay clear of the truncation edge
    const double exact =
        a / std::sqrt(s2) * std::exp(-x * x / (2.0 * s2));
    worst = std::max(worst, std::abs(conv[i] - exact));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("heat_convolve rejects unresolvable times") {
  auto g = make_grid(30.0, 1201);  // h = 0.05, h^2 = 2.5e-3
  auto f = sample(g, [](double x) { return std::exp(-x * x); });
  CHECK_THROWS_AS(heat_convolve(f, 1e-3), ConfigError);
  CHECK_NOTHROW(heat_convolve(f, 5e-3));
}

namespace {

struct Setup {
  GridPtr grid;
  GridFunction phi;
  Trajectory traj;  // combination start, t in [0, 1], 21 slices
};

const Setup& combo_run() {
  static const Setup s = [] {
    Setup out;
    out.grid = make_grid(30.0, 1201);
    out.phi = build_phi(ForcingParams{}, out.grid);
    auto pair = find_pair(out.phi, 1e-10, 60);
    GridFunction U = (0.5 * pair.f_minus.f) + (0.5 * pair.f_plus.f);
    SchemeConfig sc;
    sc.dt = 1e-3;
    sc.t_max = 1.0;
    sc.store_stride = 50;
    sc.steady_tol = 0.0;
    out.traj = evolve(U, out.phi, sc);
    return out;
  }();
  return s;
}

}  // namespace

TEST_CASE("duhamel reconstruction agrees with the stepper") {
  const auto& s = combo_run();
  DuhamelStats stats;
  auto recon = duhamel_reconstruct(s.traj, s.phi, 1.0, &stats);
  CHECK(stats.slices_used == 21);
  CHECK(stats.truncation_estimate < 1e-5);
  // Trapezoid-in-s over 0.05-spaced slices: measured 3.7e-4 on this start.
  CHECK(sup_distance(s.traj.final_slice().u, recon) < 5e-4);
}

TEST_CASE("duhamel discrepancy shrinks with slice spacing") {
  const auto& s = combo_run();
  // Rebuild the same run at half the slice density.
  SchemeConfig sc = s.traj.scheme;
  sc.store_stride = 100;
  auto coarse = evolve(s.traj.slices.front().u, s.phi, sc);
  auto rc = duhamel_reconstruct(coarse, s.phi, 1.0);
  auto rf = duhamel_reconstruct(s.traj, s.phi, 1.0);
  const double ec = sup_distance(coarse.final_slice().u, rc);
  const double ef = sup_distance(s.traj.final_slice().u, rf);
  // Quadrature is second order in the spacing; allow slack off the exact 4.
  CHECK(ec / ef > 2.5);
}

TEST_CASE("duhamel preconditions") {
  const auto& s = combo_run();
  // No stored slice at the requested time: a caller/config problem.
  CHECK_THROWS_AS(duhamel_reconstruct(s.traj, s.phi, 0.9873), ConfigError);
  // Too few slices covering [0, t].
  SchemeConfig sc = s.traj.scheme;
  sc.store_stride = 200;
  auto sparse = evolve(s.traj.slices.front().u, s.phi, sc);
  CHECK_THROWS_AS(duhamel_reconstruct(sparse, s.phi, 1.0), ConfigError);
}
