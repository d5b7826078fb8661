#ifndef HETERO_EVOLVE_HPP
#define HETERO_EVOLVE_HPP

#include <vector>

#include "hetero/grid.hpp"

namespace hetero {

// Time-stepping parameters. theta weights the implicit share of diffusion
// (0.5 = Crank-Nicolson); the quadratic reaction is always explicit, so one
// step costs one tridiagonal solve.
struct SchemeConfig {
  double dt = 1e-3;
  double theta = 0.5;
  double t_max = 50.0;
  long store_stride = 50;  // 0.05 t.u. between slices at the default dt
  double steady_tol = 1e-7;  // 0 disables steady detection
  double blowup_threshold = 1e6;

  void validate() const;
};

enum class Termination { reached_t_max, steady_state, blow_up };

const char* termination_name(Termination t);

struct TrajectorySlice {
  double t = 0.0;
  long step = 0;  // step index on the run's dt lattice
  GridFunction u;
};

struct Trajectory {
  std::vector<TrajectorySlice> slices;  // strictly increasing times
  SchemeConfig scheme;
  Termination termination = Termination::reached_t_max;
  double termination_time = 0.0;
  long steps_taken = 0;
  double t0 = 0.0;
  // Center-node value at every step (index n -> t0 + n dt); cheap to keep and
  // the anchor search needs per-step resolution, not per-slice.
  std::vector<double> center_trace;

  const TrajectorySlice& final_slice() const { return slices.back(); }
  // Slice with the given step index, or nullptr.
  const TrajectorySlice* slice_at_step(long step) const;
};

// One theta-scheme step: (I - theta dt D2) u_new =
// u + dt ((1-theta) D2 u - u^2 + phi), boundary nodes held at u's own values.
// Also the startup step of the two-step integrator in evolve().
GridFunction step(const GridFunction& u, const GridFunction& phi,
                  const SchemeConfig& scheme);

// Integrate u_t = u_xx - u^2 + phi from U with frozen Dirichlet boundary
// values (the initial slice's own). After the startup theta-step, diffusion
// is theta-weighted implicit and the reaction is advanced with a two-step
// Adams-Bashforth extrapolation, which keeps the stepping second order in dt
// at theta = 0.5 while still solving a single constant tridiagonal system
// per step. Slices are stored at steps congruent to store_offset modulo
// store_stride (plus the initial and final steps); times are reported as
// t0 + n dt. Steady state triggers when the interior sup of
// |D2 u - u^2 + phi| falls below steady_tol; blow-up when sup|u| exceeds
// blowup_threshold (a valid outcome, recorded and returned, never thrown).
// store_offset2 (if >= 0) stores a second residue class modulo the stride —
// the anchor-matched reruns keep two adjacent classes so slices can be
// blended to sub-step times.
Trajectory evolve(const GridFunction& U, const GridFunction& phi,
                  const SchemeConfig& scheme, double t0 = 0.0,
                  long store_offset = 0, long store_offset2 = -1);

}  // namespace hetero

#endif
