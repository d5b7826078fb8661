#ifndef HETERO_HETEROCLINIC_HPP
#define HETERO_HETEROCLINIC_HPP

#include <vector>

#include "hetero/equilibria.hpp"
#include "hetero/evolve.hpp"
#include "hetero/grid.hpp"

namespace hetero {

// Space-time box [t_lo, t_hi] x [x_lo, x_hi].
struct Window {
  double t_lo = -5.0, t_hi = 5.0;
  double x_lo = -10.0, x_hi = 10.0;

  void validate() const;
};

// One anchored run: the Cauchy problem from U_k, time-shifted so the anchor
// crossing sits at t = 0 (T_k = -sigma_k is the shifted start time).
struct HeteroclinicRun {
  int k = 0;
  double c_k = 0.0;
  GridFunction U_k;
  double sigma_k = 0.0;      // anchor-crossing time in the run's own clock
  double T_k = 0.0;          // = -sigma_k
  long shift_steps = 0;      // sigma_k rounded to the dt lattice
  bool multiple_crossings = false;
  double anchor_error = 0.0;  // |u(0, 0) - a*| after shifting
  Trajectory trajectory;      // shifted times; slices on the shared lattice
};

struct HeteroclinicBundle {
  double a_star = 0.0;
  std::vector<HeteroclinicRun> runs;
  // sup over the window of |u_{k+1} - u_k| for consecutive runs that cover
  // the window; deltas[i] pairs included_ks[i] with included_ks[i+1].
  std::vector<double> deltas;
  std::vector<int> included_ks;
  // Requested k whose family member does not exist (continuation fold below
  // c_k); always a prefix of 0..k_max since c_k decreases in k.
  std::vector<int> skipped_ks;
  Trajectory limit_estimate;  // deepest covering run restricted to the window
  Window window;
};

// c_k = 2^(-k-1): inside (0, 1/2], decreasing to 0.
double family_parameter(int k);

// U_k = (1 - c_k) g_{c_k} + c_k f_plus; requires the family member for c_k.
GridFunction build_initial(int k, const EquilibriumPair& pair,
                           const std::vector<FamilyMember>& family);

struct AnchorMatch {
  double sigma = 0.0;
  long shift_steps = 0;
  bool multiple_crossings = false;
  double anchor_error = 0.0;
  Trajectory trajectory;  // shifted
};

// Evolve from U_k, find the first upward crossing of the center-node value
// through a_star (checked at every step, sigma refined by linear
// interpolation), then rerun storing slices so the shifted times land on the
// shared lattice {j * store_stride * dt}. search_horizon caps the crossing
// search; the trajectory extends post_anchor_horizon past the anchor.
// Throws NumericalError when the run goes steady or blows up before
// crossing, or the horizon runs out.
AnchorMatch match_anchor(const GridFunction& U_k, double a_star,
                         const GridFunction& phi, const SchemeConfig& scheme,
                         double search_horizon, double post_anchor_horizon);

// Deltas over consecutive window-covering runs plus the deepest covering run
// restricted to the window. Runs that start after t_lo (T_k > t_lo) are
// excluded. Throws NumericalError when fewer than two runs cover the window.
HeteroclinicBundle assemble(std::vector<HeteroclinicRun> runs,
                            const Window& window, double a_star);

// True iff a_star is separated from both equilibria's center values by more
// than anchor_tol (false as well when 2 anchor_tol exceeds the center gap,
// i.e. the separation is unresolvable at this tolerance).
bool verify_not_equilibrium(const HeteroclinicBundle& bundle,
                            const EquilibriumPair& pair, double anchor_tol);

// Sup of the discrete PDE residual u_t - u_xx + u^2 - phi over the window
// interior of a lattice-sampled trajectory (centered time differences over
// stored slices).
double window_pde_residual(const Trajectory& traj, const GridFunction& phi,
                           const Window& window);

// Sup distance between the trajectory slice at the given time and g,
// restricted to the window's x-range.
double window_sup_distance(const Trajectory& traj, const GridFunction& g,
                           const Window& window, double at_time);

// Full pipeline: U_k for k = 0..k_max, anchored runs, assembled bundle.
HeteroclinicBundle run_construction(const GridFunction& phi,
                                    const EquilibriumPair& pair,
                                    const std::vector<FamilyMember>& family,
                                    int k_max, const Window& window,
                                    const SchemeConfig& scheme,
                                    double search_horizon = 400.0);

}  // namespace hetero

#endif
