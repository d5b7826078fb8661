#ifndef HETERO_ANALYSIS_HPP
#define HETERO_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hetero/equilibria.hpp"
#include "hetero/evolve.hpp"
#include "hetero/grid.hpp"

namespace hetero {

// Action integral: trapezoid of 1/2 u_x^2 + 1/3 u^3 - u phi. The evolution
// equation is its gradient flow, so it decreases along trajectories and the
// equilibria are its critical points.
double action(const GridFunction& u, const GridFunction& phi);

struct ActionSeries {
  std::vector<double> times;
  std::vector<double> values;
  double max_increase = 0.0;  // largest forward difference
  double min_value = 0.0;
  double max_value = 0.0;
};

ActionSeries action_series(const Trajectory& trajectory,
                           const GridFunction& phi);

// Order-interval membership over a whole trajectory: how far slices dip
// below `lower` or above `upper`. Strictness convention: passed requires
// every gap > -slack, so slack = 0 reproduces the strict inequalities (a
// trajectory touching an envelope fails) and a positive slack absorbs
// rounding-level contact.
struct FunnelViolation {
  double t = 0.0;
  double x = 0.0;
  int side = 0;  // -1 dipped below lower, +1 rose above upper
};

struct FunnelReport {
  double min_gap_lower = 0.0;  // min over slices/nodes of u - lower
  double min_gap_upper = 0.0;  // min over slices/nodes of upper - u
  std::optional<FunnelViolation> first_violation;
  bool passed = false;
};

FunnelReport check_funnel(const Trajectory& trajectory,
                          const GridFunction& lower, const GridFunction& upper,
                          double slack);

// Per-slice finite-difference suprema and the sharp gradient bound
// sup|u_x| <= sqrt(2 sup|u| sup|u_xx|) (+ tolerance for rounding).
struct SliceDerivatives {
  double t = 0.0;
  double sup_u = 0.0;
  double sup_ux = 0.0;
  double sup_uxx = 0.0;
  bool sharp_bound_ok = false;
};

struct DerivativeReport {
  std::vector<SliceDerivatives> slices;
  double global_sup_u = 0.0;
  double global_sup_ux = 0.0;
  double global_sup_uxx = 0.0;
  bool all_sharp_ok = false;
};

DerivativeReport derivative_report(const Trajectory& trajectory,
                                   double sharp_tol = 1e-8);

// Uniform-in-time curvature check: the curvature supremum over t >= t_start
// must attain its maximum within the early window [t_start, burn_end] up to
// the relative tolerance — i.e. the envelope never rises later. This is the
// checkable shape of a uniform second-derivative bound for trajectories that
// relax toward an equilibrium.
bool curvature_envelope_ok(const DerivativeReport& report,
                           double t_start = 1.0, double burn_end = 5.0,
                           double rel_tol = 0.01);

// Deterministic funnel-interior state: lambda(x) f_minus + (1-lambda) f_plus
// with a smooth random lambda built from the rng's next draws, ranging over
// [lambda_lo, lambda_hi]. If edge_lambda >= 0, lambda is tapered to that
// value at +-L over the outer taper_width so the frozen boundary values sit
// close to f_plus.
class SplitMix64;  // fwd

GridFunction random_funnel_state(const GridFunction& lower,
                                 const GridFunction& upper, SplitMix64& rng,
                                 double lambda_lo = 0.1,
                                 double lambda_hi = 0.9,
                                 double edge_lambda = -1.0,
                                 double taper_width = 8.0);

// Small deterministic generator (splitmix64): identical streams on every
// platform, unlike the distribution adaptors in <random>.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)

private:
  std::uint64_t state_;
};

}  // namespace hetero

#endif
