#ifndef HETERO_FORCING_HPP
#define HETERO_FORCING_HPP

#include "hetero/grid.hpp"

namespace hetero {

// Forcing profile (x^2/w^2 - a) exp(-x^2/(2 w^2)).
struct ForcingParams {
  double offset = 0.4;  // the subtracted constant a
  double width = 1.0;   // Gaussian width w

  void validate() const;
};

double phi_value(const ForcingParams& p, double x);
GridFunction build_phi(const ForcingParams& p, const GridPtr& grid);

// Closed interval on the x-axis.
struct Interval {
  double lo = 0.0, hi = 0.0;
  double length() const { return hi - lo; }
};

// C^2 bump: exactly 1 on K, exactly 0 outside K widened by margin, quintic
// smoothstep transition in between. K plus margin must fit strictly inside
// the grid.
GridFunction build_bump(const Interval& K, double margin, const GridPtr& grid);

// One calibrated perturbation of the forcing: psi = -s * beta * y where y is
// the near-null direction of the operator y'' - (2 f_minus + s beta) y.
struct PerturbationDirection {
  Interval bump_support;      // the interval where beta == 1
  double margin = 0.0;        // transition width on each side
  double s = 0.0;             // calibrated bump strength
  double eigenvalue_residual = 0.0;  // |principal eigenvalue| at the final s
  GridFunction beta;
  GridFunction y;    // positive, decaying, sup-normalized to 1
  GridFunction psi;  // -s * beta * y, nonpositive everywhere
};

// Near-null direction of y'' - (2 f_minus + s beta) y = 0 with zero Dirichlet
// values: the eigenvector for the eigenvalue closest to zero, sup-normalized
// to 1 with positive sign. Throws NumericalError when that eigenvalue is far
// from zero (the only decaying solution of the BVP is y == 0) or when the
// eigenvector changes sign.
GridFunction solve_direction(const GridFunction& f_minus, double s,
                             const GridFunction& beta);

// Bisection on s in (0, 2 sup|f_minus|] (bracket widened adaptively) for the
// principal eigenvalue of y'' - (2 f_minus + s beta) y crossing zero; returns
// the assembled direction. Throws NumericalError when no crossing exists or
// the principal eigenvalue at s = 0 is already nonpositive.
PerturbationDirection calibrate_strength(const GridFunction& f_minus,
                                         const GridFunction& beta);

// Interval spanned by the nodes where f < 0, shrunk by one spacing on each
// side so the endpoints sit strictly inside the negative set.
Interval negative_support(const GridFunction& f);

// The laboratory's standard direction: bump on the negative well of f_minus
// (margin 1, shrunk on grids too small to fit it), strength calibrated so
// the principal eigenvalue of the shifted linearization crosses zero.
PerturbationDirection default_direction(const GridFunction& f_minus);

// phi + c * psi for c in [0, 1).
GridFunction phi_c(const GridFunction& phi, const GridFunction& psi, double c);

}  // namespace hetero

#endif
