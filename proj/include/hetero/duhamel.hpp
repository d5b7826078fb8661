#ifndef HETERO_DUHAMEL_HPP
#define HETERO_DUHAMEL_HPP

#include "hetero/evolve.hpp"
#include "hetero/grid.hpp"

namespace hetero {

// Gaussian heat kernel (4 pi t)^(-1/2) exp(-x^2 / (4t)); t must be positive.
double heat_kernel(double t, double x);

// Kernel row sampled on the grid, for quadrature and mass checks.
struct KernelEval {
  double t = 0.0;
  GridFunction profile;
};

KernelEval kernel_profile(double t, const GridPtr& grid);

// Trapezoid mass of the sampled kernel; 1 up to truncation + quadrature error.
double kernel_mass(double t, const GridPtr& grid);

// Trapezoid convolution (H(t, .) * f) on the truncated domain. Rejects t so
// small that the kernel is unresolved by the mesh (sqrt(4t) < 2h, i.e.
// t < h^2).
GridFunction heat_convolve(const GridFunction& f, double t);

struct DuhamelStats {
  double t = 0.0;
  int slices_used = 0;
  double truncation_estimate = 0.0;  // bound on the mass lost beyond the
                                     // extended domain
};

// Evaluate u(t,.) from the integral form
//   u(t,x) = (H(t) * U)(x) + int_0^t (H(t-s) * (phi - u(s)^2))(x) ds
// using the trajectory's stored slices: trapezoid in s over the stored times,
// with the s = t endpoint taken in the kernel's delta limit (the integrand
// becomes (phi - u(t)^2) pointwise). Spatial convolutions run on a ghost-
// extended domain where the integrand is continued by the equilibrium tail
// model v(y) = v(+-L) L^2 / y^2 (and phi by 0 — it is below 1e-190 outside),
// so boundary rows do not lose kernel mass. Requires slices covering [0, t]
// with at least 10 of them, including one at s = t.
GridFunction duhamel_reconstruct(const Trajectory& trajectory,
                                 const GridFunction& phi, double t,
                                 DuhamelStats* stats = nullptr);

}  // namespace hetero

#endif
