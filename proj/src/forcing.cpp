#include "hetero/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hetero/errors.hpp"
#include "hetero/linalg.hpp"

namespace hetero {

void ForcingParams::validate() const {
  if (!(offset > 0.0) || !std::isfinite(offset))
    throw ConfigError("forcing.offset must be positive");
  if (!(width > 0.0) || !std::isfinite(width))
    throw ConfigError("forcing.width must be positive");
}

double phi_value(const ForcingParams& p, double x) {
  const double r = x / p.width;
  return (r * r - p.offset) * std::exp(-0.5 * r * r);
}

GridFunction build_phi(const ForcingParams& p, const GridPtr& grid) {
  p.validate();
  return sample(grid, [&](double x) { return phi_value(p, x); });
}

// Quintic smoothstep: C^2 at both ends, s(0)=0, s(1)=1, s(1/2)=1/2.
static double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

GridFunction build_bump(const Interval& K, double margin, const GridPtr& grid) {
  if (!(K.lo < K.hi)) throw ConfigError("bump interval is empty");
  if (!(margin > 0.0)) throw ConfigError("bump margin must be positive");
  const double L = grid->half_width();
  if (K.lo - margin <= -L || K.hi + margin >= L) {
    std::ostringstream msg;
    msg << "bump support [" << K.lo - margin << ", " << K.hi + margin
        << "] does not fit strictly inside [" << -L << ", " << L << "]";
    throw ConfigError(msg.str());
  }
  return sample(grid, [&](double x) {
    if (x <= K.lo - margin || x >= K.hi + margin) return 0.0;
    if (x < K.lo) return smoothstep5((x - (K.lo - margin)) / margin);
    if (x > K.hi) return smoothstep5(((K.hi + margin) - x) / margin);
    return 1.0;
  });
}

// Interior discretization of y -> y'' - (2 f + s beta) y with zero Dirichlet
// boundary values: symmetric tridiagonal on the n-2 interior nodes.
static SymTridiagonal direction_operator(const GridFunction& f, double s,
                                         const GridFunction& beta) {
  require_same_grid(f, beta);
  const int n = f.size();
  const double h = f.grid->spacing();
  const double ih2 = 1.0 / (h * h);
  SymTridiagonal t;
  t.diag.resize(n - 2);
  t.off.assign(n - 3, ih2);
  for (int i = 1; i < n - 1; ++i)
    t.diag[i - 1] = -2.0 * ih2 - 2.0 * f[i] - s * beta[i];
  return t;
}

GridFunction solve_direction(const GridFunction& f_minus, double s,
                             const GridFunction& beta) {
  if (s < 0.0) throw ConfigError("bump strength s must be nonnegative");
  const SymTridiagonal op = direction_operator(f_minus, s, beta);
  const double lam = eigenvalue_nearest_zero(op);
  // An eigenvalue away from zero means the homogeneous BVP has only the
  // trivial solution at this s (degenerate case, e.g. s = 0 with f >= 0).
  if (std::abs(lam) > 1e-6) {
    std::ostringstream msg;
    msg << "no nontrivial decaying direction at s=" << s
        << ": eigenvalue nearest zero is " << lam
        << " (y == 0 is the only solution)";
    throw NumericalError(msg.str());
  }
  std::vector<double> z = eigenvector(op, lam);
  const int n = f_minus.size();
  GridFunction y{f_minus.grid, std::vector<double>(n, 0.0)};
  for (int i = 1; i < n - 1; ++i) y.values[i] = z[i - 1];
  // Fix the sign by the largest-magnitude entry, normalize, then scan for
  // sign changes. The far tails decay below rounding, so only negative values
  // above noise level count as a sign change.
  double peak = 0.0;
  for (double v : y.values)
    if (std::abs(v) > std::abs(peak)) peak = v;
  if (peak < 0.0)
    for (double& v : y.values) v = -v;
  const double m = sup_norm(y);
  for (double& v : y.values) v /= m;
  for (int i = 1; i < n - 1; ++i)
    if (y.values[i] < -1e-12) {
      std::ostringstream msg;
      msg << "direction changes sign at s=" << s << " (node x="
          << f_minus.grid->node(i) << ")";
      throw NumericalError(msg.str());
    }
  return y;
}

// Principal eigenvalue of the direction operator at strength s.
static double principal_eigenvalue(const GridFunction& f_minus, double s,
                                   const GridFunction& beta) {
  return largest_eigenvalue(direction_operator(f_minus, s, beta));
}

PerturbationDirection calibrate_strength(const GridFunction& f_minus,
                                         const GridFunction& beta) {
  require_same_grid(f_minus, beta);
  const double lam0 = principal_eigenvalue(f_minus, 0.0, beta);
  if (lam0 <= 0.0) {
    std::ostringstream msg;
    msg << "principal eigenvalue at s=0 is " << lam0
        << " <= 0: the negative well of f_minus does not bind, no crossing";
    throw NumericalError(msg.str());
  }
  // Bracket [lo, hi] with eigenvalue positive at lo, negative at hi. The
  // natural scale is sup|f_minus|; widen adaptively if that is not enough.
  double lo = 0.0, hi = 2.0 * sup_norm(f_minus);
  int widen = 0;
  while (principal_eigenvalue(f_minus, hi, beta) > 0.0) {
    hi *= 2.0;
    if (++widen > 40)
      throw NumericalError("no eigenvalue crossing found while widening the "
                           "strength bracket");
  }
  double s_mid = 0.5 * (lo + hi), lam_mid = 0.0;
  for (int it = 0; it < 200; ++it) {
    s_mid = 0.5 * (lo + hi);
    lam_mid = principal_eigenvalue(f_minus, s_mid, beta);
    if (std::abs(lam_mid) < 1e-9) break;
    (lam_mid > 0.0 ? lo : hi) = s_mid;
  }
  if (std::abs(lam_mid) > 1e-8)
    throw NumericalError("strength bisection stalled: |eigenvalue| = " +
                         std::to_string(std::abs(lam_mid)));

  PerturbationDirection dir;
  dir.s = s_mid;
  dir.eigenvalue_residual = std::abs(lam_mid);
  dir.beta = beta;
  dir.y = solve_direction(f_minus, s_mid, beta);
  dir.psi = GridFunction{beta.grid, std::vector<double>(beta.size(), 0.0)};
  for (int i = 0; i < beta.size(); ++i)
    dir.psi.values[i] = -s_mid * beta[i] * dir.y[i];
  // Recover the plateau and transition width from beta itself so callers
  // need not thread the interval through.
  const auto& xs = beta.grid->nodes();
  int first_one = -1, last_one = -1, first_nz = -1;
  for (int i = 0; i < beta.size(); ++i) {
    if (beta[i] > 0.0 && first_nz < 0) first_nz = i;
    if (beta[i] == 1.0) {
      if (first_one < 0) first_one = i;
      last_one = i;
    }
  }
  if (first_one >= 0) {
    dir.bump_support = {xs[first_one], xs[last_one]};
    // The transition starts at the last zero node, one grid point before the
    // first nonzero one.
    dir.margin = first_nz > 0 ? xs[first_one] - xs[first_nz - 1] : 0.0;
  }
  return dir;
}

Interval negative_support(const GridFunction& f) {
  int lo = -1, hi = -1;
  for (int i = 0; i < f.size(); ++i)
    if (f[i] < 0.0) {
      if (lo < 0) lo = i;
      hi = i;
    }
  if (lo < 0) throw NumericalError("field has no negative nodes");
  if (hi - lo < 4)
    throw NumericalError("negative set spans too few nodes for a bump");
  return {f.grid->node(lo + 1), f.grid->node(hi - 1)};
}

PerturbationDirection default_direction(const GridFunction& f_minus) {
  const Interval K = negative_support(f_minus);
  const double room = f_minus.grid->half_width() - std::max(K.hi, -K.lo);
  const double margin = std::min(1.0, 0.45 * room);
  return calibrate_strength(f_minus, build_bump(K, margin, f_minus.grid));
}

GridFunction phi_c(const GridFunction& phi, const GridFunction& psi,
                   double c) {
  if (!(c >= 0.0 && c < 1.0))
    throw ConfigError("family parameter c must lie in [0, 1)");
  require_same_grid(phi, psi);
  GridFunction out = phi;
  for (int i = 0; i < out.size(); ++i) out.values[i] += c * psi[i];
  return out;
}

}  // namespace hetero
