#include "hetero/analysis.hpp"

#include <cmath>

#include "hetero/errors.hpp"

namespace hetero {

double action(const GridFunction& u, const GridFunction& phi) {
  require_same_grid(u, phi);
  const GridFunction ux = first_difference(u);
  GridFunction dens{u.grid, std::vector<double>(u.size())};
  for (int i = 0; i < u.size(); ++i)
    dens.values[i] =
        0.5 * ux[i] * ux[i] + u[i] * u[i] * u[i] / 3.0 - u[i] * phi[i];
  return trapezoid_integral(dens);
}

ActionSeries action_series(const Trajectory& trajectory,
                           const GridFunction& phi) {
  if (trajectory.slices.empty())
    throw ConfigError("action_series: empty trajectory");
  ActionSeries s;
  for (const auto& sl : trajectory.slices) {
    s.times.push_back(sl.t);
    s.values.push_back(action(sl.u, phi));
  }
  s.min_value = s.max_value = s.values.front();
  for (double v : s.values) {
    s.min_value = std::min(s.min_value, v);
    s.max_value = std::max(s.max_value, v);
  }
  s.max_increase = 0.0;
  for (std::size_t j = 0; j + 1 < s.values.size(); ++j)
    s.max_increase = std::max(s.max_increase, s.values[j + 1] - s.values[j]);
  return s;
}

FunnelReport check_funnel(const Trajectory& trajectory,
                          const GridFunction& lower, const GridFunction& upper,
                          double slack) {
  require_same_grid(lower, upper);
  if (trajectory.slices.empty())
    throw ConfigError("check_funnel: empty trajectory");
  FunnelReport rep;
  bool first = true;
  for (const auto& sl : trajectory.slices) {
    require_same_grid(sl.u, lower);
    for (int i = 0; i < sl.u.size(); ++i) {
      const double gl = sl.u[i] - lower[i];
      const double gu = upper[i] - sl.u[i];
      if (first) {
        rep.min_gap_lower = gl;
        rep.min_gap_upper = gu;
        first = false;
      } else {
        rep.min_gap_lower = std::min(rep.min_gap_lower, gl);
        rep.min_gap_upper = std::min(rep.min_gap_upper, gu);
      }
      if (!rep.first_violation && (gl <= -slack || gu <= -slack))
        rep.first_violation = FunnelViolation{
            sl.t, sl.u.grid->node(i), gl <= -slack ? -1 : +1};
    }
  }
  rep.passed = rep.min_gap_lower > -slack && rep.min_gap_upper > -slack;
  return rep;
}

DerivativeReport derivative_report(const Trajectory& trajectory,
                                   double sharp_tol) {
  if (trajectory.slices.empty())
    throw ConfigError("derivative_report: empty trajectory");
  DerivativeReport rep;
  rep.all_sharp_ok = true;
  for (const auto& sl : trajectory.slices) {
    SliceDerivatives d;
    d.t = sl.t;
    d.sup_u = sup_norm(sl.u);
    d.sup_ux = sup_norm(first_difference(sl.u));
    d.sup_uxx = sup_norm(second_difference(sl.u));
    d.sharp_bound_ok =
        d.sup_ux <= std::sqrt(2.0 * d.sup_u * d.sup_uxx) + sharp_tol;
    rep.all_sharp_ok = rep.all_sharp_ok && d.sharp_bound_ok;
    rep.global_sup_u = std::max(rep.global_sup_u, d.sup_u);
    rep.global_sup_ux = std::max(rep.global_sup_ux, d.sup_ux);
    rep.global_sup_uxx = std::max(rep.global_sup_uxx, d.sup_uxx);
    rep.slices.push_back(d);
  }
  return rep;
}

bool curvature_envelope_ok(const DerivativeReport& report, double t_start,
                           double burn_end, double rel_tol) {
  double early = 0.0, late = 0.0;
  bool any_early = false;
  for (const auto& d : report.slices) {
    if (d.t < t_start) continue;
    if (d.t <= burn_end) {
      early = std::max(early, d.sup_uxx);
      any_early = true;
    } else {
      late = std::max(late, d.sup_uxx);
    }
  }
  if (!any_early) return false;  // nothing to anchor the envelope to
  return late <= early * (1.0 + rel_tol);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

// Quintic smoothstep used for the edge taper.
static double smooth01(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

GridFunction random_funnel_state(const GridFunction& lower,
                                 const GridFunction& upper, SplitMix64& rng,
                                 double lambda_lo, double lambda_hi,
                                 double edge_lambda, double taper_width) {
  require_same_grid(lower, upper);
  const GridPtr grid = lower.grid;
  const double L = grid->half_width();
  const int modes = 5;
  std::vector<double> a(modes), b(modes);
  for (int j = 0; j < modes; ++j) {
    a[j] = rng.uniform(-1.0, 1.0);
    b[j] = rng.uniform(-1.0, 1.0);
  }
  // Smooth random profile, normalized to [-1, 1].
  GridFunction s = sample(grid, [&](double x) {
    double acc = 0.0;
    for (int j = 0; j < modes; ++j) {
      const double w = (j + 1) * M_PI * x / L;
      acc += (a[j] * std::cos(w) + b[j] * std::sin(w)) / (j + 1);
    }
    return acc;
  });
  const double m = sup_norm(s);
  const double mid = 0.5 * (lambda_lo + lambda_hi);
  const double amp = 0.5 * (lambda_hi - lambda_lo);
  GridFunction out{grid, std::vector<double>(lower.size())};
  for (int i = 0; i < lower.size(); ++i) {
    const double x = grid->node(i);
    double lam = mid + amp * (m > 0.0 ? s[i] / m : 0.0);
    if (edge_lambda >= 0.0) {
      // 1 in the interior, 0 at the boundary over the outer taper_width.
      const double taper = smooth01((L - std::abs(x)) / taper_width);
      lam = edge_lambda + (lam - edge_lambda) * taper;
    }
    out.values[i] = lam * lower[i] + (1.0 - lam) * upper[i];
  }
  return out;
}

}  // namespace hetero
