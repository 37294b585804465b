#pragma once

#include <functional>

#include "zigzag/rates.hpp"

namespace zigzag {

struct BrentConfig {
  double tolerance = 1e-6;      // abscissa tolerance
  int max_iters = 100;          // refinement evaluations after the opening
  double epsilon_probe = 1e-4;  // distance of the monotonicity probe from the end

  /// Defaults scaled to an optimization horizon.
  static BrentConfig for_horizon(double t_max) {
    return BrentConfig{1e-6 * t_max, 100, 1e-4 * t_max};
  }
};

struct BrentResult {
  double argmax = 0.0;
  double max = 0.0;
  int evals = 0;
  bool converged = true;
};

/// Local constant upper bound for a rate over [0, t_max].
struct BoundEstimate {
  double bound = 0.0;    // inflated max of the rate over the evaluated probes
  double horizon = 0.0;  // t_max
  int evals_used = 0;
  bool shortcut = false;  // monotone endpoint taken instead of full refinement
  bool converged = true;
};

/// Abscissa of the vertex of the parabola through (a, fa), (b, fb), (c, fc),
/// requiring a < b < c.  Throws DegenerateParabola when the three points are
/// collinear (zero denominator).
double parabolic_vertex(double a, double fa, double b, double fb, double c,
                        double fc);

/// Derivative-free maximization over [lo, hi] combining inverse parabolic
/// interpolation with golden-section steps.  A parabolic candidate is
/// trusted only when it falls inside the bracket and its value satisfies
/// |f(x) - f(u)| <= 0.5 |f(v) - f(w)| against the tracked second/third-best
/// points; otherwise the next step falls back to golden section.  Never
/// evaluates f outside [lo, hi].  If the iteration cap is reached the best
/// point so far is returned with converged = false.
BrentResult brent_max(const std::function<double(double)>& f, double lo,
                      double hi, const BrentConfig& cfg);

/// Local rate bound over [0, t_max] with a monotonicity short-circuit.
///
/// Opens with a deterministic probe schedule {0, 0.382 t, 0.618 t, t}, runs
/// one bracketing step, and checks which end of the bracket survived it.  A
/// probe a distance epsilon from that end then confirms whether the rate
/// approaches the end from below; if it does the rate is taken as monotone
/// and the endpoint value becomes the bound (5 evaluations total), otherwise
/// the full search runs to convergence.  The returned bound is the maximum
/// over every probe actually evaluated, inflated by 1e-9 relative (5%
/// relative when the search did not converge) so downstream bound-validity
/// checks are robust to rounding.
BoundEstimate local_bound(const std::function<double(double)>& rate,
                          double t_max, const BrentConfig& cfg);

/// Bound for the global switching rate from `ctx`; gradient passes are
/// counted through the context's evaluation counter.
BoundEstimate local_bound(const RateContext& ctx, double t_max,
                          const BrentConfig& cfg);

}  // namespace zigzag
