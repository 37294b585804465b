#include "zigzag/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "zigzag/errors.hpp"

namespace zigzag {

namespace {

// (3 - sqrt 5) / 2: the golden-section interior fraction.
constexpr double kGolden = 0.3819660112501051;

double vertex_formula(double a, double fa, double b, double fb, double c,
                      double fc) {
  const double num =
      (b - a) * (b - a) * (fb - fc) - (b - c) * (b - c) * (fb - fa);
  const double den = (b - a) * (fb - fc) - (b - c) * (fb - fa);
  if (den == 0.0) throw DegenerateParabola("collinear interpolation points");
  return b - 0.5 * num / den;
}

std::optional<double> try_vertex(double x1, double f1, double x2, double f2,
                                 double x3, double f3) {
  // Order by abscissa; the vertex formula needs distinct points only.
  if (x1 > x2) {
    std::swap(x1, x2);
    std::swap(f1, f2);
  }
  if (x2 > x3) {
    std::swap(x2, x3);
    std::swap(f2, f3);
  }
  if (x1 > x2) {
    std::swap(x1, x2);
    std::swap(f1, f2);
  }
  if (x1 == x2 || x2 == x3) return std::nullopt;
  const double den = (x2 - x1) * (f2 - f3) - (x2 - x3) * (f2 - f1);
  if (den == 0.0) return std::nullopt;
  const double num =
      (x2 - x1) * (x2 - x1) * (f2 - f3) - (x2 - x3) * (x2 - x3) * (f2 - f1);
  return x2 - 0.5 * num / den;
}

// Shared search core, minimizing g = -f.  Tracks the best value over every
// evaluation (endpoints and probes included), so the reported maximum can
// never fall below an evaluated point.
struct SearchCore {
  const std::function<double(double)>& f;
  double lo, hi;
  BrentConfig cfg;
  bool enable_shortcut;

  int evals = 0;
  double best_t = 0.0;
  double best_f = -std::numeric_limits<double>::infinity();
  bool shortcut = false;
  bool converged = true;

  // Bracket and tracked points of the minimization of -f.
  double a = 0, b = 0, x = 0, w = 0, v = 0;
  double gx = 0, gw = 0, gv = 0;
  bool force_golden = false;

  double eval(double t) {
    ++evals;
    double ft = f(t);
    if (ft > best_f) {
      best_f = ft;
      best_t = t;
    }
    return -ft;
  }

  void run() {
    const double span = hi - lo;
    const double g_lo = eval(lo);
    const double g_hi = eval(hi);
    const double x1 = lo + kGolden * span;
    const double g1 = eval(x1);
    // With a single interior point the first step is always golden, into
    // the wider right-hand portion.
    const double u1 = x1 + kGolden * (hi - x1);
    const double gu1 = eval(u1);

    if (g_lo == g_hi && g_lo == g1 && g_lo == gu1) {
      // Exactly flat across the opening schedule (typical for a rate that
      // is identically zero on the horizon).
      shortcut = true;
      return;
    }

    double unchanged_end;
    if (gu1 <= g1) {
      a = x1;
      b = hi;
      x = u1;
      w = x1;
      v = x1;
      gx = gu1;
      gw = g1;
      gv = g1;
      unchanged_end = hi;
    } else {
      a = lo;
      b = u1;
      x = x1;
      w = u1;
      v = u1;
      gx = g1;
      gw = gu1;
      gv = gu1;
      unchanged_end = lo;
    }

    if (enable_shortcut) {
      // The end of the bracket the first step left alone is the monotone
      // candidate; confirm the function approaches it from below.
      const bool upper = unchanged_end == hi;
      const double probe_t = upper ? hi - cfg.epsilon_probe : lo + cfg.epsilon_probe;
      const double g_probe = eval(probe_t);
      const double g_end = upper ? g_hi : g_lo;
      if (g_probe >= g_end) {  // f(probe) <= f(end)
        shortcut = true;
        return;
      }
    }

    for (int it = 0; it < cfg.max_iters; ++it) {
      if (b - a <= cfg.tolerance) return;
      const double mid = 0.5 * (a + b);
      double u;
      bool parabolic = false;
      if (!force_golden && x != w && w != v && x != v) {
        auto p = try_vertex(x, gx, w, gw, v, gv);
        if (p && *p > a && *p < b && std::abs(*p - x) > 1e-3 * cfg.tolerance) {
          u = *p;
          parabolic = true;
        }
      }
      if (!parabolic) {
        u = (x < mid) ? x + kGolden * (b - x) : x - kGolden * (x - a);
      }
      const double gu = eval(u);
      // Acceptance rule for the interpolation step: the decrease must keep
      // shrinking relative to the spread of the tracked points, otherwise
      // the next step is forced back to golden section.
      force_golden = parabolic && std::abs(gx - gu) > 0.5 * std::abs(gv - gw);
      if (gu <= gx) {
        if (u >= x) {
          a = x;
        } else {
          b = x;
        }
        v = w;
        gv = gw;
        w = x;
        gw = gx;
        x = u;
        gx = gu;
      } else {
        if (u < x) {
          a = u;
        } else {
          b = u;
        }
        if (gu <= gw || w == x) {
          v = w;
          gv = gw;
          w = u;
          gw = gu;
        } else if (gu <= gv || v == x || v == w) {
          v = u;
          gv = gu;
        }
      }
    }
    converged = false;
  }
};

}  // namespace

double parabolic_vertex(double a, double fa, double b, double fb, double c,
                        double fc) {
  if (!(a < b && b < c)) throw DegenerateParabola("points must satisfy a < b < c");
  return vertex_formula(a, fa, b, fb, c, fc);
}

BrentResult brent_max(const std::function<double(double)>& f, double lo,
                      double hi, const BrentConfig& cfg) {
  SearchCore core{f, lo, hi, cfg, /*enable_shortcut=*/false};
  core.run();
  return BrentResult{core.best_t, core.best_f, core.evals, core.converged};
}

BoundEstimate local_bound(const std::function<double(double)>& rate,
                          double t_max, const BrentConfig& cfg) {
  SearchCore core{rate, 0.0, t_max, cfg, /*enable_shortcut=*/true};
  core.run();
  BoundEstimate est;
  est.horizon = t_max;
  est.evals_used = core.evals;
  est.shortcut = core.shortcut;
  est.converged = core.converged;
  const double inflation = core.converged ? 1.0 + 1e-9 : 1.05;
  est.bound = core.best_f * inflation;
  return est;
}

BoundEstimate local_bound(const RateContext& ctx, double t_max,
                          const BrentConfig& cfg) {
  return local_bound([&ctx](double t) { return global_rate(ctx, t).total; },
                     t_max, cfg);
}

}  // namespace zigzag
