#include "zigzag/rates.hpp"

#include <cassert>
#include <cmath>

#include "zigzag/errors.hpp"

namespace zigzag {

void validate_state(const State& s) {
  if (s.position.size() != s.velocity.size()) {
    throw Error("state position/velocity dimensions disagree");
  }
  for (double x : s.position) {
    if (!std::isfinite(x)) throw Error("state position must be finite");
  }
  for (double v : s.velocity) {
    if (v != 1.0 && v != -1.0) throw Error("velocity entries must be exactly +-1");
  }
}

double dim_rate(const RateContext& ctx, int i, double t) {
  assert(ctx.potential != nullptr);
  double partial = directional_derivative(*ctx.potential, ctx.start.position,
                                          ctx.start.velocity, i, t);
  double rate = std::max(ctx.start.velocity[static_cast<size_t>(i)] * partial, 0.0);
  if (!ctx.refresh.empty()) rate += ctx.refresh[static_cast<size_t>(i)];
  return rate;
}

GlobalRate global_rate(const RateContext& ctx, double t) {
  assert(ctx.potential != nullptr);
  const size_t d = ctx.start.position.size();
  Vector x(d);
  for (size_t i = 0; i < d; ++i) {
    x[i] = ctx.start.position[i] + ctx.start.velocity[i] * t;
  }
  Vector grad = gradient(*ctx.potential, x);
  if (ctx.grad_evals != nullptr) ++*ctx.grad_evals;
  GlobalRate out;
  out.per_dim.resize(d);
  for (size_t i = 0; i < d; ++i) {
    double rate = std::max(ctx.start.velocity[i] * grad[i], 0.0);
    if (!ctx.refresh.empty()) rate += ctx.refresh[i];
    out.per_dim[i] = rate;
    out.total += rate;
  }
  return out;
}

int choose_dimension(std::span<const double> per_dim, double u) {
  double total = 0.0;
  for (double r : per_dim) total += r;
  if (!(total > 0.0)) {
    throw DegenerateSelection("cannot choose a dimension at zero total rate");
  }
  const double target = u * total;
  double cum = 0.0;
  for (size_t i = 0; i < per_dim.size(); ++i) {
    cum += per_dim[i];
    if (target < cum) return static_cast<int>(i);
  }
  // Rounding pushed the target past the last bin.
  return static_cast<int>(per_dim.size()) - 1;
}

Vector flip(Vector v, int m) {
  v[static_cast<size_t>(m)] = -v[static_cast<size_t>(m)];
  return v;
}

}  // namespace zigzag
