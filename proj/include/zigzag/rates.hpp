#pragma once

#include <cstdint>
#include <span>

#include "zigzag/linalg.hpp"
#include "zigzag/potential.hpp"

namespace zigzag {

/// State of the process: elapsed time, position, and a velocity whose
/// entries are exactly +-1.
struct State {
  double time = 0.0;
  Vector position;
  Vector velocity;
};

void validate_state(const State& s);

/// Everything needed to evaluate switching rates from a fixed anchor state:
/// rates at elapsed time t refer to the straight-line point x + v*t.
/// `refresh` is an optional constant excess switching rate per dimension
/// (empty = none).  `grad_evals`, when set, is incremented once per
/// global-rate evaluation; it is owned by the caller's diagnostics context,
/// so concurrent chains each count into their own tally.
struct RateContext {
  State start;
  const Potential* potential = nullptr;
  Vector refresh;
  std::uint64_t* grad_evals = nullptr;
};

/// Switching rate of dimension i at elapsed time t:
/// max{v_i dU/dx_i(x + v t), 0} plus the refresh rate if configured.
/// Does not touch the evaluation counter (counting happens per global-rate
/// pass; this entry point exists for tests and single-coordinate probes).
double dim_rate(const RateContext& ctx, int i, double t);

struct GlobalRate {
  double total = 0.0;
  Vector per_dim;
};

/// All d rates from one forward-mode gradient pass; total is their sum.
GlobalRate global_rate(const RateContext& ctx, double t);

/// Inverse-CDF draw of the switching dimension: returns i with probability
/// per_dim[i] / sum(per_dim), deterministically in index order given u.
/// Throws DegenerateSelection when the total rate is zero.
int choose_dimension(std::span<const double> per_dim, double u);

/// Flip the sign of component m; an involution that preserves +-1 entries.
Vector flip(Vector v, int m);

}  // namespace zigzag
