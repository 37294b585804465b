#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "zigzag/dual.hpp"
#include "zigzag/errors.hpp"

namespace zigzag {

/// Negative log target density U(x) up to an additive constant, evaluable on
/// plain doubles and on forward-mode duals.  Both callables must compute the
/// same function; `make_potential` instantiates them from a single generic
/// lambda so they cannot drift apart.
///
/// Evaluation must be deterministic and pure: repeated evaluation at the
/// same point is bit-identical, and instances are safe to share across
/// concurrently running chains.
struct Potential {
  int dim = 0;
  std::function<double(std::span<const double>)> value;
  std::function<Dual(std::span<const Dual>)> value_dual;
};

template <class F>
Potential make_potential(int dim, F f) {
  return Potential{
      dim,
      [f](std::span<const double> x) -> double { return f(x); },
      [f](std::span<const Dual> x) -> Dual { return f(x); },
  };
}

/// Potential that decomposes over observations: U(x) = sum_j u_j(x).
/// `term` evaluates a single u_j.  The per-observation gradient contribution
/// used by subsampled rate estimators is E^j = J * grad u_j, so that the
/// average over all J contributions equals the full gradient.
struct FactoredPotential {
  int dim = 0;
  long num_terms = 0;
  std::function<double(long, std::span<const double>)> term;
  std::function<Dual(long, std::span<const Dual>)> term_dual;
};

template <class F>
FactoredPotential make_factored_potential(int dim, long num_terms, F f) {
  return FactoredPotential{
      dim,
      num_terms,
      [f](long j, std::span<const double> x) -> double { return f(j, x); },
      [f](long j, std::span<const Dual> x) -> Dual { return f(j, x); },
  };
}

/// Exact gradient of U at x, computed in a single forward pass with one
/// tangent per coordinate.  Throws NonFiniteGradient if the value or any
/// partial is not finite.
std::vector<double> gradient(const Potential& p, std::span<const double> x);

/// Like `gradient` but without the finiteness check; non-finite values
/// propagate as NaN/Inf.  Integrators that treat divergence as rejection
/// use this path.
std::vector<double> gradient_unchecked(const Potential& p,
                                       std::span<const double> x);

/// Partial derivative dU/dx_i at the displaced point x + v*t, via a single
/// one-tangent forward pass.  Velocity entries must be +-1 and t >= 0.
double directional_derivative(const Potential& p, std::span<const double> x,
                              std::span<const double> v, int i, double t);

/// E^j(x) = J * grad u_j(x): one forward pass over the j-th term.
std::vector<double> term_gradient(const FactoredPotential& fp, long j,
                                  std::span<const double> x);

/// Full-data potential U = sum_j u_j as an ordinary Potential.  The sum runs
/// over fixed-size chunks (OpenMP-parallel when enabled) and is reduced in
/// chunk order, so results are bit-identical for any thread count.
Potential to_full_potential(const FactoredPotential& fp, bool parallel = true);

}  // namespace zigzag
