#include "zigzag/potential.hpp"

#include <cassert>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zigzag {

namespace {

std::vector<Dual> seed_identity(std::span<const double> x) {
  std::vector<Dual> xs;
  xs.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xs.push_back(Dual::seeded(x[i], x.size(), i));
  }
  return xs;
}

std::vector<double> extract(const Dual& u, std::size_t dim) {
  std::vector<double> g(dim);
  for (std::size_t i = 0; i < dim; ++i) g[i] = u.tangent(i);
  return g;
}

bool all_finite(const Dual& u) {
  if (!std::isfinite(u.value())) return false;
  for (double d : u.tangents()) {
    if (!std::isfinite(d)) return false;
  }
  return true;
}

}  // namespace

std::vector<double> gradient(const Potential& p, std::span<const double> x) {
  assert(static_cast<int>(x.size()) == p.dim);
  std::vector<Dual> xs = seed_identity(x);
  Dual u = p.value_dual(xs);
  if (!all_finite(u)) {
    throw NonFiniteGradient(std::vector<double>(x.begin(), x.end()));
  }
  return extract(u, x.size());
}

std::vector<double> gradient_unchecked(const Potential& p,
                                       std::span<const double> x) {
  std::vector<Dual> xs = seed_identity(x);
  Dual u = p.value_dual(xs);
  return extract(u, x.size());
}

double directional_derivative(const Potential& p, std::span<const double> x,
                              std::span<const double> v, int i, double t) {
  assert(x.size() == v.size());
  std::vector<Dual> xs;
  xs.reserve(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    double xj = x[j] + v[j] * t;
    xs.push_back(static_cast<int>(j) == i ? Dual::seeded(xj, 1, 0) : Dual(xj));
  }
  Dual u = p.value_dual(xs);
  if (!all_finite(u)) {
    std::vector<double> at(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) at[j] = x[j] + v[j] * t;
    throw NonFiniteGradient(std::move(at));
  }
  return u.tangent(0);
}

std::vector<double> term_gradient(const FactoredPotential& fp, long j,
                                  std::span<const double> x) {
  std::vector<Dual> xs = seed_identity(x);
  Dual u = fp.term_dual(j, xs);
  if (!all_finite(u)) {
    throw NonFiniteGradient(std::vector<double>(x.begin(), x.end()));
  }
  std::vector<double> g = extract(u, x.size());
  for (double& gi : g) gi *= static_cast<double>(fp.num_terms);
  return g;
}

Potential to_full_potential(const FactoredPotential& fp, bool parallel) {
  constexpr long kChunk = 4096;
  const long n = fp.num_terms;
  const long chunks = (n + kChunk - 1) / kChunk;

  // Reduction runs per chunk and combines partial sums in chunk order, so
  // the result does not depend on the number of threads.
  auto sum_terms = [fp, n, chunks, parallel](const auto& eval_one) {
    using Scalar = decltype(eval_one(0L));
    std::vector<Scalar> partial(static_cast<size_t>(chunks));
    bool use_parallel = parallel && chunks > 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (use_parallel)
#endif
    for (long c = 0; c < chunks; ++c) {
      Scalar acc{};
      const long lo = c * kChunk;
      const long hi = std::min(n, lo + kChunk);
      for (long j = lo; j < hi; ++j) acc += eval_one(j);
      partial[static_cast<size_t>(c)] = std::move(acc);
    }
    (void)use_parallel;
    Scalar total{};
    for (auto& p : partial) total += p;
    return total;
  };

  Potential p;
  p.dim = fp.dim;
  p.value = [fp, sum_terms](std::span<const double> x) -> double {
    return sum_terms([&](long j) { return fp.term(j, x); });
  };
  p.value_dual = [fp, sum_terms](std::span<const Dual> x) -> Dual {
    return sum_terms([&](long j) { return fp.term_dual(j, x); });
  };
  return p;
}

}  // namespace zigzag
