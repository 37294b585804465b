#include "zigzag/hmc.hpp"

#include <cmath>
#include <fstream>

#include "zigzag/diagnostics.hpp"
#include "zigzag/errors.hpp"
#include "zigzag/parallel.hpp"
#include "zigzag/rng.hpp"
#include "zigzag/skeleton.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zigzag {

namespace {

bool finite(const Vector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double kinetic(const Vector& p) {
  double k = 0.0;
  for (double pi : p) k += pi * pi;
  return 0.5 * k;
}

}  // namespace

LeapfrogResult leapfrog(const TargetSpec& target, Vector x, Vector p, int L,
                        double step) {
  if (!finite(x) || !finite(p)) {
    throw NonFiniteGradient(std::move(x));
  }
  std::uint64_t evals = 0;
  auto grad = [&](const Vector& at) {
    ++evals;
    return gradient_unchecked(target.potential, at);
  };
  Vector g = grad(x);
  for (size_t i = 0; i < p.size(); ++i) p[i] -= 0.5 * step * g[i];
  for (int l = 0; l < L; ++l) {
    for (size_t i = 0; i < x.size(); ++i) x[i] += step * p[i];
    if (l + 1 < L) {
      g = grad(x);
      for (size_t i = 0; i < p.size(); ++i) p[i] -= step * g[i];
    }
  }
  g = grad(x);
  for (size_t i = 0; i < p.size(); ++i) p[i] -= 0.5 * step * g[i];
  return LeapfrogResult{std::move(x), std::move(p), evals};
}

HmcResult sample_hmc(const TargetSpec& target, Vector x0, const HmcConfig& cfg) {
  if (cfg.leapfrog_steps < 1) throw Error("HMC needs at least one leapfrog step");
  if (!(cfg.step_size > 0.0)) throw Error("HMC step size must be positive");
  const int d = target.dim;
  HmcResult result;
  result.chain = Matrix(static_cast<int>(cfg.iterations), d);
  result.accepted.resize(static_cast<size_t>(cfg.iterations));
  Rng rng(cfg.seed, cfg.stream);
  Vector x = std::move(x0);
  double u_current = target.potential.value(x);
  long accepted = 0;

  for (long k = 0; k < cfg.iterations; ++k) {
    Vector p(static_cast<size_t>(d));
    for (double& pi : p) pi = rng.normal();
    const double h_current = u_current + kinetic(p);
    LeapfrogResult prop = leapfrog(target, x, p, cfg.leapfrog_steps, cfg.step_size);
    result.grad_evals += prop.grad_evals;
    const double u_prop = finite(prop.x) ? target.potential.value(prop.x)
                                         : std::numeric_limits<double>::quiet_NaN();
    const double h_prop = u_prop + kinetic(prop.p);
    const double u = rng.uniform();
    // NaN/Inf proposals fail the comparison and are rejected.
    const bool accept = std::isfinite(h_prop) && u < std::exp(h_current - h_prop);
    if (accept) {
      x = std::move(prop.x);
      u_current = u_prop;
      ++accepted;
    }
    result.accepted[static_cast<size_t>(k)] = accept ? 1 : 0;
    for (int c = 0; c < d; ++c) result.chain.at(static_cast<int>(k), c) = x[static_cast<size_t>(c)];
  }
  result.accept_rate = cfg.iterations > 0
                           ? static_cast<double>(accepted) / static_cast<double>(cfg.iterations)
                           : 0.0;
  return result;
}

HmcTuning tune_hmc(const TargetSpec& target, const Vector& x0,
                   std::uint64_t pilot_budget, std::uint64_t seed,
                   const std::vector<double>& step_grid,
                   const std::vector<int>& l_grid, bool parallel) {
  struct Candidate {
    int L;
    double step;
    double min_ess = -1.0;
  };
  std::vector<Candidate> grid;
  for (int L : l_grid) {
    for (double s : step_grid) grid.push_back(Candidate{L, s});
  }
  const long n = static_cast<long>(grid.size());
  ExceptionCollector errors;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (long i = 0; i < n; ++i) {
    errors.run([&, i] {
      Candidate& c = grid[static_cast<size_t>(i)];
      HmcConfig cfg;
      cfg.leapfrog_steps = c.L;
      cfg.step_size = c.step;
      cfg.iterations = static_cast<long>(pilot_budget / static_cast<std::uint64_t>(c.L + 1));
      cfg.seed = seed;
      cfg.stream = 0x48C0ULL + static_cast<std::uint64_t>(i);
      if (cfg.iterations < 40) return;
      HmcResult pilot = sample_hmc(target, x0, cfg);
      EssReport ess = ess_discrete(pilot.chain, cfg.iterations / 10);
      c.min_ess = ess.minimum;
    });
  }
  errors.rethrow();
  (void)parallel;
  HmcTuning best;
  double best_ess = -1.0;
  for (const auto& c : grid) {
    if (c.min_ess > best_ess) {
      best_ess = c.min_ess;
      best = HmcTuning{c.L, c.step, c.min_ess};
    }
  }
  return best;
}

void write_chain_csv(const std::string& path, const HmcResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write chain CSV: " + path);
  std::string buf = "iter";
  for (int i = 1; i <= result.chain.cols; ++i) buf += ",x" + std::to_string(i);
  buf += ",accepted\n";
  for (int r = 0; r < result.chain.rows; ++r) {
    buf += std::to_string(r);
    for (int c = 0; c < result.chain.cols; ++c) {
      buf += ',';
      buf += format_double17(result.chain.at(r, c));
    }
    buf += ',';
    buf += std::to_string(static_cast<int>(result.accepted[static_cast<size_t>(r)]));
    buf += '\n';
  }
  out << buf;
}

}  // namespace zigzag
