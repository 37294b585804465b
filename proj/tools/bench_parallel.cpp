// Compares the OpenMP-parallel kernels against their serial reference
// paths: bound estimation over q index sets and the full-data gradient
// reduction.  Outputs must agree bit-for-bit; timings show the speedup.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "zigzag/potential.hpp"
#include "zigzag/subsample.hpp"
#include "zigzag/targets.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  long J = 100000;
  long q = 1000;
  if (argc > 1) J = std::atol(argv[1]);
  if (argc > 2) q = std::atol(argv[2]);

  zigzag::SurvivalParams truth;
  truth.log_alpha = 0.2;
  truth.beta = {7.0, -0.3, -0.7};
  const auto data = zigzag::simulate_survival(J, truth, 3000.0, 7);
  const auto fp = zigzag::make_weibull_survival_factored(data);

  zigzag::State state;
  state.position = {0.2, 7.0, -0.3, -0.7};
  state.velocity = {1.0, -1.0, 1.0, -1.0};

  zigzag::SubsampleConfig cfg = zigzag::SubsampleConfig::with_horizon(0.02);
  cfg.h = 20;
  cfg.q = q;
  cfg.r = 2.0;
  zigzag::Rng rng(11, 0);
  const zigzag::Rng bounds_rng = rng.derive(1);

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif
  std::printf("survival model: J=%ld, h=%ld, q=%ld\n\n", J, cfg.h, cfg.q);

  cfg.parallel_bounds = false;
  auto t0 = Clock::now();
  const auto serial = zigzag::estimate_bounds(fp, state, cfg, bounds_rng);
  const double serial_ms = ms_since(t0);

  cfg.parallel_bounds = true;
  t0 = Clock::now();
  const auto parallel = zigzag::estimate_bounds(fp, state, cfg, bounds_rng);
  const double parallel_ms = ms_since(t0);

  double max_diff = 0.0;
  for (size_t i = 0; i < serial.dims.size(); ++i) {
    max_diff = std::max(max_diff,
                        std::abs(serial.dims[i].c_hat - parallel.dims[i].c_hat));
  }
  std::printf("bound estimation  serial %8.1f ms   parallel %8.1f ms   speedup %.2fx\n",
              serial_ms, parallel_ms, serial_ms / parallel_ms);
  std::printf("  max |c_hat difference| = %g (must be 0)\n", max_diff);
  std::printf("  term evals: serial %llu, parallel %llu\n\n",
              static_cast<unsigned long long>(serial.term_evals),
              static_cast<unsigned long long>(parallel.term_evals));

  const auto serial_pot = zigzag::to_full_potential(fp, /*parallel=*/false);
  const auto parallel_pot = zigzag::to_full_potential(fp, /*parallel=*/true);
  const zigzag::Vector x = state.position;
  constexpr int kReps = 20;

  t0 = Clock::now();
  zigzag::Vector g_serial;
  for (int r = 0; r < kReps; ++r) g_serial = zigzag::gradient(serial_pot, x);
  const double grad_serial_ms = ms_since(t0) / kReps;

  t0 = Clock::now();
  zigzag::Vector g_parallel;
  for (int r = 0; r < kReps; ++r) g_parallel = zigzag::gradient(parallel_pot, x);
  const double grad_parallel_ms = ms_since(t0) / kReps;

  max_diff = 0.0;
  for (size_t i = 0; i < g_serial.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(g_serial[i] - g_parallel[i]));
  }
  std::printf("full gradient     serial %8.2f ms   parallel %8.2f ms   speedup %.2fx\n",
              grad_serial_ms, grad_parallel_ms, grad_serial_ms / grad_parallel_ms);
  std::printf("  max |gradient difference| = %g (must be 0)\n", max_diff);

  const bool ok = max_diff == 0.0;
  return ok ? 0 : 1;
}
