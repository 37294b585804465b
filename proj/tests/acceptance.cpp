// Acceptance suite: one check per release criterion, each printed as a
// PASS/FAIL line with the measured quantities.  Run with --only N to
// execute a single criterion, --data-dir for the bundled datasets, --out
// for scratch artifacts.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "zigzag/cli.hpp"
#include "zigzag/diagnostics.hpp"
#include "zigzag/hmc.hpp"
#include "zigzag/parallel.hpp"
#include "zigzag/rng.hpp"
#include "zigzag/sampler.hpp"
#include "zigzag/stats.hpp"
#include "zigzag/subsample.hpp"
#include "zigzag/targets.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace zigzag;

namespace {

namespace fs = std::filesystem;

fs::path g_data_dir = "data";
fs::path g_out_dir = "acceptance_out";

struct Outcome {
  enum Kind { kPass, kFail, kSkip } kind = kFail;
  std::string detail;
};

Outcome pass(std::string detail) { return {Outcome::kPass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Outcome::kFail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Outcome::kSkip, std::move(detail)}; }

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

Matrix cov2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = c;
  m.at(1, 1) = d;
  return m;
}

TargetSpec named_target(const std::string& name) {
  if (name == "IsoG2") return make_gaussian({0.0, 0.0}, Matrix::identity(2));
  if (name == "CorG2") return make_gaussian({0.0, 0.0}, cov2(1.0, 0.9, 0.9, 1.0));
  if (name == "DscG2") return make_gaussian({0.0, 0.0}, cov2(1.0, 0.0, 0.0, 100.0));
  if (name == "BimodG2") {
    return make_gaussian_mixture({0.5, 0.5}, {{2.0, 0.0}, {-2.0, 0.0}},
                                 {Matrix::identity(2), Matrix::identity(2)});
  }
  if (name == "LT2") return make_quartic(2);
  if (name == "HT2") return make_student_t(2.0, 2);
  throw Error("unknown target " + name);
}

// ---------------------------------------------------------------------------
// 1. Gradient exactness: AD vs central finite differences on every bundled
//    target at 100 random points, relative error < 1e-6.
Outcome criterion_gradients() {
  struct Case {
    std::string name;
    TargetSpec spec;
    double sd;
  };
  std::vector<Case> cases;
  for (const char* name : {"IsoG2", "CorG2", "DscG2", "BimodG2", "LT2", "HT2"}) {
    cases.push_back({name, named_target(name), 2.0});
  }
  const fs::path dugong_csv = g_data_dir / "dugong.csv";
  if (fs::exists(dugong_csv)) {
    cases.push_back({"dugong", make_dugong(read_dugong_csv(dugong_csv.string())), 0.7});
  }
  SurvivalParams truth{0.2, {6.0, -0.3, -0.7}};
  cases.push_back(
      {"survival", make_weibull_survival(simulate_survival(50, truth, 800.0, 5)), 0.7});

  double worst = 0.0;
  std::string worst_name;
  Rng rng(1001, 0);
  for (auto& c : cases) {
    for (int rep = 0; rep < 100; ++rep) {
      Vector x(static_cast<size_t>(c.spec.dim));
      for (double& xi : x) xi = c.sd * rng.normal();
      const Vector ad = gradient(c.spec.potential, x);
      for (size_t i = 0; i < x.size(); ++i) {
        Vector hi = x, lo = x;
        hi[i] += 1e-5;
        lo[i] -= 1e-5;
        const double fd =
            (c.spec.potential.value(hi) - c.spec.potential.value(lo)) / 2e-5;
        const double err = std::abs(ad[i] - fd) / (1.0 + std::abs(ad[i]));
        if (err > worst) {
          worst = err;
          worst_name = c.name;
        }
      }
    }
  }
  const std::string detail =
      fmt("max relative error %.3g (worst: %s, %zu targets x 100 points)",
          worst, worst_name.c_str(), cases.size());
  return worst < 1e-6 ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 2. Thinning law: empirical first-switch CDF on the uphill 1-D gaussian
//    vs the analytic law, 10^4 replicates, KS p > 0.01.
Outcome criterion_thinning_law() {
  auto target = make_gaussian({0.0}, Matrix::identity(1));
  const double x0 = 0.5;
  const int reps = 10000;
  std::vector<double> times(reps);
  ExceptionCollector errors;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int r = 0; r < reps; ++r) {
    errors.run([&, r] {
      ZigZagConfig cfg = ZigZagConfig::with_horizon(0.9);
      cfg.K = 1;
      cfg.seed = 2002;
      cfg.stream = static_cast<std::uint64_t>(r);
      times[static_cast<size_t>(r)] =
          sample_auto(target, {x0}, {1.0}, cfg).points[0].t;
    });
  }
  errors.rethrow();
  auto cdf = [x0](double tau) { return 1.0 - std::exp(-x0 * tau - 0.5 * tau * tau); };
  const double p = ks_pvalue(ks_statistic(times, cdf), reps);
  const std::string detail = fmt("KS p = %.4f over %d replicates", p, reps);
  return p > 0.01 ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 3. Invariant-distribution recovery on the three gaussian shapes at
//    trajectory time >= 1e4: means within 3 MC standard errors, variances
//    within 10% relative.
Outcome criterion_moments() {
  struct Run {
    std::string name;
    double t_max;
  };
  const std::vector<Run> runs = {{"IsoG2", 1.0}, {"CorG2", 1.0}, {"DscG2", 2.0}};
  std::string detail;
  for (const auto& run : runs) {
    auto target = named_target(run.name);
    ZigZagConfig cfg = ZigZagConfig::with_horizon(run.t_max);
    cfg.K = 25000;
    cfg.seed = 3003;
    auto skel = sample_auto(target, default_x0(2), default_v0(2), cfg);
    if (skel.total_time < 1e4) {
      return fail(fmt("%s trajectory too short: %.0f", run.name.c_str(),
                      skel.total_time));
    }
    const double burn = 0.05 * skel.total_time;
    auto ess = ess_continuous(skel, 10000, burn);
    for (int i = 0; i < 2; ++i) {
      const double mean = trajectory_mean(skel, i, burn);
      const double m2 = trajectory_second_moment(skel, i, burn);
      const double var = m2 - mean * mean;
      const double true_var = target.ref_cov->at(i, i);
      const double se =
          std::sqrt(true_var / ess.per_dimension[static_cast<size_t>(i)]);
      if (std::abs(mean) > 3.0 * se) {
        return fail(fmt("%s dim %d mean %.4f exceeds 3 SE = %.4f",
                        run.name.c_str(), i + 1, mean, 3.0 * se));
      }
      if (std::abs(var - true_var) > 0.10 * true_var) {
        return fail(fmt("%s dim %d variance %.4f vs %.4f (>10%%)",
                        run.name.c_str(), i + 1, var, true_var));
      }
    }
    detail += fmt("%s T=%.0f minESS=%.0f; ", run.name.c_str(), skel.total_time,
                  ess.minimum);
  }
  return pass(detail);
}

// ---------------------------------------------------------------------------
// shared helpers for the budgeted comparison (criterion 4)

double median_min_ess_zigzag(const TargetSpec& target, double t_max,
                             std::uint64_t budget, int chains,
                             std::uint64_t seed) {
  std::vector<double> ess(static_cast<size_t>(chains));
  ExceptionCollector errors;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int c = 0; c < chains; ++c) {
    errors.run([&, c] {
      ZigZagConfig cfg = ZigZagConfig::with_horizon(t_max);
      cfg.budget = budget;
      cfg.seed = seed;
      cfg.stream = static_cast<std::uint64_t>(c);
      auto skel = sample_auto(target, default_x0(target.dim),
                              default_v0(target.dim), cfg);
      ess[static_cast<size_t>(c)] =
          ess_continuous(skel, 100000, 0.1 * skel.total_time).minimum;
    });
  }
  errors.rethrow();
  return median(ess);
}

double median_min_ess_hmc(const TargetSpec& target, const HmcTuning& tuned,
                          std::uint64_t budget, int chains, std::uint64_t seed) {
  std::vector<double> ess(static_cast<size_t>(chains));
  ExceptionCollector errors;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int c = 0; c < chains; ++c) {
    errors.run([&, c] {
      HmcConfig cfg;
      cfg.leapfrog_steps = tuned.leapfrog_steps;
      cfg.step_size = tuned.step_size;
      cfg.iterations = static_cast<long>(
          budget / static_cast<std::uint64_t>(tuned.leapfrog_steps + 1));
      cfg.seed = seed;
      cfg.stream = static_cast<std::uint64_t>(c);
      auto res = sample_hmc(target, default_x0(target.dim), cfg);
      ess[static_cast<size_t>(c)] =
          ess_discrete(res.chain, cfg.iterations / 10).minimum;
    });
  }
  errors.rethrow();
  return median(ess);
}

// 4. Efficiency ordering under a shared budget of 1e5 gradient evaluations,
//    20 chains per sampler.  The zig-zag horizon is tuned by the
//    cost-minimization pilot; the baseline runs at a fixed canonical
//    scale-blind setting (10 leapfrog steps, unit-scale integration time 2),
//    whose per-target strengths and weaknesses the expected orderings below
//    encode.
Outcome criterion_budgeted_comparison() {
  const std::uint64_t budget = 100000;
  const int chains = 20;
  std::string detail;
  struct Row {
    std::string name;
    double ratio;  // zigzag / hmc median min-ESS
  };
  std::vector<Row> rows;
  HmcTuning baseline;
  baseline.leapfrog_steps = 10;
  baseline.step_size = 0.2;
  for (const char* name : {"IsoG2", "CorG2", "DscG2", "LT2", "HT2"}) {
    auto target = named_target(name);
    auto tune = tune_tmax(target, {0.1, 0.2, 0.5, 1.0, 2.0, 5.0}, 500, 10, 4004,
                          default_x0(2), default_v0(2));
    const double zz = median_min_ess_zigzag(target, tune.selected, budget, chains, 4005);
    const double hm = median_min_ess_hmc(target, baseline, budget, chains, 4006);
    rows.push_back({name, zz / hm});
    detail += fmt("%s: ZZ %.0f vs HMC %.0f (t_max %.1f); ", name, zz, hm,
                  tune.selected);
  }
  // IsoG2 within +-30% of the reference ratio 1723/2049; the remaining rows
  // are ordering checks.
  const double ref = 1723.0 / 2049.0;
  std::string verdicts;
  bool ok = true;
  auto row_check = [&](bool good, const std::string& msg) {
    verdicts += (good ? "[ok] " : "[FAIL] ") + msg + "; ";
    ok = ok && good;
  };
  row_check(rows[0].ratio >= 0.7 * ref && rows[0].ratio <= 1.3 * ref,
            fmt("IsoG2 ratio %.3f vs window %.3f..%.3f", rows[0].ratio,
                0.7 * ref, 1.3 * ref));
  row_check(rows[1].ratio < 1.0, fmt("CorG2 HMC > ZZ (ratio %.3f)", rows[1].ratio));
  row_check(rows[2].ratio >= 3.0, fmt("DscG2 ZZ >= 3x HMC (ratio %.3f)", rows[2].ratio));
  row_check(rows[3].ratio < 1.0, fmt("LT2 HMC > ZZ (ratio %.3f)", rows[3].ratio));
  row_check(rows[4].ratio < 1.0, fmt("HT2 HMC > ZZ (ratio %.3f)", rows[4].ratio));
  return ok ? pass(detail + verdicts) : fail(detail + verdicts);
}

// ---------------------------------------------------------------------------
// 5. Robustness from tail starts on the light-tailed target: every zig-zag
//    chain of 1000 switches ends within radius 3 of the origin; at least
//    half of the 1000-iteration HMC chains move less than 1e-6.
Outcome criterion_robustness() {
  auto target = named_target("LT2");
  std::vector<Vector> starts;
  for (double a : {-5.0, 0.0, 5.0}) {
    for (double b : {-5.0, 0.0, 5.0}) starts.push_back({a, b});
  }
  double worst_radius = 0.0;
  for (size_t s = 0; s < starts.size(); ++s) {
    ZigZagConfig cfg = ZigZagConfig::with_horizon(0.5);
    cfg.K = 1000;
    cfg.seed = 5005;
    cfg.stream = static_cast<std::uint64_t>(s);
    auto skel = sample_auto(target, starts[s], default_v0(2), cfg);
    const double radius = std::hypot(skel.terminal.x[0], skel.terminal.x[1]);
    worst_radius = std::max(worst_radius, radius);
  }
  if (worst_radius >= 3.0) {
    return fail(fmt("a zig-zag chain ended at radius %.2f", worst_radius));
  }

  int stuck = 0;
  for (size_t s = 0; s < starts.size(); ++s) {
    HmcConfig cfg;
    cfg.leapfrog_steps = 5;
    cfg.step_size = 0.5;  // mode-tuned for this target
    cfg.iterations = 1000;
    cfg.seed = 5006;
    cfg.stream = static_cast<std::uint64_t>(s);
    auto res = sample_hmc(target, starts[s], cfg);
    const double dx = res.chain.at(999, 0) - starts[s][0];
    const double dy = res.chain.at(999, 1) - starts[s][1];
    if (std::hypot(dx, dy) < 1e-6) ++stuck;
  }
  const std::string detail =
      fmt("zig-zag worst final radius %.3f; HMC stuck chains %d/9", worst_radius, stuck);
  return stuck * 2 >= static_cast<int>(starts.size()) ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 6. Budget bookkeeping: exact integer identities for both samplers.
Outcome criterion_bookkeeping() {
  auto target = named_target("IsoG2");
  HmcConfig hmc_cfg;
  hmc_cfg.leapfrog_steps = 10;
  hmc_cfg.step_size = 0.5;
  hmc_cfg.iterations = 1234;
  hmc_cfg.seed = 6006;
  auto hmc_run = sample_hmc(target, default_x0(2), hmc_cfg);
  const std::uint64_t expect_hmc = 11ull * 1234ull;
  if (hmc_run.grad_evals != expect_hmc) {
    return fail(fmt("HMC evals %llu != (L+1)K = %llu",
                    static_cast<unsigned long long>(hmc_run.grad_evals),
                    static_cast<unsigned long long>(expect_hmc)));
  }

  ZigZagConfig cfg = ZigZagConfig::with_horizon(0.8);
  cfg.budget = 20000;
  cfg.seed = 6007;
  auto skel = sample_auto(target, default_x0(2), default_v0(2), cfg);
  std::uint64_t opt = 0, tpp = 0;
  for (const auto& epoch : skel.audit) {
    opt += epoch.opt_evals;
    tpp += epoch.tpp_evals;
  }
  if (opt != skel.counters.opt_evals || tpp != skel.counters.tpp_evals) {
    return fail("zig-zag audit rows do not sum to the run totals");
  }
  return pass(fmt("HMC evals = %llu exactly; zig-zag audit total %llu = %llu + %llu",
                  static_cast<unsigned long long>(hmc_run.grad_evals),
                  static_cast<unsigned long long>(opt + tpp),
                  static_cast<unsigned long long>(opt),
                  static_cast<unsigned long long>(tpp)));
}

// ---------------------------------------------------------------------------
// 7. Horizon tuning on the dugong posterior: the median-cost minimum over
//    {0.005, 0.01, 0.02, 0.05, 0.1} lands at 0.02 or an adjacent point.
Outcome criterion_dugong_tuning() {
  const fs::path csv = g_data_dir / "dugong.csv";
  if (!fs::exists(csv)) return skip("SKIPPED-DATA: " + csv.string() + " not found");
  auto target = make_dugong(read_dugong_csv(csv.string()));
  const std::vector<double> grid = {0.005, 0.01, 0.02, 0.05, 0.1};
  auto result = tune_tmax(target, grid, 1000, 100, 7007, default_x0(4),
                          default_v0(4));
  std::string detail = "medians per 1000 switches:";
  for (const auto& row : result.rows) {
    detail += fmt(" %.3f->%.0f", row.t_max, row.median);
  }
  detail += fmt("; selected %.3f", result.selected);
  const bool ok = result.selected == 0.01 || result.selected == 0.02 ||
                  result.selected == 0.05;
  return ok ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 8. Subsampling consistency on the gaussian location model.
Outcome criterion_subsampling_consistency() {
  Rng cloud(8008, 0);
  Vector y(100);
  for (double& v : y) v = cloud.normal();
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= 100.0;

  auto fp = make_gaussian_location_factored(y);
  auto full = make_gaussian_location(y);

  // full-data reference run
  ZigZagConfig zcfg = ZigZagConfig::with_horizon(0.25);
  zcfg.K = 6000;
  zcfg.seed = 8009;
  auto ref = sample_auto(full, {ybar}, {1.0}, zcfg);
  const double ref_burn = 0.1 * ref.total_time;
  const double ref_mean = trajectory_mean(ref, 0, ref_burn);
  const double ref_se =
      0.1 / std::sqrt(ess_continuous(ref, 5000, ref_burn).minimum);

  // h = 10 subsampled run
  SubsampleConfig scfg = SubsampleConfig::with_horizon(0.25);
  scfg.h = 10;
  scfg.q = 200;
  scfg.r = 2.0;
  scfg.K = 6000;
  scfg.seed = 8010;
  auto sub = sample_subsampled(fp, {ybar}, {1.0}, scfg);
  const double sub_burn = 0.1 * sub.skeleton.total_time;
  const double sub_mean = trajectory_mean(sub.skeleton, 0, sub_burn);
  const double sub_se =
      0.1 / std::sqrt(ess_continuous(sub.skeleton, 5000, sub_burn).minimum);
  const double gap = std::abs(sub_mean - ref_mean);
  const double tol = 3.0 * std::hypot(ref_se, sub_se);
  if (gap > tol) {
    return fail(fmt("posterior means differ: %.4f vs %.4f (tol %.4f)", sub_mean,
                    ref_mean, tol));
  }

  // degenerate h = J run against the automatic sampler, in law
  SubsampleConfig dcfg = SubsampleConfig::with_horizon(0.25);
  dcfg.h = fp.num_terms;
  dcfg.q = 1;
  dcfg.r = 1.0;
  dcfg.K = 6000;
  dcfg.seed = 8011;
  auto degen = sample_subsampled(fp, {ybar}, {1.0}, dcfg);
  ZigZagConfig acfg = zcfg;
  acfg.seed = 8012;
  auto autod = sample_auto(full, {ybar}, {1.0}, acfg);
  auto thin = [](const Skeleton& skel) {
    std::vector<double> draws;
    for (double t0 = 0.5; t0 < skel.total_time; t0 += 0.5) {
      draws.push_back(interpolate(skel, t0)[0]);
    }
    return draws;
  };
  const double p = ks_two_sample_pvalue(thin(degen.skeleton), thin(autod));
  const std::string detail =
      fmt("means %.4f vs %.4f (tol %.4f); degenerate KS p = %.3f", sub_mean,
          ref_mean, tol, p);
  return p > 0.01 ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 9. Tail-bound validity: the closed-form return level and brute-force
//    coverage of a heterogeneous population.
Outcome criterion_gpd_bounds() {
  GpdFit unit_fit;
  unit_fit.xi = 0.0;
  unit_fit.sigma = 1.0;
  unit_fit.threshold = 0.0;
  unit_fit.n_exceedances = 1000;
  const double c_hat = 2.0 * gpd_return_level(unit_fit, 1000, 1000);
  if (std::abs(c_hat - 13.815510557964274) > 1e-6) {
    return fail(fmt("closed-form return level %.12f != 2 log 1000", c_hat));
  }

  const long J = 3000;
  Rng cloud(9009, 0);
  Vector y(static_cast<size_t>(J));
  for (double& v : y) v = 2.0 * cloud.normal();
  auto fp = make_gaussian_location_factored(y);
  State st{0.0, {0.3}, {1.0}};
  const double t_max = 0.5;
  double true_max = 0.0;
  for (long j = 0; j < J; ++j) {
    for (int g = 0; g <= 400; ++g) {
      const double t = t_max * g / 400.0;
      true_max = std::max(true_max,
                          std::max(static_cast<double>(J) *
                                       (0.3 + t - y[static_cast<size_t>(j)]),
                                   0.0));
    }
  }
  SubsampleConfig cfg = SubsampleConfig::with_horizon(t_max);
  cfg.h = 1;
  cfg.q = 1000;
  cfg.r = 2.0;
  Rng master(9010, 0);
  int covered = 0;
  const int trials = 100;
  ExceptionCollector errors;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int trial = 0; trial < trials; ++trial) {
    errors.run([&, trial] {
      auto est = estimate_bounds(fp, st, cfg,
                                 master.derive(static_cast<std::uint64_t>(trial)));
      if (est.dims[0].c_hat >= true_max) {
#ifdef _OPENMP
#pragma omp atomic
#endif
        ++covered;
      }
    });
  }
  errors.rethrow();
  const std::string detail =
      fmt("closed form ok; coverage %d/%d of population max %.0f", covered,
          trials, true_max);
  return covered >= 99 ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 10. Super-efficiency on simulated survival data with 1e5 observations:
//     per-switch gradient-term cost below 0.2x the full-data sampler, with
//     a bound-violation rate under 1%.
Outcome criterion_super_efficiency() {
  SurvivalParams truth{std::log(1.2), {7.0, -0.3, -0.7}};
  const long J = 100000;
  auto data = simulate_survival(J, truth, 3000.0, 10010);
  auto fp = make_weibull_survival_factored(data);
  auto full_target = TargetSpec{};
  full_target.name = "survival";
  full_target.dim = 4;
  full_target.potential = to_full_potential(fp, /*parallel=*/true);
  const Vector x0{truth.log_alpha, truth.beta[0], truth.beta[1], truth.beta[2]};
  const double t_max = 0.01;

  ZigZagConfig full_cfg = ZigZagConfig::with_horizon(t_max);
  full_cfg.K = 100;
  full_cfg.seed = 10011;
  auto full_run = sample_auto(full_target, x0, default_v0(4), full_cfg);
  const double full_terms_per_switch =
      static_cast<double>(full_run.counters.total()) * static_cast<double>(J) /
      static_cast<double>(full_run.points.size());

  SubsampleConfig sub_cfg = SubsampleConfig::with_horizon(t_max);
  sub_cfg.h = 20;
  sub_cfg.q = 1000;
  sub_cfg.r = 2.0;
  sub_cfg.K = 300;
  sub_cfg.seed = 10012;
  auto sub_run = sample_subsampled(fp, x0, default_v0(4), sub_cfg);
  const double sub_terms_per_switch =
      static_cast<double>(sub_run.skeleton.counters.term_evals) /
      static_cast<double>(sub_run.skeleton.points.size());

  const double ratio = sub_terms_per_switch / full_terms_per_switch;
  const double violation_rate =
      static_cast<double>(sub_run.skeleton.bound_violations) /
      static_cast<double>(sub_run.acceptance_tests);
  const std::string detail =
      fmt("terms/switch: subsampled %.0f vs full %.0f (ratio %.3f); "
          "violations %.3f%% of %llu tests",
          sub_terms_per_switch, full_terms_per_switch, ratio,
          100.0 * violation_rate,
          static_cast<unsigned long long>(sub_run.acceptance_tests));
  if (ratio >= 0.2) return fail(detail);
  if (violation_rate >= 0.01) return fail(detail);
  return pass(detail);
}

// ---------------------------------------------------------------------------
// 11. Leapfrog order check: halving the step quarters the energy drift.
Outcome criterion_leapfrog_order() {
  auto target = make_gaussian({0.0}, Matrix::identity(1));
  const Vector x{1.0};
  const Vector p{0.5};
  auto hamiltonian = [&target](const Vector& xx, const Vector& pp) {
    return target.potential.value(xx) + 0.5 * pp[0] * pp[0];
  };
  const double h0 = hamiltonian(x, p);
  auto coarse = leapfrog(target, x, p, 10, 0.1);
  auto fine = leapfrog(target, x, p, 20, 0.05);
  const double drift_coarse = std::abs(hamiltonian(coarse.x, coarse.p) - h0);
  const double drift_fine = std::abs(hamiltonian(fine.x, fine.p) - h0);
  const double ratio = drift_coarse / drift_fine;
  const std::string detail =
      fmt("|dH| %.3g -> %.3g, ratio %.2f", drift_coarse, drift_fine, ratio);
  return (ratio >= 3.5 && ratio <= 4.5) ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 12. Determinism: a sample run repeated with the same config and seed
//     produces byte-identical CSV artifacts.
Outcome criterion_determinism() {
  namespace cli = zigzag::cli;
  fs::create_directories(g_out_dir);
  setenv("ZIGZAG_OUTPUT_ROOT", g_out_dir.c_str(), 1);
  cli::Json config{{"target", {{"name", "cor-g2"}}},
                   {"sampler", "auto-zigzag"},
                   {"zigzag", {{"t_max", 0.8}}},
                   {"K", 500},
                   {"chains", 2},
                   {"seed", 12012},
                   {"output_dir", "det_a"}};
  if (cli::cmd_sample(config) != 0) return fail("first run failed");
  config["output_dir"] = "det_b";
  if (cli::cmd_sample(config) != 0) return fail("second run failed");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const char* name : {"skeleton_000.csv", "skeleton_001.csv"}) {
    const std::string a = slurp(g_out_dir / "det_a" / name);
    const std::string b = slurp(g_out_dir / "det_b" / name);
    if (a.empty() || a != b) return fail(fmt("%s differs between runs", name));
  }
  unsetenv("ZIGZAG_OUTPUT_ROOT");
  return pass("two runs, two chains each: byte-identical skeleton CSVs");
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--data-dir") == 0 && i + 1 < argc) {
      g_data_dir = argv[++i];
    } else if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      g_out_dir = argv[++i];
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--data-dir DIR] [--out DIR] [--only N]\n",
                   argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "gradient exactness vs finite differences", criterion_gradients},
      {2, "first-switch law under thinning", criterion_thinning_law},
      {3, "invariant-distribution recovery", criterion_moments},
      {4, "budgeted efficiency ordering vs HMC", criterion_budgeted_comparison},
      {5, "tail-start robustness on the quartic", criterion_robustness},
      {6, "budget bookkeeping identities", criterion_bookkeeping},
      {7, "horizon tuning on the dugong posterior", criterion_dugong_tuning},
      {8, "subsampling consistency", criterion_subsampling_consistency},
      {9, "tail-bound estimation validity", criterion_gpd_bounds},
      {10, "super-efficiency on big survival data", criterion_super_efficiency},
      {11, "leapfrog energy-drift order", criterion_leapfrog_order},
      {12, "artifact determinism", criterion_determinism},
  };

  int failed = 0;
  int ran = 0;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = fail(fmt("exception: %s", e.what()));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const char* tag = outcome.kind == Outcome::kPass   ? "PASS"
                      : outcome.kind == Outcome::kSkip ? "SKIP"
                                                       : "FAIL";
    std::printf("[%2d] %s  %s (%.1fs)\n     %s\n", criterion.id, tag,
                criterion.name, secs, outcome.detail.c_str());
    std::fflush(stdout);
    if (outcome.kind == Outcome::kFail) ++failed;
  }
  std::printf("\n%d/%d criteria passed%s\n", ran - failed, ran,
              failed == 0 ? "" : " -- FAILURES PRESENT");
  return failed == 0 ? 0 : 1;
}
