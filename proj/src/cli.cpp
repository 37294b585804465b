#include "zigzag/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "zigzag/diagnostics.hpp"
#include "zigzag/hmc.hpp"
#include "zigzag/parallel.hpp"
#include "zigzag/stats.hpp"
#include "zigzag/subsample.hpp"
#include "zigzag/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zigzag::cli {

namespace fs = std::filesystem;

namespace {

template <class T>
T get_or(const Json& j, const std::string& key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

template <class T>
T require(const Json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    throw ConfigError("missing required config field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

Matrix matrix_from_json(const Json& j) {
  auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) throw ConfigError("matrix config must be non-empty");
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) throw ConfigError("ragged matrix config");
    for (size_t c = 0; c < rows[r].size(); ++c) {
      m.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    }
  }
  return m;
}

fs::path ensure_output_dir(const Json& config) {
  fs::path dir = fs::path(output_root()) / require<std::string>(config, "output_dir");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string());
  return dir;
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const Json& config, const Json& extra) {
  Json manifest;
  manifest["command"] = command;
  manifest["config"] = config;
  manifest["config_hash"] = config_hash(config);
  manifest["seed"] = get_or<std::uint64_t>(config, "seed", 0);
  manifest["version"] = kVersion;
  for (auto it = extra.begin(); it != extra.end(); ++it) manifest[it.key()] = it.value();
  write_json(dir / "manifest.json", manifest);
}

Json counters_to_json(const BudgetCounters& c) {
  return Json{{"opt_evals", c.opt_evals},
              {"tpp_evals", c.tpp_evals},
              {"total", c.total()},
              {"term_evals", c.term_evals}};
}

void apply_threads(const Json& config) {
#ifdef _OPENMP
  int threads = get_or<int>(config, "threads", 0);
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)config;
#endif
}

std::string chain_tag(int chain) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", chain);
  return buf;
}

Vector parse_point(const Json& block, const std::string& key, int dim,
                   const Vector& fallback) {
  if (!block.contains(key) || block.at(key).is_null()) return fallback;
  auto v = block.at(key).get<Vector>();
  if (static_cast<int>(v.size()) != dim) {
    throw ConfigError("'" + key + "' must have dimension " + std::to_string(dim));
  }
  return v;
}

struct ZigZagRunSettings {
  ZigZagConfig cfg;
  Vector x0;
  Vector v0;
};

ZigZagRunSettings zigzag_settings(const Json& config, const TargetSpec& target) {
  const Json block = config.contains("zigzag") ? config.at("zigzag") : Json::object();
  ZigZagRunSettings s;
  s.cfg = ZigZagConfig::with_horizon(get_or<double>(block, "t_max", 1.0));
  if (config.contains("K") && !config.at("K").is_null()) {
    s.cfg.K = config.at("K").get<long>();
  }
  if (config.contains("budget") && !config.at("budget").is_null()) {
    s.cfg.budget = config.at("budget").get<std::uint64_t>();
  }
  if (!s.cfg.K && !s.cfg.budget) {
    throw ConfigError("set 'K' or 'budget' for a zig-zag run");
  }
  s.cfg.seed = get_or<std::uint64_t>(config, "seed", 0);
  double refresh = get_or<double>(block, "refresh", 0.0);
  if (refresh < 0.0) throw ConfigError("'refresh' must be nonnegative");
  if (refresh > 0.0) s.cfg.refresh = Vector(static_cast<size_t>(target.dim), refresh);
  s.x0 = parse_point(block, "x0", target.dim, default_x0(target.dim));
  s.v0 = parse_point(block, "v0", target.dim, default_v0(target.dim));
  for (double v : s.v0) {
    if (v != 1.0 && v != -1.0) throw ConfigError("'v0' entries must be +-1");
  }
  return s;
}

}  // namespace

std::string output_root() {
  const char* root = std::getenv("ZIGZAG_OUTPUT_ROOT");
  return (root != nullptr && *root != '\0') ? root : ".";
}

Json canonical_config(const Json& config) {
  // The experiment identity: where the artifacts land and how many workers
  // ran do not change the results.
  Json canonical = config;
  canonical.erase("output_dir");
  canonical.erase("threads");
  return canonical;
}

std::string config_hash(const Json& config) {
  const std::string dump = canonical_config(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
}

TargetSpec target_from_config(const Json& target_cfg) {
  const std::string name = require<std::string>(target_cfg, "name");
  auto covariance_or_identity = [&](int dim) {
    if (target_cfg.contains("covariance")) return matrix_from_json(target_cfg.at("covariance"));
    return Matrix::identity(dim);
  };
  try {
    if (name == "iso-g2") return make_gaussian({0.0, 0.0}, Matrix::identity(2));
    if (name == "cor-g2") {
      Matrix cov(2, 2);
      cov.at(0, 0) = cov.at(1, 1) = 1.0;
      cov.at(0, 1) = cov.at(1, 0) = 0.9;
      return make_gaussian({0.0, 0.0}, cov);
    }
    if (name == "dsc-g2") {
      Matrix cov(2, 2);
      cov.at(0, 0) = 1.0;
      cov.at(1, 1) = 100.0;
      return make_gaussian({0.0, 0.0}, cov);
    }
    if (name == "bimod-g2") {
      return make_gaussian_mixture({0.5, 0.5}, {{2.0, 0.0}, {-2.0, 0.0}},
                                   {Matrix::identity(2), Matrix::identity(2)});
    }
    if (name == "lt2") return make_quartic(2);
    if (name == "ht2") return make_student_t(2.0, 2);
    if (name == "gaussian") {
      auto mean = require<Vector>(target_cfg, "mean");
      return make_gaussian(mean, covariance_or_identity(static_cast<int>(mean.size())));
    }
    if (name == "gaussian-mixture") {
      auto weights = require<std::vector<double>>(target_cfg, "weights");
      auto means = require<std::vector<Vector>>(target_cfg, "means");
      std::vector<Matrix> covs;
      for (const auto& c : require<Json>(target_cfg, "covariances")) {
        covs.push_back(matrix_from_json(c));
      }
      return make_gaussian_mixture(weights, means, covs);
    }
    if (name == "student-t") {
      return make_student_t(require<double>(target_cfg, "dof"),
                            require<int>(target_cfg, "dim"));
    }
    if (name == "quartic") return make_quartic(require<int>(target_cfg, "dim"));
    if (name == "gaussian-location") {
      return make_gaussian_location(require<Vector>(target_cfg, "y"));
    }
    if (name == "dugong" || name == "weibull-survival") {
      const std::string path = require<std::string>(target_cfg, "data");
      if (!fs::exists(path)) {
        throw ConfigError("dataset file does not exist: " + path);
      }
      if (name == "dugong") return make_dugong(read_dugong_csv(path));
      return make_weibull_survival(read_survival_csv(path));
    }
  } catch (const InvalidCovariance& e) {
    throw ConfigError(std::string("invalid covariance: ") + e.what());
  } catch (const InvalidMixture& e) {
    throw ConfigError(std::string("invalid mixture: ") + e.what());
  }
  throw ConfigError("unknown target name: " + name);
}

int cmd_sample(const Json& config) {
  apply_threads(config);
  const TargetSpec target = target_from_config(require<Json>(config, "target"));
  const std::string sampler = get_or<std::string>(config, "sampler", "auto-zigzag");
  const fs::path dir = ensure_output_dir(config);
  const int chains = get_or<int>(config, "chains", 1);
  if (chains < 1) throw ConfigError("'chains' must be at least 1");
  const double burn_in = get_or<double>(config, "burn_in", 0.1);
  const int ess_grid = get_or<int>(config, "ess_grid", 10000);

  Json chain_reports = Json::array();
  Json artifacts = Json::array();

  if (sampler == "auto-zigzag" || sampler == "canonical-zigzag") {
    ZigZagRunSettings s = zigzag_settings(config, target);
    if (sampler == "canonical-zigzag" && !s.cfg.K) {
      throw ConfigError("canonical-zigzag runs need 'K'");
    }
    std::vector<Skeleton> skels(static_cast<size_t>(chains));
    ExceptionCollector errors;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (chains > 1)
#endif
    for (int c = 0; c < chains; ++c) {
      errors.run([&, c] {
        if (sampler == "canonical-zigzag") {
          const Json block = config.at("zigzag");
          const double bound = require<double>(block, "global_bound");
          skels[static_cast<size_t>(c)] =
              sample_canonical(target, s.x0, s.v0, bound, *s.cfg.K, s.cfg.seed,
                               static_cast<std::uint64_t>(c));
        } else {
          ZigZagConfig cfg = s.cfg;
          cfg.stream = static_cast<std::uint64_t>(c);
          skels[static_cast<size_t>(c)] = sample_auto(target, s.x0, s.v0, cfg);
        }
      });
    }
    errors.rethrow();
    for (int c = 0; c < chains; ++c) {
      const Skeleton& skel = skels[static_cast<size_t>(c)];
      const std::string csv = "skeleton_" + chain_tag(c) + ".csv";
      write_skeleton_csv((dir / csv).string(), skel);
      artifacts.push_back(csv);
      Json report;
      report["chain"] = c;
      report["seed"] = get_or<std::uint64_t>(config, "seed", 0);
      report["config"] = canonical_config(config);
      report["config_hash"] = config_hash(config);
      report["n_switches"] = skel.points.size();
      report["total_time"] = skel.total_time;
      report["counters"] = counters_to_json(skel.counters);
      report["bound_violations"] = skel.bound_violations;
      report["initial"] = Json{{"x", skel.initial.position}, {"v", skel.initial.velocity}};
      if (skel.total_time > 0.0 && skel.points.size() >= 3) {
        EssReport ess = ess_continuous(skel, ess_grid, burn_in * skel.total_time);
        report["ess"] = Json{{"per_dimension", ess.per_dimension},
                             {"minimum", ess.minimum},
                             {"method", ess.method}};
      }
      write_json(dir / ("skeleton_" + chain_tag(c) + ".json"), report);
      chain_reports.push_back(report);
    }
  } else if (sampler == "subsampled-zigzag") {
    const Json block = config.contains("subsample") ? config.at("subsample") : Json::object();
    const FactoredPotential fp = [&]() {
      const Json& tcfg = config.at("target");
      const std::string name = require<std::string>(tcfg, "name");
      if (name == "weibull-survival") {
        return make_weibull_survival_factored(
            read_survival_csv(require<std::string>(tcfg, "data")));
      }
      if (name == "gaussian-location") {
        return make_gaussian_location_factored(require<Vector>(tcfg, "y"));
      }
      throw ConfigError("subsampled-zigzag supports factored targets only "
                        "(weibull-survival, gaussian-location)");
    }();
    SubsampleConfig cfg = SubsampleConfig::with_horizon(get_or<double>(block, "t_max", 0.1));
    cfg.h = get_or<long>(block, "h", 20);
    cfg.q = get_or<long>(block, "q", 1000);
    cfg.r = get_or<double>(block, "r", 2.0);
    if (cfg.h < 1 || cfg.h > fp.num_terms) throw ConfigError("'h' must satisfy 1 <= h <= J");
    if (cfg.r < 1.0) throw ConfigError("'r' must be at least 1");
    if (cfg.q < 30 && cfg.h != fp.num_terms) {
      throw ConfigError("'q' must be at least 30 for genuine subsampling");
    }
    cfg.seed = get_or<std::uint64_t>(config, "seed", 0);
    if (config.contains("K") && !config.at("K").is_null()) cfg.K = config.at("K").get<long>();
    if (!cfg.K) throw ConfigError("subsampled runs need 'K'");
    Vector x0 = parse_point(block, "x0", fp.dim, default_x0(fp.dim));
    Vector v0 = parse_point(block, "v0", fp.dim, default_v0(fp.dim));
    std::vector<SubsampleRun> runs(static_cast<size_t>(chains));
    for (int c = 0; c < chains; ++c) {
      SubsampleConfig chain_cfg = cfg;
      chain_cfg.stream = static_cast<std::uint64_t>(c);
      runs[static_cast<size_t>(c)] = sample_subsampled(fp, x0, v0, chain_cfg);
    }
    for (int c = 0; c < chains; ++c) {
      const SubsampleRun& run = runs[static_cast<size_t>(c)];
      const std::string csv = "skeleton_" + chain_tag(c) + ".csv";
      const std::string audit = "bounds_audit_" + chain_tag(c) + ".csv";
      write_skeleton_csv((dir / csv).string(), run.skeleton);
      write_bounds_audit_csv((dir / audit).string(), run.audit);
      artifacts.push_back(csv);
      artifacts.push_back(audit);
      Json report;
      report["chain"] = c;
      report["seed"] = get_or<std::uint64_t>(config, "seed", 0);
      report["config"] = canonical_config(config);
      report["config_hash"] = config_hash(config);
      report["n_switches"] = run.skeleton.points.size();
      report["total_time"] = run.skeleton.total_time;
      report["counters"] = counters_to_json(run.skeleton.counters);
      report["bound_violations"] = run.skeleton.bound_violations;
      report["acceptance_tests"] = run.acceptance_tests;
      write_json(dir / ("skeleton_" + chain_tag(c) + ".json"), report);
      chain_reports.push_back(report);
    }
  } else if (sampler == "hmc") {
    const Json block = config.contains("hmc") ? config.at("hmc") : Json::object();
    HmcConfig cfg;
    cfg.leapfrog_steps = get_or<int>(block, "leapfrog_steps", 10);
    cfg.step_size = get_or<double>(block, "step_size", 0.1);
    cfg.seed = get_or<std::uint64_t>(config, "seed", 0);
    if (config.contains("budget") && !config.at("budget").is_null()) {
      cfg.iterations = static_cast<long>(config.at("budget").get<std::uint64_t>() /
                                         static_cast<std::uint64_t>(cfg.leapfrog_steps + 1));
    } else {
      cfg.iterations = require<long>(config, "K");
    }
    if (cfg.iterations < 1) throw ConfigError("HMC budget smaller than one iteration");
    Vector x0 = parse_point(block, "x0", target.dim, default_x0(target.dim));
    std::vector<HmcResult> results(static_cast<size_t>(chains));
    ExceptionCollector errors;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (chains > 1)
#endif
    for (int c = 0; c < chains; ++c) {
      errors.run([&, c] {
        HmcConfig chain_cfg = cfg;
        chain_cfg.stream = static_cast<std::uint64_t>(c);
        results[static_cast<size_t>(c)] = sample_hmc(target, x0, chain_cfg);
      });
    }
    errors.rethrow();
    for (int c = 0; c < chains; ++c) {
      const HmcResult& res = results[static_cast<size_t>(c)];
      const std::string csv = "chain_" + chain_tag(c) + ".csv";
      write_chain_csv((dir / csv).string(), res);
      artifacts.push_back(csv);
      Json report;
      report["chain"] = c;
      report["accept_rate"] = res.accept_rate;
      report["grad_evals"] = res.grad_evals;
      EssReport ess = ess_discrete(res.chain, static_cast<long>(burn_in * cfg.iterations));
      report["ess"] = Json{{"per_dimension", ess.per_dimension},
                           {"minimum", ess.minimum},
                           {"method", ess.method}};
      write_json(dir / ("chain_" + chain_tag(c) + ".json"), report);
      chain_reports.push_back(report);
    }
  } else {
    throw ConfigError("unknown sampler: " + sampler);
  }

  BudgetCounters totals;
  std::uint64_t total_violations = 0;
  for (const auto& report : chain_reports) {
    if (report.contains("counters")) {
      totals.opt_evals += report["counters"]["opt_evals"].get<std::uint64_t>();
      totals.tpp_evals += report["counters"]["tpp_evals"].get<std::uint64_t>();
      totals.term_evals += report["counters"]["term_evals"].get<std::uint64_t>();
    }
    if (report.contains("grad_evals")) {
      totals.tpp_evals += report["grad_evals"].get<std::uint64_t>();
    }
    if (report.contains("bound_violations")) {
      total_violations += report["bound_violations"].get<std::uint64_t>();
    }
  }
  write_json(dir / "diagnostics.json", Json{{"chains", chain_reports}});
  write_manifest(dir, "sample", config,
                 Json{{"artifacts", artifacts},
                      {"counters", counters_to_json(totals)},
                      {"bound_violations", total_violations}});
  return 0;
}

int cmd_tune(const Json& config) {
  apply_threads(config);
  const TargetSpec target = target_from_config(require<Json>(config, "target"));
  const Json block = require<Json>(config, "tune");
  const auto candidates = require<std::vector<double>>(block, "candidates");
  const long pilot_K = get_or<long>(block, "pilot_K", 1000);
  const int replicates = get_or<int>(block, "replicates", 100);
  const fs::path dir = ensure_output_dir(config);

  const Json zz = config.contains("zigzag") ? config.at("zigzag") : Json::object();
  Vector x0 = parse_point(zz, "x0", target.dim, default_x0(target.dim));
  Vector v0 = parse_point(zz, "v0", target.dim, default_v0(target.dim));
  TmaxTuneResult result =
      tune_tmax(target, candidates, pilot_K, replicates,
                get_or<std::uint64_t>(config, "seed", 0), x0, v0);

  std::ofstream csv(dir / "tuning.csv", std::ios::binary);
  if (!csv) throw Error("cannot write tuning.csv");
  csv << "t_max,replicate,total_evals\n";
  for (const auto& row : result.rows) {
    for (size_t rep = 0; rep < row.totals.size(); ++rep) {
      csv << format_double17(row.t_max) << ',' << rep << ','
          << format_double17(row.totals[rep]) << '\n';
    }
  }
  Json summary;
  summary["selected_t_max"] = result.selected;
  Json rows = Json::array();
  for (const auto& row : result.rows) {
    rows.push_back(Json{{"t_max", row.t_max},
                        {"median", row.median},
                        {"lower_quartile", row.lower_quartile},
                        {"upper_quartile", row.upper_quartile}});
  }
  summary["rows"] = rows;
  write_json(dir / "tuning.json", summary);
  write_manifest(dir, "tune", config,
                 Json{{"artifacts", Json::array({"tuning.csv", "tuning.json"})},
                      {"selected_t_max", result.selected}});
  return 0;
}

int cmd_compare(const Json& config) {
  apply_threads(config);
  const TargetSpec target = target_from_config(require<Json>(config, "target"));
  const Json block = config.contains("compare") ? config.at("compare") : Json::object();
  const std::uint64_t budget = require<std::uint64_t>(config, "budget");
  const int chains = get_or<int>(block, "chains", 100);
  const double burn_in = get_or<double>(config, "burn_in", 0.1);
  const int ess_grid = get_or<int>(config, "ess_grid", 10000);
  const std::uint64_t seed = get_or<std::uint64_t>(config, "seed", 0);
  const fs::path dir = ensure_output_dir(config);

  const Json zz = config.contains("zigzag") ? config.at("zigzag") : Json::object();
  const Json hm = config.contains("hmc") ? config.at("hmc") : Json::object();
  const double t_max = get_or<double>(zz, "t_max", 1.0);
  HmcConfig hmc_cfg;
  hmc_cfg.leapfrog_steps = get_or<int>(hm, "leapfrog_steps", 10);
  hmc_cfg.step_size = get_or<double>(hm, "step_size", 0.1);
  hmc_cfg.seed = seed;

  Json report;
  report["target"] = target.name;
  report["budget"] = budget;
  report["chains"] = chains;

  std::vector<double> zz_ess(static_cast<size_t>(chains));
  std::vector<double> hmc_ess;
  const bool hmc_feasible =
      budget >= static_cast<std::uint64_t>(hmc_cfg.leapfrog_steps + 1);

  ExceptionCollector errors;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (chains > 1)
#endif
  for (int c = 0; c < chains; ++c) {
    errors.run([&, c] {
      ZigZagConfig cfg = ZigZagConfig::with_horizon(t_max);
      cfg.budget = budget;
      cfg.seed = seed;
      cfg.stream = static_cast<std::uint64_t>(c);
      Skeleton skel = sample_auto(target, default_x0(target.dim), default_v0(target.dim), cfg);
      if (skel.total_time > 0.0) {
        EssReport ess = ess_continuous(skel, ess_grid, burn_in * skel.total_time);
        zz_ess[static_cast<size_t>(c)] = ess.minimum;
      } else {
        zz_ess[static_cast<size_t>(c)] = 0.0;  // budget below one optimization
      }
    });
  }
  errors.rethrow();

  if (hmc_feasible) {
    hmc_ess.resize(static_cast<size_t>(chains));
    hmc_cfg.iterations = static_cast<long>(
        budget / static_cast<std::uint64_t>(hmc_cfg.leapfrog_steps + 1));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (chains > 1)
#endif
    for (int c = 0; c < chains; ++c) {
      errors.run([&, c] {
        HmcConfig cfg = hmc_cfg;
        cfg.stream = static_cast<std::uint64_t>(c);
        HmcResult res = sample_hmc(target, default_x0(target.dim), cfg);
        EssReport ess = ess_discrete(res.chain, static_cast<long>(burn_in * cfg.iterations));
        hmc_ess[static_cast<size_t>(c)] = ess.minimum;
      });
    }
    errors.rethrow();
  }

  std::ofstream csv(dir / "compare.csv", std::ios::binary);
  if (!csv) throw Error("cannot write compare.csv");
  csv << "sampler,chain,min_ess\n";
  for (int c = 0; c < chains; ++c) {
    csv << "zigzag," << c << ',' << format_double17(zz_ess[static_cast<size_t>(c)]) << '\n';
  }
  for (size_t c = 0; c < hmc_ess.size(); ++c) {
    csv << "hmc," << c << ',' << format_double17(hmc_ess[c]) << '\n';
  }

  report["zigzag"] = Json{{"t_max", t_max}, {"median_min_ess", median(zz_ess)}};
  if (hmc_feasible) {
    report["hmc"] = Json{{"leapfrog_steps", hmc_cfg.leapfrog_steps},
                         {"step_size", hmc_cfg.step_size},
                         {"iterations", hmc_cfg.iterations},
                         {"median_min_ess", median(hmc_ess)}};
    report["ess_ratio_zz_over_hmc"] = median(zz_ess) / median(hmc_ess);
  } else {
    report["hmc"] = Json{{"insufficient_budget", true}};
  }
  write_json(dir / "compare.json", report);
  write_manifest(dir, "compare", config,
                 Json{{"artifacts", Json::array({"compare.csv", "compare.json"})}});
  return 0;
}

int cmd_robustness(const Json& config) {
  apply_threads(config);
  const TargetSpec target = target_from_config(require<Json>(config, "target"));
  const Json block = require<Json>(config, "robustness");
  const auto starts = require<std::vector<Vector>>(block, "starts");
  if (starts.empty()) throw ConfigError("robustness needs a non-empty start grid");
  const long K = get_or<long>(block, "K", 1000);
  const std::string sampler = get_or<std::string>(config, "sampler", "auto-zigzag");
  const std::uint64_t seed = get_or<std::uint64_t>(config, "seed", 0);
  const fs::path dir = ensure_output_dir(config);

  std::ofstream csv(dir / "robustness.csv", std::ios::binary);
  if (!csv) throw Error("cannot write robustness.csv");
  csv << "start_index";
  for (int i = 1; i <= target.dim; ++i) csv << ",start_x" << i;
  for (int i = 1; i <= target.dim; ++i) csv << ",final_x" << i;
  csv << ",distance_moved,final_radius\n";

  Json artifacts = Json::array({"robustness.csv"});
  for (size_t s = 0; s < starts.size(); ++s) {
    if (static_cast<int>(starts[s].size()) != target.dim) {
      throw ConfigError("start point dimension mismatch");
    }
    Vector final_x;
    const std::string traj = (sampler == "hmc" ? "chain_" : "skeleton_") +
                             chain_tag(static_cast<int>(s)) + ".csv";
    if (sampler == "hmc") {
      const Json hm = config.contains("hmc") ? config.at("hmc") : Json::object();
      HmcConfig cfg;
      cfg.leapfrog_steps = get_or<int>(hm, "leapfrog_steps", 10);
      cfg.step_size = get_or<double>(hm, "step_size", 0.1);
      cfg.iterations = K;
      cfg.seed = seed;
      cfg.stream = static_cast<std::uint64_t>(s);
      HmcResult res = sample_hmc(target, starts[s], cfg);
      write_chain_csv((dir / traj).string(), res);
      final_x.resize(starts[s].size());
      for (int c = 0; c < target.dim; ++c) {
        final_x[static_cast<size_t>(c)] = res.chain.at(res.chain.rows - 1, c);
      }
    } else {
      const Json zz = config.contains("zigzag") ? config.at("zigzag") : Json::object();
      ZigZagConfig cfg = ZigZagConfig::with_horizon(get_or<double>(zz, "t_max", 1.0));
      cfg.K = K;
      cfg.seed = seed;
      cfg.stream = static_cast<std::uint64_t>(s);
      Skeleton skel = sample_auto(target, starts[s], default_v0(target.dim), cfg);
      write_skeleton_csv((dir / traj).string(), skel);
      final_x = skel.terminal.x;
    }
    artifacts.push_back(traj);
    double moved = 0.0, radius = 0.0;
    for (int c = 0; c < target.dim; ++c) {
      const double dx = final_x[static_cast<size_t>(c)] - starts[s][static_cast<size_t>(c)];
      moved += dx * dx;
      radius += final_x[static_cast<size_t>(c)] * final_x[static_cast<size_t>(c)];
    }
    csv << s;
    for (int c = 0; c < target.dim; ++c) {
      csv << ',' << format_double17(starts[s][static_cast<size_t>(c)]);
    }
    for (int c = 0; c < target.dim; ++c) {
      csv << ',' << format_double17(final_x[static_cast<size_t>(c)]);
    }
    csv << ',' << format_double17(std::sqrt(moved)) << ','
        << format_double17(std::sqrt(radius)) << '\n';
  }
  write_manifest(dir, "robustness", config, Json{{"artifacts", artifacts}});
  return 0;
}

int cmd_simulate_data(const Json& config) {
  const Json block = require<Json>(config, "simulate");
  SurvivalParams truth;
  truth.log_alpha = get_or<double>(block, "log_alpha", 0.2);
  truth.beta = get_or<Vector>(block, "beta", Vector{7.0, -0.3, -0.7});
  const long J = require<long>(block, "J");
  const double censor_time = get_or<double>(block, "censor_time", 3000.0);
  const fs::path dir = ensure_output_dir(config);
  const std::string name = get_or<std::string>(block, "path", "survival.csv");
  SurvivalDataset data =
      simulate_survival(J, truth, censor_time, get_or<std::uint64_t>(config, "seed", 0));
  write_survival_csv((dir / name).string(), data);
  write_manifest(dir, "simulate-data", config,
                 Json{{"artifacts", Json::array({name})}});
  return 0;
}

int dispatch(const std::string& command, const Json& config) {
  try {
    if (command == "sample") return cmd_sample(config);
    if (command == "tune") return cmd_tune(config);
    if (command == "compare") return cmd_compare(config);
    if (command == "robustness") return cmd_robustness(config);
    if (command == "simulate-data") return cmd_simulate_data(config);
    std::cerr << "unknown command: " << command << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace zigzag::cli
