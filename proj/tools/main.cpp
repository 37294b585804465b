#include <CLI11.hpp>
#include <iostream>

#include "zigzag/cli.hpp"

// Batch front end.  Every subcommand reads a JSON config file; a few common
// fields can be overridden from the command line.  Exit codes: 0 success,
// 1 sampler/IO failure, 2 configuration error.
int main(int argc, char** argv) {
  CLI::App app{"Automatic zig-zag sampler"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::string sampler;
  std::int64_t seed = -1;
  std::int64_t chains = -1;
  std::int64_t K = -1;
  std::int64_t budget = -1;
  double t_max = -1.0;
  std::int64_t threads = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "JSON config file")->required();
    cmd->add_option("--output", output_dir, "override config output_dir");
    cmd->add_option("--seed", seed, "override config seed");
    cmd->add_option("--chains", chains, "override chain count");
    cmd->add_option("--sampler", sampler, "override sampler");
    cmd->add_option("--k", K, "override skeleton points / iterations");
    cmd->add_option("--budget", budget, "override gradient-evaluation budget");
    cmd->add_option("--t-max", t_max, "override zig-zag optimization horizon");
    cmd->add_option("--threads", threads, "worker threads (0 = library default)");
  };

  for (const char* name :
       {"sample", "tune", "compare", "robustness", "simulate-data"}) {
    add_common(app.add_subcommand(name));
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  nlohmann::json config;
  try {
    config = zigzag::cli::load_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  if (!output_dir.empty()) config["output_dir"] = output_dir;
  if (!sampler.empty()) config["sampler"] = sampler;
  if (seed >= 0) config["seed"] = static_cast<std::uint64_t>(seed);
  if (chains >= 0) config["chains"] = chains;
  if (K >= 0) config["K"] = K;
  if (budget >= 0) config["budget"] = static_cast<std::uint64_t>(budget);
  if (t_max >= 0.0) config["zigzag"]["t_max"] = t_max;
  if (threads >= 0) config["threads"] = threads;

  return zigzag::cli::dispatch(command, config);
}
