#pragma once

#include <cstdint>

#include "zigzag/targets.hpp"

namespace zigzag {

struct HmcConfig {
  int leapfrog_steps = 10;  // L
  double step_size = 0.1;   // epsilon
  long iterations = 1000;   // K
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct LeapfrogResult {
  Vector x;
  Vector p;
  std::uint64_t grad_evals = 0;  // always L + 1
};

/// Standard half-step / L full steps / half-step leapfrog integration of
/// the Hamiltonian U(x) + |p|^2 / 2.  Inputs must be finite; a trajectory
/// that blows up mid-flight propagates NaN/Inf through the remaining steps
/// (and is rejected by the Metropolis test) so the evaluation count stays
/// exactly L + 1.
LeapfrogResult leapfrog(const TargetSpec& target, Vector x, Vector p, int L,
                        double step);

struct HmcResult {
  Matrix chain;  // K x d, post-update positions
  std::vector<std::uint8_t> accepted;
  double accept_rate = 0.0;
  std::uint64_t grad_evals = 0;  // exactly (L + 1) * K
};

/// Canonical HMC: standard-normal momenta, identity mass matrix, Metropolis
/// accept with min{1, exp(H - H')}.  Non-finite proposals count as
/// rejections.  Each iteration consumes d normals then one uniform from the
/// chain's stream.
HmcResult sample_hmc(const TargetSpec& target, Vector x0, const HmcConfig& cfg);

struct HmcTuning {
  int leapfrog_steps = 10;
  double step_size = 0.1;
  double min_ess = 0.0;  // pilot minimum-dimension ESS at the chosen setting
};

/// Grid-search tuning: pilot runs over step sizes and leapfrog counts under
/// a shared gradient-evaluation budget; picks the setting with the largest
/// minimum-dimension ESS.
HmcTuning tune_hmc(const TargetSpec& target, const Vector& x0,
                   std::uint64_t pilot_budget, std::uint64_t seed,
                   const std::vector<double>& step_grid = {0.01, 0.02, 0.05,
                                                           0.1, 0.2, 0.5, 1.0},
                   const std::vector<int>& l_grid = {5, 10, 20, 50},
                   bool parallel = true);

/// CSV with header iter,x1..xd,accepted.
void write_chain_csv(const std::string& path, const HmcResult& result);

}  // namespace zigzag
