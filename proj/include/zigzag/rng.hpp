#pragma once

#include <cstdint>
#include <vector>

namespace zigzag {

/// Counter-based pseudo-random generator (Philox-4x64-10).
///
/// Each generator is a pure function of (seed, stream, counter), so chains
/// can own independent streams and auxiliary work (e.g. parallel bound
/// estimation) can derive sub-streams without perturbing the draws the
/// owning chain consumes.  Output is reproducible across platforms and
/// thread counts.
class Rng {
 public:
  Rng() : Rng(0, 0) {}
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform draw strictly inside (0, 1): safe for log() and for use as a
  /// Bernoulli threshold.
  double uniform();

  /// Exponential with the given rate; rate <= 0 yields +infinity.
  double exponential(double rate);

  /// Standard normal (Box-Muller; the second value of each pair is cached).
  double normal();

  /// Uniform integer in [0, n) without modulo bias.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Independent sub-stream addressed by `tag`.  Deriving does not consume
  /// any state from this generator.
  Rng derive(std::uint64_t tag) const;

 private:
  static void block(const std::uint64_t key[2], std::uint64_t counter,
                    std::uint64_t out[4]);
  void refill();

  std::uint64_t key_[2];
  std::uint64_t counter_ = 0;
  std::uint64_t buf_[4];
  int buf_pos_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Sample `h` distinct indices from {0, ..., n-1} without replacement.
/// Uses O(h) memory (sparse Fisher-Yates).  The degenerate case h == n
/// returns 0..n-1 in order and consumes no randomness, so a full-data
/// "subsample" is reproducibly identical to not subsampling at all.
std::vector<long> sample_without_replacement(long n, long h, Rng& rng);

}  // namespace zigzag
