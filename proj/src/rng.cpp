#include "zigzag/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace zigzag {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
  __uint128_t p = static_cast<__uint128_t>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  key_[0] = splitmix64(s);
  key_[1] = splitmix64(s);
  std::uint64_t t = stream ^ 0xA02BDBF7BB3C0A7ULL;
  key_[0] ^= splitmix64(t);
  key_[1] ^= splitmix64(t);
}

void Rng::block(const std::uint64_t key[2], std::uint64_t counter,
                std::uint64_t out[4]) {
  constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;
  std::uint64_t x0 = counter, x1 = 0, x2 = 0, x3 = 0;
  std::uint64_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, x0, hi0, lo0);
    mulhilo(kMul1, x2, hi1, lo1);
    std::uint64_t y0 = hi1 ^ x1 ^ k0;
    std::uint64_t y1 = lo1;
    std::uint64_t y2 = hi0 ^ x3 ^ k1;
    std::uint64_t y3 = lo0;
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  out[0] = x0;
  out[1] = x1;
  out[2] = x2;
  out[3] = x3;
}

void Rng::refill() {
  block(key_, counter_++, buf_);
  buf_pos_ = 0;
}

std::uint64_t Rng::next_u64() {
  if (buf_pos_ >= 4) refill();
  return buf_[buf_pos_++];
}

double Rng::uniform() {
  // 53 significant bits, shifted half a lattice step away from both 0 and 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::exponential(double rate) {
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(uniform()) / rate;
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

Rng Rng::derive(std::uint64_t tag) const {
  Rng child;
  std::uint64_t t = tag ^ 0x6C62272E07BB0142ULL;
  child.key_[0] = key_[0] ^ splitmix64(t);
  child.key_[1] = key_[1] ^ splitmix64(t);
  child.counter_ = 0;
  child.buf_pos_ = 4;
  child.has_cached_normal_ = false;
  return child;
}

std::vector<long> sample_without_replacement(long n, long h, Rng& rng) {
  if (h < 0 || h > n) {
    throw std::invalid_argument("sample_without_replacement: need 0 <= h <= n");
  }
  std::vector<long> out;
  out.reserve(static_cast<size_t>(h));
  if (h == n) {
    for (long i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  // Sparse Fisher-Yates: only displaced slots are materialized.
  std::unordered_map<long, long> displaced;
  displaced.reserve(static_cast<size_t>(2 * h));
  for (long i = 0; i < h; ++i) {
    long j = i + static_cast<long>(rng.uniform_index(static_cast<std::uint64_t>(n - i)));
    auto it = displaced.find(j);
    long value = (it == displaced.end()) ? j : it->second;
    auto ii = displaced.find(i);
    displaced[j] = (ii == displaced.end()) ? i : ii->second;
    out.push_back(value);
  }
  return out;
}

}  // namespace zigzag
