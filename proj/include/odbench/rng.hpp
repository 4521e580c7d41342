#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace odbench {

/// Counter-based deterministic random stream (splitmix64 over an
/// incrementing counter). The same key always reproduces the same
/// sequence on every platform, which is what keeps parallel detector
/// ensembles bit-reproducible: each worker gets its own keyed stream.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Fixed-point multiply keeps the draw
  /// platform-independent (bias is ~n/2^64, negligible here).
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Standard normal via Box-Muller; one value per call, the pair's
  /// second member is cached.
  double next_normal();

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Order-dependent mixing of seed material (splitmix64 finalizer chain).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// FNV-1a over bytes, for folding names into seeds.
std::uint64_t hash_string(std::string_view s);

/// `count` distinct indices from [0, n), partial Fisher-Yates order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count,
                                                    Rng& rng);

}  // namespace odbench
