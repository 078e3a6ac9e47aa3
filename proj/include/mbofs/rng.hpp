#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mbofs {

/// A seeded random stream addressed by a derivation path.
///
/// Two streams built from the same master seed and the same path of
/// (tag, index) pairs produce identical sequences. Engines derive one child
/// per random decision site, e.g. (seed, "fly", tour, step, bird, neighbor),
/// so results never depend on the order in which work is scheduled.
class RngStream {
 public:
  using PathElement = std::pair<std::string, std::uint64_t>;

  explicit RngStream(std::uint64_t master_seed);

  /// New stream whose path is this stream's path extended by (tag, index).
  RngStream child(std::string_view tag, std::uint64_t index = 0) const;

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  const std::vector<PathElement>& path() const noexcept { return path_; }

  /// Raw 64-bit output.
  std::uint64_t next_u64();

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform01();

 private:
  RngStream(std::uint64_t master_seed, std::vector<PathElement> path);

  std::uint64_t master_seed_;
  std::vector<PathElement> path_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used for seed derivation and hashing.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace mbofs
