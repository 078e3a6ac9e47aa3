#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace mbofs {

/// A length-M bit vector; bit i set means feature i is selected.
class FeatureMask {
 public:
  FeatureMask() = default;
  explicit FeatureMask(std::size_t universe, bool value = false);

  /// Parses a string of '0'/'1' characters.
  static FeatureMask from_string(std::string_view bits);
  static FeatureMask from_indices(std::size_t universe, const std::vector<std::size_t>& on);

  std::size_t size() const noexcept { return size_; }
  bool empty_universe() const noexcept { return size_ == 0; }

  bool test(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= bit;
    else
      words_[i >> 6] &= ~bit;
  }
  void toggle(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t popcount() const noexcept;
  std::vector<std::size_t> indices() const;
  std::string to_string() const;

  /// True when every bit set here is also set in `other`.
  bool is_subset_of(const FeatureMask& other) const noexcept;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  friend bool operator==(const FeatureMask&, const FeatureMask&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

std::size_t hamming_distance(const FeatureMask& a, const FeatureMask& b);

struct FeatureMaskHash {
  std::size_t operator()(const FeatureMask& m) const noexcept;
};

}  // namespace mbofs
