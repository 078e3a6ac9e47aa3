#include "mbofs/feature_mask.hpp"

#include <bit>

#include "mbofs/error.hpp"
#include "mbofs/rng.hpp"

namespace mbofs {

FeatureMask::FeatureMask(std::size_t universe, bool value)
    : size_(universe), words_((universe + 63) / 64, value ? ~std::uint64_t{0} : 0) {
  if (value && (size_ & 63) != 0) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
}

FeatureMask FeatureMask::from_string(std::string_view bits) {
  FeatureMask m(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      m.set(i);
    else if (bits[i] != '0')
      throw Error("mask string contains a character other than 0/1 at position " +
                  std::to_string(i));
  }
  return m;
}

FeatureMask FeatureMask::from_indices(std::size_t universe,
                                      const std::vector<std::size_t>& on) {
  FeatureMask m(universe);
  for (auto i : on) {
    if (i >= universe) throw Error("mask index out of range");
    m.set(i);
  }
  return m;
}

std::size_t FeatureMask::popcount() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::size_t> FeatureMask::indices() const {
  std::vector<std::size_t> out;
  out.reserve(popcount());
  for (std::size_t w = 0; w < words_.size(); ++w) {
    auto word = words_[w];
    while (word != 0) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

std::string FeatureMask::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i)
    if (test(i)) s[i] = '1';
  return s;
}

bool FeatureMask::is_subset_of(const FeatureMask& other) const noexcept {
  if (other.size_ != size_) return false;
  for (std::size_t w = 0; w < words_.size(); ++w)
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  return true;
}

std::size_t hamming_distance(const FeatureMask& a, const FeatureMask& b) {
  if (a.size() != b.size()) throw Error("hamming_distance: universe mismatch");
  std::size_t d = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w)
    d += static_cast<std::size_t>(std::popcount(a.words()[w] ^ b.words()[w]));
  return d;
}

std::size_t FeatureMaskHash::operator()(const FeatureMask& m) const noexcept {
  std::uint64_t h = mix64(m.size());
  for (auto w : m.words()) h = mix64(h ^ w);
  return static_cast<std::size_t>(h);
}

}  // namespace mbofs
