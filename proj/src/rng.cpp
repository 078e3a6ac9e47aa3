#include "mbofs/rng.hpp"

#include <cassert>

namespace mbofs {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master,
                          const std::vector<RngStream::PathElement>& path) {
  std::uint64_t s = mix64(master);
  for (const auto& [tag, index] : path) {
    s = mix64(s ^ fnv1a(tag));
    s = mix64(s ^ index);
  }
  return s;
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed) : RngStream(master_seed, {}) {}

RngStream::RngStream(std::uint64_t master_seed, std::vector<PathElement> path)
    : master_seed_(master_seed),
      path_(std::move(path)),
      engine_(derive_seed(master_seed_, path_)) {}

RngStream RngStream::child(std::string_view tag, std::uint64_t index) const {
  auto path = path_;
  path.emplace_back(std::string(tag), index);
  return RngStream(master_seed_, std::move(path));
}

std::uint64_t RngStream::next_u64() { return engine_(); }

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  assert(n > 0);
  // Lemire's multiply-shift with rejection; exact and platform-independent.
  unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace mbofs
