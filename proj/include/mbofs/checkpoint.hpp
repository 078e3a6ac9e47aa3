#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "mbofs/doc_term_matrix.hpp"
#include "mbofs/mbo.hpp"
#include "mbofs/pso.hpp"

namespace mbofs {

inline constexpr int kCheckpointVersion = 1;

/// Resumable engine state at a tour (MBO) or iteration (PSO) boundary.
/// Random streams are derived from (seed, counter, ...) so the counter is the
/// whole stream state.
struct Checkpoint {
  int version = kCheckpointVersion;
  std::string method;
  std::string fingerprint;
  std::uint64_t seed = 0;
  std::optional<MboSnapshot> mbo;
  std::optional<PsoSnapshot> pso;
};

/// Hash of the matrix dimensions and the label multiset, as 16 hex digits.
std::string corpus_fingerprint(const DocTermMatrix& matrix);

/// Atomic: writes a temporary file and renames it over the target.
void checkpoint_save(const std::filesystem::path& path, const Checkpoint& checkpoint);

/// Throws on malformed or truncated files and on a version mismatch.
Checkpoint checkpoint_load(const std::filesystem::path& path);
/// Additionally rejects checkpoints written for a different corpus.
Checkpoint checkpoint_load(const std::filesystem::path& path, const std::string& expected_fingerprint);

}  // namespace mbofs
