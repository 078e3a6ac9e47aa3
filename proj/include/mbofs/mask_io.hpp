#pragma once

#include <filesystem>
#include <string>

#include "mbofs/corpus.hpp"
#include "mbofs/feature_mask.hpp"
#include "mbofs/info_gain.hpp"

namespace mbofs {

/// "M=<count>\n" followed by the M bits as 0/1 characters and a newline.
std::string format_mask(const FeatureMask& mask);
FeatureMask parse_mask(const std::string& text);

void write_mask_file(const std::filesystem::path& path, const FeatureMask& mask);
FeatureMask read_mask_file(const std::filesystem::path& path);

/// CSV of (feature_index, term, ig_score) for every selected feature.
void write_mask_sidecar(const std::filesystem::path& path, const FeatureMask& mask, const Vocabulary& vocab,
                        const IgScores& scores);

/// Maps a mask over the columns selected by `universe` back onto the full
/// feature range.
FeatureMask expand_mask(const FeatureMask& reduced, const FeatureMask& universe);

/// Writes via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace mbofs
