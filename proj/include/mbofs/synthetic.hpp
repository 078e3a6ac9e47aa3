#pragma once

#include <cstddef>
#include <cstdint>

#include "mbofs/corpus.hpp"

namespace mbofs {

/// Text corpus with a known informative vocabulary subset.
///
/// Every document draws `doc_length` tokens. With probability `signal_rate`
/// a token comes from the informative block, where word i leans toward class
/// i mod n_classes with the given `affinity`; otherwise it is uniform noise.
/// Classes are balanced and interleaved.
struct PlantedCorpusSpec {
  std::size_t n_docs = 500;
  std::size_t n_classes = 4;
  std::size_t n_features = 2000;
  std::size_t n_informative = 50;
  std::size_t doc_length = 60;
  double signal_rate = 0.08;
  double affinity = 0.5;
  std::uint64_t seed = 1;
};

Corpus make_planted_corpus(const PlantedCorpusSpec& spec);

/// Token used for vocabulary word `i`; informative words are 0..n_informative-1.
std::string planted_word(std::size_t i);

}  // namespace mbofs
