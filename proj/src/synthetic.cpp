#include "mbofs/synthetic.hpp"

#include <cstdio>

#include "mbofs/error.hpp"
#include "mbofs/rng.hpp"

namespace mbofs {

std::string planted_word(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "w%05zu", i);
  return buf;
}

Corpus make_planted_corpus(const PlantedCorpusSpec& spec) {
  if (spec.n_classes < 2 || spec.n_docs < spec.n_classes) throw Error("planted corpus: need >= 2 classes and a doc per class");
  if (spec.n_informative < spec.n_classes || spec.n_informative >= spec.n_features)
    throw Error("planted corpus: informative count must be in [n_classes, n_features)");

  const RngStream root = RngStream(spec.seed).child("planted");
  const std::size_t n_noise = spec.n_features - spec.n_informative;
  const std::size_t per_class = spec.n_informative / spec.n_classes;

  Corpus corpus;
  for (std::size_t d = 0; d < spec.n_docs; ++d) {
    const std::size_t c = d % spec.n_classes;
    auto rng = root.child("doc", d);
    std::string text;
    for (std::size_t t = 0; t < spec.doc_length; ++t) {
      std::size_t word;
      if (rng.uniform01() < spec.signal_rate) {
        if (rng.uniform01() < spec.affinity)
          word = c + spec.n_classes * rng.uniform_index(per_class);
        else
          word = rng.uniform_index(spec.n_informative);
      } else {
        word = spec.n_informative + rng.uniform_index(n_noise);
      }
      if (!text.empty()) text.push_back(' ');
      text += planted_word(word);
    }
    corpus.add({"class" + std::to_string(c), std::move(text)});
  }
  return corpus;
}

}  // namespace mbofs
