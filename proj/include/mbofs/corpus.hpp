#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mbofs/doc_term_matrix.hpp"

namespace mbofs {

struct RawDocument {
  std::string label;
  std::string text;
};

struct Corpus {
  std::vector<RawDocument> docs;
  /// Distinct labels in first-appearance order.
  std::vector<std::string> classes;

  void add(RawDocument doc);
  std::size_t class_index(const std::string& label) const;
};

enum class CorpusFormat { Tsv, ClassDirs };

CorpusFormat parse_corpus_format(std::string_view name);
std::string to_string(CorpusFormat format);

using StopwordSet = std::unordered_set<std::string>;

/// Small built-in English list used when no stopword file is given.
StopwordSet default_english_stopwords();
/// One token per line; blank lines and surrounding whitespace ignored.
StopwordSet load_stopwords(const std::filesystem::path& path);

/// Reads a corpus. TSV: one "label<TAB>text" document per line. ClassDirs:
/// root/<class>/<file>, directories and files visited in lexicographic order.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

/// Lowercases, splits on runs of non-alphanumeric code points, drops tokens
/// shorter than two code points and stopwords.
std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords);

/// Length of a UTF-8 string in code points.
std::size_t utf8_length(std::string_view s);

struct Vocabulary {
  std::vector<std::string> terms;
  std::unordered_map<std::string, std::size_t> index;
  /// Number of documents containing each term.
  std::vector<std::size_t> df;
  /// Stopwords the vocabulary was built with; reused for vectorizing.
  StopwordSet stopwords;

  std::size_t size() const noexcept { return terms.size(); }
};

Vocabulary build_vocabulary(const Corpus& corpus, const StopwordSet& stopwords);

/// tf * idf with idf(t) = ln((1 + N) / (1 + df(t))) + 1, rows L2-normalized.
DocTermMatrix vectorize_tfidf(const Corpus& corpus, const Vocabulary& vocab);

struct CorpusStats {
  std::size_t n_features = 0;
  std::size_t n_instances = 0;
  std::size_t n_classes = 0;
  double avg_words_per_instance = 0.0;
  double avg_word_length = 0.0;
};

CorpusStats compute_stats(const Corpus& corpus, const Vocabulary& vocab);

}  // namespace mbofs
