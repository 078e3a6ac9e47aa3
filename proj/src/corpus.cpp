#include "mbofs/corpus.hpp"

#include <locale.h>

#include <algorithm>
#include <cmath>
#include <cwctype>
#include <fstream>
#include <sstream>

#include "mbofs/error.hpp"

namespace mbofs {

namespace fs = std::filesystem;

void Corpus::add(RawDocument doc) {
  if (doc.label.empty()) throw Error("document label must be non-empty");
  if (std::find(classes.begin(), classes.end(), doc.label) == classes.end())
    classes.push_back(doc.label);
  docs.push_back(std::move(doc));
}

std::size_t Corpus::class_index(const std::string& label) const {
  auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) throw Error("unknown class label: " + label);
  return static_cast<std::size_t>(it - classes.begin());
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "tsv") return CorpusFormat::Tsv;
  if (name == "dirs" || name == "class-dirs") return CorpusFormat::ClassDirs;
  throw Error("unknown corpus format '" + std::string(name) + "' (expected tsv or dirs)");
}

std::string to_string(CorpusFormat format) {
  return format == CorpusFormat::Tsv ? "tsv" : "dirs";
}

StopwordSet default_english_stopwords() {
  return {"a",     "about", "above", "after", "again", "all",   "am",    "an",    "and",
          "any",   "are",   "as",    "at",    "be",    "been",  "before", "being", "below",
          "both",  "but",   "by",    "can",   "could", "did",   "do",    "does",  "doing",
          "down",  "during", "each", "few",   "for",   "from",  "had",   "has",   "have",
          "having", "he",   "her",   "here",  "hers",  "him",   "his",   "how",   "if",
          "in",    "into",  "is",    "it",    "its",   "just",  "me",    "more",  "most",
          "my",    "no",    "nor",   "not",   "now",   "of",    "off",   "on",    "once",
          "only",  "or",    "other", "our",   "out",   "over",  "own",   "same",  "she",
          "should", "so",   "some",  "such",  "than",  "that",  "the",   "their", "them",
          "then",  "there", "these", "they",  "this",  "those", "through", "to",  "too",
          "under", "until", "up",    "very",  "was",   "we",    "were",  "what",  "when",
          "where", "which", "while", "who",   "whom",  "why",   "will",  "with",  "would",
          "you",   "your",  "yours"};
}

namespace {

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Corpus load_tsv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error("malformed TSV line " + std::to_string(line_no) + " in " + path.string() +
                  ": no tab separator");
    corpus.add({line.substr(0, tab), line.substr(tab + 1)});
  }
  return corpus;
}

Corpus load_class_dirs(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(root.string() + " is not a directory");
  std::vector<fs::path> class_dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) class_dirs.push_back(e.path());
  std::sort(class_dirs.begin(), class_dirs.end());

  Corpus corpus;
  for (const auto& dir : class_dirs) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) corpus.add({dir.filename().string(), read_file(f)});
  }
  return corpus;
}

// Lazily created C.UTF-8 locale for Unicode classification; null when absent,
// in which case non-ASCII code points are classified as letters.
locale_t unicode_locale() {
  static locale_t loc = newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(nullptr));
  return loc;
}

// Decodes one code point starting at s[i]; advances i. Invalid bytes yield
// U+FFFD and consume one byte.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    int c = cont(static_cast<std::size_t>(k));
    if (c < 0) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | static_cast<char32_t>(c);
  }
  i += static_cast<std::size_t>(len);
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_alnum(char32_t cp) {
  if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) != 0;
  if (cp == 0xFFFD) return false;
  if (auto loc = unicode_locale()) return iswalnum_l(static_cast<wint_t>(cp), loc) != 0;
  return true;
}

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return static_cast<char32_t>(std::tolower(static_cast<int>(cp)));
  if (auto loc = unicode_locale())
    return static_cast<char32_t>(towlower_l(static_cast<wint_t>(cp), loc));
  return cp;
}

}  // namespace

Corpus load_corpus(const fs::path& path, CorpusFormat format) {
  if (!fs::exists(path)) throw Error("corpus path does not exist: " + path.string());
  Corpus corpus = format == CorpusFormat::Tsv ? load_tsv(path) : load_class_dirs(path);
  if (corpus.docs.empty()) throw Error("zero documents in " + path.string());
  return corpus;
}

StopwordSet load_stopwords(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open stopword file " + path.string());
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    auto w = trim(line);
    if (!w.empty()) words.insert(std::move(w));
  }
  return words;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size();) {
    decode_utf8(s, i);
    ++n;
  }
  return n;
}

std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t current_len = 0;
  auto flush = [&] {
    if (current_len >= 2 && !stopwords.contains(current)) tokens.push_back(current);
    current.clear();
    current_len = 0;
  };
  for (std::size_t i = 0; i < text.size();) {
    char32_t cp = decode_utf8(text, i);
    if (is_alnum(cp)) {
      encode_utf8(to_lower(cp), current);
      ++current_len;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

Vocabulary build_vocabulary(const Corpus& corpus, const StopwordSet& stopwords) {
  if (corpus.docs.empty()) throw Error("cannot build a vocabulary from an empty corpus");
  Vocabulary vocab;
  vocab.stopwords = stopwords;
  std::vector<std::size_t> last_doc;  // last document that counted toward df
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    for (auto& tok : tokenize(corpus.docs[d].text, stopwords)) {
      auto [it, inserted] = vocab.index.try_emplace(tok, vocab.terms.size());
      if (inserted) {
        vocab.terms.push_back(std::move(tok));
        vocab.df.push_back(0);
        last_doc.push_back(static_cast<std::size_t>(-1));
      }
      const auto t = it->second;
      if (last_doc[t] != d) {
        last_doc[t] = d;
        ++vocab.df[t];
      }
    }
  }
  if (vocab.terms.empty()) throw Error("vocabulary is empty after tokenization and stopword removal");
  return vocab;
}

DocTermMatrix vectorize_tfidf(const Corpus& corpus, const Vocabulary& vocab) {
  const auto n = static_cast<double>(corpus.docs.size());
  Eigen::VectorXd idf(static_cast<Eigen::Index>(vocab.size()));
  for (std::size_t t = 0; t < vocab.size(); ++t)
    idf[static_cast<Eigen::Index>(t)] =
        std::log((1.0 + n) / (1.0 + static_cast<double>(vocab.df[t]))) + 1.0;

  std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
  std::vector<std::pair<std::size_t, double>> row;
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    std::unordered_map<std::size_t, double> tf;
    for (const auto& tok : tokenize(corpus.docs[d].text, vocab.stopwords)) {
      auto it = vocab.index.find(tok);
      if (it != vocab.index.end()) tf[it->second] += 1.0;
    }
    row.assign(tf.begin(), tf.end());
    std::sort(row.begin(), row.end());
    double norm2 = 0.0;
    for (auto& [t, w] : row) {
      w *= idf[static_cast<Eigen::Index>(t)];
      norm2 += w * w;
    }
    const double norm = std::sqrt(norm2);
    for (const auto& [t, w] : row)
      triplets.emplace_back(static_cast<std::int64_t>(d), static_cast<std::int64_t>(t), w / norm);
  }

  DocTermMatrix m;
  m.weights.resize(static_cast<Eigen::Index>(corpus.docs.size()),
                   static_cast<Eigen::Index>(vocab.size()));
  m.weights.setFromTriplets(triplets.begin(), triplets.end());
  m.weights.makeCompressed();
  m.class_names = corpus.classes;
  m.labels.reserve(corpus.docs.size());
  for (const auto& doc : corpus.docs) m.labels.push_back(static_cast<int>(corpus.class_index(doc.label)));
  return m;
}

CorpusStats compute_stats(const Corpus& corpus, const Vocabulary& vocab) {
  if (corpus.docs.empty()) throw Error("compute_stats: empty corpus");
  CorpusStats s;
  s.n_features = vocab.size();
  s.n_instances = corpus.docs.size();
  s.n_classes = corpus.classes.size();
  std::size_t words = 0;
  std::size_t chars = 0;
  for (const auto& doc : corpus.docs) {
    for (const auto& tok : tokenize(doc.text, vocab.stopwords)) {
      ++words;
      chars += utf8_length(tok);
    }
  }
  s.avg_words_per_instance = static_cast<double>(words) / static_cast<double>(s.n_instances);
  s.avg_word_length = words == 0 ? 0.0 : static_cast<double>(chars) / static_cast<double>(words);
  return s;
}

}  // namespace mbofs
