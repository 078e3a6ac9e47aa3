#include "mbofs/mask_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mbofs/error.hpp"

namespace mbofs {

namespace fs = std::filesystem;

std::string format_mask(const FeatureMask& mask) {
  return "M=" + std::to_string(mask.size()) + "\n" + mask.to_string() + "\n";
}

FeatureMask parse_mask(const std::string& text) {
  std::istringstream in(text);
  std::string header, bits;
  if (!std::getline(in, header) || header.rfind("M=", 0) != 0) throw Error("mask file: missing M=<count> header");
  std::size_t m = 0;
  try {
    m = std::stoull(header.substr(2));
  } catch (const std::exception&) {
    throw Error("mask file: bad header '" + header + "'");
  }
  std::getline(in, bits);
  if (!bits.empty() && bits.back() == '\r') bits.pop_back();
  if (bits.size() != m)
    throw Error("mask file: header says M=" + std::to_string(m) + " but found " + std::to_string(bits.size()) + " bits");
  return FeatureMask::from_string(bits);
}

void write_mask_file(const fs::path& path, const FeatureMask& mask) { write_file_atomic(path, format_mask(mask)); }

FeatureMask read_mask_file(const fs::path& path) { return parse_mask(read_text_file(path)); }

void write_mask_sidecar(const fs::path& path, const FeatureMask& mask, const Vocabulary& vocab,
                        const IgScores& scores) {
  std::ostringstream out;
  out << "feature_index,term,ig_score\n";
  char buf[64];
  for (auto f : mask.indices()) {
    std::snprintf(buf, sizeof buf, "%.17g", f < scores.gain.size() ? scores.gain[f] : 0.0);
    const std::string& term = f < vocab.terms.size() ? vocab.terms[f] : std::string();
    out << f << ',';
    if (term.find_first_of(",\"\n") != std::string::npos) {
      out << '"';
      for (char ch : term) out << (ch == '"' ? "\"\"" : std::string(1, ch));
      out << '"';
    } else {
      out << term;
    }
    out << ',' << buf << '\n';
  }
  write_file_atomic(path, out.str());
}

FeatureMask expand_mask(const FeatureMask& reduced, const FeatureMask& universe) {
  const auto columns = universe.indices();
  if (columns.size() != reduced.size()) throw Error("expand_mask: reduced mask does not match the universe popcount");
  FeatureMask full(universe.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (reduced.test(j)) full.set(columns[j]);
  return full;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mbofs
