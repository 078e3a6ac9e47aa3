#pragma once

#include <filesystem>
#include <optional>

#include "mbofs/config.hpp"
#include "mbofs/corpus.hpp"
#include "mbofs/cross_validation.hpp"
#include "mbofs/doc_term_matrix.hpp"
#include "mbofs/report.hpp"

namespace mbofs {

struct PreparedCorpus {
  Corpus corpus;
  Vocabulary vocab;
  DocTermMatrix matrix;
  CorpusStats stats;
};

/// load -> tokenize -> vocabulary -> TF-IDF -> stats.
PreparedCorpus prepare_corpus(const std::filesystem::path& path, CorpusFormat format,
                              const std::optional<std::filesystem::path>& stopwords);

struct EvaluatedMask {
  double accuracy = 0.0;
  ClassifierKind classifier = ClassifierKind::NaiveBayes;
};

/// Cross-validated accuracy under `classifier`; Best keeps the higher of nb
/// and dt, nb on ties.
EvaluatedMask evaluate_mask(const DocTermMatrix& matrix, const FeatureMask& mask, EvalClassifier classifier,
                            int folds, std::uint64_t seed, const ClassifierParams& params = {});

struct ExperimentOutcome {
  RunReport report;
  bool budget_expired = false;
  bool interrupted = false;
};

/// Output files written under config.out_dir.
namespace run_files {
inline constexpr const char* kReport = "report.json";
std::filesystem::path mask(const std::filesystem::path& dir, const std::string& method);
std::filesystem::path sidecar(const std::filesystem::path& dir, const std::string& method);
std::filesystem::path trace(const std::filesystem::path& dir, const std::string& method);
std::filesystem::path checkpoint(const std::filesystem::path& dir, const std::string& method);
}  // namespace run_files

/// Full pipeline; every stage failure is rethrown as a PipelineError naming
/// the stage.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

}  // namespace mbofs
