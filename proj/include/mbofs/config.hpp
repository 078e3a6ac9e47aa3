#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mbofs/corpus.hpp"
#include "mbofs/cross_validation.hpp"
#include "mbofs/info_gain.hpp"
#include "mbofs/mbo.hpp"
#include "mbofs/pso.hpp"

namespace mbofs {

enum class Method { Ig, Mbo, Pso, All };
Method parse_method(std::string_view name);
std::string to_string(Method method);

/// Classifier used to score reduced data in the report; Best runs nb and dt
/// and keeps the higher accuracy (nb on ties).
enum class EvalClassifier { Nb, Dt, Best };
EvalClassifier parse_eval_classifier(std::string_view name);
std::string to_string(EvalClassifier c);

struct ExperimentConfig {
  std::filesystem::path corpus;
  CorpusFormat format = CorpusFormat::Tsv;
  std::optional<std::filesystem::path> stopwords;
  /// Row label in table reports; defaults to the corpus file stem.
  std::string name;

  std::size_t ig_cap = kDefaultIgCap;
  Method method = Method::All;
  EvalClassifier classifier = EvalClassifier::Best;
  ClassifierKind fitness_classifier = ClassifierKind::NaiveBayes;
  ClassifierParams classifier_params;
  int folds = 5;
  std::uint64_t seed = 1;
  double budget_seconds = 600.0;
  unsigned threads = 1;

  MboConfig mbo;
  PsoConfig pso;

  std::filesystem::path out_dir = "run";
  std::optional<std::filesystem::path> resume;
  /// Stop an engine once its tour/iteration counter reaches this value,
  /// leaving a checkpoint behind. 0 disables.
  int halt_after = 0;

  void validate() const;
  std::string display_name() const;
};

/// Keys accepted in config files; the CLI exposes each as --key-with-dashes.
struct ConfigKey {
  std::string_view key;
  std::string_view help;
};
const std::vector<ConfigKey>& config_keys();

/// Applies one "key = value" setting. Throws on unknown keys or bad values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Flat "key = value" lines, '#' starts a comment.
ExperimentConfig load_config_file(const std::filesystem::path& path);
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

/// Settings that determine results, as (key, value) strings. Output
/// location and halting are left out so reruns elsewhere compare equal.
std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& config);

}  // namespace mbofs
