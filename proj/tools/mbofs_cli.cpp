// mbofs: feature selection benchmark harness.
//
//   mbofs ingest <path> --format tsv|dirs [--stopwords <file>] [--stats]
//   mbofs select --method ig|mbo|pso|all [--config <file>] [--seed N] ... [--resume <checkpoint>]
//   mbofs evaluate --mask <file> --classifier nb|dt|best [--config <file>] [--corpus <path>]
//   mbofs report <run-dir|report.json> --style table|json|csv
//   mbofs synth --out <file.tsv> [--docs N] [--features N] ...

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mbofs/config.hpp"
#include "mbofs/error.hpp"
#include "mbofs/experiment.hpp"
#include "mbofs/mask_io.hpp"
#include "mbofs/report.hpp"
#include "mbofs/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPipeline = 2;
constexpr int kExitBudget = 3;

std::string dashed(std::string_view key) {
  std::string s(key);
  for (auto& c : s)
    if (c == '_') c = '-';
  return s;
}

/// Registers --key-with-dashes for every config key; values land in `sink`.
void add_config_flags(CLI::App& cmd, std::map<std::string, std::string>& sink,
                      const std::vector<std::string>& skip = {}) {
  for (const auto& k : mbofs::config_keys()) {
    const std::string key(k.key);
    if (std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
    cmd.add_option_function<std::string>(
        "--" + dashed(key), [&sink, key](const std::string& v) { sink[key] = v; }, std::string(k.help));
  }
}

mbofs::ExperimentConfig build_config(const std::optional<std::string>& config_file,
                                     const std::map<std::string, std::string>& overrides) {
  mbofs::ExperimentConfig config;
  if (config_file) mbofs::apply_config_file(config, *config_file);
  for (const auto& k : mbofs::config_keys())
    if (auto it = overrides.find(std::string(k.key)); it != overrides.end())
      mbofs::apply_setting(config, it->first, it->second);
  return config;
}

int run_ingest(const std::string& path, const std::string& format, const std::optional<std::string>& stopwords,
               bool stats) {
  const auto prepared = mbofs::prepare_corpus(
      path, mbofs::parse_corpus_format(format),
      stopwords ? std::optional<std::filesystem::path>(*stopwords) : std::nullopt);
  const auto& s = prepared.stats;
  std::printf("documents: %zu\nclasses: %zu\nfeatures: %zu\n", s.n_instances, s.n_classes, s.n_features);
  if (stats) {
    std::printf("avg_words_per_instance: %.1f\navg_word_length: %.1f\n", s.avg_words_per_instance, s.avg_word_length);
    std::printf("class_names:");
    for (const auto& c : prepared.corpus.classes) std::printf(" %s", c.c_str());
    std::printf("\n");
  }
  return kExitOk;
}

int run_select(const mbofs::ExperimentConfig& config) {
  const auto outcome = mbofs::run_experiment(config);
  std::cout << mbofs::render_report(outcome.report, mbofs::ReportStyle::Table);
  std::cout << "wrote " << (config.out_dir / mbofs::run_files::kReport).string() << '\n';
  if (outcome.budget_expired || outcome.interrupted) return kExitBudget;
  return kExitOk;
}

int run_evaluate(const mbofs::ExperimentConfig& config, const std::string& mask_path, const std::string& classifier) {
  if (config.corpus.empty()) throw mbofs::Error("evaluate needs a corpus (--corpus or a config file)");
  if (config.folds < 2) throw mbofs::Error("folds must be >= 2");
  const auto prepared = mbofs::prepare_corpus(config.corpus, config.format, config.stopwords);
  const auto mask = mbofs::read_mask_file(mask_path);
  if (mask.size() != prepared.matrix.n_features())
    throw mbofs::PipelineError("evaluate", "mask has M=" + std::to_string(mask.size()) + " but the corpus has " +
                                               std::to_string(prepared.matrix.n_features()) + " features");
  const auto e = mbofs::evaluate_mask(prepared.matrix, mask, mbofs::parse_eval_classifier(classifier), config.folds,
                                      config.seed, config.classifier_params);
  std::printf("m_prime: %zu\naccuracy: %.17g\nclassifier: %s\nfolds: %d\nseed: %llu\n", mask.popcount(), e.accuracy,
              mbofs::to_string(e.classifier).c_str(), config.folds, static_cast<unsigned long long>(config.seed));
  return kExitOk;
}

int run_report(const std::string& where, const std::string& style) {
  std::filesystem::path path(where);
  if (std::filesystem::is_directory(path)) path /= mbofs::run_files::kReport;
  const auto text = mbofs::read_text_file(path);
  std::cout << mbofs::render_report(mbofs::parse_report_json(text), mbofs::parse_report_style(style));
  return kExitOk;
}

int run_synth(const std::string& out, const mbofs::PlantedCorpusSpec& spec) {
  const auto corpus = mbofs::make_planted_corpus(spec);
  std::string text;
  for (const auto& d : corpus.docs) text += d.label + "\t" + d.text + "\n";
  mbofs::write_file_atomic(out, text);
  std::printf("wrote %zu documents to %s\n", corpus.docs.size(), out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature selection for text classification: information gain, MBO and binary PSO"};
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "Load a corpus and print its statistics");
  std::string ingest_path, ingest_format = "tsv";
  std::optional<std::string> ingest_stopwords;
  bool ingest_stats = false;
  ingest->add_option("path", ingest_path, "corpus path")->required();
  ingest->add_option("--format", ingest_format, "tsv | dirs");
  ingest->add_option("--stopwords", ingest_stopwords, "stopword file");
  ingest->add_flag("--stats", ingest_stats, "print averages and class names");

  auto* select = app.add_subcommand("select", "Run the selection pipeline and write a run directory");
  std::optional<std::string> select_config;
  std::optional<std::string> resume;
  std::map<std::string, std::string> select_overrides;
  select->add_option("--config", select_config, "key = value config file");
  select->add_option("--resume", resume, "checkpoint file to resume from");
  add_config_flags(*select, select_overrides);

  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate a stored mask");
  std::string mask_path, eval_classifier = "best";
  std::optional<std::string> eval_config;
  std::map<std::string, std::string> eval_overrides;
  evaluate->add_option("--mask", mask_path, "mask file")->required();
  evaluate->add_option("--classifier", eval_classifier, "nb | dt | best");
  evaluate->add_option("--config", eval_config, "key = value config file");
  add_config_flags(*evaluate, eval_overrides, {"classifier"});

  auto* report = app.add_subcommand("report", "Render a run directory's report");
  std::string report_dir, report_style = "table";
  report->add_option("run-dir", report_dir, "run directory or report.json")->required();
  report->add_option("--style", report_style, "table | json | csv");

  auto* synth = app.add_subcommand("synth", "Write a planted-features TSV corpus");
  std::string synth_out;
  mbofs::PlantedCorpusSpec spec;
  synth->add_option("--out", synth_out, "output TSV")->required();
  synth->add_option("--docs", spec.n_docs, "documents");
  synth->add_option("--classes", spec.n_classes, "classes");
  synth->add_option("--features", spec.n_features, "vocabulary size");
  synth->add_option("--informative", spec.n_informative, "informative words");
  synth->add_option("--doc-length", spec.doc_length, "tokens per document");
  synth->add_option("--signal-rate", spec.signal_rate, "probability a token is informative");
  synth->add_option("--affinity", spec.affinity, "probability an informative token is class-preferred");
  synth->add_option("--seed", spec.seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) return run_ingest(ingest_path, ingest_format, ingest_stopwords, ingest_stats);
    if (*select) {
      auto config = build_config(select_config, select_overrides);
      if (resume) config.resume = *resume;
      return run_select(config);
    }
    if (*evaluate) return run_evaluate(build_config(eval_config, eval_overrides), mask_path, eval_classifier);
    if (*report) return run_report(report_dir, report_style);
    if (*synth) return run_synth(synth_out, spec);
  } catch (const mbofs::PipelineError& e) {
    std::fprintf(stderr, "error in stage %s\n", e.what());
    return kExitPipeline;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitPipeline;
  }
  return kExitUsage;
}
