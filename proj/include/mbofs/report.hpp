#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mbofs/corpus.hpp"

namespace mbofs {

struct MethodRow {
  /// "raw", "ig", "mbo" or "pso".
  std::string name;
  std::size_t m_prime = 0;
  double accuracy = 0.0;
  /// Evaluation classifier that produced `accuracy`.
  std::string classifier;
  double elapsed_s = 0.0;
  /// complete | stagnation | max-tours | max-iterations | budget | interrupted
  std::string status = "complete";
  /// Internal fitness of the mask on the prefiltered data; -1 when not scored.
  double fitness = -1.0;

  friend bool operator==(const MethodRow&, const MethodRow&) = default;
};

struct RunReport {
  std::string corpus_name;
  CorpusStats stats;
  MethodRow raw;
  std::vector<MethodRow> methods;
  std::uint64_t seed = 0;
  /// Internal classifier used by the engines, for the MBO column title.
  std::string fitness_classifier = "nb";
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> notes;

  const MethodRow* find(std::string_view method) const;
};

enum class ReportStyle { Table, Json, Csv };
ReportStyle parse_report_style(std::string_view name);

std::string render_report(const RunReport& report, ReportStyle style);
RunReport parse_report_json(const std::string& text);

/// Column title in table style, e.g. "MBO-NB".
std::string method_title(const MethodRow& row, const std::string& fitness_classifier);

/// Accuracy as a percentage with one decimal, or "-" when the row has no
/// usable result (budget-expired PSO).
std::string table_accuracy_cell(const MethodRow& row);

}  // namespace mbofs
