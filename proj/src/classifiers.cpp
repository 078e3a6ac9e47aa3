#include "mbofs/cross_validation.hpp"

#include <algorithm>

namespace mbofs {

ClassifierKind parse_classifier(std::string_view name) {
  if (name == "nb") return ClassifierKind::NaiveBayes;
  if (name == "dt") return ClassifierKind::DecisionTree;
  throw Error("unknown classifier '" + std::string(name) + "' (expected nb or dt)");
}

std::string to_string(ClassifierKind kind) {
  return kind == ClassifierKind::NaiveBayes ? "nb" : "dt";
}

std::vector<std::size_t> FoldAssignment::test_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < fold_of.size(); ++r)
    if (fold_of[r] == fold) rows.push_back(r);
  return rows;
}

std::vector<std::size_t> FoldAssignment::train_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < fold_of.size(); ++r)
    if (fold_of[r] != fold) rows.push_back(r);
  return rows;
}

FoldAssignment stratified_folds(std::span<const int> labels, int k, std::uint64_t seed) {
  if (k < 2) throw Error("stratified_folds: k must be >= 2");
  if (labels.empty()) throw Error("stratified_folds: no rows");
  const int n_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(n_classes));
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] < 0) throw Error("stratified_folds: negative label");
    by_class[static_cast<std::size_t>(labels[r])].push_back(r);
  }

  FoldAssignment out;
  out.k = k;
  out.seed = seed;
  out.fold_of.assign(labels.size(), -1);
  const RngStream root = RngStream(seed).child("folds");
  std::size_t deal = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& rows = by_class[c];
    if (rows.empty()) continue;
    if (rows.size() < static_cast<std::size_t>(k))
      throw Error("stratified_folds: class " + std::to_string(c) + " has " + std::to_string(rows.size()) +
                  " rows, fewer than k = " + std::to_string(k));
    auto rng = root.child("class", c);
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.uniform_index(i)]);
    for (auto r : rows) out.fold_of[r] = static_cast<int>(deal++ % static_cast<std::size_t>(k));
  }
  return out;
}

EvalReport make_eval_report(std::vector<double> fold_accuracies, ClassifierKind kind) {
  EvalReport report;
  double sum = 0.0;
  for (double a : fold_accuracies) sum += a;
  report.mean_accuracy = fold_accuracies.empty() ? 0.0 : sum / static_cast<double>(fold_accuracies.size());
  report.fold_accuracies = std::move(fold_accuracies);
  report.classifier = kind;
  return report;
}

}  // namespace mbofs
