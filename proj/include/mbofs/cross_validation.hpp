#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "mbofs/decision_tree.hpp"
#include "mbofs/doc_term_matrix.hpp"
#include "mbofs/error.hpp"
#include "mbofs/feature_mask.hpp"
#include "mbofs/naive_bayes.hpp"
#include "mbofs/rng.hpp"

namespace mbofs {

enum class ClassifierKind { NaiveBayes, DecisionTree };

ClassifierKind parse_classifier(std::string_view name);
std::string to_string(ClassifierKind kind);

struct ClassifierParams {
  double alpha = 1.0;
  int max_depth = 20;
  std::size_t min_split = 2;
};

struct FoldAssignment {
  int k = 0;
  std::vector<int> fold_of;
  std::uint64_t seed = 0;

  std::vector<std::size_t> test_rows(int fold) const;
  std::vector<std::size_t> train_rows(int fold) const;
};

/// Shuffles each class's rows with a seeded stream, then deals them
/// round-robin; the dealing position carries over from one class to the next.
FoldAssignment stratified_folds(std::span<const int> labels, int k, std::uint64_t seed);

struct EvalReport {
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
  ClassifierKind classifier = ClassifierKind::NaiveBayes;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

EvalReport make_eval_report(std::vector<double> fold_accuracies, ClassifierKind kind);

/// Cross-validated multinomial NB with per-fold class/feature weight sums
/// cached up front, so scoring a new mask costs O(k * C * M' + nnz).
///
/// Produces bit-identical results to nb_train/nb_predict on each fold's
/// training rows: sums are accumulated in the same row order and scores go
/// through the same accumulation helper.
template <typename Scalar>
class FoldedNaiveBayes {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  FoldedNaiveBayes(const BasicDocTermMatrix<Scalar>& matrix, FoldAssignment folds, Scalar alpha)
      : matrix_(matrix), folds_(std::move(folds)), alpha_(alpha) {
    if (!(alpha > Scalar(0))) throw Error("naive bayes: alpha must be positive");
    const auto n_classes = static_cast<Eigen::Index>(matrix.n_classes());
    const auto n_features = static_cast<Eigen::Index>(matrix.n_features());
    for (int f = 0; f < folds_.k; ++f) {
      Matrix sums = Matrix::Zero(n_classes, n_features);
      std::vector<std::size_t> class_rows(matrix.n_classes(), 0);
      const auto train = folds_.train_rows(f);
      for (auto r : train) {
        const auto c = matrix.labels[r];
        ++class_rows[static_cast<std::size_t>(c)];
        for (auto it = matrix.row(r); it; ++it) sums(c, it.col()) += it.value();
      }
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> priors(n_classes);
      for (Eigen::Index c = 0; c < n_classes; ++c)
        priors[c] = detail::log_prior<Scalar>(class_rows[static_cast<std::size_t>(c)], train.size());
      train_sums_.push_back(std::move(sums));
      log_priors_.push_back(std::move(priors));
      test_rows_.push_back(folds_.test_rows(f));
    }
  }

  const FoldAssignment& folds() const noexcept { return folds_; }

  EvalReport evaluate(const FeatureMask& mask) const {
    if (mask.size() != matrix_.n_features()) throw Error("naive bayes: mask universe mismatch");
    const auto selected = mask.indices();
    if (selected.empty()) throw Error("naive bayes: empty feature mask");
    const auto n_classes = static_cast<Eigen::Index>(matrix_.n_classes());
    const auto m_prime = static_cast<Scalar>(selected.size());

    // Log-likelihoods are only filled at selected columns.
    Matrix loglik(n_classes, static_cast<Eigen::Index>(matrix_.n_features()));
    std::vector<double> accuracies;
    accuracies.reserve(static_cast<std::size_t>(folds_.k));
    for (int f = 0; f < folds_.k; ++f) {
      const auto& sums = train_sums_[static_cast<std::size_t>(f)];
      for (Eigen::Index c = 0; c < n_classes; ++c) {
        Scalar total = 0;
        for (auto j : selected) total += sums(c, static_cast<Eigen::Index>(j));
        const Scalar log_denominator = std::log(total + alpha_ * m_prime);
        for (auto j : selected) {
          const auto col = static_cast<Eigen::Index>(j);
          loglik(c, col) = std::log(sums(c, col) + alpha_) - log_denominator;
        }
      }
      const auto& priors = log_priors_[static_cast<std::size_t>(f)];
      std::size_t correct = 0;
      const auto& rows = test_rows_[static_cast<std::size_t>(f)];
      for (auto r : rows) {
        int best = 0;
        Scalar best_score = 0;
        for (Eigen::Index c = 0; c < n_classes; ++c) {
          const Scalar s = detail::nb_score<Scalar>(priors[c], matrix_.row(r), [&](std::size_t col) -> std::optional<Scalar> {
            if (!mask.test(col)) return std::nullopt;
            return loglik(c, static_cast<Eigen::Index>(col));
          });
          if (c == 0 || s > best_score) {
            best = static_cast<int>(c);
            best_score = s;
          }
        }
        if (best == matrix_.labels[r]) ++correct;
      }
      accuracies.push_back(static_cast<double>(correct) / static_cast<double>(rows.size()));
    }
    return make_eval_report(std::move(accuracies), ClassifierKind::NaiveBayes);
  }

 private:
  const BasicDocTermMatrix<Scalar>& matrix_;
  FoldAssignment folds_;
  Scalar alpha_;
  std::vector<Matrix> train_sums_;
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> log_priors_;
  std::vector<std::vector<std::size_t>> test_rows_;
};

template <typename Scalar>
EvalReport cross_val_decision_tree(const BasicDocTermMatrix<Scalar>& matrix, const FeatureMask& mask,
                                   const FoldAssignment& folds, const ClassifierParams& params) {
  std::vector<double> accuracies;
  for (int f = 0; f < folds.k; ++f) {
    const auto train = folds.train_rows(f);
    const auto test = folds.test_rows(f);
    const auto model = dt_train(matrix, mask, std::span<const std::size_t>(train), params.max_depth,
                                params.min_split);
    std::size_t correct = 0;
    for (auto r : test)
      if (dt_predict(model, matrix, r) == matrix.labels[r]) ++correct;
    accuracies.push_back(static_cast<double>(correct) / static_cast<double>(test.size()));
  }
  return make_eval_report(std::move(accuracies), ClassifierKind::DecisionTree);
}

template <typename Scalar>
EvalReport cross_val_accuracy(const BasicDocTermMatrix<Scalar>& matrix, const FeatureMask& mask,
                              ClassifierKind classifier, const FoldAssignment& folds,
                              const ClassifierParams& params = {}) {
  if (folds.fold_of.size() != matrix.n_docs()) throw Error("cross_val_accuracy: fold assignment size mismatch");
  if (classifier == ClassifierKind::NaiveBayes)
    return FoldedNaiveBayes<Scalar>(matrix, folds, static_cast<Scalar>(params.alpha)).evaluate(mask);
  return cross_val_decision_tree(matrix, mask, folds, params);
}

/// Mean stratified k-fold accuracy; fully determined by the arguments.
template <typename Scalar>
EvalReport cross_val_accuracy(const BasicDocTermMatrix<Scalar>& matrix, const FeatureMask& mask,
                              ClassifierKind classifier, int k, std::uint64_t seed,
                              const ClassifierParams& params = {}) {
  return cross_val_accuracy(matrix, mask, classifier, stratified_folds(matrix.labels, k, seed), params);
}

}  // namespace mbofs
