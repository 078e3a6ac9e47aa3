#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mbofs/doc_term_matrix.hpp"
#include "mbofs/error.hpp"
#include "mbofs/feature_mask.hpp"

namespace mbofs {

/// Multinomial Naive Bayes over nonnegative fractional term weights.
template <typename Scalar>
struct NbModel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  /// ln P(c); -inf for classes absent from the training rows.
  Vector log_priors;
  /// ln P(t|c), one row per class, one column per selected feature.
  Matrix log_likelihoods;
  Scalar alpha{1};
  FeatureMask mask;
  /// Original feature index -> column of log_likelihoods, or -1.
  std::vector<std::int64_t> column_of;

  std::size_t n_classes() const noexcept { return static_cast<std::size_t>(log_priors.size()); }
};

namespace detail {

/// Shared by every NB scoring path so all routes round identically.
template <typename Scalar, typename RowIt, typename Lookup>
Scalar nb_score(Scalar log_prior, RowIt it, Lookup&& loglik) {
  Scalar score = log_prior;
  if (score == -std::numeric_limits<Scalar>::infinity()) return score;
  for (; it; ++it)
    if (auto v = loglik(static_cast<std::size_t>(it.col())); v.has_value()) score += it.value() * *v;
  return score;
}

template <typename Scalar>
Scalar log_prior(std::size_t class_rows, std::size_t total_rows) {
  if (class_rows == 0) return -std::numeric_limits<Scalar>::infinity();
  return std::log(static_cast<Scalar>(class_rows) / static_cast<Scalar>(total_rows));
}

}  // namespace detail

/// P(c) = |rows of c| / |rows|; P(t|c) = (W(t,c) + alpha) / (W(.,c) + alpha * M')
/// with W the summed weights of class-c rows over the selected features.
template <typename Scalar>
NbModel<Scalar> nb_train(const BasicDocTermMatrix<Scalar>& matrix, const FeatureMask& mask,
                         std::span<const std::size_t> rows, Scalar alpha = Scalar(1)) {
  if (mask.size() != matrix.n_features()) throw Error("nb_train: mask universe mismatch");
  const auto selected = mask.indices();
  if (selected.empty()) throw Error("nb_train: empty feature mask");
  if (rows.empty()) throw Error("nb_train: empty row subset");
  if (!(alpha > Scalar(0))) throw Error("nb_train: alpha must be positive");

  const auto n_classes = static_cast<Eigen::Index>(matrix.n_classes());
  const auto m_prime = static_cast<Eigen::Index>(selected.size());

  NbModel<Scalar> model;
  model.alpha = alpha;
  model.mask = mask;
  model.column_of.assign(matrix.n_features(), -1);
  for (std::size_t j = 0; j < selected.size(); ++j)
    model.column_of[selected[j]] = static_cast<std::int64_t>(j);

  typename NbModel<Scalar>::Matrix sums = NbModel<Scalar>::Matrix::Zero(n_classes, m_prime);
  std::vector<std::size_t> class_rows(matrix.n_classes(), 0);
  for (auto r : rows) {
    const auto c = static_cast<Eigen::Index>(matrix.labels[r]);
    ++class_rows[static_cast<std::size_t>(c)];
    for (auto it = matrix.row(r); it; ++it)
      if (auto col = model.column_of[static_cast<std::size_t>(it.col())]; col >= 0)
        sums(c, col) += it.value();
  }

  model.log_priors.resize(n_classes);
  model.log_likelihoods.resize(n_classes, m_prime);
  for (Eigen::Index c = 0; c < n_classes; ++c) {
    model.log_priors[c] = detail::log_prior<Scalar>(class_rows[static_cast<std::size_t>(c)], rows.size());
    Scalar total = 0;
    for (Eigen::Index j = 0; j < m_prime; ++j) total += sums(c, j);
    const Scalar log_denominator = std::log(total + alpha * static_cast<Scalar>(m_prime));
    for (Eigen::Index j = 0; j < m_prime; ++j)
      model.log_likelihoods(c, j) = std::log(sums(c, j) + alpha) - log_denominator;
  }
  return model;
}

/// Per-class log posterior (up to a shared constant) for one sparse row.
template <typename Scalar, typename RowIt>
typename NbModel<Scalar>::Vector nb_scores(const NbModel<Scalar>& model, RowIt row) {
  typename NbModel<Scalar>::Vector scores(model.log_priors.size());
  for (Eigen::Index c = 0; c < model.log_priors.size(); ++c) {
    scores[c] = detail::nb_score<Scalar>(model.log_priors[c], row, [&](std::size_t f) -> std::optional<Scalar> {
      if (f >= model.column_of.size() || model.column_of[f] < 0) return std::nullopt;
      return model.log_likelihoods(c, model.column_of[f]);
    });
  }
  return scores;
}

/// Index of the first maximum; ties go to the lowest index.
template <typename Derived>
int argmax_lowest(const Eigen::DenseBase<Derived>& scores) {
  int best = 0;
  for (Eigen::Index c = 1; c < scores.size(); ++c)
    if (scores[c] > scores[best]) best = static_cast<int>(c);
  return best;
}

template <typename Scalar, typename RowIt>
int nb_predict(const NbModel<Scalar>& model, RowIt row) {
  return argmax_lowest(nb_scores(model, row));
}

template <typename Scalar>
int nb_predict(const NbModel<Scalar>& model, const BasicDocTermMatrix<Scalar>& matrix, std::size_t r) {
  return nb_predict(model, matrix.row(r));
}

}  // namespace mbofs
