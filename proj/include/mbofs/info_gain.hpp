#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "mbofs/doc_term_matrix.hpp"
#include "mbofs/error.hpp"
#include "mbofs/feature_mask.hpp"

namespace mbofs {

/// Features whose gain does not exceed this are treated as uninformative.
inline constexpr double kInformativeGain = 1e-12;
inline constexpr std::size_t kDefaultIgCap = 2500;

/// Shannon entropy in bits of a vector of nonnegative counts; 0 log 0 = 0.
template <typename Derived>
double entropy_bits(const Eigen::DenseBase<Derived>& counts) {
  const double total = static_cast<double>(counts.sum());
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    const double c = static_cast<double>(counts[i]);
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

/// H(C) of a label vector, in bits.
inline double class_entropy(std::span<const int> labels) {
  if (labels.empty()) throw Error("class_entropy: no labels");
  const int n_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_classes);
  for (int l : labels) counts[l] += 1.0;
  return entropy_bits(counts);
}

/// IG from a presence-by-class contingency table: `present[c]` rows of class
/// c contain the feature, `totals[c]` rows of class c overall.
template <typename A, typename B>
double info_gain_from_counts(const Eigen::DenseBase<A>& present, const Eigen::DenseBase<B>& totals) {
  const Eigen::VectorXd p = present.template cast<double>();
  const Eigen::VectorXd t = totals.template cast<double>();
  const Eigen::VectorXd absent = t - p;
  const double n = t.sum();
  const double n_present = p.sum();
  const double conditional =
      (n_present / n) * entropy_bits(p) + ((n - n_present) / n) * entropy_bits(absent);
  return std::max(0.0, entropy_bits(t) - conditional);
}

struct IgScores {
  double class_entropy = 0.0;
  std::vector<double> gain;
  /// Feature indices by gain descending, index ascending on ties.
  std::vector<std::size_t> ranking;
};

/// Per-feature presence counts by class, M x C.
template <typename Scalar>
Eigen::MatrixXi presence_counts(const BasicDocTermMatrix<Scalar>& matrix) {
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(matrix.n_features()),
                                                 static_cast<Eigen::Index>(matrix.n_classes()));
  for (std::size_t r = 0; r < matrix.n_docs(); ++r)
    for (auto it = matrix.row(r); it; ++it) ++counts(it.col(), matrix.labels[r]);
  return counts;
}

/// Information gain of one feature binarized to presence (weight > 0).
template <typename Scalar>
double info_gain(const BasicDocTermMatrix<Scalar>& matrix, std::size_t feature) {
  if (feature >= matrix.n_features()) throw Error("info_gain: feature index out of range");
  Eigen::VectorXi present = Eigen::VectorXi::Zero(static_cast<Eigen::Index>(matrix.n_classes()));
  Eigen::VectorXi totals = Eigen::VectorXi::Zero(static_cast<Eigen::Index>(matrix.n_classes()));
  for (std::size_t r = 0; r < matrix.n_docs(); ++r) {
    ++totals[matrix.labels[r]];
    if (matrix.weights.coeff(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(feature)) > Scalar(0))
      ++present[matrix.labels[r]];
  }
  return info_gain_from_counts(present, totals);
}

template <typename Scalar>
IgScores ig_scores(const BasicDocTermMatrix<Scalar>& matrix) {
  if (matrix.n_docs() == 0) throw Error("ig_scores: empty matrix");
  const Eigen::MatrixXi present = presence_counts(matrix);
  Eigen::VectorXi totals = Eigen::VectorXi::Zero(static_cast<Eigen::Index>(matrix.n_classes()));
  for (int l : matrix.labels) ++totals[l];

  IgScores out;
  out.class_entropy = entropy_bits(totals);
  out.gain.resize(matrix.n_features());
  for (std::size_t f = 0; f < matrix.n_features(); ++f)
    out.gain[f] = info_gain_from_counts(present.row(static_cast<Eigen::Index>(f)).transpose(), totals);

  out.ranking.resize(matrix.n_features());
  std::iota(out.ranking.begin(), out.ranking.end(), std::size_t{0});
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return out.gain[a] > out.gain[b]; });
  return out;
}

/// Every feature with gain above kInformativeGain, truncated to the top `cap`
/// of the ranking.
inline FeatureMask ig_filter(const IgScores& scores, std::size_t cap) {
  if (cap < 1) throw Error("ig_filter: cap must be >= 1");
  FeatureMask mask(scores.gain.size());
  std::size_t taken = 0;
  for (auto f : scores.ranking) {
    if (taken == cap || !(scores.gain[f] > kInformativeGain)) break;
    mask.set(f);
    ++taken;
  }
  if (taken == 0) throw Error("no informative features");
  return mask;
}

template <typename Scalar>
FeatureMask ig_filter(const BasicDocTermMatrix<Scalar>& matrix, std::size_t cap = kDefaultIgCap) {
  return ig_filter(ig_scores(matrix), cap);
}

}  // namespace mbofs
