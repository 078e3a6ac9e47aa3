#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

#include "mbofs/doc_term_matrix.hpp"
#include "mbofs/error.hpp"
#include "mbofs/feature_mask.hpp"

namespace mbofs {

/// Binary CART tree over sparse rows. A missing entry is the value 0.
template <typename Scalar>
struct DtModel {
  struct Node {
    int feature = -1;  // -1 marks a leaf
    Scalar threshold{0};
    int left = -1;
    int right = -1;
    int label = 0;
    int depth = 0;

    bool is_leaf() const noexcept { return feature < 0; }
  };

  std::vector<Node> nodes;  // nodes[0] is the root
  int max_depth = 20;
  std::size_t min_split = 2;

  int depth() const {
    int d = 0;
    for (const auto& n : nodes) d = std::max(d, n.depth);
    return d;
  }
};

namespace detail {

inline double gini(const std::vector<std::size_t>& counts, std::size_t n) {
  if (n == 0) return 0.0;
  double sum_sq = 0.0;
  for (auto c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

inline int majority(const std::vector<std::size_t>& counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  return best;
}

template <typename Scalar>
class TreeBuilder {
 public:
  TreeBuilder(const BasicDocTermMatrix<Scalar>& matrix, const FeatureMask& mask, DtModel<Scalar>& model)
      : matrix_(matrix), mask_(mask), model_(model) {}

  int build(std::vector<std::size_t> rows, int depth) {
    const int id = static_cast<int>(model_.nodes.size());
    model_.nodes.emplace_back();
    model_.nodes[static_cast<std::size_t>(id)].depth = depth;

    std::vector<std::size_t> counts(matrix_.n_classes(), 0);
    for (auto r : rows) ++counts[static_cast<std::size_t>(matrix_.labels[r])];
    model_.nodes[static_cast<std::size_t>(id)].label = majority(counts);

    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    if (pure || depth >= model_.max_depth || rows.size() < model_.min_split) return id;

    const auto split = best_split(rows, counts);
    if (!split) return id;

    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      const Scalar v = matrix_.weights.coeff(static_cast<Eigen::Index>(r), split->first);
      (v <= split->second ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    const int l = build(std::move(left), depth + 1);
    const int rgt = build(std::move(right), depth + 1);
    auto& node = model_.nodes[static_cast<std::size_t>(id)];
    node.feature = split->first;
    node.threshold = split->second;
    node.left = l;
    node.right = rgt;
    return id;
  }

 private:
  // Lowest weighted Gini over all (feature, midpoint) candidates; ties keep
  // the lowest feature index, then the lowest threshold.
  std::optional<std::pair<int, Scalar>> best_split(const std::vector<std::size_t>& rows,
                                                   const std::vector<std::size_t>& counts) {
    std::vector<std::tuple<int, Scalar, int>> entries;  // (feature, value, label)
    for (auto r : rows)
      for (auto it = matrix_.row(r); it; ++it)
        if (mask_.test(static_cast<std::size_t>(it.col())))
          entries.emplace_back(static_cast<int>(it.col()), it.value(), matrix_.labels[r]);
    std::sort(entries.begin(), entries.end());

    const std::size_t n = rows.size();
    double best_impurity = std::numeric_limits<double>::infinity();
    std::optional<std::pair<int, Scalar>> best;
    std::vector<std::size_t> left(counts.size()), right(counts.size());

    for (std::size_t begin = 0; begin < entries.size();) {
      const int feature = std::get<0>(entries[begin]);
      std::size_t end = begin;
      while (end < entries.size() && std::get<0>(entries[end]) == feature) ++end;

      // Left side starts with the implicit zeros.
      right.assign(counts.size(), 0);
      for (std::size_t i = begin; i < end; ++i) ++right[static_cast<std::size_t>(std::get<2>(entries[i]))];
      for (std::size_t c = 0; c < counts.size(); ++c) left[c] = counts[c] - right[c];
      std::size_t n_left = n - (end - begin);
      Scalar previous{0};
      bool have_previous = n_left > 0;

      for (std::size_t i = begin; i < end;) {
        const Scalar value = std::get<1>(entries[i]);
        if (have_previous && value > previous) {
          const double impurity = (static_cast<double>(n_left) * gini(left, n_left) +
                                   static_cast<double>(n - n_left) * gini(right, n - n_left)) /
                                  static_cast<double>(n);
          if (impurity < best_impurity) {
            best_impurity = impurity;
            best = std::make_pair(feature, static_cast<Scalar>((previous + value) / Scalar(2)));
          }
        }
        while (i < end && std::get<1>(entries[i]) == value) {
          const auto c = static_cast<std::size_t>(std::get<2>(entries[i]));
          ++left[c];
          --right[c];
          ++n_left;
          ++i;
        }
        previous = value;
        have_previous = true;
      }
      begin = end;
    }
    return best;
  }

  const BasicDocTermMatrix<Scalar>& matrix_;
  const FeatureMask& mask_;
  DtModel<Scalar>& model_;
};

}  // namespace detail

/// Greedy Gini splits over the selected features. Stops on purity, at
/// max_depth, or when fewer than min_split rows remain.
template <typename Scalar>
DtModel<Scalar> dt_train(const BasicDocTermMatrix<Scalar>& matrix, const FeatureMask& mask,
                         std::span<const std::size_t> rows, int max_depth = 20,
                         std::size_t min_split = 2) {
  if (mask.size() != matrix.n_features()) throw Error("dt_train: mask universe mismatch");
  if (mask.popcount() == 0) throw Error("dt_train: empty feature mask");
  if (rows.empty()) throw Error("dt_train: empty row subset");
  if (max_depth < 0) throw Error("dt_train: max_depth must be >= 0");
  DtModel<Scalar> model;
  model.max_depth = max_depth;
  model.min_split = min_split;
  detail::TreeBuilder<Scalar>(matrix, mask, model).build({rows.begin(), rows.end()}, 0);
  return model;
}

/// Descends left when the row's value is <= threshold.
template <typename Scalar, typename ValueOf>
int dt_predict_with(const DtModel<Scalar>& model, ValueOf&& value_of) {
  int id = 0;
  while (!model.nodes[static_cast<std::size_t>(id)].is_leaf()) {
    const auto& n = model.nodes[static_cast<std::size_t>(id)];
    id = value_of(n.feature) <= n.threshold ? n.left : n.right;
  }
  return model.nodes[static_cast<std::size_t>(id)].label;
}

template <typename Scalar>
int dt_predict(const DtModel<Scalar>& model, const BasicDocTermMatrix<Scalar>& matrix, std::size_t r) {
  return dt_predict_with(model, [&](int f) {
    return matrix.weights.coeff(static_cast<Eigen::Index>(r), f);
  });
}

}  // namespace mbofs
