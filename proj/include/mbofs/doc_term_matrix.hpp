#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mbofs/error.hpp"
#include "mbofs/feature_mask.hpp"

namespace mbofs {

/// Sparse N x M document-term matrix with one class label per row.
///
/// Rows are documents, columns are features. Only strictly positive weights
/// are stored; a missing entry reads as 0.
template <typename Scalar>
struct BasicDocTermMatrix {
  using SparseRows = Eigen::SparseMatrix<Scalar, Eigen::RowMajor, std::int64_t>;
  using RowIterator = typename SparseRows::InnerIterator;

  SparseRows weights;
  std::vector<int> labels;
  std::vector<std::string> class_names;

  std::size_t n_docs() const noexcept { return static_cast<std::size_t>(weights.rows()); }
  std::size_t n_features() const noexcept { return static_cast<std::size_t>(weights.cols()); }
  std::size_t n_classes() const noexcept { return class_names.size(); }

  RowIterator row(std::size_t r) const { return RowIterator(weights, static_cast<Eigen::Index>(r)); }

  /// Throws when a structural invariant does not hold.
  void validate() const {
    if (labels.size() != n_docs()) throw Error("matrix: label count differs from row count");
    for (int l : labels)
      if (l < 0 || static_cast<std::size_t>(l) >= n_classes())
        throw Error("matrix: label index out of range");
    for (Eigen::Index k = 0; k < weights.outerSize(); ++k)
      for (RowIterator it(weights, k); it; ++it)
        if (!(it.value() > Scalar(0)) || !std::isfinite(static_cast<double>(it.value())))
          throw Error("matrix: stored weight must be positive and finite");
  }

  /// Per-class row counts.
  std::vector<std::size_t> class_counts() const {
    std::vector<std::size_t> counts(n_classes(), 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    return counts;
  }

  /// Keeps only the columns selected by `mask`, renumbered in ascending order.
  BasicDocTermMatrix restrict_columns(const FeatureMask& mask) const {
    if (mask.size() != n_features()) throw Error("restrict_columns: mask universe mismatch");
    std::vector<std::int64_t> new_index(n_features(), -1);
    std::int64_t next = 0;
    for (std::size_t j = 0; j < n_features(); ++j)
      if (mask.test(j)) new_index[j] = next++;

    std::vector<Eigen::Triplet<Scalar, std::int64_t>> triplets;
    triplets.reserve(static_cast<std::size_t>(weights.nonZeros()));
    for (Eigen::Index r = 0; r < weights.outerSize(); ++r)
      for (RowIterator it(weights, r); it; ++it)
        if (auto c = new_index[static_cast<std::size_t>(it.col())]; c >= 0)
          triplets.emplace_back(r, c, it.value());

    BasicDocTermMatrix out;
    out.weights.resize(weights.rows(), next);
    out.weights.setFromTriplets(triplets.begin(), triplets.end());
    out.weights.makeCompressed();
    out.labels = labels;
    out.class_names = class_names;
    return out;
  }
};

using DocTermMatrix = BasicDocTermMatrix<double>;

/// Builds a matrix from a dense array; zero entries are not stored.
template <typename Derived>
BasicDocTermMatrix<typename Derived::Scalar> make_doc_term_matrix(
    const Eigen::MatrixBase<Derived>& dense, std::vector<int> labels,
    std::vector<std::string> class_names) {
  using Scalar = typename Derived::Scalar;
  BasicDocTermMatrix<Scalar> m;
  m.weights = dense.sparseView();
  m.weights.makeCompressed();
  m.labels = std::move(labels);
  m.class_names = std::move(class_names);
  m.validate();
  return m;
}

/// Same as above with class names "c0", "c1", ... inferred from the labels.
template <typename Derived>
BasicDocTermMatrix<typename Derived::Scalar> make_doc_term_matrix(
    const Eigen::MatrixBase<Derived>& dense, std::vector<int> labels) {
  int max_label = -1;
  for (int l : labels) max_label = std::max(max_label, l);
  std::vector<std::string> names;
  for (int c = 0; c <= max_label; ++c) names.push_back("c" + std::to_string(c));
  return make_doc_term_matrix(dense, std::move(labels), std::move(names));
}

}  // namespace mbofs
