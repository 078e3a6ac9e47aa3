#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "mbofs/cross_validation.hpp"
#include "mbofs/doc_term_matrix.hpp"
#include "mbofs/error.hpp"
#include "mbofs/feature_mask.hpp"

namespace mbofs {

inline constexpr int kMaxNeighborRedraws = 16;

/// Copy of `mask` with bit `position` inverted (f -> 1 - f).
FeatureMask flip(const FeatureMask& mask, std::size_t position);

/// Inverts every listed position in place.
void apply_flips(FeatureMask& mask, std::span<const std::size_t> positions);

/// `count` distinct positions from [0, universe), Floyd's sampling.
template <typename Rng>
std::vector<std::size_t> sample_distinct(std::size_t universe, std::size_t count, Rng& rng) {
  std::vector<std::size_t> chosen;
  chosen.reserve(count);
  for (std::size_t j = universe - count; j < universe; ++j) {
    const auto t = static_cast<std::size_t>(rng.uniform_index(j + 1));
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
      chosen.push_back(t);
    else
      chosen.push_back(j);
  }
  return chosen;
}

/// Flips `change` distinct random positions. An all-zero result is re-drawn
/// up to kMaxNeighborRedraws times before giving up.
template <typename Rng>
FeatureMask generate_neighbor(const FeatureMask& mask, std::size_t change, Rng& rng) {
  if (change < 1 || change > mask.size())
    throw Error("generate_neighbor: change must be in [1, M]");
  for (int attempt = 0; attempt <= kMaxNeighborRedraws; ++attempt) {
    FeatureMask out = mask;
    const auto positions = sample_distinct(mask.size(), change, rng);
    apply_flips(out, positions);
    if (out.popcount() > 0) return out;
  }
  throw Error("degenerate neighbor: every draw produced an empty mask");
}

struct ChangeSchedule {
  double base_fraction = 0.02;
};

/// max(1, floor(base_fraction * m_prime / 2^counter)).
std::size_t change_count(int counter, std::size_t m_prime, const ChangeSchedule& schedule = {});

/// Scores a candidate mask; implementations must be pure in the mask.
class FitnessFunction {
 public:
  virtual ~FitnessFunction() = default;
  virtual double evaluate(const FeatureMask& mask) const = 0;
  /// Results in input order; may run in parallel.
  virtual std::vector<double> evaluate_batch(std::span<const FeatureMask> masks) const;
};

/// Adapter for an arbitrary callable; used by tests and custom objectives.
class LambdaFitness final : public FitnessFunction {
 public:
  explicit LambdaFitness(std::function<double(const FeatureMask&)> fn) : fn_(std::move(fn)) {}
  double evaluate(const FeatureMask& mask) const override { return fn_(mask); }

 private:
  std::function<double(const FeatureMask&)> fn_;
};

struct FitnessOptions {
  ClassifierKind classifier = ClassifierKind::NaiveBayes;
  int folds = 5;
  std::uint64_t fold_seed = 0;
  ClassifierParams params;
  bool memoize = true;
  unsigned threads = 1;
};

/// Mean cross-validated accuracy on fixed folds; an empty mask scores 0.
class CvFitness final : public FitnessFunction {
 public:
  CvFitness(const DocTermMatrix& matrix, FitnessOptions options);

  double evaluate(const FeatureMask& mask) const override;
  std::vector<double> evaluate_batch(std::span<const FeatureMask> masks) const override;

  const FoldAssignment& folds() const noexcept { return folds_; }
  const FitnessOptions& options() const noexcept { return options_; }
  /// Number of masks actually scored (memo misses).
  std::size_t computed() const noexcept { return computed_.load(); }

 private:
  double compute(const FeatureMask& mask) const;

  const DocTermMatrix& matrix_;
  FitnessOptions options_;
  FoldAssignment folds_;
  std::unique_ptr<FoldedNaiveBayes<double>> nb_;
  mutable std::shared_mutex memo_mutex_;
  mutable std::unordered_map<FeatureMask, double, FeatureMaskHash> memo_;
  mutable std::atomic<std::size_t> computed_{0};
};

/// One-shot fitness: cross_val_accuracy(...).mean_accuracy, or 0 for an empty mask.
double fitness(const DocTermMatrix& matrix, const FeatureMask& mask, ClassifierKind classifier, int k,
               std::uint64_t seed, const ClassifierParams& params = {});

}  // namespace mbofs
