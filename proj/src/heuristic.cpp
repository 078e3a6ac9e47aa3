#include "mbofs/heuristic.hpp"

#include <cmath>
#include <mutex>
#include <thread>

namespace mbofs {

FeatureMask flip(const FeatureMask& mask, std::size_t position) {
  if (position >= mask.size())
    throw Error("flip: position " + std::to_string(position) + " out of range for M = " +
                std::to_string(mask.size()));
  FeatureMask out = mask;
  out.toggle(position);
  return out;
}

void apply_flips(FeatureMask& mask, std::span<const std::size_t> positions) {
  for (auto p : positions) {
    if (p >= mask.size()) throw Error("apply_flips: position out of range");
    mask.toggle(p);
  }
}

std::size_t change_count(int counter, std::size_t m_prime, const ChangeSchedule& schedule) {
  if (counter < 0) throw Error("change_count: negative counter");
  const double scaled = std::ldexp(schedule.base_fraction * static_cast<double>(m_prime), -counter);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(scaled)));
}

std::vector<double> FitnessFunction::evaluate_batch(std::span<const FeatureMask> masks) const {
  std::vector<double> out;
  out.reserve(masks.size());
  for (const auto& m : masks) out.push_back(evaluate(m));
  return out;
}

CvFitness::CvFitness(const DocTermMatrix& matrix, FitnessOptions options)
    : matrix_(matrix),
      options_(std::move(options)),
      folds_(stratified_folds(matrix.labels, options_.folds, options_.fold_seed)) {
  if (options_.classifier == ClassifierKind::NaiveBayes)
    nb_ = std::make_unique<FoldedNaiveBayes<double>>(matrix_, folds_, options_.params.alpha);
}

double CvFitness::compute(const FeatureMask& mask) const {
  if (mask.popcount() == 0) return 0.0;
  ++computed_;
  if (nb_) return nb_->evaluate(mask).mean_accuracy;
  return cross_val_decision_tree(matrix_, mask, folds_, options_.params).mean_accuracy;
}

double CvFitness::evaluate(const FeatureMask& mask) const {
  if (mask.size() != matrix_.n_features()) throw Error("fitness: mask universe mismatch");
  if (!options_.memoize) return compute(mask);
  {
    std::shared_lock lock(memo_mutex_);
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
  }
  const double value = compute(mask);
  std::unique_lock lock(memo_mutex_);
  memo_.try_emplace(mask, value);
  return value;
}

std::vector<double> CvFitness::evaluate_batch(std::span<const FeatureMask> masks) const {
  const unsigned threads = std::min<unsigned>(options_.threads, static_cast<unsigned>(masks.size()));
  if (threads <= 1) return FitnessFunction::evaluate_batch(masks);

  std::vector<double> out(masks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < masks.size();) {
          try {
            out[i] = evaluate(masks[i]);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double fitness(const DocTermMatrix& matrix, const FeatureMask& mask, ClassifierKind classifier, int k,
               std::uint64_t seed, const ClassifierParams& params) {
  if (mask.popcount() == 0) return 0.0;
  return cross_val_accuracy(matrix, mask, classifier, k, seed, params).mean_accuracy;
}

}  // namespace mbofs
