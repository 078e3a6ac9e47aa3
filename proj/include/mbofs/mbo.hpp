#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mbofs/feature_mask.hpp"
#include "mbofs/heuristic.hpp"
#include "mbofs/rng.hpp"

namespace mbofs {

/// Fly steps per tour and the tour cap are fixed.
inline constexpr int kStepsPerTour = 10;
inline constexpr int kMaxTours = 100;

struct Bird {
  FeatureMask mask;
  double fitness = 0.0;

  friend bool operator==(const Bird&, const Bird&) = default;
};

/// V formation: a leader followed by two equally long wings. Wing birds are
/// stored front to back.
struct Flock {
  Bird leader;
  std::vector<Bird> left;
  std::vector<Bird> right;

  std::size_t size() const noexcept { return 1 + left.size() + right.size(); }
  std::size_t wing_length() const noexcept { return left.size(); }
  bool balanced() const noexcept { return left.size() == right.size() && !left.empty(); }

  /// Slot 0 is the leader, slots 1..w the left wing, w+1..2w the right wing.
  const Bird& at(std::size_t slot) const;
  Bird& at(std::size_t slot);

  friend bool operator==(const Flock&, const Flock&) = default;
};

struct MboConfig {
  int flock_size = 7;
  /// Neighbors generated per bird per fly step.
  int neighbors = 3;
  ChangeSchedule schedule;
  double budget_seconds = 600.0;
  std::uint64_t seed = 0;

  /// Throws on an even or too-small flock, or fewer than three neighbors.
  void validate() const;
};

struct MboState {
  double f_max = 0.0;
  FeatureMask b_max;
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
  int counter = 0;
};

struct TourTrace {
  int counter = 0;
  std::size_t change = 0;
  double f_max = 0.0;
  double elapsed_ms = 0.0;
};

enum class MboTermination { Stagnation, MaxTours, Budget, Interrupted };
std::string to_string(MboTermination reason);

/// Everything needed to continue a run from a tour boundary.
struct MboSnapshot {
  MboState state;
  Flock flock;
  std::vector<TourTrace> trace;
  double elapsed_seconds = 0.0;
};

struct MboResult {
  FeatureMask best;
  MboState state;
  std::vector<TourTrace> trace;
  MboTermination reason = MboTermination::Stagnation;
  Flock flock;
  double elapsed_seconds = 0.0;
};

struct MboObserver {
  /// Called after every fly step with the flock before and after it.
  std::function<void(const Flock& before, const Flock& after, int tour, int step)> on_step;
  /// Called at every tour boundary; returning false halts the run.
  std::function<bool(const MboSnapshot&)> on_tour;
};

/// Leader = input mask; the other birds are perturbations of it, dealt
/// alternately to the left and right wings.
Flock initialize_flock(const FeatureMask& input, const MboConfig& config, const FitnessFunction& fitness,
                       const RngStream& rng);

/// One fly step: neighbor generation, replacement, and the share cascade
/// down both wings. `rng` is the step's stream; each bird/neighbor pair
/// draws from its own child.
Flock fly(const Flock& flock, std::size_t change, int neighbors, const FitnessFunction& fitness,
          const RngStream& rng);

/// Highest fitness; ties go to the leader, then the left wing front to
/// back, then the right wing.
std::size_t find_best_slot(const Flock& flock);
const Bird& find_best_bird(const Flock& flock);

/// Swaps the best bird into the leader position.
Flock reorder(const Flock& flock);

MboResult mbo_select(const FitnessFunction& fitness, const FeatureMask& input, const MboConfig& config,
                     const MboObserver& observer = {}, const MboSnapshot* resume = nullptr);

MboResult mbo_select(const DocTermMatrix& matrix, const FeatureMask& input, const MboConfig& config,
                     const FitnessOptions& fitness_options);

}  // namespace mbofs
