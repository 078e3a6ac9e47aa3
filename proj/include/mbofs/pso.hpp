#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mbofs/feature_mask.hpp"
#include "mbofs/heuristic.hpp"

namespace mbofs {

template <typename Scalar>
Scalar sigmoid(Scalar v) {
  return Scalar(1) / (Scalar(1) + std::exp(-v));
}

/// Sigmoid-transfer binary PSO. Inertia decays linearly from w_start to w_end
/// over max_iterations.
struct PsoConfig {
  int swarm_size = 30;
  double w_start = 0.9;
  double w_end = 0.4;
  double c1 = 2.0;
  double c2 = 2.0;
  double v_max = 6.0;
  int max_iterations = 100;
  double budget_seconds = 600.0;
  std::uint64_t seed = 0;
  ChangeSchedule schedule;

  void validate() const;
  double inertia(int iteration) const;
};

struct Particle {
  FeatureMask position;
  Eigen::VectorXd velocity;
  double fitness = 0.0;
  FeatureMask pbest;
  double pbest_fitness = 0.0;
};

struct Swarm {
  std::vector<Particle> particles;
  FeatureMask gbest;
  double gbest_fitness = 0.0;
  /// Completed iterations.
  int iteration = 0;
};

struct PsoTrace {
  int iteration = 0;
  double gbest_fitness = 0.0;
  double elapsed_ms = 0.0;
};

enum class PsoTermination { MaxIterations, Budget, Interrupted };
std::string to_string(PsoTermination reason);

struct PsoSnapshot {
  Swarm swarm;
  std::vector<PsoTrace> trace;
  double elapsed_seconds = 0.0;
};

struct PsoResult {
  FeatureMask best;
  double best_fitness = 0.0;
  std::vector<PsoTrace> trace;
  PsoTermination reason = PsoTermination::MaxIterations;
  Swarm swarm;
  double elapsed_seconds = 0.0;
};

struct PsoObserver {
  std::function<void(const Swarm& before, const Swarm& after)> on_iteration;
  /// Returning false halts the run after the current iteration.
  std::function<bool(const PsoSnapshot&)> on_checkpoint;
};

/// Particle 0 is an exact copy of the input; the rest are perturbations of
/// it drawn like flock members. Velocities start at zero.
Swarm initialize_swarm(const FeatureMask& input, const PsoConfig& config, const FitnessFunction& fitness);

/// One synchronous iteration: every particle moves against the gbest of the
/// previous iteration, then pbest/gbest are reduced in particle order.
void pso_iterate(Swarm& swarm, const PsoConfig& config, const FitnessFunction& fitness);

PsoResult pso_select(const FitnessFunction& fitness, const FeatureMask& input, const PsoConfig& config,
                     const PsoObserver& observer = {}, const PsoSnapshot* resume = nullptr);

PsoResult pso_select(const DocTermMatrix& matrix, const FeatureMask& input, const PsoConfig& config,
                     const FitnessOptions& fitness_options);

}  // namespace mbofs
