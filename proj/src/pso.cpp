#include "mbofs/pso.hpp"

#include <chrono>

#include "mbofs/error.hpp"
#include "mbofs/rng.hpp"

namespace mbofs {

std::string to_string(PsoTermination reason) {
  switch (reason) {
    case PsoTermination::MaxIterations: return "max-iterations";
    case PsoTermination::Budget: return "budget";
    case PsoTermination::Interrupted: return "interrupted";
  }
  return "unknown";
}

void PsoConfig::validate() const {
  if (swarm_size < 1) throw Error("swarm size must be >= 1");
  if (max_iterations < 1) throw Error("PSO iterations must be >= 1");
  if (!(v_max > 0.0)) throw Error("v_max must be positive");
  if (!(budget_seconds > 0.0)) throw Error("budget must be positive");
}

double PsoConfig::inertia(int iteration) const {
  if (max_iterations <= 1) return w_start;
  const double t = static_cast<double>(iteration) / static_cast<double>(max_iterations - 1);
  return w_start - (w_start - w_end) * std::min(1.0, t);
}

namespace {

Eigen::ArrayXd as_array(const FeatureMask& m) {
  Eigen::ArrayXd a(static_cast<Eigen::Index>(m.size()));
  for (std::size_t j = 0; j < m.size(); ++j) a[static_cast<Eigen::Index>(j)] = m.test(j) ? 1.0 : 0.0;
  return a;
}

void reduce_gbest(Swarm& swarm) {
  for (const auto& p : swarm.particles)
    if (p.pbest_fitness > swarm.gbest_fitness) {
      swarm.gbest_fitness = p.pbest_fitness;
      swarm.gbest = p.pbest;
    }
}

}  // namespace

Swarm initialize_swarm(const FeatureMask& input, const PsoConfig& config, const FitnessFunction& fitness) {
  config.validate();
  if (input.popcount() == 0) throw Error("initialize_swarm: input mask is empty");
  const RngStream root = RngStream(config.seed).child("pso").child("init");
  const auto change = std::min(change_count(0, input.popcount(), config.schedule), input.size());

  std::vector<FeatureMask> positions{input};
  for (int i = 1; i < config.swarm_size; ++i) {
    auto rng = root.child("particle", static_cast<std::uint64_t>(i));
    positions.push_back(generate_neighbor(input, change, rng));
  }
  const auto scores = fitness.evaluate_batch(positions);

  Swarm swarm;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    Particle p;
    p.position = positions[i];
    p.velocity = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(input.size()));
    p.fitness = scores[i];
    p.pbest = positions[i];
    p.pbest_fitness = scores[i];
    swarm.particles.push_back(std::move(p));
  }
  swarm.gbest = swarm.particles[0].pbest;
  swarm.gbest_fitness = swarm.particles[0].pbest_fitness;
  reduce_gbest(swarm);
  return swarm;
}

void pso_iterate(Swarm& swarm, const PsoConfig& config, const FitnessFunction& fitness) {
  const RngStream root =
      RngStream(config.seed).child("pso").child("iteration", static_cast<std::uint64_t>(swarm.iteration));
  const double w = config.inertia(swarm.iteration);
  const Eigen::ArrayXd gbest = as_array(swarm.gbest);
  const auto m = static_cast<Eigen::Index>(swarm.gbest.size());

  std::vector<FeatureMask> positions;
  positions.reserve(swarm.particles.size());
  for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
    auto& p = swarm.particles[i];
    auto rng = root.child("particle", i);
    Eigen::ArrayXd r1(m), r2(m), u(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      r1[j] = rng.uniform01();
      r2[j] = rng.uniform01();
      u[j] = rng.uniform01();
    }
    const Eigen::ArrayXd x = as_array(p.position);
    const Eigen::ArrayXd pbest = as_array(p.pbest);
    p.velocity = (w * p.velocity.array() + config.c1 * r1 * (pbest - x) + config.c2 * r2 * (gbest - x))
                     .max(-config.v_max)
                     .min(config.v_max)
                     .matrix();
    FeatureMask next(swarm.gbest.size());
    for (Eigen::Index j = 0; j < m; ++j)
      if (u[j] < sigmoid(p.velocity[j])) next.set(static_cast<std::size_t>(j));
    positions.push_back(std::move(next));
  }

  const auto scores = fitness.evaluate_batch(positions);
  for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
    auto& p = swarm.particles[i];
    p.position = std::move(positions[i]);
    p.fitness = scores[i];
    if (p.fitness > p.pbest_fitness) {
      p.pbest_fitness = p.fitness;
      p.pbest = p.position;
    }
  }
  reduce_gbest(swarm);
  ++swarm.iteration;
}

PsoResult pso_select(const FitnessFunction& fitness, const FeatureMask& input, const PsoConfig& config,
                     const PsoObserver& observer, const PsoSnapshot* resume) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const double offset = resume ? resume->elapsed_seconds : 0.0;
  auto elapsed = [&] { return offset + std::chrono::duration<double>(Clock::now() - start).count(); };

  PsoResult result;
  Swarm swarm = resume ? resume->swarm : initialize_swarm(input, config, fitness);
  if (resume) result.trace = resume->trace;

  auto finish = [&](PsoTermination reason) {
    result.reason = reason;
    result.best = swarm.gbest;
    result.best_fitness = swarm.gbest_fitness;
    result.swarm = swarm;
    result.elapsed_seconds = elapsed();
    return result;
  };

  while (swarm.iteration < config.max_iterations) {
    if (elapsed() >= config.budget_seconds) return finish(PsoTermination::Budget);
    if (observer.on_iteration) {
      const Swarm before = swarm;
      pso_iterate(swarm, config, fitness);
      observer.on_iteration(before, swarm);
    } else {
      pso_iterate(swarm, config, fitness);
    }
    result.trace.push_back({swarm.iteration, swarm.gbest_fitness, elapsed() * 1000.0});
    if (observer.on_checkpoint && !observer.on_checkpoint({swarm, result.trace, elapsed()}))
      return finish(PsoTermination::Interrupted);
  }
  return finish(PsoTermination::MaxIterations);
}

PsoResult pso_select(const DocTermMatrix& matrix, const FeatureMask& input, const PsoConfig& config,
                     const FitnessOptions& fitness_options) {
  const CvFitness fitness(matrix, fitness_options);
  return pso_select(fitness, input, config);
}

}  // namespace mbofs
