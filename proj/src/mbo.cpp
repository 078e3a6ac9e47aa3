#include "mbofs/mbo.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "mbofs/error.hpp"

namespace mbofs {

std::string to_string(MboTermination reason) {
  switch (reason) {
    case MboTermination::Stagnation: return "stagnation";
    case MboTermination::MaxTours: return "max-tours";
    case MboTermination::Budget: return "budget";
    case MboTermination::Interrupted: return "interrupted";
  }
  return "unknown";
}

const Bird& Flock::at(std::size_t slot) const {
  if (slot == 0) return leader;
  if (slot <= left.size()) return left[slot - 1];
  return right.at(slot - 1 - left.size());
}

Bird& Flock::at(std::size_t slot) {
  return const_cast<Bird&>(static_cast<const Flock&>(*this).at(slot));
}

void MboConfig::validate() const {
  if (flock_size < 3 || flock_size % 2 == 0)
    throw Error("flock size must be odd and >= 3 (got " + std::to_string(flock_size) + ")");
  if (neighbors < 3) throw Error("neighbors per bird must be >= 3 (got " + std::to_string(neighbors) + ")");
  if (!(budget_seconds > 0.0)) throw Error("budget must be positive");
  if (!(schedule.base_fraction > 0.0)) throw Error("change fraction must be positive");
}

Flock initialize_flock(const FeatureMask& input, const MboConfig& config, const FitnessFunction& fitness,
                       const RngStream& rng) {
  config.validate();
  if (input.popcount() == 0) throw Error("initialize_flock: input mask is empty");
  const auto change = std::min(change_count(0, input.popcount(), config.schedule), input.size());

  std::vector<FeatureMask> masks{input};
  for (int i = 1; i < config.flock_size; ++i) {
    auto bird_rng = rng.child("bird", static_cast<std::uint64_t>(i));
    masks.push_back(generate_neighbor(input, change, bird_rng));
  }
  const auto scores = fitness.evaluate_batch(masks);

  Flock flock;
  flock.leader = {masks[0], scores[0]};
  for (std::size_t i = 1; i < masks.size(); ++i)
    (i % 2 == 1 ? flock.left : flock.right).push_back({masks[i], scores[i]});
  return flock;
}

namespace {

// Pool positions ordered by fitness descending; ties keep pool order.
std::vector<std::size_t> rank_pool(const std::vector<Bird>& pool) {
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pool[a].fitness > pool[b].fitness; });
  return order;
}

}  // namespace

Flock fly(const Flock& flock, std::size_t change, int neighbors, const FitnessFunction& fitness,
          const RngStream& rng) {
  if (!flock.balanced()) throw Error("fly: flock wings are unbalanced");
  if (neighbors < 3) throw Error("fly: neighbors per bird must be >= 3");
  const std::size_t n = flock.size();
  const auto k = static_cast<std::size_t>(neighbors);

  std::vector<FeatureMask> masks;
  masks.reserve(n * k);
  for (std::size_t slot = 0; slot < n; ++slot) {
    const auto bird_rng = rng.child("bird", slot);
    for (std::size_t j = 0; j < k; ++j) {
      auto neighbor_rng = bird_rng.child("neighbor", j);
      masks.push_back(generate_neighbor(flock.at(slot).mask, change, neighbor_rng));
    }
  }
  const auto scores = fitness.evaluate_batch(masks);
  auto neighbors_of = [&](std::size_t slot) {
    std::vector<Bird> out;
    for (std::size_t j = 0; j < k; ++j) out.push_back({masks[slot * k + j], scores[slot * k + j]});
    return out;
  };

  Flock next = flock;

  std::vector<Bird> pool{flock.leader};
  for (auto& b : neighbors_of(0)) pool.push_back(std::move(b));
  auto order = rank_pool(pool);
  next.leader = pool[order[0]];
  const Bird left_share = pool[order[1]];
  const Bird right_share = pool[order[2]];

  auto run_wing = [&](std::vector<Bird>& wing, std::size_t first_slot, Bird share) {
    for (std::size_t i = 0; i < wing.size(); ++i) {
      std::vector<Bird> candidates{wing[i]};
      for (auto& b : neighbors_of(first_slot + i)) candidates.push_back(std::move(b));
      candidates.push_back(std::move(share));
      const auto ranked = rank_pool(candidates);
      wing[i] = candidates[ranked[0]];
      share = candidates[ranked[1]];
    }
  };
  run_wing(next.left, 1, left_share);
  run_wing(next.right, 1 + flock.wing_length(), right_share);
  return next;
}

std::size_t find_best_slot(const Flock& flock) {
  std::size_t best = 0;
  for (std::size_t slot = 1; slot < flock.size(); ++slot)
    if (flock.at(slot).fitness > flock.at(best).fitness) best = slot;
  return best;
}

const Bird& find_best_bird(const Flock& flock) { return flock.at(find_best_slot(flock)); }

Flock reorder(const Flock& flock) {
  Flock out = flock;
  const auto best = find_best_slot(flock);
  if (best != 0) std::swap(out.leader, out.at(best));
  return out;
}

MboResult mbo_select(const FitnessFunction& fitness, const FeatureMask& input, const MboConfig& config,
                     const MboObserver& observer, const MboSnapshot* resume) {
  config.validate();
  if (input.popcount() == 0) throw Error("mbo_select: input mask is empty");

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const double offset = resume ? resume->elapsed_seconds : 0.0;
  auto elapsed = [&] { return offset + std::chrono::duration<double>(Clock::now() - start).count(); };
  auto over_budget = [&] { return elapsed() >= config.budget_seconds; };

  const RngStream root = RngStream(config.seed).child("mbo");
  const std::size_t m_prime = input.popcount();

  MboResult result;
  Flock flock;
  if (resume) {
    result.state = resume->state;
    result.trace = resume->trace;
    flock = resume->flock;
    if (!flock.balanced() || flock.size() != static_cast<std::size_t>(config.flock_size))
      throw Error("mbo_select: resumed flock does not match the configured flock size");
  } else {
    const double f = fitness.evaluate(input);
    result.state = {f, input, f, f, f, 0};
    flock = initialize_flock(input, config, fitness, root.child("init"));
  }
  auto& state = result.state;

  auto finish = [&](MboTermination reason) {
    result.reason = reason;
    result.best = state.b_max;
    result.flock = flock;
    result.elapsed_seconds = elapsed();
    return result;
  };

  while ((state.counter < 3 || state.f1 != state.f3) && state.counter < kMaxTours) {
    const auto change = std::min(change_count(state.counter, m_prime, config.schedule), input.size());
    const auto tour_rng = root.child("tour", static_cast<std::uint64_t>(state.counter));
    for (int step = 0; step < kStepsPerTour; ++step) {
      Flock next = fly(flock, change, config.neighbors, fitness, tour_rng.child("step", static_cast<std::uint64_t>(step)));
      if (observer.on_step) observer.on_step(flock, next, state.counter, step);
      flock = std::move(next);
      const Bird& best = find_best_bird(flock);
      if (best.fitness > state.f_max) {
        state.f_max = best.fitness;
        state.b_max = best.mask;
      }
      if (over_budget()) return finish(MboTermination::Budget);
    }
    flock = reorder(flock);
    state.f3 = state.f2;
    state.f2 = state.f1;
    state.f1 = state.f_max;
    ++state.counter;
    result.trace.push_back({state.counter, change, state.f_max, elapsed() * 1000.0});

    if (observer.on_tour) {
      const MboSnapshot snapshot{state, flock, result.trace, elapsed()};
      if (!observer.on_tour(snapshot)) return finish(MboTermination::Interrupted);
    }
  }
  return finish(state.counter >= kMaxTours ? MboTermination::MaxTours : MboTermination::Stagnation);
}

MboResult mbo_select(const DocTermMatrix& matrix, const FeatureMask& input, const MboConfig& config,
                     const FitnessOptions& fitness_options) {
  const CvFitness fitness(matrix, fitness_options);
  return mbo_select(fitness, input, config);
}

}  // namespace mbofs
