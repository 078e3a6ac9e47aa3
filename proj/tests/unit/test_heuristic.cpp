#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "mbofs/error.hpp"
#include "mbofs/heuristic.hpp"
#include "test_util.hpp"

using namespace mbofs;

namespace {

// Replays a fixed sequence of uniform_index results.
struct ScriptedRng {
  std::vector<std::uint64_t> values;
  std::size_t next = 0;
  std::uint64_t uniform_index(std::uint64_t n) {
    const auto v = values.at(next++);
    REQUIRE(v < n);
    return v;
  }
};

const char* kExampleMask = "1100100110";
const char* kExampleNeighbor = "0100100111";

DocTermMatrix separable(std::size_t rows) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), 4);
  std::vector<int> labels(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    labels[r] = static_cast<int>(r % 2);
    const auto i = static_cast<Eigen::Index>(r);
    d(i, labels[r]) = 1.0;
    d(i, 2) = 0.3;
    d(i, 3) = (r % 3 == 0) ? 0.5 : 0.0;
  }
  return make_doc_term_matrix(d, labels);
}

}  // namespace

TEST_CASE("flip") {
  const auto t1 = FeatureMask::from_string(kExampleMask);
  CHECK(flip(flip(t1, 0), 9).to_string() == kExampleNeighbor);
  const auto z = flip(FeatureMask(10), 3);
  CHECK(z.popcount() == 1);
  CHECK(z.test(3));
  CHECK_THROWS_AS(flip(t1, 10), Error);
}

TEST_CASE("neighbor of the example mask with scripted draws") {
  ScriptedRng rng{{0, 9}};
  const auto n = generate_neighbor(FeatureMask::from_string(kExampleMask), 2, rng);
  CHECK(n.to_string() == kExampleNeighbor);
  CHECK(rng.next == 2);
}

TEST_CASE("all-ones mask flipped everywhere is degenerate") {
  auto rng = RngStream(1).child("n");
  CHECK_THROWS_WITH_AS(generate_neighbor(FeatureMask(8, true), 8, rng), doctest::Contains("degenerate neighbor"),
                       Error);
  CHECK_THROWS_AS(generate_neighbor(FeatureMask(8, true), 0, rng), Error);
  CHECK_THROWS_AS(generate_neighbor(FeatureMask(8, true), 9, rng), Error);
}

TEST_CASE("flip is an involution and neighbors sit at the requested distance") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto rng = RngStream(seed).child("property");
    const std::size_t change = 1 + rng.uniform_index(20);
    const std::size_t m = change + 1 + rng.uniform_index(200);
    FeatureMask mask(m);
    for (std::size_t i = 0; i < m; ++i)
      if (rng.uniform01() < 0.5) mask.set(i);
    if (mask.popcount() == 0) mask.set(rng.uniform_index(m));

    const std::size_t pos = rng.uniform_index(m);
    REQUIRE(flip(flip(mask, pos), pos) == mask);

    const auto n = generate_neighbor(mask, change, rng);
    REQUIRE(hamming_distance(mask, n) == change);
    REQUIRE(n.popcount() > 0);
  }
}

TEST_CASE("distinct sampling covers the universe without repeats") {
  auto rng = RngStream(3).child("floyd");
  const auto all = sample_distinct(50, 50, rng);
  std::vector<std::size_t> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 50; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("change schedule") {
  CHECK(change_count(0, 2000) == 40);
  CHECK(change_count(1, 2000) == 20);
  CHECK(change_count(5, 2000) == 1);
  CHECK(change_count(6, 2000) == 1);
  CHECK(change_count(99, 2000) == 1);
  for (int c = 0; c < 100; ++c) CHECK(change_count(c, 1) == 1);
  CHECK(change_count(0, 1000, {0.1}) == 100);
  for (std::size_t m : {1u, 7u, 50u, 500u, 2500u, 10000u}) {
    std::size_t prev = change_count(0, m);
    for (int c = 1; c < 100; ++c) {
      const auto now = change_count(c, m);
      CHECK(now >= 1);
      CHECK(now <= prev);
      prev = now;
    }
  }
}

TEST_CASE("cross-validated fitness") {
  const auto m = separable(40);
  FitnessOptions opts;
  opts.fold_seed = 3;
  const CvFitness fit(m, opts);
  CHECK(fit.evaluate(FeatureMask::from_string("1010")) == 1.0);
  CHECK(fit.evaluate(FeatureMask(4)) == 0.0);
  const auto some = FeatureMask::from_string("0011");
  const double once = fit.evaluate(some);
  CHECK(fit.evaluate(some) == once);
  CHECK(once == fitness(m, some, ClassifierKind::NaiveBayes, 5, 3));
  CHECK(fitness(m, FeatureMask(4), ClassifierKind::NaiveBayes, 5, 3) == 0.0);

  opts.classifier = ClassifierKind::DecisionTree;
  const CvFitness dt(m, opts);
  CHECK(dt.evaluate(FeatureMask::from_string("0100")) == 1.0);
}

TEST_CASE("memoization and threading are transparent") {
  const auto m = testutil::random_matrix(120, 60, 3, 0.15, 21);
  FitnessOptions plain;
  plain.fold_seed = 8;
  plain.memoize = false;
  FitnessOptions cached = plain;
  cached.memoize = true;
  cached.threads = 4;
  const CvFitness a(m, plain);
  const CvFitness b(m, cached);

  std::vector<FeatureMask> masks;
  auto rng = RngStream(2).child("masks");
  for (int i = 0; i < 40; ++i) {
    FeatureMask mask(60);
    for (std::size_t f = 0; f < 60; ++f)
      if (rng.uniform01() < 0.3) mask.set(f);
    masks.push_back(mask);
    if (i % 5 == 0) masks.push_back(mask);
  }
  const auto serial = a.evaluate_batch(masks);
  const auto parallel = b.evaluate_batch(masks);
  CHECK(serial == parallel);
  for (std::size_t i = 0; i < masks.size(); ++i) CHECK(b.evaluate(masks[i]) == serial[i]);
  CHECK(b.computed() < a.computed());

  FitnessOptions dt_opts = cached;
  dt_opts.classifier = ClassifierKind::DecisionTree;
  const CvFitness dt(m, dt_opts);
  const auto dt_batch = dt.evaluate_batch(std::span(masks).first(6));
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(dt_batch[i] == fitness(m, masks[i], ClassifierKind::DecisionTree, 5, 8));
}

TEST_CASE("lambda fitness adapter") {
  const LambdaFitness f([](const FeatureMask& m) { return static_cast<double>(m.popcount()); });
  const std::vector<FeatureMask> masks = {FeatureMask(5, true), FeatureMask(5)};
  CHECK(f.evaluate_batch(masks) == std::vector<double>{5.0, 0.0});
}
