#include "doctest.h"

#include <cmath>
#include <numeric>

#include "mbofs/cross_validation.hpp"
#include "mbofs/decision_tree.hpp"
#include "mbofs/error.hpp"
#include "mbofs/naive_bayes.hpp"
#include "test_util.hpp"

using namespace mbofs;

namespace {

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

DocTermMatrix two_by_two() {
  Eigen::MatrixXd d(2, 2);
  d << 2.0, 0.0, 0.0, 2.0;
  return make_doc_term_matrix(d, {0, 1}, {"A", "B"});
}

}  // namespace

TEST_CASE("naive bayes hand example") {
  const auto m = two_by_two();
  const FeatureMask mask(2, true);
  const auto model = nb_train(m, mask, all_rows(2), 1.0);
  // (2 + 1) / (2 + 2) and (0 + 1) / (2 + 2)
  CHECK(std::abs(model.log_likelihoods(0, 0) - std::log(0.75)) <= 1e-12);
  CHECK(std::abs(model.log_likelihoods(0, 1) - std::log(0.25)) <= 1e-12);
  CHECK(std::abs(model.log_likelihoods(1, 0) - std::log(0.25)) <= 1e-12);
  CHECK(std::abs(model.log_priors[0] - std::log(0.5)) <= 1e-12);

  Eigen::MatrixXd q(1, 2);
  q << 1.0, 0.0;
  const auto query = make_doc_term_matrix(q, {0}, {"A", "B"});
  CHECK(nb_predict(model, query, 0) == 0);
}

TEST_CASE("naive bayes smoothing and priors") {
  // Class 1 has only an empty row: every likelihood is 1/M'.
  Eigen::MatrixXd d(3, 3);
  d << 1.0, 0.5, 0.0,  //
      0.2, 0.0, 0.3,   //
      0.0, 0.0, 0.0;
  const auto m = make_doc_term_matrix(d, {0, 0, 1});
  const FeatureMask mask(3, true);
  const auto model = nb_train(m, mask, all_rows(3), 1.0);
  for (int t = 0; t < 3; ++t) CHECK(std::exp(model.log_likelihoods(1, t)) == doctest::Approx(1.0 / 3).epsilon(1e-12));

  // All-zero row falls back to the priors: class 0 holds 2 of 3 rows.
  CHECK(nb_predict(model, m, 2) == 0);

  const std::vector<std::size_t> only_zero = {0, 1};
  const auto single = nb_train(m, mask, only_zero, 1.0);
  CHECK(single.log_priors[0] == 0.0);
  CHECK(std::isinf(single.log_priors[1]));
  CHECK(nb_predict(single, m, 2) == 0);

  CHECK_THROWS_AS(nb_train(m, FeatureMask(3), all_rows(3), 1.0), Error);
  CHECK_THROWS_AS(nb_train(m, mask, all_rows(3), 0.0), Error);
  CHECK_THROWS_AS(nb_train(m, mask, std::vector<std::size_t>{}, 1.0), Error);
}

TEST_CASE("naive bayes exact tie goes to the lowest class") {
  Eigen::MatrixXd d(2, 2);
  d << 1.0, 0.0, 0.0, 1.0;
  const auto m = make_doc_term_matrix(d, {1, 0});
  const auto model = nb_train(m, FeatureMask(2, true), all_rows(2), 1.0);
  // Equal priors and no evidence give identical scores.
  const auto query = make_doc_term_matrix(Eigen::MatrixXd::Zero(1, 2), {0}, {"c0", "c1"});
  const auto scores = nb_scores(model, query.row(0));
  REQUIRE(scores[0] == scores[1]);
  CHECK(nb_predict(model, query, 0) == 0);
  Eigen::Vector3d s(1.0, 2.0, 2.0);
  CHECK(argmax_lowest(s) == 1);
}

TEST_CASE("naive bayes distributions normalize") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto m = testutil::random_matrix(40, 25, 3, 0.2, seed);
    auto rng = RngStream(seed).child("mask");
    FeatureMask mask(25);
    for (std::size_t f = 0; f < 25; ++f)
      if (rng.uniform01() < 0.5) mask.set(f);
    if (mask.popcount() == 0) mask.set(0);
    const auto model = nb_train(m, mask, all_rows(40), 0.5 + rng.uniform01());
    CHECK(model.log_priors.array().exp().sum() == doctest::Approx(1.0).epsilon(1e-9));
    for (Eigen::Index c = 0; c < model.log_likelihoods.rows(); ++c)
      CHECK(model.log_likelihoods.row(c).array().exp().sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("naive bayes prediction ignores a common score shift") {
  const auto m = testutil::random_matrix(60, 20, 4, 0.3, 9);
  const auto model = nb_train(m, FeatureMask(20, true), all_rows(60), 1.0);
  for (std::size_t r = 0; r < 60; ++r) {
    const auto scores = nb_scores(model, m.row(r));
    for (double shift : {-1e3, -7.5, 0.25, 512.0})
      CHECK(argmax_lowest((scores.array() + shift).matrix()) == nb_predict(model, m, r));
  }
}

TEST_CASE("decision tree hand examples") {
  Eigen::MatrixXd d(4, 1);
  d << 0.0, 0.0, 1.0, 1.0;
  const auto m = make_doc_term_matrix(d, {0, 0, 1, 1}, {"A", "B"});
  const auto tree = dt_train(m, FeatureMask(1, true), all_rows(4));
  REQUIRE(tree.nodes.size() == 3);
  CHECK(tree.nodes[0].feature == 0);
  CHECK(tree.nodes[0].threshold == 0.5);
  for (std::size_t r = 0; r < 4; ++r) CHECK(dt_predict(tree, m, r) == m.labels[r]);

  Eigen::MatrixXd q(2, 1);
  q << 0.7, 0.0;
  const auto query = make_doc_term_matrix(q, {0, 1});
  CHECK(dt_predict(tree, query, 0) == 1);
  // Missing entry reads as 0.
  CHECK(dt_predict(tree, query, 1) == 0);

  const auto stump = dt_train(m, FeatureMask(1, true), all_rows(4), 0);
  CHECK(stump.nodes.size() == 1);
  CHECK(stump.depth() == 0);

  const std::vector<std::size_t> pure = {2, 3};
  const auto leaf = dt_train(m, FeatureMask(1, true), pure);
  CHECK(leaf.nodes.size() == 1);
  CHECK(dt_predict(leaf, query, 1) == 1);
}

TEST_CASE("decision tree respects mask and depth bound") {
  const auto m = testutil::random_matrix(80, 15, 3, 0.4, 4);
  const auto mask = FeatureMask::from_string("101010101010101");
  for (int depth : {1, 2, 4, 8}) {
    const auto tree = dt_train(m, mask, all_rows(80), depth);
    CHECK(tree.depth() <= depth);
    for (const auto& n : tree.nodes)
      if (n.feature >= 0) CHECK(mask.test(static_cast<std::size_t>(n.feature)));
  }
}

TEST_CASE("training accuracy does not drop with depth") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto m = testutil::random_matrix(60, 12, 3, 0.35, seed);
    double prev = 0.0;
    for (int depth = 0; depth <= 10; ++depth) {
      const auto tree = dt_train(m, FeatureMask(12, true), all_rows(60), depth);
      std::size_t hit = 0;
      for (std::size_t r = 0; r < 60; ++r) hit += dt_predict(tree, m, r) == m.labels[r];
      const double acc = static_cast<double>(hit) / 60.0;
      CHECK(acc >= prev);
      prev = acc;
    }
  }
}

TEST_CASE("stratified folds") {
  const std::vector<int> ten = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
  const auto f = stratified_folds(ten, 5, 3);
  for (int k = 0; k < 5; ++k) {
    const auto test = f.test_rows(k);
    REQUIRE(test.size() == 2);
    CHECK(ten[test[0]] + ten[test[1]] == 1);
    CHECK(f.train_rows(k).size() == 8);
  }

  const std::vector<int> four = {0, 0, 1, 1};
  const auto f2 = stratified_folds(four, 2, 1);
  for (int k = 0; k < 2; ++k) {
    const auto test = f2.test_rows(k);
    REQUIRE(test.size() == 2);
    CHECK(four[test[0]] != four[test[1]]);
  }

  const std::vector<int> lonely = {0, 0, 0, 0, 0, 1};
  CHECK_THROWS_AS(stratified_folds(lonely, 5, 1), Error);
  CHECK_THROWS_AS(stratified_folds(ten, 1, 1), Error);
}

TEST_CASE("stratified folds partition rows and balance classes") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto rng = RngStream(seed).child("labels");
    const int classes = 2 + static_cast<int>(rng.uniform_index(4));
    const int k = 2 + static_cast<int>(rng.uniform_index(5));
    std::vector<int> labels;
    for (int c = 0; c < classes; ++c)
      for (std::uint64_t i = 0, n = k + rng.uniform_index(20); i < n; ++i) labels.push_back(c);
    const auto f = stratified_folds(labels, k, seed);
    std::vector<int> seen(labels.size(), 0);
    std::vector<std::vector<int>> per(static_cast<std::size_t>(classes), std::vector<int>(static_cast<std::size_t>(k)));
    for (int fold = 0; fold < k; ++fold)
      for (auto r : f.test_rows(fold)) {
        ++seen[r];
        ++per[static_cast<std::size_t>(labels[r])][static_cast<std::size_t>(fold)];
      }
    for (int s : seen) CHECK(s == 1);
    for (const auto& counts : per) {
      const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
      CHECK(*hi - *lo <= 1);
    }
  }
}

TEST_CASE("cross validation on separable and noise data") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(40, 3);
  std::vector<int> labels(40);
  for (int r = 0; r < 40; ++r) {
    labels[r] = r % 2;
    d(r, labels[r]) = 1.0;
    d(r, 2) = 0.5;
  }
  const auto sep = make_doc_term_matrix(d, labels);
  CHECK(cross_val_accuracy(sep, FeatureMask::from_string("100"), ClassifierKind::DecisionTree, 5, 11).mean_accuracy ==
        1.0);
  // A lone feature carries no evidence under multinomial NB (every class
  // likelihood is 1), so pair the separating feature with a background one.
  CHECK(cross_val_accuracy(sep, FeatureMask::from_string("100"), ClassifierKind::NaiveBayes, 5, 11).mean_accuracy ==
        0.5);
  CHECK(cross_val_accuracy(sep, FeatureMask::from_string("101"), ClassifierKind::NaiveBayes, 5, 11).mean_accuracy ==
        1.0);

  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto noise = testutil::random_matrix(200, 20, 2, 0.2, 100 + seed);
    const double acc = cross_val_accuracy(noise, FeatureMask(20, true), ClassifierKind::NaiveBayes, 5, seed).mean_accuracy;
    CHECK(acc == doctest::Approx(0.5).epsilon(0.3));
    total += acc;
  }
  CHECK(std::abs(total / 10 - 0.5) <= 0.15);
}

TEST_CASE("cross validation is deterministic and reports the fold mean") {
  const auto m = testutil::random_matrix(90, 30, 3, 0.25, 77);
  const auto mask = FeatureMask::from_string("110011001100110011001100110011");
  for (auto kind : {ClassifierKind::NaiveBayes, ClassifierKind::DecisionTree}) {
    const auto a = cross_val_accuracy(m, mask, kind, 5, 4);
    const auto b = cross_val_accuracy(m, mask, kind, 5, 4);
    CHECK(a == b);
    const double mean = std::accumulate(a.fold_accuracies.begin(), a.fold_accuracies.end(), 0.0) / 5;
    CHECK(std::abs(a.mean_accuracy - mean) <= 1e-12);
    CHECK(a.fold_accuracies.size() == 5);
  }
}

TEST_CASE("cached fold statistics match per-fold training exactly") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto m = testutil::random_matrix(70, 40, 3, 0.2, seed);
    const auto folds = stratified_folds(m.labels, 5, seed);
    auto rng = RngStream(seed).child("mask");
    FeatureMask mask(40);
    for (std::size_t f = 0; f < 40; ++f)
      if (rng.uniform01() < 0.4) mask.set(f);
    if (mask.popcount() == 0) mask.set(3);

    std::vector<double> direct;
    for (int k = 0; k < 5; ++k) {
      const auto model = nb_train(m, mask, folds.train_rows(k), 1.0);
      const auto test = folds.test_rows(k);
      std::size_t hit = 0;
      for (auto r : test) hit += nb_predict(model, m, r) == m.labels[r];
      direct.push_back(static_cast<double>(hit) / static_cast<double>(test.size()));
    }
    const auto cached = FoldedNaiveBayes<double>(m, folds, 1.0).evaluate(mask);
    CHECK(cached.fold_accuracies == direct);
  }
}

TEST_CASE("single precision kernels agree with double on a clean problem") {
  Eigen::MatrixXf d(4, 2);
  d << 1.0f, 0.0f, 0.9f, 0.1f, 0.0f, 1.0f, 0.2f, 0.8f;
  const auto m = make_doc_term_matrix(d, {0, 0, 1, 1});
  const auto model = nb_train(m, FeatureMask(2, true), all_rows(4), 1.0f);
  for (std::size_t r = 0; r < 4; ++r) CHECK(nb_predict(model, m, r) == m.labels[r]);
  const auto tree = dt_train(m, FeatureMask(2, true), all_rows(4));
  for (std::size_t r = 0; r < 4; ++r) CHECK(dt_predict(tree, m, r) == m.labels[r]);
}

TEST_CASE("classifier names") {
  CHECK(parse_classifier("nb") == ClassifierKind::NaiveBayes);
  CHECK(parse_classifier("dt") == ClassifierKind::DecisionTree);
  CHECK(to_string(ClassifierKind::DecisionTree) == "dt");
  CHECK_THROWS_AS(parse_classifier("svm"), Error);
}
