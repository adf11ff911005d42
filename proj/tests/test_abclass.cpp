#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "abmil/abclass.hpp"
#include "abmil/eval.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace abmil;

namespace {

constexpr Label P = Label::Positive;
constexpr Label N = Label::Negative;

ABClassConfig knn1(const char* setting) {
  return {setting_params(setting), {ClassifierKind::Knn, 1}, 2};
}

// 1-NN on all-2-mer features, computed without the library pipeline.
Label s4_knn1_oracle(const std::vector<std::pair<std::string, Label>>& train, const std::string& q) {
  std::set<std::string> features;
  for (const auto& [s, l] : train)
    for (std::size_t i = 0; i + 2 <= s.size(); ++i) features.insert(s.substr(i, 2));
  std::size_t best = SIZE_MAX;
  Label out = N;
  for (const auto& [s, l] : train) {  // train is in bag-id order
    std::size_t d = 0;
    for (const auto& f : features) d += oracle::contains(s, f) != oracle::contains(q, f);
    if (d < best) {
      best = d;
      out = l;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("running example with S1 and 1-NN") {
  const auto r = abclass_predict(testing::running_example(), testing::running_query(), knn1("S1"));
  REQUIRE(r.pv.entries.size() == 2);
  CHECK(r.pv.skipped.empty());
  CHECK(r.pv.entries.at("1") == Prediction{P, 1.0});
  CHECK(r.pv.entries.at("2") == Prediction{P, 1.0});
  CHECK(r.label == P);
}

TEST_CASE("single-instance query follows its only prediction") {
  Bag q{"Q", std::nullopt, {{"2", "EFXYGHN"}}};
  const auto r = abclass_predict(testing::running_example(), q, knn1("S1"));
  REQUIRE(r.pv.entries.size() == 1);
  CHECK(r.label == r.pv.entries.begin()->second.label);
}

TEST_CASE("query keys without a relation group are skipped") {
  Bag q{"Q", std::nullopt, {{"1", "ABWXCD"}, {"zzz", "ABAB"}}};
  const auto r = abclass_predict(testing::running_example(), q, knn1("S1"));
  CHECK(r.pv.entries.count("1") == 1);
  CHECK(r.pv.skipped.count("zzz") == 1);
  CHECK(r.label == P);

  Bag none{"Q", std::nullopt, {{"zzz", "ABAB"}}};
  CHECK_THROWS_AS(abclass_predict(testing::running_example(), none, knn1("S1")), DataError);
}

TEST_CASE("groups below the minimum size are skipped") {
  auto cfg = knn1("S1");
  cfg.min_group_size = 5;
  CHECK_THROWS_AS(abclass_predict(testing::running_example(), testing::running_query(), cfg), DataError);
  cfg.min_group_size = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("single-class learning database is rejected") {
  std::vector<Bag> bags = testing::running_example().bags();
  bags.resize(2);
  CHECK_THROWS_AS(abclass_predict(Dataset(bags), testing::running_query(), knn1("S1")), DataError);
}

TEST_CASE("successful model rate, hold out B1 with S4 and 1-NN") {
  const auto full = testing::running_example();
  const auto db = full.without(0);
  const Bag& b1 = full.bags()[0];

  double hits = 0;
  for (const char* key : {"1", "2"}) {
    std::vector<std::pair<std::string, Label>> train;
    for (const auto& b : db.bags()) train.emplace_back(b.instances.at(key), *b.label);
    hits += s4_knn1_oracle(train, b1.instances.at(key)) == P;
  }
  const double expected = hits / 2.0;
  CHECK(expected == 0.5);
  CHECK(successful_model_rate(db, b1, knn1("S4")) == expected);
}

TEST_CASE("successful model rate extremes") {
  const auto db = gen_synthetic({8, 4, 40, 6, 0.0, 3});
  const auto train = db.without(0);
  Bag held = db.bags()[0];
  CHECK(successful_model_rate(train, held, knn1("S1")) == 1.0);
  held.label = flip(*held.label);
  CHECK(successful_model_rate(train, held, knn1("S1")) == 0.0);
  held.label.reset();
  CHECK_THROWS_AS(successful_model_rate(train, held, knn1("S1")), DataError);
}

TEST_CASE("majority aggregation tie rules") {
  PredictionVector pv;
  pv.entries = {{"a", {P, 0.9}}, {"b", {N, 0.6}}, {"c", {N, 0.6}}};
  CHECK(aggregate_majority(pv) == N);
  pv.entries = {{"a", {P, 0.9}}, {"b", {N, 0.6}}};
  CHECK(aggregate_majority(pv) == P);
  pv.entries = {{"a", {P, 0.6}}, {"b", {N, 0.9}}};
  CHECK(aggregate_majority(pv) == N);
  pv.entries = {{"a", {P, 0.7}}, {"b", {N, 0.7}}};
  CHECK(aggregate_majority(pv) == N);
  pv.entries.clear();
  CHECK_THROWS_AS(aggregate_majority(pv), DataError);
}

TEST_CASE("bag order, thread count and aggregation independence") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto db = gen_synthetic({9, 5, 40, 5, 0.3, static_cast<std::uint64_t>(100 + trial)});
    const auto train = db.without(0);
    const Bag& q = db.bags()[0];
    for (auto kind : {ClassifierKind::Knn, ClassifierKind::NaiveBayes, ClassifierKind::DecisionTree}) {
      const ABClassConfig cfg{{0.5, 0.5, 2, std::nullopt}, {kind, 3}, 2};
      const auto base = abclass_predict(train, q, cfg);
      CHECK(base.label == aggregate_majority(base.pv));

      std::vector<Bag> shuffled = train.bags();
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      const auto perm = abclass_predict(Dataset(shuffled, train.alphabet()), q, cfg, 4);
      CHECK(perm.label == base.label);
      CHECK(perm.pv.entries == base.pv.entries);
      CHECK(perm.pv.skipped == base.pv.skipped);
    }
  }
}
