#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "abmil/motif.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace abmil;

namespace {

using Motifs = std::vector<std::string>;

RelationGroup group_of(const std::string& key) {
  return relation_group(testing::running_example(), key);
}

const auto kLabels = label_map(testing::running_example());

std::vector<oracle::LabeledSeq> as_oracle_input(const RelationGroup& g,
                                                const std::map<BagId, Label>& labels) {
  std::vector<oracle::LabeledSeq> out;
  for (const auto& [bag, seq] : g.members) out.push_back({seq, labels.at(bag) == Label::Positive});
  return out;
}

// Does w meet the (alpha, beta) test? Counted independently of the miner.
bool qualifies(const std::vector<oracle::LabeledSeq>& data, const std::string& w, double alpha,
               double beta) {
  std::size_t cp = 0, cn = 0, np = 0, nn = 0;
  for (const auto& d : data) {
    (d.positive ? np : nn)++;
    if (oracle::contains(d.seq, w)) (d.positive ? cp : cn)++;
  }
  auto rate = [](std::size_t c, std::size_t n) { return n ? double(c) / double(n) : 0.0; };
  return (rate(cp, np) >= alpha && rate(cn, nn) <= beta) ||
         (rate(cn, nn) >= alpha && rate(cp, np) <= beta);
}

}  // namespace

TEST_CASE("first relation group, alpha=1 beta=0.5") {
  const auto m = extract_motifs(group_of("1"), kLabels, {1.0, 0.5, 2, std::nullopt});
  CHECK(m.motifs == Motifs{"AB", "CD", "YZ"});
  CHECK(m.source_key == "1");
}

TEST_CASE("second relation group, alpha=1 beta=0.5") {
  const auto g = group_of("2");
  const auto m = extract_motifs(g, kLabels, {1.0, 0.5, 2, std::nullopt});
  const auto expected = oracle::motifs(as_oracle_input(g, kLabels), 1.0, 0.5, 2, 100);
  CHECK(expected == Motifs{"EF", "GH"});
  CHECK(m.motifs == expected);
}

TEST_CASE("vacuous thresholds keep every length-2 substring") {
  const auto g = group_of("1");
  const auto m = extract_motifs(g, kLabels, {0.0, 1.0, 2, std::nullopt});
  std::set<std::string> twos;
  for (const auto& [bag, seq] : g.members)
    for (std::size_t i = 0; i + 2 <= seq.size(); ++i) twos.insert(seq.substr(i, 2));
  CHECK(m.motifs == Motifs(twos.begin(), twos.end()));
}

TEST_CASE("named settings") {
  CHECK(setting_params("S1") == MotifParams{1.0, 0.5, 2, std::nullopt});
  CHECK(setting_params("S2") == MotifParams{1.0, 1.0, 2, std::nullopt});
  CHECK(setting_params("S3") == MotifParams{0.5, 1.0, 2, std::nullopt});
  CHECK(setting_params("S4") == MotifParams{0.0, 1.0, 2, std::nullopt});
  CHECK(setting_params("S5") == MotifParams{1.0, 0.0, 2, std::nullopt});
  CHECK_THROWS_AS(setting_params("S9"), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(MotifParams({1.5, 0.5, 2, std::nullopt}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(MotifParams({1.0, -0.1, 2, std::nullopt}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(MotifParams({1.0, 0.5, 0, std::nullopt}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(MotifParams({1.0, 0.5, 3, 2}).validate(), std::invalid_argument);
}

TEST_CASE("union of motif sets") {
  MotifSet a{{"AB", "CD", "YZ"}, {}, "1"}, b{{"EF", "GH"}, {}, "2"}, empty{{}, {}, "3"};
  const auto u = union_motifs({a, b});
  CHECK(u.motifs == Motifs{"AB", "CD", "YZ", "EF", "GH"});
  CHECK(u.source_key == "union");
  CHECK(union_motifs({a, a}).motifs == a.motifs);
  CHECK(union_motifs({a, empty}).motifs == a.motifs);
  CHECK_THROWS_AS(union_motifs({}), std::invalid_argument);
}

TEST_CASE("single-class groups") {
  RelationGroup g{"k", {{"B1", "ABMSCD"}, {"B2", "EABZQCD"}}};
  CHECK_THROWS_WITH_AS(extract_motifs(g, kLabels, {1.0, 0.5, 2, std::nullopt}),
                       doctest::Contains("cannot discriminate"), DataError);
  // Frequent-motif mode: the absent class has a vacuous rate of zero.
  const auto m = extract_motifs(g, kLabels, {1.0, 1.0, 2, std::nullopt});
  CHECK(m.motifs == Motifs{"AB", "CD"});
}

TEST_CASE("unlabeled members are rejected") {
  RelationGroup g{"k", {{"B1", "ABMSCD"}, {"Q", "ABWXCD"}}};
  CHECK_THROWS_AS(extract_motifs(g, kLabels, {1.0, 1.0, 2, std::nullopt}), DataError);
}

TEST_CASE("length bounds") {
  const auto g = group_of("1");
  const auto m = extract_motifs(g, kLabels, {1.0, 0.0, 2, 3});
  for (const auto& w : m.motifs) CHECK(w.size() <= 3);
  const auto ones = extract_motifs(g, kLabels, {1.0, 0.5, 1, std::nullopt});
  CHECK(ones.motifs ==
        oracle::motifs(as_oracle_input(g, kLabels), 1.0, 0.5, 1, 100));
}

TEST_CASE("dump round trip") {
  MotifSet a{{"AB", "CD", "YZ"}, {}, "1"};
  std::stringstream s;
  write_motifs(s, a);
  CHECK(s.str() == "AB\nCD\nYZ\n");
  CHECK(read_motifs(s).motifs == a.motifs);
}

TEST_CASE("miner agrees with exhaustive enumeration on random groups") {
  std::mt19937 rng(2024);
  const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  int mismatches = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::string symbols = trial % 3 == 0 ? "AB" : (trial % 3 == 1 ? "ACGT" : "ABCDEFG");
    RelationGroup g{"k", {}};
    std::map<BagId, Label> labels;
    const int n = 2 + static_cast<int>(rng() % 5);
    std::size_t total = 0;
    for (int i = 0; i < n; ++i) {
      const std::size_t len = 1 + rng() % std::max<std::size_t>(1, (60 - total) / (n - i));
      total += len;
      const auto id = "b" + std::to_string(i);
      g.members.emplace(id, oracle::random_string(rng, symbols, len));
      labels.emplace(id, i % 2 == 0 ? Label::Positive : Label::Negative);
    }
    REQUIRE(total <= 60);
    const MotifParams p{grid[rng() % 5], grid[rng() % 5], 1 + rng() % 3,
                        rng() % 2 ? std::optional<std::size_t>{} : std::optional<std::size_t>{4 + rng() % 4}};
    const auto got = extract_motifs(g, labels, p).motifs;
    const auto want = oracle::motifs(as_oracle_input(g, labels), p.alpha, p.beta, p.min_len,
                                     p.max_len.value_or(1000));
    if (got != want) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("motif invariants on random groups") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    RelationGroup g{"k", {}};
    std::map<BagId, Label> labels;
    for (int i = 0; i < 6; ++i) {
      const auto id = "b" + std::to_string(i);
      g.members.emplace(id, oracle::random_string(rng, "ACGT", 4 + rng() % 8));
      labels.emplace(id, i < 3 ? Label::Positive : Label::Negative);
    }
    const auto data = as_oracle_input(g, labels);
    const MotifParams loose{0.5, 0.5, 2, std::nullopt};
    const MotifParams strict{1.0, 0.0, 2, std::nullopt};
    const auto ml = extract_motifs(g, labels, loose);
    const auto ms = extract_motifs(g, labels, strict);

    for (const auto& set : {ml, ms}) {
      CHECK(std::is_sorted(set.motifs.begin(), set.motifs.end(), canonical_less));
      CHECK(std::adjacent_find(set.motifs.begin(), set.motifs.end()) == set.motifs.end());
      for (const auto& w : set.motifs) {
        bool occurs = false;
        for (const auto& d : data) occurs = occurs || oracle::contains(d.seq, w);
        CHECK(occurs);
        CHECK(qualifies(data, w, set.params.alpha, set.params.beta));
        for (std::size_t i = 0; i < w.size(); ++i)
          for (std::size_t l = 2; i + l <= w.size(); ++l)
            if (l < w.size()) CHECK_FALSE(qualifies(data, w.substr(i, l), set.params.alpha, set.params.beta));
      }
    }
    // Stricter thresholds only keep strings that also pass the looser test.
    for (const auto& w : ms.motifs) CHECK(qualifies(data, w, loose.alpha, loose.beta));
    CHECK(extract_motifs(g, labels, loose) == ml);
  }
}
