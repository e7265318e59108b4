#include <algorithm>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "pcfg/analyze.hpp"
#include "pcfg/counting.hpp"
#include "pcfg/generate.hpp"
#include "pcfg/grammar.hpp"
#include "pcfg/invert.hpp"

using namespace pcfg;

namespace {

Grammar arith() { return parse_grammar(fixtures::kArithGrammar); }

std::vector<std::string> suite_texts(const Grammar& g, std::uint64_t seed,
                                     std::uint64_t count) {
  GeneratorConfig cfg{.max_expansions = 40, .seed = seed, .count = count};
  std::vector<std::string> out;
  for (auto& gi : generate_suite(g, cfg)) out.push_back(std::move(gi.text));
  return out;
}

}  // namespace

TEST_CASE("single-sample distribution matches the hand count") {
  Grammar g = arith();
  FrequencyDistribution d = suite_distribution(g, {fixtures::kSampleInput});
  REQUIRE(d.keys.size() == 22);  // 3 + 3 + 4 + 2 + 10 alternatives
  double sum = 0.0;
  for (double v : d.values) sum += v;
  CHECK(fixtures::prob_close(sum, 1.0));

  auto value_of = [&](const std::string& nt, int alt) {
    auto it = std::find(d.keys.begin(), d.keys.end(), ProductionKey{nt, alt});
    REQUIRE(it != d.keys.end());
    return d.values[static_cast<std::size_t>(it - d.keys.begin())];
  };
  // 17 expansions total in the sample's derivation tree.
  CHECK(fixtures::prob_close(value_of("Expr", 0), 2.0 / 17));
  CHECK(fixtures::prob_close(value_of("Expr", 1), 1.0 / 17));
  CHECK(fixtures::prob_close(value_of("Term", 0), 3.0 / 17));
  CHECK(fixtures::prob_close(value_of("Factor", 3), 1.0 / 17));
  CHECK(fixtures::prob_close(value_of("Int", 1), 3.0 / 17));
  CHECK(fixtures::prob_close(value_of("Digit", 1), 1.0 / 17));
  CHECK(fixtures::prob_close(value_of("Digit", 0), 0.0));
}

TEST_CASE("identical suites give identical distributions") {
  Grammar g = arith();
  std::vector<std::string> suite = {"1+2", "3*4", "(5)"};
  FrequencyDistribution a = suite_distribution(g, suite);
  FrequencyDistribution b = suite_distribution(g, suite);
  CHECK(a.values == b.values);
}

TEST_CASE("suite distribution is permutation-invariant") {
  Grammar g = arith();
  std::vector<std::string> suite = {"1+2", "3*4", "(5)", "-6/7"};
  FrequencyDistribution a = suite_distribution(g, suite);
  std::reverse(suite.begin(), suite.end());
  FrequencyDistribution b = suite_distribution(g, suite);
  CHECK(a.values == b.values);
}

TEST_CASE("empty suite is flagged as empty") {
  FrequencyDistribution d = suite_distribution(arith(), {});
  CHECK(d.empty());
  CHECK(!d.keys.empty());
}

TEST_CASE("ks statistic of a distribution against itself is tiny") {
  Grammar g = arith();
  FrequencyDistribution d = suite_distribution(g, {fixtures::kSampleInput});
  KSReport r = ks_compare(d, d, 1000, 7);
  CHECK(r.statistic <= 0.05);
  CHECK(r.bandwidth > 0.0);
  CHECK(r.bootstrap_samples == 1000);
}

TEST_CASE("well-separated value masses push the statistic toward 1") {
  FrequencyDistribution a, b;
  for (int i = 0; i < 10; ++i) a.keys.emplace_back("K", i);
  b.keys = a.keys;
  // a puts all mass on one key (nine zero frequencies), b spreads it evenly;
  // the true statistic between the two frequency samples is 0.9.
  a.values = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  b.values = {0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
  KSReport r = ks_compare(a, b, 1000, 3);
  CHECK(r.statistic > 0.5);
  CHECK(r.p_value < 0.01);
}

TEST_CASE("ks statistic is symmetric") {
  Grammar g = arith();
  FrequencyDistribution a = suite_distribution(g, {fixtures::kSampleInput});
  FrequencyDistribution b =
      suite_distribution(g, suite_texts(learn(g, {fixtures::kSampleInput}),
                                       11, 50));
  KSReport ab = ks_compare(a, b, 500, 9);
  KSReport ba = ks_compare(b, a, 500, 9);
  CHECK(ab.statistic == ba.statistic);
}

TEST_CASE("ks argument validation") {
  Grammar g = arith();
  FrequencyDistribution d = suite_distribution(g, {fixtures::kSampleInput});
  FrequencyDistribution empty = suite_distribution(g, {});
  CHECK_THROWS_AS(ks_compare(d, d, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(ks_compare(d, empty, 100, 0), std::invalid_argument);
}

TEST_CASE("probabilistic suite sits closer to the sample than the inverse") {
  Grammar g = arith();
  Grammar learned = learn(g, {fixtures::kSampleInput});
  Grammar inverse = invert(learned);
  FrequencyDistribution sample =
      suite_distribution(g, {fixtures::kSampleInput});
  FrequencyDistribution prob =
      suite_distribution(g, suite_texts(learned, 21, 100));
  FrequencyDistribution inv =
      suite_distribution(g, suite_texts(inverse, 21, 100));
  KSReport close = ks_compare(sample, prob, 1000, 5);
  KSReport far = ks_compare(sample, inv, 1000, 5);
  CHECK(close.statistic < far.statistic);
}

TEST_CASE("uncovered keys") {
  Grammar g = arith();
  FrequencyDistribution sample =
      suite_distribution(g, {fixtures::kSampleInput});

  SUBCASE("inverse suite exercises keys the sample never did") {
    Grammar inverse = invert(learn(g, {fixtures::kSampleInput}));
    FrequencyDistribution inv =
        suite_distribution(g, suite_texts(inverse, 8, 100));
    auto keys = uncovered_keys(sample, inv);
    CHECK(std::find(keys.begin(), keys.end(), ProductionKey{"Expr", 2}) !=
          keys.end());
    CHECK(std::find(keys.begin(), keys.end(), ProductionKey{"Digit", 0}) !=
          keys.end());
    CHECK(keys.size() >= 5);
  }
  SUBCASE("a distribution against itself uncovers nothing") {
    CHECK(uncovered_keys(sample, sample).empty());
  }
  SUBCASE("support inside the sample's uncovers nothing") {
    FrequencyDistribution narrow = suite_distribution(g, {"1"});
    CHECK(uncovered_keys(sample, narrow).empty());
  }
}
