#include "doctest.h"
#include "fixtures.hpp"
#include "pcfg/counting.hpp"
#include "pcfg/grammar.hpp"
#include "pcfg/invert.hpp"

using namespace pcfg;
using fixtures::probs_close;
using fixtures::rule_probs;

namespace {

Grammar annotated(const std::string& rule_text) {
  return normalize_probabilities(parse_grammar(rule_text));
}

}  // namespace

TEST_CASE("unseen digits take the whole mass equally") {
  Grammar g = annotated(
      "Digit -> 0 \"0\" | 0.333333333333333 \"1\" | 0.333333333333333 \"2\" "
      "| 0.333333333333334 \"3\" | 0 \"4\" | 0 \"5\" | 0 \"6\" | 0 \"7\" "
      "| 0 \"8\" | 0 \"9\" ;");
  Grammar inv = invert(g);
  double s = 1.0 / 7;
  CHECK(probs_close(rule_probs(inv, "Digit"),
                    {s, 0, 0, 0, s, s, s, s, s, s}));
}

TEST_CASE("the learned arithmetic grammar inverts to the known complement") {
  Grammar learned = learn(parse_grammar(fixtures::kArithGrammar),
                          {fixtures::kSampleInput});
  Grammar inv = invert(learned);
  CHECK(probs_close(rule_probs(inv, "Expr"), {0, 0, 1}));
  CHECK(probs_close(rule_probs(inv, "Term"), {0, 0, 1}));
  CHECK(probs_close(rule_probs(inv, "Factor"), {0, 0.5, 0.5, 0}));
  CHECK(probs_close(rule_probs(inv, "Int"), {1, 0}));
  double s = 1.0 / 7;
  CHECK(probs_close(rule_probs(inv, "Digit"),
                    {s, 0, 0, 0, s, s, s, s, s, s}));
}

TEST_CASE("uniform rules are fixpoints") {
  Grammar g = annotated("A -> \"a\" | \"b\" | \"c\" ;");
  Grammar inv = invert(g);
  CHECK(probs_close(rule_probs(inv, "A"), {1.0 / 3, 1.0 / 3, 1.0 / 3}));
}

TEST_CASE("reciprocal weights normalize as expected") {
  // Weights (1, 3): reciprocals (1, 1/3), sum 4/3, normalized (3/4, 1/4).
  Grammar g = annotated("A -> 0.25 \"a\" | 0.75 \"b\" ;");
  Grammar inv = invert(g);
  CHECK(probs_close(rule_probs(inv, "A"), {0.75, 0.25}));
}

TEST_CASE("double inversion restores strictly positive rules") {
  Grammar g = annotated("A -> 0.1 \"a\" | 0.2 \"b\" | 0.3 \"c\" | 0.4 \"d\" ;");
  Grammar twice = invert(invert(g));
  CHECK(probs_close(rule_probs(twice, "A"), {0.1, 0.2, 0.3, 0.4}));
}

TEST_CASE("zero-swap: positive after inversion iff zero before (or none were)") {
  Grammar g = annotated("A -> 0.5 \"a\" | 0 \"b\" | 0.5 \"c\" | 0 \"d\" ;");
  Grammar inv = invert(g);
  auto before = rule_probs(g, "A");
  auto after = rule_probs(inv, "A");
  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK((after[i] > 0.0) == (before[i] == 0.0));
}

TEST_CASE("order reversal on all-positive rules") {
  Grammar g = annotated("A -> 0.1 \"a\" | 0.4 \"b\" | 0.2 \"c\" | 0.3 \"d\" ;");
  auto before = rule_probs(g, "A");
  auto after = rule_probs(invert(g), "A");
  for (std::size_t i = 0; i < before.size(); ++i)
    for (std::size_t j = 0; j < before.size(); ++j)
      if (before[i] < before[j]) CHECK(after[i] > after[j]);
}

TEST_CASE("inverted rules still sum to 1") {
  Grammar learned = learn(parse_grammar(fixtures::kArithGrammar),
                          {fixtures::kSampleInput, "7-(8/9)"});
  Grammar inv = invert(learned);
  for (const auto& r : inv.rules) {
    double sum = 0.0;
    for (const auto& a : r.alternatives) sum += a.probability.value();
    CHECK(fixtures::prob_close(sum, 1.0));
  }
}

TEST_CASE("inversion requires a normalized grammar") {
  Grammar g = parse_grammar("A -> 0.4 \"a\" | \"b\" ;");
  CHECK_THROWS_AS(invert(g), std::invalid_argument);
  Grammar bad = parse_grammar("A -> 0.4 \"a\" | 0.4 \"b\" ;");
  CHECK_THROWS_AS(invert(bad), std::invalid_argument);
}
