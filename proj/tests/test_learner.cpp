#include <algorithm>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "pcfg/counting.hpp"
#include "pcfg/earley.hpp"
#include "pcfg/grammar.hpp"

using namespace pcfg;
using fixtures::probs_close;
using fixtures::rule_probs;

namespace {

Grammar arith() { return parse_grammar(fixtures::kArithGrammar); }

}  // namespace

TEST_CASE("expansion counts of the sample tree") {
  Grammar g = arith();
  DerivationTree t = parse_input(g, fixtures::kSampleInput).tree;
  CountTable counts = count_expansions({t}, g);

  const auto& expr = counts.by_rule.at("Expr");
  CHECK(expr.total == 3);
  CHECK(expr.alts == std::vector<std::uint64_t>{2, 1, 0});

  const auto& term = counts.by_rule.at("Term");
  CHECK(term.total == 4);
  CHECK(term.alts == std::vector<std::uint64_t>{3, 1, 0});

  const auto& factor = counts.by_rule.at("Factor");
  CHECK(factor.total == 4);
  CHECK(factor.alts == std::vector<std::uint64_t>{3, 0, 0, 1});

  const auto& digit = counts.by_rule.at("Digit");
  CHECK(digit.total == 3);
  CHECK(digit.alts == std::vector<std::uint64_t>{0, 1, 1, 1, 0, 0, 0, 0, 0, 0});
}

TEST_CASE("empty tree list leaves all totals at zero") {
  Grammar g = arith();
  CountTable counts = count_expansions({}, g);
  for (const auto& [name, entry] : counts.by_rule) CHECK(entry.total == 0);
}

TEST_CASE("counting is additive") {
  Grammar g = arith();
  DerivationTree t = parse_input(g, fixtures::kSampleInput).tree;
  CountTable once = count_expansions({t}, g);
  CountTable twice = count_expansions({t, t}, g);
  for (const auto& [name, entry] : once.by_rule) {
    CHECK(twice.by_rule.at(name).total == 2 * entry.total);
    for (std::size_t i = 0; i < entry.alts.size(); ++i)
      CHECK(twice.by_rule.at(name).alts[i] == 2 * entry.alts[i]);
  }
}

TEST_CASE("count table merge is commutative") {
  Grammar g = arith();
  CountTable a = count_expansions({parse_input(g, "1+2").tree}, g);
  CountTable b = count_expansions({parse_input(g, "3*4").tree}, g);
  CountTable ab = a;
  ab.merge(b);
  CountTable ba = b;
  ba.merge(a);
  CHECK(ab.by_rule == ba.by_rule);
}

TEST_CASE("counting rejects trees that do not fit the grammar") {
  Grammar g = arith();
  DerivationTree bad =
      DerivationTree::nonterminal("Expr", 7, {DerivationTree::terminal("x")});
  CHECK_THROWS_AS(count_expansions({bad}, g), std::invalid_argument);
}

TEST_CASE("learning from the single sample reproduces the known grammar") {
  Grammar learned = learn(arith(), {fixtures::kSampleInput});
  CHECK(probs_close(rule_probs(learned, "Expr"), {2.0 / 3, 1.0 / 3, 0}));
  CHECK(probs_close(rule_probs(learned, "Term"), {0.75, 0.25, 0}));
  CHECK(probs_close(rule_probs(learned, "Factor"), {0.75, 0, 0, 0.25}));
  CHECK(probs_close(rule_probs(learned, "Int"), {0, 1}));
  CHECK(probs_close(rule_probs(learned, "Digit"),
                    {0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 0, 0, 0, 0, 0}));

  // Exact rational provenance, not just floats.
  const Rule* digit = learned.find_rule("Digit");
  CHECK(digit->total == 3);
  CHECK(digit->alternatives[1].count == 1);
  CHECK(digit->alternatives[0].count == 0);
}

TEST_CASE("empty corpus learns the uniform grammar") {
  Grammar learned = learn(arith(), {});
  for (double p : rule_probs(learned, "Digit"))
    CHECK(fixtures::prob_close(p, 0.1));
  for (double p : rule_probs(learned, "Int"))
    CHECK(fixtures::prob_close(p, 0.5));
}

TEST_CASE("learning from two inputs") {
  Grammar learned = learn(arith(), {"1", "2+3"});
  CHECK(probs_close(rule_probs(learned, "Expr"), {2.0 / 3, 1.0 / 3, 0}));
  CHECK(probs_close(rule_probs(learned, "Digit"),
                    {0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 0, 0, 0, 0, 0}));
}

TEST_CASE("learning is corpus-order independent") {
  std::vector<std::string> corpus = {"1", "2+3", "(4*5)", "-6"};
  Grammar a = learn(arith(), corpus);
  std::reverse(corpus.begin(), corpus.end());
  Grammar b = learn(arith(), corpus);
  for (const auto& r : a.rules)
    CHECK(probs_close(rule_probs(a, r.lhs), rule_probs(b, r.lhs)));
}

TEST_CASE("unparsable corpus input aborts learning") {
  CHECK_THROWS_AS(learn(arith(), {"1", "this is not arithmetic"}), ParseError);
}

TEST_CASE("learned grammar round-trips through serialization") {
  Grammar learned = learn(arith(), {fixtures::kSampleInput, "42*(1-7)"});
  Grammar back = parse_grammar(serialize_grammar(learned));
  for (const auto& r : learned.rules)
    CHECK(probs_close(rule_probs(learned, r.lhs), rule_probs(back, r.lhs)));
}

TEST_CASE("counts report is well-formed JSON") {
  Grammar g = arith();
  CountTable counts =
      count_expansions({parse_input(g, fixtures::kSampleInput).tree}, g);
  std::string json = counts.to_json();
  CHECK(json.find("\"Expr\"") != std::string::npos);
  CHECK(json.find("\"total\": 3") != std::string::npos);
}
