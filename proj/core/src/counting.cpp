#include "pcfg/counting.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pcfg/earley.hpp"

namespace pcfg {

void CountTable::merge(const CountTable& other) {
  for (const auto& [name, entry] : other.by_rule) {
    auto& mine = by_rule[name];
    if (mine.alts.size() < entry.alts.size()) mine.alts.resize(entry.alts.size());
    mine.total += entry.total;
    for (std::size_t i = 0; i < entry.alts.size(); ++i)
      mine.alts[i] += entry.alts[i];
  }
}

std::string CountTable::to_json() const {
  nlohmann::ordered_json out;
  for (const auto& [name, entry] : by_rule) {
    out[name] = {{"total", entry.total}, {"alts", entry.alts}};
  }
  return out.dump(2);
}

namespace {

void count_node(const DerivationTree& t, const Grammar& g, CountTable& table) {
  if (t.is_terminal()) return;
  const Rule* r = g.find_rule(t.name);
  if (!r)
    throw std::invalid_argument("tree references unknown nonterminal " +
                                t.name);
  if (t.alt < 0 || t.alt >= static_cast<int>(r->alternatives.size()))
    throw std::invalid_argument("tree node " + t.name +
                                ": alternative index out of range");
  if (r->alternatives[t.alt].symbols.size() != t.children.size())
    throw std::invalid_argument("tree node " + t.name +
                                ": child count does not match alternative");
  auto& entry = table.by_rule[t.name];
  ++entry.total;
  ++entry.alts[t.alt];
  for (const auto& c : t.children) count_node(c, g, table);
}

}  // namespace

CountTable count_expansions(const std::vector<DerivationTree>& trees,
                            const Grammar& g) {
  CountTable table;
  for (const auto& r : g.rules)
    table.by_rule[r.lhs].alts.assign(r.alternatives.size(), 0);
  for (const auto& t : trees) count_node(t, g, table);
  return table;
}

Grammar annotate_from_counts(const Grammar& g, const CountTable& counts) {
  Grammar out = g;
  for (auto& r : out.rules) {
    auto it = counts.by_rule.find(r.lhs);
    std::uint64_t total = it != counts.by_rule.end() ? it->second.total : 0;
    r.total = total;
    for (std::size_t i = 0; i < r.alternatives.size(); ++i) {
      auto& a = r.alternatives[i];
      if (total == 0) {
        // Rule never exercised: uniform fallback, no count provenance.
        a.probability = 1.0 / static_cast<double>(r.alternatives.size());
        a.count = 0;
      } else {
        std::uint64_t c =
            i < it->second.alts.size() ? it->second.alts[i] : 0;
        a.count = c;
        a.probability = static_cast<double>(c) / static_cast<double>(total);
      }
    }
  }
  return out;
}

Grammar learn(const Grammar& g, const std::vector<std::string>& corpus) {
  std::vector<DerivationTree> trees;
  trees.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      trees.push_back(parse_input(g, corpus[i]).tree);
    } catch (const ParseError& e) {
      throw ParseError(e.position, e.expected,
                       "corpus input " + std::to_string(i) + ": " + e.what());
    }
  }
  return annotate_from_counts(g, count_expansions(trees, g));
}

}  // namespace pcfg
