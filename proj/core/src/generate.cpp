#include "pcfg/generate.hpp"

#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "pcfg/earley.hpp"

namespace pcfg {

namespace {

constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  if (a == kInf || b == kInf) return kInf;
  return a + b;
}

struct CostModel {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<const Rule*> rules;
  std::vector<std::uint64_t> cost;  // unrestricted minimum

  explicit CostModel(const Grammar& g) {
    for (const auto& r : g.rules) {
      index.emplace(r.lhs, rules.size());
      rules.push_back(&r);
    }
    cost.assign(rules.size(), kInf);
    relax([](const Alternative&) { return true; }, cost);
  }

  std::uint64_t alt_cost(const Alternative& a,
                         const std::vector<std::uint64_t>& c) const {
    std::uint64_t sum = 1;
    for (const auto& s : a.symbols)
      if (s.is_nonterminal()) sum = sat_add(sum, c[index.at(s.text)]);
    return sum;
  }

  template <typename Pred>
  void relax(Pred use_alt, std::vector<std::uint64_t>& c) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < rules.size(); ++i) {
        std::uint64_t best = kInf;
        for (const auto& a : rules[i]->alternatives)
          if (use_alt(a)) {
            std::uint64_t v = alt_cost(a, c);
            if (v < best) best = v;
          }
        if (best < c[i]) {
          c[i] = best;
          changed = true;
        }
      }
    }
  }
};

bool positive_prob(const Alternative& a) {
  return a.probability && *a.probability > 0.0;
}

// Closure choice table: for each nonterminal, the alternatives to draw from
// in phase 2 and their completion cost. Restricted to positive-probability
// alternatives wherever those reach termination; unrestricted fallback
// otherwise.
struct ClosureModel {
  std::vector<std::uint64_t> cost;
  std::vector<std::vector<int>> alts;

  ClosureModel(const Grammar& g, const CostModel& base) {
    const std::size_t n = base.rules.size();
    cost.assign(n, kInf);
    // Interleave: a nonterminal's positive alternatives may rely on a
    // neighbor's fallback cost, so relax both views in one fixpoint.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t best = best_for(g, base, i, true);
        if (best == kInf) best = best_for(g, base, i, false);
        if (best < cost[i]) {
          cost[i] = best;
          changed = true;
        }
      }
    }
    alts.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      bool restricted = best_for(g, base, i, true) == cost[i];
      const auto& rule = *base.rules[i];
      for (std::size_t a = 0; a < rule.alternatives.size(); ++a) {
        const auto& alt = rule.alternatives[a];
        if (restricted && !positive_prob(alt)) continue;
        if (base.alt_cost(alt, cost) == cost[i])
          alts[i].push_back(static_cast<int>(a));
      }
    }
  }

  std::uint64_t best_for(const Grammar&, const CostModel& base, std::size_t i,
                         bool positive_only) const {
    std::uint64_t best = kInf;
    for (const auto& a : base.rules[i]->alternatives) {
      if (positive_only && !positive_prob(a)) continue;
      std::uint64_t v = base.alt_cost(a, cost);
      if (v < best) best = v;
    }
    return best;
  }
};

}  // namespace

std::vector<std::string> non_productive_nonterminals(const Grammar& g) {
  CostModel cm(g);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < cm.rules.size(); ++i)
    if (cm.cost[i] == kInf) out.push_back(cm.rules[i]->lhs);
  return out;
}

MinCostTable min_expansion_cost(const Grammar& g) {
  CostModel cm(g);
  std::string bad;
  for (std::size_t i = 0; i < cm.rules.size(); ++i)
    if (cm.cost[i] == kInf) bad += (bad.empty() ? "" : ", ") + cm.rules[i]->lhs;
  if (!bad.empty())
    throw std::runtime_error("non-productive nonterminals: " + bad);

  MinCostTable table;
  for (std::size_t i = 0; i < cm.rules.size(); ++i) {
    MinCostEntry e;
    e.min_size = cm.cost[i];
    const auto& rule = *cm.rules[i];
    for (std::size_t a = 0; a < rule.alternatives.size(); ++a)
      if (cm.alt_cost(rule.alternatives[a], cm.cost) == e.min_size)
        e.min_alts.push_back(static_cast<int>(a));
    table.emplace(rule.lhs, std::move(e));
  }
  return table;
}

namespace {

struct Node {
  bool terminal;
  std::string text;  // nonterminal name or literal
  int alt = -1;
  std::vector<int> children;
};

int sample_alternative(const Rule& r, Xoshiro256& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < r.alternatives.size(); ++i) {
    double p = *r.alternatives[i].probability;
    if (p <= 0.0) continue;
    last_positive = static_cast<int>(i);
    acc += p;
    if (u < acc) return last_positive;
  }
  if (last_positive < 0)
    throw std::runtime_error("rule " + r.lhs +
                             " has no positive-probability alternative");
  return last_positive;  // absorb rounding slack
}

}  // namespace

DerivationTree generate_tree(const Grammar& g, const GeneratorConfig& cfg,
                             Xoshiro256& rng, GenerationStats* stats) {
  if (cfg.max_expansions < 1)
    throw std::invalid_argument("max_expansions must be at least 1");
  for (const auto& r : g.rules)
    for (const auto& a : r.alternatives)
      if (!a.probability)
        throw std::invalid_argument("grammar is not normalized: rule " +
                                    r.lhs + " has unspecified probabilities");

  CostModel base(g);
  for (std::uint64_t c : base.cost)
    if (c == kInf)
      throw std::runtime_error("grammar has non-productive nonterminals");
  ClosureModel closure(g, base);

  std::vector<Node> arena;
  auto make_nt = [&](const std::string& name) {
    arena.push_back({false, name, -1, {}});
    return static_cast<int>(arena.size() - 1);
  };

  std::deque<int> open;
  open.push_back(make_nt(g.start));
  GenerationStats local;

  auto expand = [&](int node, int alt_index) {
    const Rule& r = *g.find_rule(arena[node].text);
    arena[node].alt = alt_index;
    std::vector<int> kids;
    for (const auto& s : r.alternatives[alt_index].symbols) {
      if (s.is_nonterminal()) {
        kids.push_back(make_nt(s.text));
      } else {
        arena.push_back({true, s.text, -1, {}});
        kids.push_back(static_cast<int>(arena.size() - 1));
      }
    }
    arena[node].children = kids;
    for (int k : kids)
      if (!arena[k].terminal) open.push_back(k);
  };

  // Phase 1: probabilistic, breadth-first, bounded by the threshold.
  while (!open.empty() && local.phase1_expansions < cfg.max_expansions) {
    int node = open.front();
    open.pop_front();
    const Rule& r = *g.find_rule(arena[node].text);
    expand(node, sample_alternative(r, rng));
    ++local.phase1_expansions;
  }

  // Phase 2: close every remaining open nonterminal along shortest
  // expansions, uniformly among the allowed minimum-cost alternatives.
  while (!open.empty()) {
    int node = open.front();
    open.pop_front();
    const auto& allowed = closure.alts[base.index.at(arena[node].text)];
    int alt_index = allowed[rng.below(allowed.size())];
    expand(node, alt_index);
    ++local.phase2_expansions;
  }

  if (stats) *stats = local;

  // Arena to value tree.
  auto build = [&](auto&& self, int idx) -> DerivationTree {
    const Node& n = arena[idx];
    if (n.terminal) return DerivationTree::terminal(n.text);
    std::vector<DerivationTree> children;
    children.reserve(n.children.size());
    for (int c : n.children) children.push_back(self(self, c));
    return DerivationTree::nonterminal(n.text, n.alt, std::move(children));
  };
  return build(build, 0);
}

std::vector<GeneratedInput> generate_suite(const Grammar& g,
                                           const GeneratorConfig& cfg) {
  std::vector<GeneratedInput> out;
  out.reserve(cfg.count);
  for (std::uint64_t i = 0; i < cfg.count; ++i) {
    Xoshiro256 rng = Xoshiro256::stream(cfg.seed, i);
    GeneratedInput gi;
    gi.tree = generate_tree(g, cfg, rng);
    gi.text = serialize_tree(gi.tree, g);
    out.push_back(std::move(gi));
  }
  return out;
}

}  // namespace pcfg
