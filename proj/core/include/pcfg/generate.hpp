#ifndef PCFG_GENERATE_HPP
#define PCFG_GENERATE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pcfg/grammar.hpp"
#include "pcfg/random.hpp"
#include "pcfg/tree.hpp"

namespace pcfg {

struct GeneratorConfig {
  std::uint64_t max_expansions = 200;
  std::uint64_t seed = 0;
  std::uint64_t count = 1;
};

/// Smallest number of expansions needed to derive a terminal-only tree from
/// each nonterminal, with the alternative indices achieving it.
struct MinCostEntry {
  std::uint64_t min_size = 0;
  std::vector<int> min_alts;
};
using MinCostTable = std::map<std::string, MinCostEntry>;

/// Fixpoint of cost(S) = 1 + min over alternatives of the sum of child
/// nonterminal costs (terminals cost 0). Throws std::runtime_error naming
/// the non-productive nonterminals if any cost stays infinite; this doubles
/// as the productivity check behind validate().
MinCostTable min_expansion_cost(const Grammar& g);

/// Nonterminals with no finite expansion cost, in rule order. Empty for a
/// well-formed grammar.
std::vector<std::string> non_productive_nonterminals(const Grammar& g);

struct GenerationStats {
  std::uint64_t phase1_expansions = 0;
  std::uint64_t phase2_expansions = 0;
  std::uint64_t total() const { return phase1_expansions + phase2_expansions; }
};

/// Two-phase bounded generation. Phase 1 expands open nonterminals in
/// breadth-first order, sampling alternatives by probability (never picking
/// p = 0), until the next expansion would exceed cfg.max_expansions. Phase 2
/// closes every remaining open nonterminal along shortest expansions,
/// choosing uniformly among the minimum-cost alternatives. Closure prefers
/// positive-probability alternatives whenever some positive-probability
/// expansion path terminates, and falls back to the unrestricted minimum
/// only where none does. Requires a normalized grammar.
DerivationTree generate_tree(const Grammar& g, const GeneratorConfig& cfg,
                             Xoshiro256& rng, GenerationStats* stats = nullptr);

struct GeneratedInput {
  DerivationTree tree;
  std::string text;
};

/// cfg.count trees, one independent RNG stream per index derived from
/// (seed, index); deterministic for fixed (g, cfg).
std::vector<GeneratedInput> generate_suite(const Grammar& g,
                                           const GeneratorConfig& cfg);

}  // namespace pcfg

#endif
