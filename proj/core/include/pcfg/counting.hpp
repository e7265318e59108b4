#ifndef PCFG_COUNTING_HPP
#define PCFG_COUNTING_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pcfg/grammar.hpp"
#include "pcfg/tree.hpp"

namespace pcfg {

/// Per-rule expansion counts accumulated over a corpus of derivation trees.
/// Merging is associative and commutative.
struct CountTable {
  struct Entry {
    std::uint64_t total = 0;
    std::vector<std::uint64_t> alts;
    bool operator==(const Entry&) const = default;
  };
  std::map<std::string, Entry> by_rule;

  void merge(const CountTable& other);
  /// {"<Nonterminal>": {"total": n, "alts": [c0, c1, ...]}, ...}
  std::string to_json() const;
};

/// Counts, for every rule of `g`, how often each alternative index occurs as
/// an expansion across `trees`. Rules absent from all trees keep total 0.
/// Throws std::invalid_argument on a tree that does not fit `g`.
CountTable count_expansions(const std::vector<DerivationTree>& trees,
                            const Grammar& g);

/// Derives probabilities from counts: p_i = count_i / total where total > 0,
/// uniform 1/n where total = 0. Counts are retained on the result.
Grammar annotate_from_counts(const Grammar& g, const CountTable& counts);

/// Parses every corpus input under `g`, counts expansions, and returns the
/// probability-annotated grammar. Throws ParseError (with the corpus index
/// in the message) on the first unparsable input.
Grammar learn(const Grammar& g, const std::vector<std::string>& corpus);

}  // namespace pcfg

#endif
