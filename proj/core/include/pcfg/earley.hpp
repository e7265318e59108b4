#ifndef PCFG_EARLEY_HPP
#define PCFG_EARLEY_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcfg/grammar.hpp"
#include "pcfg/tree.hpp"

namespace pcfg {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, std::vector<std::string> expected,
             const std::string& message)
      : std::runtime_error(message),
        position(position),
        expected(std::move(expected)) {}
  std::size_t position;               // furthest failure offset
  std::vector<std::string> expected;  // terminal literals viable there
};

struct ParseResult {
  DerivationTree tree;
  // True when the input admitted more than one derivation and the canonical
  // one (smallest alternative index, then leftmost split) was chosen.
  bool ambiguous = false;
};

/// Scannerless Earley parse of `input` under `g`. Handles left recursion and
/// epsilon rules. Deterministic: identical (grammar, input) pairs yield
/// identical trees.
ParseResult parse_input(const Grammar& g, const std::string& input);

/// Left-to-right terminal frontier of `t`, validated against `g`. When
/// whitespace skipping is on, a single space separates two terminals whose
/// adjacent characters are both identifier characters, so the rendered text
/// re-parses without token fusion.
std::string serialize_tree(const DerivationTree& t, const Grammar& g);

}  // namespace pcfg

#endif
