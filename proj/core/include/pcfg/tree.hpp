#ifndef PCFG_TREE_HPP
#define PCFG_TREE_HPP

#include <string>
#include <utility>
#include <vector>

namespace pcfg {

/// A derivation tree. A nonterminal node records which alternative index it
/// expanded with; its children follow that alternative's symbols in order.
/// Terminal nodes are leaves carrying the matched literal.
struct DerivationTree {
  enum class Kind { Nonterminal, Terminal };

  Kind kind = Kind::Terminal;
  std::string name;  // nonterminal name, or terminal literal
  int alt = -1;
  std::vector<DerivationTree> children;

  static DerivationTree terminal(std::string literal) {
    DerivationTree t;
    t.kind = Kind::Terminal;
    t.name = std::move(literal);
    return t;
  }
  static DerivationTree nonterminal(std::string symbol, int alt,
                                    std::vector<DerivationTree> children) {
    DerivationTree t;
    t.kind = Kind::Nonterminal;
    t.name = std::move(symbol);
    t.alt = alt;
    t.children = std::move(children);
    return t;
  }
  bool is_terminal() const { return kind == Kind::Terminal; }
  bool operator==(const DerivationTree&) const = default;
};

// JSON schema: Terminal = {"t": <string>};
// Nonterminal = {"n": <name>, "alt": <int>, "c": [<child>...]}.
std::string tree_to_json(const DerivationTree& t);
DerivationTree json_to_tree(const std::string& text);

}  // namespace pcfg

#endif
