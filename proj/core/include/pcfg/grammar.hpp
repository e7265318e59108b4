#ifndef PCFG_GRAMMAR_HPP
#define PCFG_GRAMMAR_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcfg {

enum class SymbolKind { Nonterminal, Terminal };

/// One symbol on a right-hand side: either a nonterminal reference or a
/// literal terminal string (matched byte-exactly, never empty).
struct Symbol {
  SymbolKind kind;
  std::string text;

  static Symbol nonterminal(std::string name) {
    return {SymbolKind::Nonterminal, std::move(name)};
  }
  static Symbol terminal(std::string literal) {
    return {SymbolKind::Terminal, std::move(literal)};
  }
  bool is_nonterminal() const { return kind == SymbolKind::Nonterminal; }
  bool operator==(const Symbol&) const = default;
};

/// One alternative of a rule. An empty symbol list is epsilon. `probability`
/// is absent until annotated; `count` carries the integer provenance of a
/// learned probability so exact-fraction assertions remain possible.
struct Alternative {
  std::vector<Symbol> symbols;
  std::optional<double> probability;
  std::optional<std::uint64_t> count;
};

struct Rule {
  std::string lhs;
  std::vector<Alternative> alternatives;
  std::optional<std::uint64_t> total;  // expansion total when learned
};

/// An ordered (probabilistic) context-free grammar. Alternative order is
/// stable: index i is the identity of an alternative throughout the system.
/// Immutable by convention after construction; all operations below return
/// new grammars.
struct Grammar {
  std::vector<Rule> rules;
  std::string start;
  bool skip_whitespace = false;

  const Rule* find_rule(const std::string& name) const {
    for (const auto& r : rules)
      if (r.lhs == name) return &r;
    return nullptr;
  }
};

/// Error from reading grammar text; position is 1-based.
class GrammarError : public std::runtime_error {
 public:
  GrammarError(int line, int column, const std::string& message)
      : std::runtime_error("grammar:" + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line(line),
        column(column) {}
  int line;
  int column;
};

struct Diagnostic {
  enum class Severity { Warning, Error };
  Severity severity;
  std::string subject;  // nonterminal concerned
  std::string message;
};

Grammar parse_grammar(const std::string& text);
std::string serialize_grammar(const Grammar& g);

/// Fills in unspecified probabilities: each gets an equal share of the
/// complement of the specified ones; a rule with none specified becomes
/// uniform. Idempotent.
Grammar normalize_probabilities(const Grammar& g);

/// Unreachable nonterminals (warning), non-productive nonterminals (error),
/// probability-sum violations (error).
std::vector<Diagnostic> validate(const Grammar& g);

}  // namespace pcfg

#endif
