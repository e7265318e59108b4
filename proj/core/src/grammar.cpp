#include "pcfg/grammar.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

#include "pcfg/generate.hpp"

namespace pcfg {

namespace {

constexpr double kProbEps = 1e-9;

struct Token {
  enum class Kind { Ident, Number, String, Arrow, Pipe, Semi, Directive, End };
  Kind kind;
  std::string text;
  double number = 0.0;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_blank();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= text_.size()) {
      t.kind = Token::Kind::End;
      return t;
    }
    char c = text_[pos_];
    if (c == '|') {
      advance();
      t.kind = Token::Kind::Pipe;
      return t;
    }
    if (c == ';') {
      advance();
      t.kind = Token::Kind::Semi;
      return t;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      advance();
      advance();
      t.kind = Token::Kind::Arrow;
      return t;
    }
    if (c == '%') {
      advance();
      t.kind = Token::Kind::Directive;
      t.text = lex_ident_tail(t);
      if (t.text.empty()) fail(t, "expected directive name after '%'");
      return t;
    }
    if (c == '"') {
      t.kind = Token::Kind::String;
      t.text = lex_string(t);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      t.kind = Token::Kind::Number;
      t.number = lex_number(t);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Ident;
      t.text = lex_ident_tail(t);
      return t;
    }
    fail(t, std::string("unexpected character '") + c + "'");
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const Token& at, const std::string& msg) {
    throw GrammarError(at.line, at.column, msg);
  }

  std::string lex_ident_tail(const Token& at) {
    if (pos_ >= text_.size() ||
        !std::isalpha(static_cast<unsigned char>(text_[pos_])))
      return {};
    std::string out;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        out += c;
        advance();
      } else {
        break;
      }
    }
    (void)at;
    return out;
  }

  std::string lex_string(const Token& at) {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail(at, "unterminated string literal");
      char c = text_[pos_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) fail(at, "unterminated escape");
        char e = text_[pos_];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          default:
            fail(at, std::string("unknown escape '\\") + e + "'");
        }
        advance();
      } else {
        out += c;
        advance();
      }
    }
    if (out.empty()) fail(at, "terminal literal must not be empty");
    return out;
  }

  double lex_number(const Token& at) {
    std::string digits;
    bool seen_dot = false;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits += c;
        advance();
      } else if (c == '.' && !seen_dot) {
        seen_dot = true;
        digits += c;
        advance();
      } else {
        break;
      }
    }
    if (digits.empty() || digits == ".") fail(at, "malformed number");
    double v = std::stod(digits);
    if (v < 0.0 || v > 1.0 + kProbEps)
      fail(at, "probability " + digits + " outside [0, 1]");
    return v;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

double specified_sum(const Rule& r, int* specified, int* unspecified) {
  double sum = 0.0;
  int ns = 0, nu = 0;
  for (const auto& a : r.alternatives) {
    if (a.probability) {
      sum += *a.probability;
      ++ns;
    } else {
      ++nu;
    }
  }
  if (specified) *specified = ns;
  if (unspecified) *unspecified = nu;
  return sum;
}

}  // namespace

Grammar parse_grammar(const std::string& text) {
  Lexer lex(text);
  Grammar g;
  std::optional<std::string> start_override;
  Token t = lex.next();
  std::unordered_set<std::string> seen;

  while (t.kind != Token::Kind::End) {
    if (t.kind == Token::Kind::Directive) {
      if (t.text == "start") {
        Token name = lex.next();
        if (name.kind != Token::Kind::Ident)
          throw GrammarError(name.line, name.column,
                             "expected nonterminal after %start");
        start_override = name.text;
        Token semi = lex.next();
        if (semi.kind != Token::Kind::Semi)
          throw GrammarError(semi.line, semi.column, "expected ';'");
      } else if (t.text == "whitespace") {
        Token mode = lex.next();
        if (mode.kind != Token::Kind::Ident || mode.text != "skip")
          throw GrammarError(mode.line, mode.column,
                             "expected 'skip' after %whitespace");
        g.skip_whitespace = true;
        Token semi = lex.next();
        if (semi.kind != Token::Kind::Semi)
          throw GrammarError(semi.line, semi.column, "expected ';'");
      } else {
        throw GrammarError(t.line, t.column, "unknown directive %" + t.text);
      }
      t = lex.next();
      continue;
    }

    if (t.kind != Token::Kind::Ident)
      throw GrammarError(t.line, t.column, "expected rule name");
    Rule rule;
    rule.lhs = t.text;
    if (!seen.insert(rule.lhs).second)
      throw GrammarError(t.line, t.column,
                         "duplicate rule for nonterminal " + rule.lhs);
    Token arrow = lex.next();
    if (arrow.kind != Token::Kind::Arrow)
      throw GrammarError(arrow.line, arrow.column, "expected '->'");

    t = lex.next();
    Alternative alt;
    bool at_alt_start = true;
    double spec_sum = 0.0;
    auto flush_alt = [&] {
      rule.alternatives.push_back(std::move(alt));
      alt = Alternative{};
      at_alt_start = true;
    };
    while (true) {
      if (t.kind == Token::Kind::Number) {
        // A number is always a probability, and only legal at the start.
        if (!at_alt_start)
          throw GrammarError(t.line, t.column,
                             "probability must precede the symbols");
        alt.probability = t.number;
        spec_sum += t.number;
        at_alt_start = false;
      } else if (t.kind == Token::Kind::Ident) {
        alt.symbols.push_back(Symbol::nonterminal(t.text));
        at_alt_start = false;
      } else if (t.kind == Token::Kind::String) {
        alt.symbols.push_back(Symbol::terminal(t.text));
        at_alt_start = false;
      } else if (t.kind == Token::Kind::Pipe) {
        flush_alt();
      } else if (t.kind == Token::Kind::Semi) {
        flush_alt();
        break;
      } else {
        throw GrammarError(t.line, t.column, "unexpected token in rule body");
      }
      t = lex.next();
    }
    if (spec_sum > 1.0 + kProbEps)
      throw GrammarError(arrow.line, arrow.column,
                         "probabilities in rule " + rule.lhs +
                             " sum to more than 1");
    g.rules.push_back(std::move(rule));
    t = lex.next();
  }

  if (g.rules.empty()) throw GrammarError(1, 1, "grammar has no rules");
  g.start = start_override.value_or(g.rules.front().lhs);

  if (!g.find_rule(g.start))
    throw GrammarError(1, 1, "start symbol " + g.start + " has no rule");
  for (const auto& r : g.rules)
    for (const auto& a : r.alternatives)
      for (const auto& s : a.symbols)
        if (s.is_nonterminal() && !g.find_rule(s.text))
          throw GrammarError(1, 1, "undefined nonterminal " + s.text +
                                       " referenced from " + r.lhs);
  return g;
}

namespace {

std::string escape_literal(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string format_probability(double p) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", p);
  return buf;
}

}  // namespace

std::string serialize_grammar(const Grammar& g) {
  std::ostringstream out;
  if (g.skip_whitespace) out << "%whitespace skip ;\n";
  if (!g.rules.empty() && g.start != g.rules.front().lhs)
    out << "%start " << g.start << " ;\n";
  for (const auto& r : g.rules) {
    out << r.lhs << " ->";
    bool first = true;
    for (const auto& a : r.alternatives) {
      if (!first) out << " |";
      first = false;
      if (a.probability) out << ' ' << format_probability(*a.probability);
      for (const auto& s : a.symbols)
        out << ' '
            << (s.is_nonterminal() ? s.text : escape_literal(s.text));
    }
    out << " ;\n";
  }
  return out.str();
}

Grammar normalize_probabilities(const Grammar& g) {
  Grammar out = g;
  for (auto& r : out.rules) {
    int ns = 0, nu = 0;
    double sum = specified_sum(r, &ns, &nu);
    if (sum > 1.0 + kProbEps)
      throw std::invalid_argument("rule " + r.lhs +
                                  ": specified probabilities exceed 1");
    if (nu == 0) {
      if (std::fabs(sum - 1.0) > kProbEps)
        throw std::invalid_argument("rule " + r.lhs +
                                    ": probabilities sum to " +
                                    std::to_string(sum) + ", not 1");
      continue;
    }
    double share = (1.0 - sum) / nu;
    if (share < 0.0) share = 0.0;
    for (auto& a : r.alternatives)
      if (!a.probability) a.probability = share;
  }
  return out;
}

std::vector<Diagnostic> validate(const Grammar& g) {
  std::vector<Diagnostic> out;

  // Reachability from the start symbol.
  std::set<std::string> reachable;
  std::deque<std::string> work{g.start};
  reachable.insert(g.start);
  while (!work.empty()) {
    const Rule* r = g.find_rule(work.front());
    work.pop_front();
    if (!r) continue;
    for (const auto& a : r->alternatives)
      for (const auto& s : a.symbols)
        if (s.is_nonterminal() && reachable.insert(s.text).second)
          work.push_back(s.text);
  }
  for (const auto& r : g.rules)
    if (!reachable.count(r.lhs))
      out.push_back({Diagnostic::Severity::Warning, r.lhs,
                     "nonterminal " + r.lhs + " is unreachable from " +
                         g.start});

  for (const auto& name : non_productive_nonterminals(g))
    out.push_back({Diagnostic::Severity::Error, name,
                   "nonterminal " + name +
                       " is non-productive (derives no finite string)"});

  for (const auto& r : g.rules) {
    int ns = 0, nu = 0;
    double sum = specified_sum(r, &ns, &nu);
    if (sum > 1.0 + kProbEps)
      out.push_back({Diagnostic::Severity::Error, r.lhs,
                     "rule " + r.lhs + ": probabilities sum to more than 1"});
    else if (nu == 0 && !r.alternatives.empty() &&
             std::fabs(sum - 1.0) > kProbEps)
      out.push_back({Diagnostic::Severity::Error, r.lhs,
                     "rule " + r.lhs + ": probabilities sum to " +
                         std::to_string(sum) + ", not 1"});
  }
  return out;
}

}  // namespace pcfg
