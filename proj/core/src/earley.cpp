#include "pcfg/earley.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace pcfg {

namespace {

bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

// Grammar compiled to integer ids with alternatives flattened globally.
struct Compiled {
  struct Sym {
    int nt = -1;  // >= 0 for nonterminals
    std::string lit;
    bool is_nt() const { return nt >= 0; }
  };
  struct Alt {
    int lhs;
    int alt_index;
    std::vector<Sym> syms;
  };

  std::vector<std::string> nt_names;
  std::unordered_map<std::string, int> nt_ids;
  std::vector<Alt> alts;
  std::vector<std::vector<int>> alts_of;
  std::vector<char> nullable;
  int start = 0;
  bool skip_ws = false;

  explicit Compiled(const Grammar& g) : skip_ws(g.skip_whitespace) {
    for (const auto& r : g.rules) {
      nt_ids.emplace(r.lhs, static_cast<int>(nt_names.size()));
      nt_names.push_back(r.lhs);
    }
    alts_of.resize(nt_names.size());
    for (const auto& r : g.rules) {
      int lhs = nt_ids.at(r.lhs);
      for (std::size_t i = 0; i < r.alternatives.size(); ++i) {
        Alt a;
        a.lhs = lhs;
        a.alt_index = static_cast<int>(i);
        for (const auto& s : r.alternatives[i].symbols) {
          Sym cs;
          if (s.is_nonterminal()) {
            auto it = nt_ids.find(s.text);
            if (it == nt_ids.end())
              throw std::invalid_argument("undefined nonterminal " + s.text);
            cs.nt = it->second;
          } else {
            cs.lit = s.text;
          }
          a.syms.push_back(std::move(cs));
        }
        alts_of[lhs].push_back(static_cast<int>(alts.size()));
        alts.push_back(std::move(a));
      }
    }
    start = nt_ids.at(g.start);
    compute_nullable();
  }

  void compute_nullable() {
    nullable.assign(nt_names.size(), 0);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& a : alts) {
        if (nullable[a.lhs]) continue;
        bool all = true;
        for (const auto& s : a.syms)
          if (!s.is_nt() || !nullable[s.nt]) {
            all = false;
            break;
          }
        if (all) {
          nullable[a.lhs] = 1;
          changed = true;
        }
      }
    }
  }
};

struct Item {
  int alt;
  int dot;
  std::size_t origin;
  bool operator==(const Item&) const = default;
};

std::uint64_t item_key(const Item& it) {
  return (static_cast<std::uint64_t>(it.alt) << 40) ^
         (static_cast<std::uint64_t>(it.dot) << 32) ^ it.origin;
}

struct StateSet {
  std::vector<Item> items;
  std::unordered_set<std::uint64_t> seen;
  bool add(const Item& it) {
    if (!seen.insert(item_key(it)).second) return false;
    items.push_back(it);
    return true;
  }
};

class Parser {
 public:
  Parser(const Compiled& cg, const std::string& input)
      : cg_(cg), input_(input) {}

  ParseResult run() {
    recognize();
    std::size_t end = accepting_end();
    ParseResult res;
    res.tree = build_nt(cg_.start, 0, end);
    res.ambiguous = ambiguous_;
    return res;
  }

 private:
  std::size_t skip(std::size_t p) const {
    if (!cg_.skip_ws) return p;
    while (p < input_.size() && is_ws(input_[p])) ++p;
    return p;
  }

  // End position of a terminal literal matched at p, if it matches.
  std::optional<std::size_t> term_end(std::size_t p,
                                      const std::string& lit) const {
    std::size_t j = skip(p);
    if (input_.compare(j, lit.size(), lit) == 0) return j + lit.size();
    return std::nullopt;
  }

  void note_failure(std::size_t at, const std::string& expected) {
    if (fail_pos_ == static_cast<std::size_t>(-1) || at > fail_pos_) {
      fail_pos_ = at;
      fail_expected_.clear();
    }
    if (at == fail_pos_) fail_expected_.insert(expected);
  }

  void recognize() {
    for (int a : cg_.alts_of[cg_.start]) charts_[0].add({a, 0, 0});
    // Positions are byte offsets; scans only ever create later sets, so a
    // single forward sweep over the (sorted) map suffices.
    for (auto it = charts_.begin(); it != charts_.end(); ++it) {
      std::size_t pos = it->first;
      StateSet& set = it->second;
      for (std::size_t i = 0; i < set.items.size(); ++i) {
        Item item = set.items[i];
        const auto& alt = cg_.alts[item.alt];
        if (item.dot < static_cast<int>(alt.syms.size())) {
          const auto& sym = alt.syms[item.dot];
          if (sym.is_nt()) {
            for (int a : cg_.alts_of[sym.nt]) set.add({a, 0, pos});
            // Nullable prediction advances the dot immediately, which keeps
            // empty completions order-independent (Aycock & Horspool).
            if (cg_.nullable[sym.nt])
              set.add({item.alt, item.dot + 1, item.origin});
          } else {
            if (auto e = term_end(pos, sym.lit)) {
              charts_[*e].add({item.alt, item.dot + 1, item.origin});
            } else {
              note_failure(skip(pos), sym.lit);
            }
          }
        } else {
          // Complete. Empty spans are already handled at prediction time.
          if (pos == item.origin) continue;
          record_completed(alt.lhs, item.origin, pos, alt.alt_index);
          const StateSet& from = charts_.at(item.origin);
          for (const Item& parent : from.items) {
            const auto& palt = cg_.alts[parent.alt];
            if (parent.dot < static_cast<int>(palt.syms.size()) &&
                palt.syms[parent.dot].is_nt() &&
                palt.syms[parent.dot].nt == alt.lhs)
              set.add({parent.alt, parent.dot + 1, parent.origin});
          }
        }
      }
    }
  }

  static std::uint64_t span_key(int nt, std::size_t origin) {
    return (static_cast<std::uint64_t>(nt) << 40) ^ origin;
  }

  void record_completed(int nt, std::size_t origin, std::size_t end,
                        int alt_index) {
    auto& alts = completed_[span_key(nt, origin)][end];
    if (std::find(alts.begin(), alts.end(), alt_index) == alts.end()) {
      alts.push_back(alt_index);
      std::sort(alts.begin(), alts.end());
    }
  }

  std::size_t accepting_end() {
    auto it = completed_.find(span_key(cg_.start, 0));
    if (it != completed_.end())
      for (const auto& [end, alts] : it->second)
        if (skip(end) == input_.size()) return end;
    if (cg_.nullable[cg_.start] && skip(0) == input_.size()) return 0;
    report_failure();
  }

  [[noreturn]] void report_failure() {
    std::size_t pos = fail_pos_;
    std::vector<std::string> expected(fail_expected_.begin(),
                                      fail_expected_.end());
    if (fail_pos_ == static_cast<std::size_t>(-1)) {
      pos = input_.size();
      expected.clear();
    }
    std::string msg = "parse failed at offset " + std::to_string(pos);
    if (!expected.empty()) {
      msg += ", expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) msg += " | ";
        msg += "\"" + expected[i] + "\"";
      }
    }
    throw ParseError(pos, std::move(expected), msg);
  }

  // --- canonical tree extraction ---

  bool nt_derives(int nt, std::size_t i, std::size_t j) {
    if (i == j) return cg_.nullable[nt];
    auto it = completed_.find(span_key(nt, i));
    if (it == completed_.end()) return false;
    auto e = it->second.find(j);
    return e != it->second.end();
  }

  // Candidate end positions for nonterminal `nt` starting at i, bounded by j,
  // in ascending order.
  std::vector<std::size_t> nt_ends(int nt, std::size_t i, std::size_t j) {
    std::vector<std::size_t> out;
    if (cg_.nullable[nt]) out.push_back(i);
    auto it = completed_.find(span_key(nt, i));
    if (it != completed_.end())
      for (const auto& [end, alts] : it->second)
        if (end > i && end <= j) out.push_back(end);
    return out;
  }

  std::uint64_t memo_key(int alt, int k, std::size_t i, std::size_t j) const {
    std::uint64_t n = input_.size() + 2;
    return ((static_cast<std::uint64_t>(alt) * 64 + k) * n + i) * n + j;
  }

  // Can syms[k..] of `alt` derive input[i..j)?
  bool seq_derives(int alt, int k, std::size_t i, std::size_t j) {
    const auto& syms = cg_.alts[alt].syms;
    if (k == static_cast<int>(syms.size())) return i == j;
    auto key = memo_key(alt, k, i, j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool ok = false;
    const auto& sym = syms[k];
    if (!sym.is_nt()) {
      auto e = term_end(i, sym.lit);
      ok = e && *e <= j && seq_derives(alt, k + 1, *e, j);
    } else {
      for (std::size_t e : nt_ends(sym.nt, i, j))
        if (seq_derives(alt, k + 1, e, j)) {
          ok = true;
          break;
        }
    }
    memo_.emplace(key, ok);
    return ok;
  }

  DerivationTree build_nt(int nt, std::size_t i, std::size_t j) {
    if (i == j) return build_empty(nt);
    const auto& alts = completed_.at(span_key(nt, i)).at(j);
    std::vector<int> viable;
    for (int a_idx : alts) {
      int galt = cg_.alts_of[nt][a_idx];
      if (seq_derives(galt, 0, i, j)) viable.push_back(a_idx);
      if (viable.size() >= 2) break;
    }
    // Nullable rules can also cover a nonempty span check... an epsilon-only
    // derivation never covers i < j, so `viable` holds every real candidate.
    assert(!viable.empty());
    if (viable.size() > 1) ambiguous_ = true;
    int chosen = viable.front();
    return DerivationTree::nonterminal(
        cg_.nt_names[nt], chosen,
        build_seq(cg_.alts_of[nt][chosen], 0, i, j));
  }

  std::vector<DerivationTree> build_seq(int alt, int k, std::size_t i,
                                        std::size_t j) {
    const auto& syms = cg_.alts[alt].syms;
    std::vector<DerivationTree> out;
    std::size_t pos = i;
    for (; k < static_cast<int>(syms.size()); ++k) {
      const auto& sym = syms[k];
      if (!sym.is_nt()) {
        auto e = term_end(pos, sym.lit);
        assert(e && *e <= j);
        out.push_back(DerivationTree::terminal(sym.lit));
        pos = *e;
        continue;
      }
      std::vector<std::size_t> viable;
      for (std::size_t e : nt_ends(sym.nt, pos, j)) {
        if (seq_derives(alt, k + 1, e, j)) viable.push_back(e);
        if (viable.size() >= 2) break;
      }
      assert(!viable.empty());
      if (viable.size() > 1) ambiguous_ = true;
      std::size_t e = viable.front();  // leftmost split
      out.push_back(build_nt(sym.nt, pos, e));
      pos = e;
    }
    assert(pos == j);
    return out;
  }

  // Canonical epsilon derivation: smallest alternative index whose symbols
  // are all nullable nonterminals.
  DerivationTree build_empty(int nt) {
    std::vector<int> viable;
    for (int galt : cg_.alts_of[nt]) {
      const auto& a = cg_.alts[galt];
      bool ok = true;
      for (const auto& s : a.syms)
        if (!s.is_nt() || !cg_.nullable[s.nt]) {
          ok = false;
          break;
        }
      if (ok) viable.push_back(galt);
      if (viable.size() >= 2) break;
    }
    assert(!viable.empty());
    if (viable.size() > 1) ambiguous_ = true;
    const auto& a = cg_.alts[viable.front()];
    std::vector<DerivationTree> children;
    for (const auto& s : a.syms) children.push_back(build_empty(s.nt));
    return DerivationTree::nonterminal(cg_.nt_names[nt], a.alt_index,
                                       std::move(children));
  }

  const Compiled& cg_;
  const std::string& input_;
  std::map<std::size_t, StateSet> charts_;
  // (nt, origin) -> end -> completed alternative indices, sorted.
  std::unordered_map<std::uint64_t, std::map<std::size_t, std::vector<int>>>
      completed_;
  std::unordered_map<std::uint64_t, bool> memo_;
  bool ambiguous_ = false;
  std::size_t fail_pos_ = static_cast<std::size_t>(-1);
  std::set<std::string> fail_expected_;
};

}  // namespace

ParseResult parse_input(const Grammar& g, const std::string& input) {
  Compiled cg(g);
  Parser p(cg, input);
  return p.run();
}

namespace {

void collect_frontier(const DerivationTree& t, const Grammar& g,
                      std::vector<const std::string*>& out) {
  if (t.is_terminal()) {
    out.push_back(&t.name);
    return;
  }
  const Rule* r = g.find_rule(t.name);
  if (!r)
    throw std::invalid_argument("tree node references unknown nonterminal " +
                                t.name);
  if (t.alt < 0 || t.alt >= static_cast<int>(r->alternatives.size()))
    throw std::invalid_argument("tree node " + t.name +
                                " has out-of-range alternative index");
  const auto& syms = r->alternatives[t.alt].symbols;
  if (syms.size() != t.children.size())
    throw std::invalid_argument("tree node " + t.name +
                                " has wrong child count for alternative " +
                                std::to_string(t.alt));
  for (std::size_t i = 0; i < syms.size(); ++i) {
    const auto& child = t.children[i];
    if (syms[i].is_nonterminal()) {
      if (child.is_terminal() || child.name != syms[i].text)
        throw std::invalid_argument("tree node " + t.name +
                                    ": child does not match symbol " +
                                    syms[i].text);
    } else if (!child.is_terminal() || child.name != syms[i].text) {
      throw std::invalid_argument("tree node " + t.name +
                                  ": terminal child mismatch");
    }
    collect_frontier(child, g, out);
  }
}

}  // namespace

std::string serialize_tree(const DerivationTree& t, const Grammar& g) {
  std::vector<const std::string*> frontier;
  collect_frontier(t, g, frontier);
  std::string out;
  for (const auto* lit : frontier) {
    if (g.skip_whitespace && !out.empty() && !lit->empty() &&
        is_word_char(out.back()) && is_word_char(lit->front()))
      out += ' ';
    out += *lit;
  }
  return out;
}

}  // namespace pcfg
