#include "pcfg/tree.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pcfg {

namespace {

using nlohmann::json;

json to_json(const DerivationTree& t) {
  if (t.is_terminal()) return json{{"t", t.name}};
  json children = json::array();
  for (const auto& c : t.children) children.push_back(to_json(c));
  return json{{"n", t.name}, {"alt", t.alt}, {"c", std::move(children)}};
}

DerivationTree from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("tree node must be an object");
  if (j.contains("t")) {
    if (!j["t"].is_string())
      throw std::invalid_argument("terminal \"t\" must be a string");
    return DerivationTree::terminal(j["t"].get<std::string>());
  }
  if (!j.contains("n") || !j.contains("alt") || !j.contains("c"))
    throw std::invalid_argument("nonterminal node needs \"n\", \"alt\", \"c\"");
  if (!j["n"].is_string() || !j["alt"].is_number_integer() ||
      !j["c"].is_array())
    throw std::invalid_argument("malformed nonterminal node");
  std::vector<DerivationTree> children;
  for (const auto& c : j["c"]) children.push_back(from_json(c));
  return DerivationTree::nonterminal(j["n"].get<std::string>(),
                                     j["alt"].get<int>(),
                                     std::move(children));
}

}  // namespace

std::string tree_to_json(const DerivationTree& t) { return to_json(t).dump(); }

DerivationTree json_to_tree(const std::string& text) {
  json j = nlohmann::json::parse(text);  // throws json::parse_error
  return from_json(j);
}

}  // namespace pcfg
