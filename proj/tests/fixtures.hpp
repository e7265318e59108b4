#ifndef PCFG_TESTS_FIXTURES_HPP
#define PCFG_TESTS_FIXTURES_HPP

#include <cmath>
#include <string>
#include <vector>

#include "pcfg/grammar.hpp"

namespace fixtures {

// The arithmetic expression grammar used across the test suite.
inline const char* kArithGrammar = R"g(
%whitespace skip ;
Expr   -> Term | Expr "+" Term | Expr "-" Term ;
Term   -> Factor | Term "*" Factor | Term "/" Factor ;
Factor -> Int | "+" Factor | "-" Factor | "(" Expr ")" ;
Int    -> Digit Int | Digit ;
Digit  -> "0" | "1" | "2" | "3" | "4" | "5" | "6" | "7" | "8" | "9" ;
)g";

inline const char* kSampleInput = "1 + (2 * 3)";

inline bool prob_close(double a, double b, double tol = 1e-9) {
  return std::fabs(a - b) <= tol;
}

inline std::vector<double> rule_probs(const pcfg::Grammar& g,
                                      const std::string& name) {
  std::vector<double> out;
  const pcfg::Rule* r = g.find_rule(name);
  if (!r) return out;
  for (const auto& a : r->alternatives)
    out.push_back(a.probability.value_or(-1.0));
  return out;
}

inline bool probs_close(const std::vector<double>& a,
                        const std::vector<double>& b, double tol = 1e-9) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!prob_close(a[i], b[i], tol)) return false;
  return true;
}

}  // namespace fixtures

#endif
