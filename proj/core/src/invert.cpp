#include "pcfg/invert.hpp"

#include <cmath>
#include <stdexcept>

namespace pcfg {

Grammar invert(const Grammar& g) {
  Grammar out = g;
  for (auto& r : out.rules) {
    double sum = 0.0;
    for (const auto& a : r.alternatives) {
      if (!a.probability)
        throw std::invalid_argument("rule " + r.lhs +
                                    " is not fully probability-annotated");
      sum += *a.probability;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("rule " + r.lhs +
                                  " is not normalized (sum != 1)");

    std::size_t zeros = 0;
    for (const auto& a : r.alternatives)
      if (*a.probability == 0.0) ++zeros;

    if (zeros > 0) {
      // Unseen alternatives take the whole mass, split equally; every seen
      // alternative drops to zero.
      for (auto& a : r.alternatives)
        a.probability = *a.probability == 0.0
                            ? 1.0 / static_cast<double>(zeros)
                            : 0.0;
    } else {
      double recip_sum = 0.0;
      for (const auto& a : r.alternatives) recip_sum += 1.0 / *a.probability;
      for (auto& a : r.alternatives)
        a.probability = (1.0 / *a.probability) / recip_sum;
    }
    // Counts described the learned grammar, not the inverted one.
    for (auto& a : r.alternatives) a.count.reset();
    r.total.reset();
  }
  return out;
}

}  // namespace pcfg
