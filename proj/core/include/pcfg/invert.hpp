#ifndef PCFG_INVERT_HPP
#define PCFG_INVERT_HPP

#include "pcfg/grammar.hpp"

namespace pcfg {

/// Probability inversion, rule by rule. With all weights positive the new
/// probability is the normalized reciprocal, p'_i = (1/w_i) / sum(1/w_j).
/// When some weights are zero, those alternatives split the whole mass
/// equally and every previously seen alternative drops to zero. The zero
/// case is handled symbolically, never through floating-point infinities.
/// Requires per-rule probabilities summing to 1; throws otherwise.
Grammar invert(const Grammar& g);

}  // namespace pcfg

#endif
