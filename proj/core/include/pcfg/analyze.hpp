#ifndef PCFG_ANALYZE_HPP
#define PCFG_ANALYZE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pcfg/grammar.hpp"

namespace pcfg {

using ProductionKey = std::pair<std::string, int>;  // (nonterminal, alt index)

/// Relative production-usage frequencies of a suite over every
/// (nonterminal, alternative) key of a grammar. Values sum to 1 unless the
/// suite was empty, in which case `values` stays empty.
struct FrequencyDistribution {
  std::vector<ProductionKey> keys;
  std::vector<double> values;
  bool empty() const { return values.empty(); }
};

struct KSReport {
  double statistic = 0.0;
  double p_value = 1.0;
  int bootstrap_samples = 0;
  double bandwidth = 0.0;
};

/// Parses each input, accumulates expansion counts, normalizes to relative
/// frequencies. Throws ParseError on an unparsable input.
FrequencyDistribution suite_distribution(const Grammar& g,
                                         const std::vector<std::string>& suite);

/// Smoothed bootstrapped two-sample Kolmogorov-Smirnov comparison: Gaussian
/// kernel density estimates (Silverman bandwidth over the pooled values) are
/// resampled `resamples` times each, and the KS statistic and asymptotic
/// p-value are computed on the bootstrapped draws. Each side's stream is
/// derived from (seed, content hash), so the statistic is symmetric in
/// (a, b). Requires resamples >= 10 and nonempty distributions over the
/// same key universe.
KSReport ks_compare(const FrequencyDistribution& a,
                    const FrequencyDistribution& b, int resamples,
                    std::uint64_t seed);

/// Keys with zero frequency in `sample` but positive frequency in `other`.
std::vector<ProductionKey> uncovered_keys(const FrequencyDistribution& sample,
                                          const FrequencyDistribution& other);

}  // namespace pcfg

#endif
