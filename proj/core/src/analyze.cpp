#include "pcfg/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "pcfg/counting.hpp"
#include "pcfg/earley.hpp"
#include "pcfg/random.hpp"

namespace pcfg {

FrequencyDistribution suite_distribution(const Grammar& g,
                                         const std::vector<std::string>& suite) {
  FrequencyDistribution dist;
  for (const auto& r : g.rules)
    for (std::size_t i = 0; i < r.alternatives.size(); ++i)
      dist.keys.emplace_back(r.lhs, static_cast<int>(i));
  if (suite.empty()) return dist;  // empty distribution, values stay empty

  std::vector<DerivationTree> trees;
  trees.reserve(suite.size());
  for (const auto& input : suite) trees.push_back(parse_input(g, input).tree);
  CountTable counts = count_expansions(trees, g);

  std::uint64_t total = 0;
  for (const auto& [name, entry] : counts.by_rule) total += entry.total;
  dist.values.reserve(dist.keys.size());
  for (const auto& [name, alt] : dist.keys) {
    const auto& entry = counts.by_rule.at(name);
    std::uint64_t c = entry.alts[alt];
    dist.values.push_back(total == 0 ? 0.0
                                     : static_cast<double>(c) /
                                           static_cast<double>(total));
  }
  return dist;
}

namespace {

double silverman_bandwidth(std::vector<double> data) {
  const std::size_t n = data.size();
  double mean = 0.0;
  for (double v : data) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n > 1 ? n - 1 : 1);
  double sd = std::sqrt(var);

  std::sort(data.begin(), data.end());
  auto quantile = [&](double q) {
    double idx = q * static_cast<double>(n - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, n - 1);
    double frac = idx - static_cast<double>(lo);
    return data[lo] * (1.0 - frac) + data[hi] * frac;
  };
  double iqr = quantile(0.75) - quantile(0.25);

  double spread = sd;
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
  double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  if (h <= 0.0) h = 1e-9;  // degenerate data, keep the estimate proper
  return h;
}

// Draw `m` points from the Gaussian KDE of `data` with bandwidth h.
std::vector<double> kde_resample(const std::vector<double>& data, double h,
                                 int m, Xoshiro256& rng) {
  std::vector<double> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) {
    double base = data[rng.below(data.size())];
    out.push_back(base + h * rng.gaussian());
  }
  return out;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    double diff = std::fabs(static_cast<double>(i) / na -
                            static_cast<double>(j) / nb);
    if (diff > d) d = diff;
  }
  return d;
}

// Asymptotic two-sample KS p-value (Kolmogorov distribution tail).
double ks_p_value(double d, std::size_t n1, std::size_t n2) {
  double en = std::sqrt(static_cast<double>(n1) * static_cast<double>(n2) /
                        static_cast<double>(n1 + n2));
  double lambda = (en + 0.12 + 0.11 / en) * d;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * lambda * lambda * k * k);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  double p = 2.0 * sum;
  return std::clamp(p, 0.0, 1.0);
}

std::uint64_t content_hash(const FrequencyDistribution& d) {
  std::string bytes(reinterpret_cast<const char*>(d.values.data()),
                    d.values.size() * sizeof(double));
  return fnv1a64(bytes);
}

}  // namespace

KSReport ks_compare(const FrequencyDistribution& a,
                    const FrequencyDistribution& b, int resamples,
                    std::uint64_t seed) {
  if (resamples < 10)
    throw std::invalid_argument("ks_compare needs at least 10 resamples");
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_compare on an empty distribution");
  if (a.keys != b.keys)
    throw std::invalid_argument("distributions cover different key universes");

  std::vector<double> pooled = a.values;
  pooled.insert(pooled.end(), b.values.begin(), b.values.end());
  double h = silverman_bandwidth(std::move(pooled));

  // Per-side streams keyed on content: identical inputs draw identical
  // samples, and swapping (a, b) leaves the statistic unchanged.
  Xoshiro256 rng_a = Xoshiro256::stream(seed, content_hash(a));
  Xoshiro256 rng_b = Xoshiro256::stream(seed, content_hash(b));
  std::vector<double> sample_a = kde_resample(a.values, h, resamples, rng_a);
  std::vector<double> sample_b = kde_resample(b.values, h, resamples, rng_b);

  KSReport report;
  report.bootstrap_samples = resamples;
  report.bandwidth = h;
  report.statistic = ks_statistic(std::move(sample_a), std::move(sample_b));
  report.p_value = ks_p_value(report.statistic, resamples, resamples);
  return report;
}

std::vector<ProductionKey> uncovered_keys(const FrequencyDistribution& sample,
                                          const FrequencyDistribution& other) {
  if (sample.keys != other.keys)
    throw std::invalid_argument("distributions cover different key universes");
  std::vector<ProductionKey> out;
  for (std::size_t i = 0; i < sample.keys.size(); ++i) {
    double s = i < sample.values.size() ? sample.values[i] : 0.0;
    double o = i < other.values.size() ? other.values[i] : 0.0;
    if (s == 0.0 && o > 0.0) out.push_back(sample.keys[i]);
  }
  return out;
}

}  // namespace pcfg
