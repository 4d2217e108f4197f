#include "crm/coding/frequency_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "crm/coding/codelength.hpp"

namespace crm::coding {

AdaptiveFrequencyModel::AdaptiveFrequencyModel(std::uint32_t alphabet_size, std::uint32_t increment,
                                               std::uint32_t max_total)
    : counts_(alphabet_size, 1), increment_(increment), max_total_(max_total) {
  if (alphabet_size == 0) throw std::invalid_argument("alphabet_size must be positive");
  if (increment == 0) throw std::invalid_argument("increment must be positive");
  if (max_total > kMaxModelTotal) throw std::invalid_argument("max_total exceeds coder precision");
  // Halving must leave room for at least one increment.
  if (2ull * alphabet_size + increment > max_total)
    throw std::invalid_argument("alphabet too large for max_total");
  rebuild_tree();
}

void AdaptiveFrequencyModel::rebuild_tree() {
  const auto n = static_cast<std::uint32_t>(counts_.size());
  tree_.assign(n + 1, 0);
  total_ = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    total_ += counts_[i];
    for (std::uint32_t j = i + 1; j <= n; j += j & (~j + 1)) tree_[j] += counts_[i];
  }
  top_bit_ = std::bit_floor(n);
}

std::uint32_t AdaptiveFrequencyModel::prefix(std::uint32_t symbol) const {
  std::uint32_t sum = 0;
  for (std::uint32_t j = symbol; j > 0; j &= j - 1) sum += tree_[j];
  return sum;
}

SymbolRange AdaptiveFrequencyModel::range(std::uint32_t symbol) const {
  if (symbol >= counts_.size()) throw std::out_of_range("symbol outside alphabet");
  return {prefix(symbol), counts_[symbol], total_};
}

std::uint32_t AdaptiveFrequencyModel::find(std::uint32_t target) const {
  // Fenwick descent: largest position whose prefix sum is <= target.
  std::uint32_t pos = 0;
  const auto n = static_cast<std::uint32_t>(counts_.size());
  for (std::uint32_t step = top_bit_; step > 0; step >>= 1) {
    const std::uint32_t next = pos + step;
    if (next <= n && tree_[next] <= target) {
      pos = next;
      target -= tree_[next];
    }
  }
  return std::min(pos, n - 1);
}

void AdaptiveFrequencyModel::update(std::uint32_t symbol) {
  if (symbol >= counts_.size()) throw std::out_of_range("symbol outside alphabet");
  counts_[symbol] += increment_;
  total_ += increment_;
  if (total_ > max_total_) {
    for (auto& c : counts_) c = (c + 1) / 2;
    rebuild_tree();
    return;
  }
  const auto n = static_cast<std::uint32_t>(counts_.size());
  for (std::uint32_t j = symbol + 1; j <= n; j += j & (~j + 1)) tree_[j] += increment_;
}

StaticFrequencyModel::StaticFrequencyModel(std::vector<std::uint32_t> freqs) {
  if (freqs.empty()) throw std::invalid_argument("empty alphabet");
  cum_.resize(freqs.size() + 1);
  cum_[0] = 0;
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (freqs[i] == 0) throw std::invalid_argument("zero frequency");
    sum += freqs[i];
    if (sum > kMaxModelTotal) throw std::invalid_argument("frequency total exceeds coder precision");
    cum_[i + 1] = static_cast<std::uint32_t>(sum);
  }
}

StaticFrequencyModel StaticFrequencyModel::uniform(std::uint32_t alphabet_size) {
  return StaticFrequencyModel(std::vector<std::uint32_t>(alphabet_size, 1));
}

StaticFrequencyModel StaticFrequencyModel::from_weights(std::span<const double> weights) {
  return StaticFrequencyModel(quantize_frequencies(weights, kMaxModelTotal));
}

SymbolRange StaticFrequencyModel::range(std::uint32_t symbol) const {
  if (symbol >= alphabet_size()) throw std::out_of_range("symbol outside alphabet");
  return {cum_[symbol], cum_[symbol + 1] - cum_[symbol], cum_.back()};
}

std::uint32_t StaticFrequencyModel::find(std::uint32_t target) const {
  auto it = std::upper_bound(cum_.begin() + 1, cum_.end(), target);
  return static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(it - cum_.begin() - 1, alphabet_size() - 1));
}

double StaticFrequencyModel::cost_bits(std::uint32_t symbol) const {
  const auto r = range(symbol);
  return std::log2(static_cast<double>(r.total) / r.freq);
}

}  // namespace crm::coding
