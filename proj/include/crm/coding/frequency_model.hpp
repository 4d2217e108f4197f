#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

namespace crm::coding {

// Cumulative-frequency slot of one symbol: [low, low + freq) out of total.
struct SymbolRange {
  std::uint32_t low = 0;
  std::uint32_t freq = 0;
  std::uint32_t total = 0;
};

// Largest frequency total any model may present to the range coder.
inline constexpr std::uint32_t kMaxModelTotal = 1u << 16;

template <typename M>
concept FrequencyModel = requires(M& model, const M& cmodel, std::uint32_t symbol) {
  { cmodel.alphabet_size() } -> std::convertible_to<std::uint32_t>;
  { cmodel.total() } -> std::convertible_to<std::uint32_t>;
  { cmodel.range(symbol) } -> std::same_as<SymbolRange>;
  // Symbol whose slot contains `target` (0 <= target < total).
  { cmodel.find(symbol) } -> std::convertible_to<std::uint32_t>;
  { model.update(symbol) } -> std::same_as<void>;
};

// Count-based adaptive model. Counts start at one, grow by `increment` per
// coded symbol, and are halved (rounding up) whenever the total exceeds
// `max_total`, so no symbol ever reaches zero probability.
class AdaptiveFrequencyModel {
 public:
  static constexpr std::uint32_t kDefaultIncrement = 32;
  static constexpr std::uint32_t kDefaultMaxTotal = kMaxModelTotal;

  explicit AdaptiveFrequencyModel(std::uint32_t alphabet_size,
                                  std::uint32_t increment = kDefaultIncrement,
                                  std::uint32_t max_total = kDefaultMaxTotal);

  [[nodiscard]] std::uint32_t alphabet_size() const { return static_cast<std::uint32_t>(counts_.size()); }
  [[nodiscard]] std::uint32_t total() const { return total_; }
  [[nodiscard]] std::uint32_t increment() const { return increment_; }
  [[nodiscard]] std::uint32_t max_total() const { return max_total_; }
  [[nodiscard]] std::span<const std::uint32_t> counts() const { return counts_; }

  [[nodiscard]] SymbolRange range(std::uint32_t symbol) const;
  [[nodiscard]] std::uint32_t find(std::uint32_t target) const;
  void update(std::uint32_t symbol);

  friend bool operator==(const AdaptiveFrequencyModel& a, const AdaptiveFrequencyModel& b) {
    return a.counts_ == b.counts_ && a.increment_ == b.increment_ && a.max_total_ == b.max_total_;
  }

 private:
  [[nodiscard]] std::uint32_t prefix(std::uint32_t symbol) const;
  void rebuild_tree();

  std::vector<std::uint32_t> counts_;
  std::vector<std::uint32_t> tree_;  // Fenwick tree over counts_
  std::uint32_t increment_;
  std::uint32_t max_total_;
  std::uint32_t total_ = 0;
  std::uint32_t top_bit_ = 1;
};

// Fixed frequency table; update() is a no-op.
class StaticFrequencyModel {
 public:
  explicit StaticFrequencyModel(std::vector<std::uint32_t> freqs);
  static StaticFrequencyModel uniform(std::uint32_t alphabet_size);
  // quantize_frequencies(weights, kMaxModelTotal)
  static StaticFrequencyModel from_weights(std::span<const double> weights);

  [[nodiscard]] std::uint32_t alphabet_size() const { return static_cast<std::uint32_t>(cum_.size() - 1); }
  [[nodiscard]] std::uint32_t total() const { return cum_.back(); }
  [[nodiscard]] SymbolRange range(std::uint32_t symbol) const;
  [[nodiscard]] std::uint32_t find(std::uint32_t target) const;
  void update(std::uint32_t) {}

  // -log2(freq/total) for one symbol.
  [[nodiscard]] double cost_bits(std::uint32_t symbol) const;

 private:
  std::vector<std::uint32_t> cum_;
};

}  // namespace crm::coding
