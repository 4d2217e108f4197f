#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "crm/coding/frequency_model.hpp"
#include "crm/coding/range_coder.hpp"
#include "crm/scalar/models.hpp"

namespace crm::scalar {

// Entropy coder for grid indices under a BinnedDistribution. A bin index is
// sent as (index >> 12) under a table that also holds the escape symbol,
// then (index & 4095) under the group's own table. Escaped indices follow
// as 64-bit literals.
class ScalarCoder {
 public:
  explicit ScalarCoder(const ScalarModel& model);

  void encode(coding::RangeEncoder& enc, std::int64_t k);
  std::int64_t decode(coding::RangeDecoder& dec);

  [[nodiscard]] const BinnedDistribution& distribution() const { return dist_; }

 private:
  static constexpr unsigned kLowBits = 12;

  coding::StaticFrequencyModel& group_model(std::uint32_t group);

  BinnedDistribution dist_;
  coding::StaticFrequencyModel high_;
  std::uint32_t groups_ = 0;
  std::map<std::uint32_t, coding::StaticFrequencyModel> low_;
};

// Trial files whose outcome lines are canonical millisecond decimals:
// the text up to the first outcome is stored verbatim, then the outcome
// count and the range-coded outcomes. The model's bin width must be 0.001.
// FormatError for input outside that form.
std::vector<std::uint8_t> compress_trials(std::span<const std::uint8_t> file, const ScalarModel& model);
std::vector<std::uint8_t> decompress_trials(std::span<const std::uint8_t> stream, const ScalarModel& model);

inline ScalarModel default_gaussian_model() { return QuantizedGaussianModel::centered(2.0, 0.3, 0.001); }
inline ScalarModel default_interval_model() { return IntervalModel{1.0, 30.0, 0.001}; }

}  // namespace crm::scalar
