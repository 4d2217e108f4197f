#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "crm/coding/codelength.hpp"

namespace crm::scalar {

// Probability reserved for outcomes outside a model's support. An escaped
// outcome is then sent as a 64-bit literal.
inline constexpr double kEscapeMass = 0x1.0p-32;
inline constexpr double kEscapeLiteralBits = 64.0;
inline constexpr double kGaussianSupportSigmas = 8.0;
inline constexpr std::size_t kMaxBins = std::size_t{1} << 24;

// Bin k covers [k*delta - delta/2, k*delta + delta/2). A model's support is
// the half-open bin range [round(lo/delta), round(hi/delta)).
struct QuantizedGaussianModel {
  double mean = 0.0;
  double sigma = 1.0;
  double delta = 0.001;
  double support_lo = 0.0;
  double support_hi = 0.0;

  // Support mean +/- 8 sigma.
  static QuantizedGaussianModel centered(double mean, double sigma, double delta);
};

struct IntervalModel {
  double lo = 0.0;
  double hi = 1.0;
  double delta = 0.001;
};

using ScalarModel = std::variant<QuantizedGaussianModel, IntervalModel>;

// A model's bins with their masses; masses plus kEscapeMass sum to 1.
class BinnedDistribution {
 public:
  // std::invalid_argument on non-positive sigma/delta, empty support or more
  // than kMaxBins bins.
  explicit BinnedDistribution(const ScalarModel& model);

  [[nodiscard]] std::int64_t first_bin() const { return first_; }
  [[nodiscard]] std::size_t bin_count() const { return masses_.size(); }
  [[nodiscard]] double delta() const { return delta_; }
  [[nodiscard]] std::span<const double> masses() const { return masses_; }

  // Index into masses(), or nullopt when x escapes.
  [[nodiscard]] std::optional<std::size_t> bin_of(double x) const;
  [[nodiscard]] std::optional<std::size_t> bin_index(std::int64_t k) const;
  // Probability of the coded outcome: bin mass, or kEscapeMass * 2^-64.
  [[nodiscard]] double outcome_probability(double x) const;
  [[nodiscard]] coding::CodeLengthBits codelength(double x) const;

 private:
  std::int64_t first_ = 0;
  double delta_ = 0.0;
  std::vector<double> masses_;
};

// -log2 of x's bin mass; escapes cost -log2(kEscapeMass) + 64.
// std::invalid_argument for non-finite x.
coding::CodeLengthBits scalar_codelength(double x, const ScalarModel& model);

}  // namespace crm::scalar
