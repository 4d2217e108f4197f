#include "crm/scalar/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crm::scalar {

namespace {

double lower_tail(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

// Gaussian mass of [a, b] in standard units, using whichever tail keeps the
// subtraction between small numbers.
double standard_mass(double a, double b) {
  if (b <= 0.0) return lower_tail(b) - lower_tail(a);
  if (a >= 0.0) return upper_tail(a) - upper_tail(b);
  return 1.0 - lower_tail(a) - upper_tail(b);
}

std::int64_t grid_index(double x, double delta) { return std::llround(x / delta); }

}  // namespace

QuantizedGaussianModel QuantizedGaussianModel::centered(double mean, double sigma, double delta) {
  return {mean, sigma, delta, mean - kGaussianSupportSigmas * sigma, mean + kGaussianSupportSigmas * sigma};
}

BinnedDistribution::BinnedDistribution(const ScalarModel& model) {
  double lo = 0.0, hi = 0.0;
  std::visit([&](const auto& m) {
    using T = std::decay_t<decltype(m)>;
    if constexpr (std::is_same_v<T, QuantizedGaussianModel>) {
      if (!(m.sigma > 0.0) || !std::isfinite(m.sigma) || !std::isfinite(m.mean))
        throw std::invalid_argument("gaussian sigma must be positive and finite");
      delta_ = m.delta;
      lo = m.support_lo;
      hi = m.support_hi;
    } else {
      delta_ = m.delta;
      lo = m.lo;
      hi = m.hi;
    }
  }, model);
  if (!(delta_ > 0.0) || !std::isfinite(delta_)) throw std::invalid_argument("bin width must be positive");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) throw std::invalid_argument("support must satisfy lo < hi");
  first_ = grid_index(lo, delta_);
  const std::int64_t end = grid_index(hi, delta_);
  if (end <= first_) throw std::invalid_argument("support holds no bins");
  if (static_cast<std::uint64_t>(end - first_) > kMaxBins) throw std::invalid_argument("too many bins");
  masses_.resize(static_cast<std::size_t>(end - first_));

  const double inside = 1.0 - kEscapeMass;
  if (const auto* g = std::get_if<QuantizedGaussianModel>(&model)) {
    double sum = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
      const double centre = static_cast<double>(first_ + static_cast<std::int64_t>(i)) * delta_;
      masses_[i] = standard_mass((centre - delta_ / 2 - g->mean) / g->sigma, (centre + delta_ / 2 - g->mean) / g->sigma);
      sum += masses_[i];
    }
    if (!(sum > 0.0)) throw std::invalid_argument("gaussian has no mass on its support");
    for (auto& m : masses_) m = m / sum * inside;
    // Bins too far out to register in double precision still need mass.
    for (auto& m : masses_) m = std::max(m, 1e-300);
  } else {
    const double each = inside / static_cast<double>(masses_.size());
    for (auto& m : masses_) m = each;
  }
}

std::optional<std::size_t> BinnedDistribution::bin_index(std::int64_t k) const {
  if (k < first_ || k - first_ >= static_cast<std::int64_t>(masses_.size())) return std::nullopt;
  return static_cast<std::size_t>(k - first_);
}

std::optional<std::size_t> BinnedDistribution::bin_of(double x) const {
  if (!std::isfinite(x)) throw std::invalid_argument("outcome must be finite");
  const double k = std::round(x / delta_);
  if (std::abs(k) > 9.0e18) return std::nullopt;
  return bin_index(static_cast<std::int64_t>(k));
}

double BinnedDistribution::outcome_probability(double x) const {
  const auto bin = bin_of(x);
  return bin ? masses_[*bin] : kEscapeMass * std::ldexp(1.0, -static_cast<int>(kEscapeLiteralBits));
}

coding::CodeLengthBits BinnedDistribution::codelength(double x) const {
  const auto bin = bin_of(x);
  if (!bin) return coding::CodeLengthBits(-std::log2(kEscapeMass) + kEscapeLiteralBits);
  return coding::CodeLengthBits(-std::log2(masses_[*bin]));
}

coding::CodeLengthBits scalar_codelength(double x, const ScalarModel& model) {
  if (!std::isfinite(x)) throw std::invalid_argument("outcome must be finite");
  return BinnedDistribution(model).codelength(x);
}

}  // namespace crm::scalar
