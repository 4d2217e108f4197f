#include "crm/coding/codelength.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace crm::coding {

CodeLengthBits::CodeLengthBits(double bits) : bits_(bits) {
  if (!std::isfinite(bits) || bits < 0.0) throw std::domain_error("codelength must be finite and >= 0");
}

CodeLengthBits shannon_codelength(double p) {
  if (!(p > 0.0) || p > 1.0) throw std::domain_error("probability must lie in (0, 1]");
  // -log2(1) is -0.0; normalise the sign.
  return CodeLengthBits(p == 1.0 ? 0.0 : -std::log2(p));
}

double kraft_audit(std::span<const CodeLengthBits> lengths) {
  double sum = 0.0;
  for (auto l : lengths) sum += std::exp2(-l.bits());
  return sum;
}

SymbolDistribution::SymbolDistribution(std::vector<double> masses) : masses_(std::move(masses)) {
  if (masses_.empty()) throw std::invalid_argument("empty alphabet");
  double sum = 0.0;
  for (double m : masses_) {
    if (!std::isfinite(m) || m < 0.0) throw std::invalid_argument("masses must be finite and >= 0");
    sum += m;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance)
    throw std::invalid_argument("masses do not sum to 1");
}

CodeLengthBits SymbolDistribution::codelength(std::size_t symbol) const {
  return shannon_codelength(mass(symbol));
}

std::vector<std::uint32_t> quantize_frequencies(std::span<const double> weights, std::uint32_t total) {
  const std::size_t n = weights.size();
  if (n == 0 || n > total) throw std::invalid_argument("alphabet larger than frequency total");
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("weights must be finite and >= 0");
    sum += w;
  }
  std::vector<std::uint32_t> freq(n, 1);
  const double spare = static_cast<double>(total - n);
  std::uint64_t used = n;
  std::size_t heaviest = 0;
  if (sum > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto extra = static_cast<std::uint32_t>(std::floor(weights[i] / sum * spare));
      freq[i] += extra;
      used += extra;
      if (weights[i] > weights[heaviest]) heaviest = i;
    }
  }
  freq[heaviest] += static_cast<std::uint32_t>(total - used);
  return freq;
}

}  // namespace crm::coding
