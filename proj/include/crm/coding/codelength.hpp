#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace crm::coding {

// Real-valued codelength in bits. Always finite and non-negative.
class CodeLengthBits {
 public:
  constexpr CodeLengthBits() = default;
  explicit CodeLengthBits(double bits);

  [[nodiscard]] constexpr double bits() const { return bits_; }

  CodeLengthBits& operator+=(CodeLengthBits other) {
    bits_ += other.bits_;
    return *this;
  }
  friend CodeLengthBits operator+(CodeLengthBits a, CodeLengthBits b) { return a += b; }
  friend constexpr auto operator<=>(CodeLengthBits, CodeLengthBits) = default;

 private:
  double bits_ = 0.0;
};

// -log2(p) for 0 < p <= 1; std::domain_error otherwise.
CodeLengthBits shannon_codelength(double p);

// Sum of 2^-L over a finite set of codelengths. A prefix-free code keeps
// this at or below one, which forces the mean length over a uniform source
// of 2^N inputs to be at least N.
double kraft_audit(std::span<const CodeLengthBits> lengths);

// Explicit probability assignment over a finite alphabet.
class SymbolDistribution {
 public:
  // Masses must be non-negative and sum to 1 within 1e-9.
  explicit SymbolDistribution(std::vector<double> masses);

  [[nodiscard]] std::size_t alphabet_size() const { return masses_.size(); }
  [[nodiscard]] double mass(std::size_t symbol) const { return masses_.at(symbol); }
  [[nodiscard]] std::span<const double> masses() const { return masses_; }
  // Throws std::domain_error for zero-mass symbols.
  [[nodiscard]] CodeLengthBits codelength(std::size_t symbol) const;

 private:
  std::vector<double> masses_;
};

// Scales non-negative weights to integer frequencies summing to `total`,
// giving every symbol at least 1. The rounding remainder goes to the
// heaviest symbol (lowest index on ties) so results are deterministic.
std::vector<std::uint32_t> quantize_frequencies(std::span<const double> weights,
                                                std::uint32_t total);

inline constexpr double kNormalizationTolerance = 1e-9;

}  // namespace crm::coding
