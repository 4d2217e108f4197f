#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "crm/coding/codelength.hpp"
#include "crm/scalar/models.hpp"
#include "crm/scalar/trials.hpp"

namespace crm::scalar {

enum class Preference { kA, kB, kTie };

// Product of probabilities kept as mantissa * 2^exponent so thousands of
// small factors do not underflow.
struct ProbabilityProduct {
  double mantissa = 1.0;  // in [0.5, 1) once anything was multiplied
  std::int64_t exponent = 0;

  void multiply(double p);
  // -log2 of the product.
  [[nodiscard]] double bits() const;
  friend std::strong_ordering compare(const ProbabilityProduct& a, const ProbabilityProduct& b);
};

struct DuelReport {
  coding::CodeLengthBits total_a;
  coding::CodeLengthBits total_b;
  Preference by_bits = Preference::kTie;     // smaller total wins
  Preference by_product = Preference::kTie;  // larger product of probabilities wins
  ProbabilityProduct product_a;
  ProbabilityProduct product_b;
  std::size_t escapes_a = 0;
  std::size_t escapes_b = 0;
};

// std::invalid_argument on an empty trial set.
DuelReport theory_duel(const TrialSet& trials, const ScalarModel& model_a, const ScalarModel& model_b);

std::string to_string(Preference p);

}  // namespace crm::scalar
