#include "crm/scalar/duel.hpp"

#include <cmath>
#include <stdexcept>

namespace crm::scalar {

void ProbabilityProduct::multiply(double p) {
  int e = 0;
  const double m = std::frexp(p, &e);
  int e2 = 0;
  mantissa = std::frexp(mantissa * m, &e2);
  exponent += e + e2;
}

double ProbabilityProduct::bits() const { return -(std::log2(mantissa) + static_cast<double>(exponent)); }

std::strong_ordering compare(const ProbabilityProduct& a, const ProbabilityProduct& b) {
  if (a.exponent != b.exponent) return a.exponent <=> b.exponent;
  if (a.mantissa < b.mantissa) return std::strong_ordering::less;
  if (a.mantissa > b.mantissa) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

DuelReport theory_duel(const TrialSet& trials, const ScalarModel& model_a, const ScalarModel& model_b) {
  if (trials.outcomes.empty()) throw std::invalid_argument("duel needs at least one outcome");
  const BinnedDistribution a(model_a), b(model_b);
  DuelReport r;
  for (double x : trials.outcomes) {
    r.total_a += a.codelength(x);
    r.total_b += b.codelength(x);
    r.product_a.multiply(a.outcome_probability(x));
    r.product_b.multiply(b.outcome_probability(x));
    r.escapes_a += !a.bin_of(x).has_value();
    r.escapes_b += !b.bin_of(x).has_value();
  }
  r.by_bits = r.total_a < r.total_b ? Preference::kA : (r.total_b < r.total_a ? Preference::kB : Preference::kTie);
  const auto order = compare(r.product_a, r.product_b);
  r.by_product = order > 0 ? Preference::kA : (order < 0 ? Preference::kB : Preference::kTie);
  return r;
}

std::string to_string(Preference p) {
  switch (p) {
    case Preference::kA: return "A";
    case Preference::kB: return "B";
    case Preference::kTie: return "tie";
  }
  return "?";
}

}  // namespace crm::scalar
