#include "crm/coding/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace crm::coding {

namespace {

void check(double mean, double variance, int lo, int hi) {
  if (!(variance > 0.0) || !std::isfinite(variance)) throw std::domain_error("variance must be positive");
  if (!std::isfinite(mean)) throw std::domain_error("mean must be finite");
  if (lo > hi) throw std::invalid_argument("empty support");
}

}  // namespace

std::vector<double> discretized_gaussian(double mean, double variance, int lo, int hi) {
  check(mean, variance, lo, hi);
  std::vector<double> w(static_cast<std::size_t>(hi - lo + 1));
  double z = 0.0;
  for (int v = lo; v <= hi; ++v) {
    const double d = v - mean;
    w[v - lo] = std::exp(-d * d / (2.0 * variance));
    z += w[v - lo];
  }
  if (!(z > 0.0)) throw std::domain_error("gaussian mass underflows on support");
  for (auto& x : w) x /= z;
  return w;
}

double gaussian_log2_normalizer(double mean, double variance, int lo, int hi) {
  check(mean, variance, lo, hi);
  double z = 0.0;
  for (int v = lo; v <= hi; ++v) {
    const double d = v - mean;
    z += std::exp(-d * d / (2.0 * variance));
  }
  if (!(z > 0.0)) throw std::domain_error("gaussian mass underflows on support");
  return std::log2(z);
}

}  // namespace crm::coding
