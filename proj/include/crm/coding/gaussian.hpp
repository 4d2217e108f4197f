#pragma once

#include <vector>

namespace crm::coding {

// Point-mass discretisation of a Gaussian over the integers lo..hi:
// weight(v) = exp(-(v - mean)^2 / (2 variance)), normalised to sum to one.
// With Z = sum of the unnormalised weights, the codelength of v is
// (v - mean)^2 log2(e) / (2 variance) + log2 Z.
std::vector<double> discretized_gaussian(double mean, double variance, int lo, int hi);

// log2 Z for the discretisation above.
double gaussian_log2_normalizer(double mean, double variance, int lo, int hi);

}  // namespace crm::coding
