#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace crm::scalar {

inline constexpr double kOutcomeResolution = 0.001;  // seconds

struct TrialMetadata {
  double v_i = 0.0;          // m/s
  double theta = 0.0;        // radians
  double g = 9.8;            // m/s^2
  double noise_sigma = 0.0;  // seconds
  std::uint64_t seed = 0;
  double resolution = kOutcomeResolution;

  friend bool operator==(const TrialMetadata&, const TrialMetadata&) = default;
};

struct TrialSet {
  TrialMetadata metadata;
  std::vector<double> outcomes;  // seconds, multiples of the resolution

  friend bool operator==(const TrialSet&, const TrialSet&) = default;
};

// Flight times 2 v_i sin(theta) / g plus Gaussian noise, rounded to 1 ms.
// std::invalid_argument for n < 1, g <= 0, noise < 0 or non-finite input.
TrialSet ballistic_generate(std::size_t n, double v_i, double theta, double g, double noise_sigma,
                            std::uint64_t seed);

// Text form:
//   CRMTRIALS 1
//   key=value          (v_i, theta, g, noise_sigma, seed, resolution)
//   2.134              (one outcome per line, exactly three decimals)
std::string serialize_trials(const TrialSet& trials);
// FormatError on a bad header, unknown or malformed keys, or bad outcomes.
TrialSet parse_trials(std::string_view text);

// Outcome text <-> integer milliseconds. format_millis(2134) == "2.134".
std::string format_millis(std::int64_t ms);
// Accepts only the canonical form produced by format_millis.
bool parse_millis(std::string_view text, std::int64_t& ms);

}  // namespace crm::scalar
