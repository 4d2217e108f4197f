#include "crm/scalar/trials.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "crm/corpus/generators.hpp"
#include "crm/error.hpp"

namespace crm::scalar {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  T value{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw FormatError("malformed value for " + std::string(key));
  return value;
}

std::int64_t to_millis(double seconds) {
  const double ms = std::round(seconds / kOutcomeResolution);
  if (!std::isfinite(ms) || std::abs(ms) > 9.0e15) throw std::invalid_argument("outcome out of range");
  return static_cast<std::int64_t>(ms);
}

}  // namespace

TrialSet ballistic_generate(std::size_t n, double v_i, double theta, double g, double noise_sigma,
                            std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need at least one trial");
  if (!std::isfinite(v_i) || !std::isfinite(theta)) throw std::invalid_argument("launch parameters must be finite");
  if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("gravity must be positive");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw std::invalid_argument("noise sigma must be >= 0");
  const double flight = 2.0 * v_i * std::sin(theta) / g;
  corpus::Rng rng(seed);
  TrialSet set{{v_i, theta, g, noise_sigma, seed, kOutcomeResolution}, {}};
  set.outcomes.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = noise_sigma > 0.0 ? flight + noise_sigma * rng.normal() : flight;
    set.outcomes.push_back(static_cast<double>(to_millis(t)) / 1000.0);
  }
  return set;
}

std::string format_millis(std::int64_t ms) {
  const bool negative = ms < 0;
  const std::uint64_t mag = negative ? 0 - static_cast<std::uint64_t>(ms) : static_cast<std::uint64_t>(ms);
  std::string frac = std::to_string(mag % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return (negative ? "-" : "") + std::to_string(mag / 1000) + "." + frac;
}

bool parse_millis(std::string_view text, std::int64_t& ms) {
  std::size_t pos = 0;
  const bool negative = !text.empty() && text[0] == '-';
  if (negative) pos = 1;
  const auto dot = text.find('.', pos);
  if (dot == std::string_view::npos || dot == pos || text.size() - dot - 1 != 3) return false;
  for (std::size_t i = pos; i < text.size(); ++i)
    if (i != dot && (text[i] < '0' || text[i] > '9')) return false;
  if (dot - pos > 1 && text[pos] == '0') return false;  // leading zero
  if (dot - pos > 15) return false;
  std::int64_t whole = 0, frac = 0;
  std::from_chars(text.data() + pos, text.data() + dot, whole);
  std::from_chars(text.data() + dot + 1, text.data() + text.size(), frac);
  const std::int64_t mag = whole * 1000 + frac;
  if (negative && mag == 0) return false;  // "-0.000"
  ms = negative ? -mag : mag;
  return true;
}

std::string serialize_trials(const TrialSet& trials) {
  const auto& m = trials.metadata;
  std::string out = "CRMTRIALS 1\n";
  out += "v_i=" + format_double(m.v_i) + "\n";
  out += "theta=" + format_double(m.theta) + "\n";
  out += "g=" + format_double(m.g) + "\n";
  out += "noise_sigma=" + format_double(m.noise_sigma) + "\n";
  out += "seed=" + std::to_string(m.seed) + "\n";
  out += "resolution=" + format_double(m.resolution) + "\n";
  for (double x : trials.outcomes) out += format_millis(to_millis(x)) + "\n";
  return out;
}

TrialSet parse_trials(std::string_view text) {
  constexpr std::string_view kMagic = "CRMTRIALS 1\n";
  if (!text.starts_with(kMagic)) throw FormatError("not a CRMTRIALS 1 file");
  TrialSet set;
  std::size_t pos = kMagic.size();
  bool in_outcomes = false;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq != std::string_view::npos) {
      if (in_outcomes) throw FormatError("metadata after outcomes");
      const auto key = line.substr(0, eq), value = line.substr(eq + 1);
      auto& m = set.metadata;
      if (key == "v_i") m.v_i = parse_number<double>(value, key);
      else if (key == "theta") m.theta = parse_number<double>(value, key);
      else if (key == "g") m.g = parse_number<double>(value, key);
      else if (key == "noise_sigma") m.noise_sigma = parse_number<double>(value, key);
      else if (key == "seed") m.seed = parse_number<std::uint64_t>(value, key);
      else if (key == "resolution") m.resolution = parse_number<double>(value, key);
      else throw FormatError("unknown trial metadata key: " + std::string(key));
      continue;
    }
    in_outcomes = true;
    const double x = parse_number<double>(line, "outcome");
    if (!std::isfinite(x)) throw FormatError("outcome must be finite");
    set.outcomes.push_back(x);
  }
  return set;
}

}  // namespace crm::scalar
