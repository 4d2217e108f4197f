#include "crm/scoring/score.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crm::scoring {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) throw std::overflow_error("score overflow");
  return a + b;
}

}  // namespace

std::uint64_t NetScore::total_bits() const {
  const auto bytes = checked_add(compressor_bytes, payload_bytes);
  if (bytes > std::numeric_limits<std::uint64_t>::max() / 8) throw std::overflow_error("score overflow");
  return bytes * 8;
}

NetScore net_score(std::uint64_t compressor_bytes, std::uint64_t payload_bytes, std::string corpus_id) {
  return {std::move(corpus_id), compressor_bytes, payload_bytes};
}

NetScore with_shim(const NetScore& score, std::uint64_t shim_bytes) {
  NetScore out = score;
  out.compressor_bytes = checked_add(score.compressor_bytes, shim_bytes);
  return out;
}

std::string_view to_string(Preference p) {
  switch (p) {
    case Preference::kFirst: return "first";
    case Preference::kSecond: return "second";
    case Preference::kTie: return "tie";
  }
  return "?";
}

Preference compare_theories(const NetScore& a, const NetScore& b) {
  if (a.corpus_id != b.corpus_id)
    throw std::invalid_argument("cannot compare scores on different corpora ('" + a.corpus_id + "' vs '" +
                                b.corpus_id + "')");
  const auto ta = a.total_bits(), tb = b.total_bits();
  if (ta < tb) return Preference::kFirst;
  if (tb < ta) return Preference::kSecond;
  return Preference::kTie;
}

VastnessReport vastness_check(double payload_bits, double shim_bound_bits) {
  if (!(shim_bound_bits > 0.0) || !std::isfinite(shim_bound_bits))
    throw std::invalid_argument("shim bound must be positive");
  if (!(payload_bits >= 0.0) || !std::isfinite(payload_bits)) throw std::invalid_argument("payload must be >= 0");
  VastnessReport r{payload_bits, shim_bound_bits, payload_bits / shim_bound_bits, false};
  r.vast = r.ratio >= kVastRatio;
  return r;
}

}  // namespace crm::scoring
