#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace crm::scoring {

// Size of the declared compressor artifact plus every encoded payload.
struct NetScore {
  std::string corpus_id;
  std::uint64_t compressor_bytes = 0;
  std::uint64_t payload_bytes = 0;

  // 8 (compressor_bytes + payload_bytes); std::overflow_error past 2^64.
  [[nodiscard]] std::uint64_t total_bits() const;
  friend bool operator==(const NetScore&, const NetScore&) = default;
};

NetScore net_score(std::uint64_t compressor_bytes, std::uint64_t payload_bytes, std::string corpus_id = {});

// The same score with `shim_bytes` appended to the compressor artifact.
NetScore with_shim(const NetScore& score, std::uint64_t shim_bytes);

enum class Preference { kFirst, kSecond, kTie };
std::string_view to_string(Preference p);

// Lower total wins; equal totals are a tie. std::invalid_argument when the
// scores belong to different corpora.
Preference compare_theories(const NetScore& a, const NetScore& b);

inline constexpr double kVastRatio = 100.0;

struct VastnessReport {
  double payload_bits = 0.0;
  double shim_bound_bits = 0.0;
  double ratio = 0.0;
  bool vast = false;  // ratio >= kVastRatio
};

// std::invalid_argument unless shim_bound_bits > 0.
VastnessReport vastness_check(double payload_bits, double shim_bound_bits);

}  // namespace crm::scoring
