#pragma once

#include <cstdint>
#include <vector>

#include "crm/scoring/codecs.hpp"

namespace crm::scoring {

inline constexpr int kMaxAuditBits = 16;
inline constexpr double kKraftTolerance = 1e-9;

// The file fed to a codec for the N-bit input `value`. The bits are packed
// MSB first into ceil(N/8) bytes (zero padded) and shaped for the codec: a
// 1-row image, two 1-row images (bytes padded to an even count), a video of
// 1x1 frames (at least 3), or a trial file whose single outcome is
// 1 + value/1000 seconds. Distinct values give distinct files.
std::vector<std::uint8_t> nfl_input(CodecId codec, int n, std::uint64_t value);

struct NflReport {
  CodecId codec = CodecId::kUniform;
  int n = 0;
  std::uint64_t inputs = 0;
  double mean_bits = 0.0;  // over whole archive item records
  double kraft_sum = 0.0;
  std::uint64_t min_bits = 0;
  std::uint64_t max_bits = 0;
  std::uint64_t raw_items = 0;  // inputs the codec backed off on
  bool prefix_free = false;     // no item record is a prefix of another

  [[nodiscard]] bool mean_ok() const { return mean_bits >= n; }
  [[nodiscard]] bool kraft_ok() const { return kraft_sum <= 1.0 + kKraftTolerance; }
  [[nodiscard]] bool passed() const { return mean_ok() && kraft_ok() && prefix_free; }
};

// Encodes all 2^N inputs through encode_item and measures each codeword as
// the full item record (header and payload). std::invalid_argument unless
// 1 <= n <= kMaxAuditBits.
NflReport nfl_audit(CodecId codec, int n, unsigned jobs = 0);

}  // namespace crm::scoring
