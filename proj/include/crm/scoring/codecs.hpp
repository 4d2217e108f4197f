#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "crm/multiview/blob.hpp"

namespace crm::scoring {

// Values are the codec id byte of the archive container.
enum class CodecId : std::uint8_t {
  kUniform = 0,
  kPixdiff = 1,
  kSegment = 2,
  kStereo = 3,
  kInterp = 4,
  kBlob = 5,
  kGaussian = 6,
  kInterval = 7,
};

inline constexpr std::array<CodecId, 8> kAllCodecs{CodecId::kUniform, CodecId::kPixdiff,  CodecId::kSegment,
                                                   CodecId::kStereo,  CodecId::kInterp,   CodecId::kBlob,
                                                   CodecId::kGaussian, CodecId::kInterval};

std::string_view codec_name(CodecId id);
std::optional<CodecId> codec_from_name(std::string_view name);
std::optional<CodecId> codec_from_byte(std::uint8_t value);

// File format a codec reads; every item is a whole file.
enum class ItemKind : std::uint8_t {
  kBytes,     // anything
  kImage,     // canonical P5 PGM
  kPair,      // two canonical PGMs back to back (left, right)
  kSequence,  // canonical CRMVID
  kTrials,    // canonical CRMTRIALS
};

ItemKind codec_input_kind(CodecId id);

struct CodecOptions {
  int stride = multiview::kDefaultStride;
  bool motion = true;
  int tau = multiview::kDefaultTau;
};

// Encodes one file. FormatError when the bytes are not in the codec's input
// format, or are but would not re-serialize to the same bytes (the decoder
// can only reproduce the canonical form). std::invalid_argument when the
// content is outside the codec's domain (e.g. a one-frame video).
std::vector<std::uint8_t> codec_encode(CodecId id, std::span<const std::uint8_t> item,
                                       const CodecOptions& options = {});
std::vector<std::uint8_t> codec_decode(CodecId id, std::span<const std::uint8_t> payload);

// Options recorded in a payload (defaults for codecs that record none).
CodecOptions codec_options_of(CodecId id, std::span<const std::uint8_t> payload);

}  // namespace crm::scoring
