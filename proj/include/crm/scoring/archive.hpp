#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crm/scoring/codecs.hpp"

namespace crm::scoring {

// Container: "CRMA", version byte, codec id byte, item count (u64 BE), then
// per item a flag byte (bit 0: stored raw), original length (u64 BE),
// encoded length (u64 BE) and the encoded bytes.
inline constexpr std::uint8_t kArchiveVersion = 1;
inline constexpr std::size_t kArchiveHeaderBytes = 14;
inline constexpr std::size_t kItemHeaderBytes = 17;

struct ArchiveItem {
  bool raw = false;  // codec lost bits or could not take the item
  std::uint64_t original_size = 0;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const ArchiveItem&, const ArchiveItem&) = default;
};

struct Archive {
  CodecId codec = CodecId::kUniform;
  std::vector<ArchiveItem> items;

  [[nodiscard]] std::uint64_t payload_bytes() const;
  [[nodiscard]] std::uint64_t container_bytes() const { return kArchiveHeaderBytes + kItemHeaderBytes * items.size(); }
  friend bool operator==(const Archive&, const Archive&) = default;
};

std::vector<std::uint8_t> serialize_archive(const Archive& archive);
// DecodeError on a bad magic, version, codec id, flag or length.
Archive parse_archive(std::span<const std::uint8_t> bytes);

// The codec's payload, or the item itself when the codec rejects it or
// does not make it smaller.
ArchiveItem encode_item(CodecId codec, std::span<const std::uint8_t> item, const CodecOptions& options = {});
std::vector<std::uint8_t> decode_item(CodecId codec, const ArchiveItem& item);

// jobs == 0 uses every hardware thread. Output does not depend on jobs.
Archive compress_items(CodecId codec, std::span<const std::vector<std::uint8_t>> items,
                       const CodecOptions& options = {}, unsigned jobs = 0);
std::vector<std::vector<std::uint8_t>> decompress_archive(const Archive& archive, unsigned jobs = 0);

struct ItemCheck {
  std::size_t index = 0;
  bool passed = false;
  std::uint64_t payload_bits = 0;
  std::string reason;  // empty when passed
};

struct VerificationReport {
  bool passed = false;
  std::string error;  // archive-level problem (unreadable, wrong item count)
  std::vector<ItemCheck> items;
  std::uint64_t archive_bits = 0;
  std::uint64_t container_bits = 0;
  std::uint64_t payload_bits = 0;  // archive_bits - container_bits

  [[nodiscard]] std::optional<std::size_t> first_failure() const;
};

// Decodes every item and compares it with the original byte for byte. A
// coded item must also be exactly what the codec produces for the original
// (with the options recorded in the payload) and not something the codec
// backs off on, so a changed bit is caught even where it would not change
// the decoded bytes. Problems are reported, not thrown.
VerificationReport verify_roundtrip(std::span<const std::uint8_t> archive_bytes,
                                    std::span<const std::vector<std::uint8_t>> originals, unsigned jobs = 0);

}  // namespace crm::scoring
