#include "crm/scoring/archive.hpp"

#include <algorithm>
#include <stdexcept>

#include "crm/coding/byte_io.hpp"
#include "crm/error.hpp"
#include "parallel.hpp"

namespace crm::scoring {

namespace {

constexpr std::uint8_t kMagic[4] = {'C', 'R', 'M', 'A'};
constexpr std::uint8_t kRawFlag = 1;

bool same(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

ArchiveItem raw_item(std::span<const std::uint8_t> item) {
  return {true, item.size(), std::vector<std::uint8_t>(item.begin(), item.end())};
}

ItemCheck check_item(CodecId codec, const ArchiveItem& stored, std::span<const std::uint8_t> original,
                     std::size_t index) {
  ItemCheck check{index, false, stored.payload.size() * 8, {}};
  try {
    const auto decoded = decode_item(codec, stored);
    if (!same(decoded, original)) {
      check.reason = "decoded bytes differ from the original";
      return check;
    }
    // A raw flag flipped on needs the codec payload to equal the original,
    // which only the uniform codec produces, and it never stores coded items.
    if (!stored.raw) {
      const auto expected = encode_item(codec, original, codec_options_of(codec, stored.payload));
      if (expected.raw || !same(expected.payload, stored.payload)) {
        check.reason = "payload is not the codec's encoding of the original";
        return check;
      }
    }
    check.passed = true;
  } catch (const std::exception& e) {
    check.reason = std::string("decode failed: ") + e.what();
  }
  return check;
}

}  // namespace

std::uint64_t Archive::payload_bytes() const {
  std::uint64_t n = 0;
  for (const auto& item : items) n += item.payload.size();
  return n;
}

std::vector<std::uint8_t> serialize_archive(const Archive& archive) {
  coding::ByteWriter w;
  w.put_bytes(kMagic);
  w.put_u8(kArchiveVersion);
  w.put_u8(static_cast<std::uint8_t>(archive.codec));
  w.put_u64(archive.items.size());
  for (const auto& item : archive.items) {
    w.put_u8(item.raw ? kRawFlag : 0);
    w.put_u64(item.original_size);
    w.put_u64(item.payload.size());
    w.put_bytes(item.payload);
  }
  return std::move(w).take();
}

Archive parse_archive(std::span<const std::uint8_t> bytes) {
  coding::ByteReader r(bytes);
  if (!same(r.get_bytes(4), kMagic)) throw DecodeError("not a CRMA archive");
  if (r.get_u8() != kArchiveVersion) throw DecodeError("unsupported archive version");
  const auto codec = codec_from_byte(r.get_u8());
  if (!codec) throw DecodeError("unknown codec id");
  const auto count = r.get_u64();
  if (count > r.remaining() / kItemHeaderBytes) throw DecodeError("item count exceeds archive size");
  Archive archive;
  archive.codec = *codec;
  archive.items.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    ArchiveItem item;
    const auto flag = r.get_u8();
    if (flag & ~kRawFlag) throw DecodeError("invalid item flag");
    item.raw = flag == kRawFlag;
    item.original_size = r.get_u64();
    const auto length = r.get_u64();
    if (length > r.remaining()) throw DecodeError("item length exceeds archive size");
    const auto payload = r.get_bytes(static_cast<std::size_t>(length));
    item.payload.assign(payload.begin(), payload.end());
    if (item.raw && item.original_size != item.payload.size()) throw DecodeError("raw item length mismatch");
    archive.items.push_back(std::move(item));
  }
  r.expect_end("archive");
  return archive;
}

ArchiveItem encode_item(CodecId codec, std::span<const std::uint8_t> item, const CodecOptions& options) {
  std::vector<std::uint8_t> payload;
  try {
    payload = codec_encode(codec, item, options);
  } catch (const FormatError&) {
    return raw_item(item);
  } catch (const std::invalid_argument&) {
    return raw_item(item);
  }
  if (payload.size() >= item.size()) return raw_item(item);
  return {false, item.size(), std::move(payload)};
}

std::vector<std::uint8_t> decode_item(CodecId codec, const ArchiveItem& item) {
  if (item.raw) return item.payload;
  auto out = codec_decode(codec, item.payload);
  if (out.size() != item.original_size) throw DecodeError("decoded length does not match the recorded length");
  return out;
}

Archive compress_items(CodecId codec, std::span<const std::vector<std::uint8_t>> items, const CodecOptions& options,
                       unsigned jobs) {
  Archive archive;
  archive.codec = codec;
  archive.items.resize(items.size());
  detail::parallel_for(items.size(), jobs, [&](std::size_t i) { archive.items[i] = encode_item(codec, items[i], options); });
  return archive;
}

std::vector<std::vector<std::uint8_t>> decompress_archive(const Archive& archive, unsigned jobs) {
  std::vector<std::vector<std::uint8_t>> out(archive.items.size());
  detail::parallel_for(out.size(), jobs, [&](std::size_t i) { out[i] = decode_item(archive.codec, archive.items[i]); });
  return out;
}

std::optional<std::size_t> VerificationReport::first_failure() const {
  for (const auto& item : items)
    if (!item.passed) return item.index;
  return std::nullopt;
}

VerificationReport verify_roundtrip(std::span<const std::uint8_t> archive_bytes,
                                    std::span<const std::vector<std::uint8_t>> originals, unsigned jobs) {
  VerificationReport report;
  report.archive_bits = archive_bytes.size() * 8;
  Archive archive;
  try {
    archive = parse_archive(archive_bytes);
  } catch (const std::exception& e) {
    report.error = std::string("unreadable archive: ") + e.what();
    return report;
  }
  report.container_bits = archive.container_bytes() * 8;
  report.payload_bits = report.archive_bits - report.container_bits;
  if (archive.items.size() != originals.size()) {
    report.error = "archive holds " + std::to_string(archive.items.size()) + " items, expected " +
                   std::to_string(originals.size());
    return report;
  }
  report.items.resize(archive.items.size());
  detail::parallel_for(archive.items.size(), jobs, [&](std::size_t i) {
    report.items[i] = check_item(archive.codec, archive.items[i], originals[i], i);
  });
  report.passed = std::all_of(report.items.begin(), report.items.end(), [](const ItemCheck& c) { return c.passed; });
  return report;
}

}  // namespace crm::scoring
