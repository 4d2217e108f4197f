#include "crm/scoring/nfl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crm/coding/byte_io.hpp"
#include "crm/corpus/pnm.hpp"
#include "crm/scalar/trials.hpp"
#include "crm/scoring/archive.hpp"
#include "parallel.hpp"

namespace crm::scoring {

namespace {

using Bytes = std::vector<std::uint8_t>;

constexpr std::size_t kMinAuditFrames = 3;

Bytes pack_bits(int n, std::uint64_t value) {
  const std::size_t k = (static_cast<std::size_t>(n) + 7) / 8;
  const std::uint64_t v = value << (8 * k - static_cast<std::size_t>(n));
  Bytes out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * (k - 1 - i)));
  return out;
}

image::Image row_image(std::span<const std::uint8_t> bytes) {
  image::Image img(static_cast<int>(bytes.size()), 1);
  std::copy(bytes.begin(), bytes.end(), img.pixels().begin());
  return img;
}

Bytes item_record(const ArchiveItem& item) {
  coding::ByteWriter w;
  w.put_u8(item.raw ? 1 : 0);
  w.put_u64(item.original_size);
  w.put_u64(item.payload.size());
  w.put_bytes(item.payload);
  return std::move(w).take();
}

}  // namespace

Bytes nfl_input(CodecId codec, int n, std::uint64_t value) {
  if (n < 1 || n > kMaxAuditBits) throw std::invalid_argument("audit size must be in [1, 16] bits");
  if (value >> n) throw std::invalid_argument("value does not fit in n bits");
  Bytes bits = pack_bits(n, value);
  switch (codec_input_kind(codec)) {
    case ItemKind::kBytes: return bits;
    case ItemKind::kImage: return corpus::serialize_pgm(row_image(bits));
    case ItemKind::kPair: {
      if (bits.size() % 2) bits.push_back(0);
      const auto half = std::span<const std::uint8_t>(bits).subspan(0, bits.size() / 2);
      const auto rest = std::span<const std::uint8_t>(bits).subspan(bits.size() / 2);
      Bytes out;
      corpus::append_pgm(out, row_image(half));
      corpus::append_pgm(out, row_image(rest));
      return out;
    }
    case ItemKind::kSequence: {
      bits.resize(std::max(bits.size(), kMinAuditFrames), 0);
      multiview::FrameSequence seq;
      for (auto b : bits) seq.frames.push_back(image::Image(1, 1, b));
      return multiview::serialize_video(seq);
    }
    case ItemKind::kTrials: {
      scalar::TrialSet trials;
      trials.outcomes.push_back(static_cast<double>(1000 + value) / 1000.0);
      const auto text = scalar::serialize_trials(trials);
      return Bytes(text.begin(), text.end());
    }
  }
  throw std::invalid_argument("unknown codec id");
}

NflReport nfl_audit(CodecId codec, int n, unsigned jobs) {
  if (n < 1 || n > kMaxAuditBits) throw std::invalid_argument("audit size must be in [1, 16] bits");
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<Bytes> records(count);
  std::vector<std::uint8_t> raw(count, 0);
  detail::parallel_for(count, jobs, [&](std::size_t v) {
    const auto item = encode_item(codec, nfl_input(codec, n, v));
    raw[v] = item.raw;
    records[v] = item_record(item);
  });

  NflReport report;
  report.codec = codec;
  report.n = n;
  report.inputs = count;
  report.min_bits = std::numeric_limits<std::uint64_t>::max();
  double total = 0.0;
  for (std::uint64_t v = 0; v < count; ++v) {
    const std::uint64_t bits = records[v].size() * 8;
    total += static_cast<double>(bits);
    report.kraft_sum += std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(bits, 2000)));
    report.min_bits = std::min(report.min_bits, bits);
    report.max_bits = std::max(report.max_bits, bits);
    report.raw_items += raw[v];
  }
  report.mean_bits = total / static_cast<double>(count);

  std::sort(records.begin(), records.end());
  report.prefix_free = true;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const auto& a = records[i];
    const auto& b = records[i + 1];
    if (a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin())) {
      report.prefix_free = false;
      break;
    }
  }
  return report;
}

}  // namespace crm::scoring
