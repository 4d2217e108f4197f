#include "crm/multiview/frame_sequence.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "crm/error.hpp"

namespace crm::multiview {

namespace {

std::string format_rate(double rate) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, rate);
  return std::string(buf, res.ptr);
}

}  // namespace

void FrameSequence::validate() const {
  if (frames.empty()) throw std::invalid_argument("sequence has no frames");
  for (const auto& f : frames)
    if (f.width() != frames.front().width() || f.height() != frames.front().height())
      throw std::invalid_argument("frames differ in size");
  if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) throw std::invalid_argument("frame rate must be positive");
}

std::vector<std::uint8_t> serialize_video(const FrameSequence& seq) {
  seq.validate();
  const std::string header = "CRMVID 1\n" + std::to_string(seq.width()) + " " + std::to_string(seq.height()) + " " +
                             std::to_string(seq.frame_count()) + " " + format_rate(seq.frame_rate) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  for (const auto& f : seq.frames) out.insert(out.end(), f.pixels().begin(), f.pixels().end());
  return out;
}

FrameSequence parse_video(std::span<const std::uint8_t> bytes) {
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  constexpr std::string_view kMagic = "CRMVID 1\n";
  if (!text.starts_with(kMagic)) throw FormatError("not a CRMVID 1 container");
  const auto eol = text.find('\n', kMagic.size());
  if (eol == std::string_view::npos) throw FormatError("CRMVID header truncated");
  const std::string_view fields = text.substr(kMagic.size(), eol - kMagic.size());

  long long values[3] = {0, 0, 0};
  const char* p = fields.data();
  const char* end = fields.data() + fields.size();
  for (auto& v : values) {
    auto res = std::from_chars(p, end, v);
    if (res.ec != std::errc() || res.ptr == end || *res.ptr != ' ') throw FormatError("CRMVID header malformed");
    p = res.ptr + 1;
  }
  double rate = 0.0;
  auto res = std::from_chars(p, end, rate);
  if (res.ec != std::errc() || res.ptr != end) throw FormatError("CRMVID frame rate malformed");
  const auto [w, h, n] = values;
  if (w <= 0 || h <= 0 || n <= 0 || w > (1 << 20) || h > (1 << 20)) throw FormatError("CRMVID dimensions invalid");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw FormatError("CRMVID frame rate invalid");

  const auto frame_size = static_cast<std::size_t>(w * h);
  const std::size_t payload = bytes.size() - (eol + 1);
  if (payload / frame_size < static_cast<std::size_t>(n) || payload != frame_size * static_cast<std::size_t>(n))
    throw FormatError("CRMVID payload length does not match header");
  FrameSequence seq;
  seq.frame_rate = rate;
  seq.frames.reserve(static_cast<std::size_t>(n));
  auto it = bytes.begin() + static_cast<std::ptrdiff_t>(eol + 1);
  for (long long i = 0; i < n; ++i) {
    seq.frames.emplace_back(static_cast<int>(w), static_cast<int>(h),
                            std::vector<std::uint8_t>(it, it + static_cast<std::ptrdiff_t>(frame_size)));
    it += static_cast<std::ptrdiff_t>(frame_size);
  }
  return seq;
}

}  // namespace crm::multiview
