#include "crm/multiview/interp.hpp"

#include <stdexcept>

#include "crm/error.hpp"
#include "frame_coder.hpp"

namespace crm::multiview {

VideoEncoding compress_sequence_interp(const FrameSequence& seq, const InterpOptions& options) {
  seq.validate();
  if (seq.frame_count() < 2) throw std::invalid_argument("interpolation coding needs at least 2 frames");
  if (options.stride < 1 || options.stride > kMaxStride) throw std::invalid_argument("stride must be in [1, 65535]");
  const detail::FrameLayout layout{seq.width(), seq.height(), seq.frame_count(), options.stride, options.motion,
                                   options.epsilon};
  coding::ByteWriter w;
  detail::write_layout(w, layout, seq.frame_rate);
  VideoEncoding out;
  out.modes = detail::encode_frames(w, seq, layout, nullptr);
  out.bytes = std::move(w).take();
  return out;
}

FrameSequence decompress_sequence_interp(std::span<const std::uint8_t> stream) {
  coding::ByteReader r(stream);
  FrameSequence seq;
  const auto layout = detail::read_layout(r, seq.frame_rate);
  seq.frames = detail::decode_frames(r, layout, nullptr);
  r.expect_end("interpolation stream");
  return seq;
}

InterpOptions read_interp_options(std::span<const std::uint8_t> stream) {
  coding::ByteReader r(stream);
  double rate = 0.0;
  const auto layout = detail::read_layout(r, rate);
  return {layout.stride, layout.motion, layout.epsilon};
}

}  // namespace crm::multiview
