#include "crm/multiview/stereo.hpp"

#include <algorithm>
#include <stdexcept>

#include "crm/coding/byte_io.hpp"
#include "crm/coding/frequency_model.hpp"
#include "crm/coding/range_coder.hpp"
#include "crm/error.hpp"
#include "crm/image/pixel_diff.hpp"

namespace crm::multiview {

namespace {

enum class StereoMode : std::uint8_t { kJoint = 0, kIndependent = 1 };

std::vector<std::uint8_t> encode_disparity(const DisparityMap& map) {
  coding::AdaptiveFrequencyModel model(static_cast<std::uint32_t>(map.max_disparity) + 1);
  coding::RangeEncoder enc;
  for (auto d : map.values) enc.encode_symbol(model, d);
  return enc.finish();
}

DisparityMap decode_disparity(std::span<const std::uint8_t> body, int width, int height, int block, int max_d) {
  DisparityMap map{width, height, block, max_d, {}};
  map.values.resize(static_cast<std::size_t>(map.blocks_x()) * map.blocks_y());
  coding::AdaptiveFrequencyModel model(static_cast<std::uint32_t>(max_d) + 1);
  coding::RangeDecoder dec(body);
  for (auto& d : map.values) d = static_cast<std::uint16_t>(dec.decode_symbol(model));
  dec.finish();
  return map;
}

std::vector<std::uint8_t> encode_residual(const image::Image& right, const image::Image& warped) {
  coding::AdaptiveFrequencyModel model(image::kResidualAlphabet);
  coding::RangeEncoder enc;
  for (std::size_t i = 0; i < right.size(); ++i)
    enc.encode_symbol(model, static_cast<std::uint32_t>(right.pixels()[i] - warped.pixels()[i] + image::kResidualOffset));
  return enc.finish();
}

image::Image decode_residual(std::span<const std::uint8_t> body, const image::Image& warped) {
  coding::AdaptiveFrequencyModel model(image::kResidualAlphabet);
  coding::RangeDecoder dec(body);
  image::Image right(warped.width(), warped.height());
  for (std::size_t i = 0; i < right.size(); ++i) {
    const int v = warped.pixels()[i] + static_cast<int>(dec.decode_symbol(model)) - image::kResidualOffset;
    if (v < 0 || v > 255) throw DecodeError("stereo residual reconstructs pixel outside [0, 255]");
    right.pixels()[i] = static_cast<std::uint8_t>(v);
  }
  dec.finish();
  return right;
}

void put_intra(coding::ByteWriter& w, const image::IntraCoding& c) {
  w.put_u8(static_cast<std::uint8_t>(c.mode));
  w.put_block(c.body);
}

image::Image get_intra(coding::ByteReader& r, int width, int height) {
  const auto mode = r.get_u8();
  if (mode > 1) throw DecodeError("unknown intra mode");
  return image::decode_intra(static_cast<image::IntraMode>(mode), r.get_block(), width, height);
}

}  // namespace

StereoEncoding compress_stereo_pair(const image::Image& left, const image::Image& right) {
  if (left.width() != right.width() || left.height() != right.height())
    throw std::invalid_argument("stereo images differ in size");
  const int block = std::min({kDefaultDisparityBlock, left.width(), left.height()});
  const auto map = estimate_disparity(left, right, kDefaultMaxDisparity, block);
  const auto e = encode_disparity(map);
  const auto f = encode_residual(right, warp_left(left, map));
  const auto d = image::encode_intra(right);

  StereoEncoding out;
  out.report = {8 * e.size(), 8 * f.size(), 8 * d.body.size(), false};
  out.report.joint = out.report.saves_bits();

  coding::ByteWriter w;
  w.put_u8(static_cast<std::uint8_t>(out.report.joint ? StereoMode::kJoint : StereoMode::kIndependent));
  w.put_varint(static_cast<std::uint64_t>(left.width()));
  w.put_varint(static_cast<std::uint64_t>(left.height()));
  put_intra(w, image::encode_intra(left));
  if (out.report.joint) {
    w.put_varint(static_cast<std::uint64_t>(block));
    w.put_varint(static_cast<std::uint64_t>(kDefaultMaxDisparity));
    w.put_block(e);
    w.put_block(f);
  } else {
    put_intra(w, d);
  }
  out.bytes = std::move(w).take();
  return out;
}

std::pair<image::Image, image::Image> decompress_stereo_pair(std::span<const std::uint8_t> stream) {
  coding::ByteReader r(stream);
  const auto mode = r.get_u8();
  if (mode > 1) throw DecodeError("unknown stereo mode");
  const auto width = r.get_varint(), height = r.get_varint();
  if (width == 0 || height == 0 || width > (1u << 20) || height > (1u << 20))
    throw DecodeError("invalid image dimensions");
  const int w = static_cast<int>(width), h = static_cast<int>(height);
  image::Image left = get_intra(r, w, h);
  image::Image right;
  if (static_cast<StereoMode>(mode) == StereoMode::kJoint) {
    const auto block = r.get_varint(), max_d = r.get_varint();
    if (block == 0 || block > std::min(width, height) || max_d > 65535) throw DecodeError("invalid disparity header");
    const auto map = decode_disparity(r.get_block(), w, h, static_cast<int>(block), static_cast<int>(max_d));
    right = decode_residual(r.get_block(), warp_left(left, map));
  } else {
    right = get_intra(r, w, h);
  }
  r.expect_end("stereo stream");
  return {std::move(left), std::move(right)};
}

}  // namespace crm::multiview
