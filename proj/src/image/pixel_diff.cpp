#include "crm/image/pixel_diff.hpp"

#include "crm/coding/byte_io.hpp"
#include "crm/coding/frequency_model.hpp"
#include "crm/coding/range_coder.hpp"
#include "crm/error.hpp"

namespace crm::image {

using coding::AdaptiveFrequencyModel;

ResidualPlane pixel_diff_transform(const Image& img) {
  ResidualPlane plane{img.width(), img.height(), std::vector<std::int16_t>(img.size())};
  std::size_t i = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x, ++i) {
      const int predicted = x > 0 ? img.at(x - 1, y) : (y > 0 ? img.at(0, y - 1) : 128);
      plane.values[i] = static_cast<std::int16_t>(img.at(x, y) - predicted);
    }
  }
  return plane;
}

Image pixel_diff_inverse(const ResidualPlane& plane) {
  Image img(plane.width, plane.height);
  if (plane.values.size() != img.size()) throw std::invalid_argument("residual plane size mismatch");
  std::size_t i = 0;
  for (int y = 0; y < plane.height; ++y) {
    for (int x = 0; x < plane.width; ++x, ++i) {
      const int predicted = x > 0 ? img.at(x - 1, y) : (y > 0 ? img.at(0, y - 1) : 128);
      const int v = predicted + plane.values[i];
      if (v < 0 || v > 255) throw DecodeError("residual reconstructs pixel outside [0, 255]");
      img.at(x, y) = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

IntraCoding encode_intra(const Image& img) {
  const ResidualPlane plane = pixel_diff_transform(img);
  AdaptiveFrequencyModel model(kResidualAlphabet);
  coding::RangeEncoder enc;
  for (auto r : plane.values) enc.encode_symbol(model, static_cast<std::uint32_t>(r + kResidualOffset));
  auto body = enc.finish();
  if (body.size() >= img.size()) return {IntraMode::kRaw, {img.pixels().begin(), img.pixels().end()}};
  return {IntraMode::kResidual, std::move(body)};
}

Image decode_intra(IntraMode mode, std::span<const std::uint8_t> body, int width, int height) {
  if (width <= 0 || height <= 0) throw DecodeError("invalid image dimensions");
  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  switch (mode) {
    case IntraMode::kRaw:
      if (body.size() != count) throw DecodeError("raw image body has wrong length");
      return Image(width, height, std::vector<std::uint8_t>(body.begin(), body.end()));
    case IntraMode::kResidual: {
      ResidualPlane plane{width, height, std::vector<std::int16_t>(count)};
      AdaptiveFrequencyModel model(kResidualAlphabet);
      coding::RangeDecoder dec(body);
      for (auto& r : plane.values) r = static_cast<std::int16_t>(static_cast<int>(dec.decode_symbol(model)) - kResidualOffset);
      dec.finish();
      return pixel_diff_inverse(plane);
    }
  }
  throw DecodeError("unknown intra mode");
}

std::vector<std::uint8_t> compress_image_pixeldiff(const Image& img) {
  auto coded = encode_intra(img);
  coding::ByteWriter w;
  w.put_u8(static_cast<std::uint8_t>(coded.mode));
  w.put_varint(static_cast<std::uint64_t>(img.width()));
  w.put_varint(static_cast<std::uint64_t>(img.height()));
  w.put_bytes(coded.body);
  return std::move(w).take();
}

Image decompress_image_pixeldiff(std::span<const std::uint8_t> stream) {
  coding::ByteReader r(stream);
  const std::uint8_t mode = r.get_u8();
  if (mode > 1) throw DecodeError("unknown pixel-difference mode");
  const auto width = r.get_varint();
  const auto height = r.get_varint();
  if (width == 0 || height == 0 || width > (1u << 20) || height > (1u << 20))
    throw DecodeError("invalid image dimensions");
  return decode_intra(static_cast<IntraMode>(mode), r.get_bytes(r.remaining()), static_cast<int>(width),
                      static_cast<int>(height));
}

}  // namespace crm::image
