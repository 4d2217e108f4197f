#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crm/image/image.hpp"

namespace crm::image {

// Neighbour-difference residuals: each pixel minus its left neighbour; the
// first column is predicted from the pixel above and the origin from 128.
struct ResidualPlane {
  int width = 0;
  int height = 0;
  std::vector<std::int16_t> values;  // each in [-255, 255]

  friend bool operator==(const ResidualPlane&, const ResidualPlane&) = default;
};

inline constexpr std::uint32_t kResidualAlphabet = 511;
inline constexpr int kResidualOffset = 255;

ResidualPlane pixel_diff_transform(const Image& img);
Image pixel_diff_inverse(const ResidualPlane& plane);

// Headerless image coding shared by every codec that embeds whole frames.
// Mode kResidual is the adaptive 511-symbol residual stream; kRaw stores
// the pixels verbatim and is chosen whenever the residual stream would not
// be smaller.
enum class IntraMode : std::uint8_t { kResidual = 0, kRaw = 1 };

struct IntraCoding {
  IntraMode mode = IntraMode::kResidual;
  std::vector<std::uint8_t> body;
};

IntraCoding encode_intra(const Image& img);
Image decode_intra(IntraMode mode, std::span<const std::uint8_t> body, int width, int height);

// Standalone stream: mode byte, width and height (varints), then the body.
std::vector<std::uint8_t> compress_image_pixeldiff(const Image& img);
Image decompress_image_pixeldiff(std::span<const std::uint8_t> stream);

}  // namespace crm::image
