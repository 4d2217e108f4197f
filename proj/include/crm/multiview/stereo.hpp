#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "crm/image/image.hpp"
#include "crm/multiview/disparity.hpp"

namespace crm::multiview {

// Section sizes in bits: e (disparity), f (residual right - warp(left)),
// d (right image coded on its own). The joint path is used exactly when
// e + f < d.
struct StereoReport {
  std::uint64_t disparity_bits = 0;
  std::uint64_t residual_bits = 0;
  std::uint64_t independent_bits = 0;
  bool joint = false;

  [[nodiscard]] bool saves_bits() const { return disparity_bits + residual_bits < independent_bits; }
};

struct StereoEncoding {
  std::vector<std::uint8_t> bytes;
  StereoReport report;
};

// Stream: mode (0 joint, 1 independent), width and height (varints), left
// image (intra mode byte + length-prefixed body), then either block size,
// max disparity and the two length-prefixed sections, or the right image
// coded like the left.
StereoEncoding compress_stereo_pair(const image::Image& left, const image::Image& right);
std::pair<image::Image, image::Image> decompress_stereo_pair(std::span<const std::uint8_t> stream);

}  // namespace crm::multiview
