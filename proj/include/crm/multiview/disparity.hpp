#pragma once

#include <cstdint>
#include <vector>

#include "crm/image/image.hpp"

namespace crm::multiview {

inline constexpr int kDefaultDisparityBlock = 8;
inline constexpr int kDefaultMaxDisparity = 32;

// One disparity per block_size x block_size block (edge blocks may be
// partial). Convention: right(x, y) ~ left(x + d, y).
struct DisparityMap {
  int width = 0;
  int height = 0;
  int block_size = kDefaultDisparityBlock;
  int max_disparity = kDefaultMaxDisparity;
  std::vector<std::uint16_t> values;  // row-major over blocks

  [[nodiscard]] int blocks_x() const { return (width + block_size - 1) / block_size; }
  [[nodiscard]] int blocks_y() const { return (height + block_size - 1) / block_size; }
  [[nodiscard]] int at(int x, int y) const {
    return values[static_cast<std::size_t>(y / block_size) * blocks_x() + x / block_size];
  }
  friend bool operator==(const DisparityMap&, const DisparityMap&) = default;
};

// Per block, the d in [0, max_disparity] minimizing the sum of absolute
// differences between the right block and the left block moved by d along
// the scanline (left sampled at min(x + d, width - 1)); smallest d on ties.
// std::invalid_argument for size mismatch, negative max_disparity, or a
// block larger than the image.
DisparityMap estimate_disparity(const image::Image& left, const image::Image& right,
                                int max_disparity = kDefaultMaxDisparity, int block_size = kDefaultDisparityBlock);

// warp(x, y) = left(min(x + d(x, y), width - 1), y)
image::Image warp_left(const image::Image& left, const DisparityMap& disparity);

}  // namespace crm::multiview
