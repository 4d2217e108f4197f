#include "crm/multiview/disparity.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace crm::multiview {

DisparityMap estimate_disparity(const image::Image& left, const image::Image& right, int max_disparity,
                                int block_size) {
  if (left.width() != right.width() || left.height() != right.height())
    throw std::invalid_argument("stereo images differ in size");
  if (max_disparity < 0 || max_disparity > 65535) throw std::invalid_argument("max disparity out of range");
  if (block_size < 1 || block_size > left.width() || block_size > left.height())
    throw std::invalid_argument("block larger than image");

  DisparityMap map{left.width(), left.height(), block_size, max_disparity, {}};
  const int w = left.width();
  map.values.resize(static_cast<std::size_t>(map.blocks_x()) * map.blocks_y());
  for (int by = 0; by < map.blocks_y(); ++by) {
    for (int bx = 0; bx < map.blocks_x(); ++bx) {
      const int x0 = bx * block_size, y0 = by * block_size;
      const int x1 = std::min(x0 + block_size, w), y1 = std::min(y0 + block_size, left.height());
      long best = std::numeric_limits<long>::max();
      int best_d = 0;
      for (int d = 0; d <= max_disparity; ++d) {
        long sad = 0;
        for (int y = y0; y < y1 && sad < best; ++y)
          for (int x = x0; x < x1; ++x) sad += std::abs(right.at(x, y) - left.at(std::min(x + d, w - 1), y));
        if (sad < best) {
          best = sad;
          best_d = d;
        }
      }
      map.values[static_cast<std::size_t>(by) * map.blocks_x() + bx] = static_cast<std::uint16_t>(best_d);
    }
  }
  return map;
}

image::Image warp_left(const image::Image& left, const DisparityMap& disparity) {
  if (disparity.width != left.width() || disparity.height != left.height())
    throw std::invalid_argument("disparity map does not match image");
  image::Image out(left.width(), left.height());
  for (int y = 0; y < left.height(); ++y)
    for (int x = 0; x < left.width(); ++x) out.at(x, y) = left.at(std::min(x + disparity.at(x, y), left.width() - 1), y);
  return out;
}

}  // namespace crm::multiview
