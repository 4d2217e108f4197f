#include "crm/image/image.hpp"

#include <algorithm>

namespace crm::image {

Image::Image(int width, int height, std::uint8_t fill)
    : Image(width, height,
            std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), fill)) {}

Image::Image(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw std::invalid_argument("pixel count does not match dimensions");
}

std::uint8_t Image::clamped(int x, int y) const {
  return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
}

}  // namespace crm::image
