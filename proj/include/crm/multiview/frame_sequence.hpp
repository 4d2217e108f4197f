#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crm/image/image.hpp"

namespace crm::multiview {

struct FrameSequence {
  std::vector<image::Image> frames;
  double frame_rate = 100.0;  // Hz

  [[nodiscard]] std::size_t frame_count() const { return frames.size(); }
  [[nodiscard]] int width() const { return frames.empty() ? 0 : frames.front().width(); }
  [[nodiscard]] int height() const { return frames.empty() ? 0 : frames.front().height(); }
  // Non-empty, all frames the same size, positive finite frame rate.
  void validate() const;

  friend bool operator==(const FrameSequence&, const FrameSequence&) = default;
};

// Raw video container: "CRMVID 1\n", then "<width> <height> <frame_count>
// <frame_rate>\n", then each frame's raster bytes (the P5 payload, no
// per-frame header).
std::vector<std::uint8_t> serialize_video(const FrameSequence& seq);
FrameSequence parse_video(std::span<const std::uint8_t> bytes);

}  // namespace crm::multiview
