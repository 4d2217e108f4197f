#pragma once

// Frame-by-frame coding shared by the interpolation and blob codecs.

#include <functional>
#include <optional>

#include "crm/coding/byte_io.hpp"
#include "crm/multiview/interp.hpp"

namespace crm::multiview::detail {

// Prediction for frame t from a scene model, or nullopt when the model has
// nothing to say about that frame.
using ScenePredictor = std::function<std::optional<image::Image>(std::size_t)>;

struct FrameLayout {
  int width = 0;
  int height = 0;
  std::size_t frame_count = 0;
  int stride = kDefaultStride;
  bool motion = true;
  double epsilon = kDefaultEpsilon;
};

// Coding order: keyframes ascending, then the remaining frames ascending.
std::vector<std::size_t> coding_order(std::size_t frame_count, int stride);

std::vector<FrameMode> encode_frames(coding::ByteWriter& out, const FrameSequence& seq, const FrameLayout& layout,
                                     const ScenePredictor& scene);
std::vector<image::Image> decode_frames(coding::ByteReader& in, const FrameLayout& layout,
                                        const ScenePredictor& scene);

void write_layout(coding::ByteWriter& out, const FrameLayout& layout, double frame_rate);
FrameLayout read_layout(coding::ByteReader& in, double& frame_rate);

}  // namespace crm::multiview::detail
