#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crm/image/image.hpp"
#include "crm/multiview/frame_sequence.hpp"
#include "crm/multiview/interp.hpp"

namespace crm::multiview {

inline constexpr int kDefaultTau = 12;

struct BlobBox {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // [x0, x1) x [y0, y1)
  friend bool operator==(const BlobBox&, const BlobBox&) = default;
};

// Static background plus one rigid patch moving at constant velocity.
// Positions and velocities are in 1/16 pixel.
struct BlobModel {
  image::Image background;
  image::Image patch;
  std::int32_t x0_q = 0, y0_q = 0;  // patch top-left at frame 0
  std::int32_t vx_q = 0, vy_q = 0;  // per frame

  // Integer top-left of the patch at frame t (rounded to nearest).
  [[nodiscard]] std::pair<int, int> position(std::size_t t) const;
  friend bool operator==(const BlobModel&, const BlobModel&) = default;
};

struct BlobOptions {
  int tau = kDefaultTau;
  InterpOptions interp{};
};

// Per-pixel median over the given frames (lower median for even counts).
image::Image median_background(const FrameSequence& seq, std::span<const std::size_t> frames);

// Bounding box of pixels with |frame - background| > tau, if any.
std::optional<BlobBox> moving_box(const image::Image& frame, const image::Image& background, int tau);

// Background from the keyframes, then the constant-velocity track that
// agrees (within one pixel, same box size) with the most per-frame
// detections; candidate tracks come from pairs of detections, earliest
// pair first on ties. nullopt when fewer than two frames show motion.
std::optional<BlobModel> fit_blob_model(const FrameSequence& seq, const BlobOptions& options = {});

// Background with the patch pasted at its position for frame t.
image::Image predict_blob_frame(const BlobModel& model, std::size_t t);

struct BlobEncoding {
  VideoEncoding video;
  bool blob_used = false;
};

// Stream: flag byte (1 when a blob model is present), tau and its
// complement, the frame
// layout as in compress_sequence_interp, the model (background and patch as
// intra images, patch track as four signed 32-bit values), then the frames
// with an extra blob-predicted mode.
// Also tries the stream without a model and keeps the smaller.
// std::invalid_argument for fewer than 3 frames.
BlobEncoding compress_sequence_blob(const FrameSequence& seq, const BlobOptions& options = {});
FrameSequence decompress_sequence_blob(std::span<const std::uint8_t> stream);

// Options a stream was produced with.
BlobOptions read_blob_options(std::span<const std::uint8_t> stream);

}  // namespace crm::multiview
