#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crm/multiview/flow.hpp"
#include "crm/multiview/frame_sequence.hpp"

namespace crm::multiview {

inline constexpr int kDefaultStride = 4;
inline constexpr int kMaxStride = 65535;
inline constexpr int kMotionBlock = 8;
inline constexpr int kMotionSearch = 16;

struct InterpOptions {
  int stride = kDefaultStride;
  bool motion = true;
  double epsilon = kDefaultEpsilon;
};

// How one frame was stored. Raw and intra are self-contained; temporal
// uses the previous keyframe (keyframes) or the bracketing keyframes
// (intermediate frames); blob uses the blob codec's scene model.
enum class FrameMode : std::uint8_t { kRaw = 0, kIntra = 1, kTemporal = 2, kBlob = 3 };

struct VideoEncoding {
  std::vector<std::uint8_t> bytes;
  std::vector<FrameMode> modes;  // indexed by frame number
};

// Frames 0, stride, 2 stride, ... and the last frame.
std::vector<std::size_t> keyframe_indices(std::size_t frame_count, int stride);

// Keyframes are coded first, then the frames between them. Each frame is
// stored in the cheapest of its candidate modes as (mode byte, varint
// length, payload). With stride >= 2, keyframes after the first may be
// predicted from the previous keyframe (with per-block motion vectors when
// motion is on) and intermediate frames from the bracketing keyframes
// (linear blend, or a decoder-side block search over the displacement
// between the keyframes when motion is on). Stride 1 makes every frame a
// self-contained keyframe. Residuals use the gradient-scaled variance rule.
// std::invalid_argument for fewer than 2 frames or stride outside
// [1, kMaxStride].
VideoEncoding compress_sequence_interp(const FrameSequence& seq, const InterpOptions& options = {});
FrameSequence decompress_sequence_interp(std::span<const std::uint8_t> stream);

// Options a stream was produced with.
InterpOptions read_interp_options(std::span<const std::uint8_t> stream);

}  // namespace crm::multiview
