#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "crm/image/image.hpp"
#include "crm/multiview/frame_sequence.hpp"

namespace crm::corpus {

// Seeded source for every synthetic generator. Built on std::mt19937_64,
// whose output sequence is fixed by the standard; uniform and normal draws
// are derived here rather than through the implementation-defined
// std::*_distribution so corpora are identical across toolchains.
class Rng {
 public:
  static constexpr const char* kName = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n);
  // Box-Muller standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
};

image::Image gen_random_image(int width, int height, std::uint64_t seed);
image::Image gen_constant_image(int width, int height, std::uint8_t value);
// I(x, y) = x mod 256
image::Image gen_ramp_image(int width, int height);
// Smooth random texture: bilinear value noise at two scales.
image::Image gen_texture(int width, int height, std::uint64_t seed);

// Axis-aligned rectangle [x0, x1) x [y0, y1) with a constant mean.
struct RegionRect {
  int x0, y0, x1, y1;
  double mean;
};

struct LabeledImage {
  image::Image image;
  std::vector<std::uint32_t> truth;  // region index per pixel
};

// Each rectangle becomes one region; together they must cover the image
// exactly once (std::invalid_argument otherwise). Noise is Gaussian, values
// rounded and clipped to [0, 255].
LabeledImage gen_piecewise_constant(int width, int height, std::span<const RegionRect> regions,
                                    double noise_sigma, std::uint64_t seed);

struct StereoPair {
  image::Image left;
  image::Image right;
  std::vector<int> shift;  // true disparity per pixel
};

// right(x, y) = scene(x + d(x, y), y) and left(x, y) = scene(x, y) for a
// textured scene wider than the frame. `near` (when non-empty) is a
// rectangle at `near_shift`; elsewhere the disparity is `far_shift`.
StereoPair gen_stereo_planes(int width, int height, int far_shift, int near_shift, RegionRect near,
                             std::uint64_t seed);

struct BlobVideo {
  multiview::FrameSequence sequence;
  std::vector<std::pair<int, int>> trajectory;  // blob top-left per frame
};

// Static textured background with a bright textured square translating at
// a constant velocity (pixels/frame) from (x0, y0). Throws
// std::invalid_argument if the square ever leaves the frame.
BlobVideo gen_blob_video(int width, int height, int frames, int blob_size, int vx, int vy, double noise_sigma,
                         std::uint64_t seed, int x0 = -1, int y0 = -1);

// Texture panning at (vx, vy) pixels/frame (frames cut from a larger scene).
multiview::FrameSequence gen_translating_texture(int width, int height, int frames, int vx, int vy,
                                                 std::uint64_t seed);

// Independent uniform-random frames.
multiview::FrameSequence gen_random_video(int width, int height, int frames, std::uint64_t seed);

}  // namespace crm::corpus
