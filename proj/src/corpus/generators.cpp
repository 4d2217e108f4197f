#include "crm/corpus/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crm::corpus {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic lattice noise over the whole integer plane.
class TextureField {
 public:
  explicit TextureField(std::uint64_t seed) : seed_(splitmix(seed)) {}

  [[nodiscard]] double sample(int x, int y) const {
    return 0.65 * octave(x, y, 8, 1) + 0.35 * octave(x, y, 3, 2);
  }

 private:
  [[nodiscard]] double lattice(long ix, long iy, std::uint64_t salt) const {
    const std::uint64_t h = splitmix(seed_ ^ splitmix(static_cast<std::uint64_t>(ix) * 0x100000001B3ull ^
                                                      splitmix(static_cast<std::uint64_t>(iy) + salt)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  }

  [[nodiscard]] double octave(int x, int y, int cell, std::uint64_t salt) const {
    const long gx = static_cast<long>(std::floor(static_cast<double>(x) / cell));
    const long gy = static_cast<long>(std::floor(static_cast<double>(y) / cell));
    const double fx = (x - gx * cell) / static_cast<double>(cell);
    const double fy = (y - gy * cell) / static_cast<double>(cell);
    const double a = lattice(gx, gy, salt), b = lattice(gx + 1, gy, salt);
    const double c = lattice(gx, gy + 1, salt), d = lattice(gx + 1, gy + 1, salt);
    return (a * (1 - fx) + b * fx) * (1 - fy) + (c * (1 - fx) + d * fx) * fy;
  }

  std::uint64_t seed_;
};

std::uint8_t to_pixel(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

std::uint8_t background_value(const TextureField& f, int x, int y) { return to_pixel(30.0 + 140.0 * f.sample(x, y)); }

}  // namespace

image::Image gen_random_image(int width, int height, std::uint64_t seed) {
  image::Image img(width, height);
  Rng rng(seed);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(rng.next() >> 56);
  return img;
}

image::Image gen_constant_image(int width, int height, std::uint8_t value) { return image::Image(width, height, value); }

image::Image gen_ramp_image(int width, int height) {
  image::Image img(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) img.at(x, y) = static_cast<std::uint8_t>(x % 256);
  return img;
}

image::Image gen_texture(int width, int height, std::uint64_t seed) {
  image::Image img(width, height);
  const TextureField field(seed);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) img.at(x, y) = background_value(field, x, y);
  return img;
}

LabeledImage gen_piecewise_constant(int width, int height, std::span<const RegionRect> regions, double noise_sigma,
                                    std::uint64_t seed) {
  if (noise_sigma < 0.0) throw std::invalid_argument("noise sigma must be >= 0");
  constexpr std::uint32_t kUnset = UINT32_MAX;
  std::vector<std::uint32_t> truth(static_cast<std::size_t>(width) * height, kUnset);
  for (std::uint32_t r = 0; r < regions.size(); ++r) {
    const auto& rect = regions[r];
    if (rect.x0 < 0 || rect.y0 < 0 || rect.x1 > width || rect.y1 > height || rect.x0 >= rect.x1 || rect.y0 >= rect.y1)
      throw std::invalid_argument("region outside image");
    for (int y = rect.y0; y < rect.y1; ++y) {
      for (int x = rect.x0; x < rect.x1; ++x) {
        auto& t = truth[static_cast<std::size_t>(y) * width + x];
        if (t != kUnset) throw std::invalid_argument("overlapping regions");
        t = r;
      }
    }
  }
  if (std::find(truth.begin(), truth.end(), kUnset) != truth.end())
    throw std::invalid_argument("regions do not cover the image");
  image::Image img(width, height);
  Rng rng(seed);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double noise = noise_sigma > 0.0 ? noise_sigma * rng.normal() : 0.0;
    img.pixels()[i] = to_pixel(regions[truth[i]].mean + noise);
  }
  return {std::move(img), std::move(truth)};
}

StereoPair gen_stereo_planes(int width, int height, int far_shift, int near_shift, RegionRect near,
                             std::uint64_t seed) {
  if (far_shift < 0 || near_shift < 0) throw std::invalid_argument("shifts must be >= 0");
  const TextureField field(seed);
  StereoPair pair{image::Image(width, height), image::Image(width, height),
                  std::vector<int>(static_cast<std::size_t>(width) * height, far_shift)};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const bool is_near = x >= near.x0 && x < near.x1 && y >= near.y0 && y < near.y1;
      const int d = is_near ? near_shift : far_shift;
      pair.shift[static_cast<std::size_t>(y) * width + x] = d;
      pair.left.at(x, y) = background_value(field, x, y);
      pair.right.at(x, y) = background_value(field, x + d, y);
    }
  }
  return pair;
}

BlobVideo gen_blob_video(int width, int height, int frames, int blob_size, int vx, int vy, double noise_sigma,
                         std::uint64_t seed, int x0, int y0) {
  if (frames < 1 || blob_size < 1 || blob_size > width || blob_size > height)
    throw std::invalid_argument("invalid blob video parameters");
  if (noise_sigma < 0.0) throw std::invalid_argument("noise sigma must be >= 0");
  if (x0 < 0) x0 = vx >= 0 ? std::min(2, width - blob_size) : width - blob_size - std::min(2, width - blob_size);
  if (y0 < 0) y0 = vy == 0 ? (height - blob_size) / 2 : (vy > 0 ? std::min(2, height - blob_size) : height - blob_size);
  const int xl = x0 + vx * (frames - 1), yl = y0 + vy * (frames - 1);
  if (std::min(x0, xl) < 0 || std::max(x0, xl) + blob_size > width || std::min(y0, yl) < 0 ||
      std::max(y0, yl) + blob_size > height)
    throw std::invalid_argument("blob trajectory leaves the frame");

  const TextureField scene(seed);
  const TextureField skin(seed ^ 0xB10Bull);
  Rng rng(seed + 1);
  BlobVideo video;
  video.sequence.frame_rate = 100.0;
  for (int t = 0; t < frames; ++t) {
    const int bx = x0 + vx * t, by = y0 + vy * t;
    video.trajectory.emplace_back(bx, by);
    image::Image f(width, height);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const bool inside = x >= bx && x < bx + blob_size && y >= by && y < by + blob_size;
        double v = inside ? 205.0 + 45.0 * skin.sample(x - bx, y - by) : 30.0 + 140.0 * scene.sample(x, y);
        if (noise_sigma > 0.0) v += noise_sigma * rng.normal();
        f.at(x, y) = to_pixel(v);
      }
    }
    video.sequence.frames.push_back(std::move(f));
  }
  return video;
}

multiview::FrameSequence gen_translating_texture(int width, int height, int frames, int vx, int vy,
                                                 std::uint64_t seed) {
  if (frames < 1) throw std::invalid_argument("need at least one frame");
  const TextureField field(seed);
  multiview::FrameSequence seq;
  for (int t = 0; t < frames; ++t) {
    image::Image f(width, height);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) f.at(x, y) = background_value(field, x + vx * t, y + vy * t);
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

multiview::FrameSequence gen_random_video(int width, int height, int frames, std::uint64_t seed) {
  multiview::FrameSequence seq;
  for (int t = 0; t < frames; ++t) seq.frames.push_back(gen_random_image(width, height, seed + static_cast<std::uint64_t>(t)));
  return seq;
}

}  // namespace crm::corpus
