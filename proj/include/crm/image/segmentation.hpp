#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "crm/coding/codelength.hpp"
#include "crm/image/image.hpp"

namespace crm::image {

// Per-region Gaussian parameters in 8.8 fixed point.
struct RegionParams {
  std::uint16_t mean_q = 0;
  std::uint16_t sigma_q = 0;

  [[nodiscard]] double mean() const { return mean_q / 256.0; }
  [[nodiscard]] double sigma() const { return sigma_q / 256.0; }
  friend bool operator==(const RegionParams&, const RegionParams&) = default;
};

inline constexpr std::uint16_t kSigmaFloorQ = 128;  // sigma >= 0.5
inline constexpr int kInitialBlock = 8;
inline constexpr int kMaxRefinePasses = 32;

// Default weights of the region functional: mu = 2 bits per crack summed
// over both adjacent regions matches the 2-bit chain-code move, and
// lambda = 64 bits is the coded region header (two 16-bit parameters plus
// a 32-bit pixel count).
inline constexpr double kDefaultMu = 2.0;
inline constexpr double kDefaultLambda = 64.0;

using Histogram = std::array<std::uint32_t, 256>;

struct Segmentation {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> region_map;  // dense indices in [0, region_count)
  std::uint32_t region_count = 0;
  std::vector<RegionParams> params;       // one per region

  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

// Maximum-likelihood mean and sigma (floored at 0.5), quantized.
RegionParams fit_region_params(const Histogram& hist);

// Ideal codelength of the histogram's pixels under the region's discretized
// Gaussian over [0, 255].
double region_pixel_bits(const Histogram& hist, RegionParams params);

// Builds a segmentation from a map with dense labels and fits parameters;
// throws std::invalid_argument as validate_segmentation does.
Segmentation make_segmentation(const Image& img, std::vector<std::uint32_t> region_map);

// Throws std::invalid_argument unless labels are dense, every region is
// non-empty and 4-connected, and parameters respect the sigma floor.
void validate_segmentation(const Segmentation& seg, const Image& img);

// Number of 4-neighbour pixel pairs that straddle two regions.
std::size_t count_internal_cracks(const Segmentation& seg);

// Sum over regions of (mu/2) * boundary cracks + pixel bits + lambda.
// Image borders are not boundary; each internal crack counts once for each
// of its two regions.
coding::CodeLengthBits segmentation_cost(const Image& img, const Segmentation& seg, double mu, double lambda);

// Greedy merging from an 8x8 block partition: always applies the adjacent
// merge with the largest cost decrease (ties: lowest region pair) and stops
// when no merge decreases the cost. Boundaries are then refined by raster
// sweeps that move single pixels into a neighbouring region when that lowers
// the cost under the current parameters; a sweep is kept only if the cost
// with refitted parameters goes down. `cost_trace`, when given, receives the
// cost before the first merge, after each accepted merge and after each
// kept sweep.
Segmentation segment_mdl(const Image& img, double mu = kDefaultMu, double lambda = kDefaultLambda,
                         std::vector<double>* cost_trace = nullptr);

// Region stream for a given segmentation: region count, per-region header,
// crack chain codes, then pixels under each region's Gaussian.
std::vector<std::uint8_t> encode_segmented_body(const Image& img, const Segmentation& seg);
Image decode_segmented_body(std::span<const std::uint8_t> body, int width, int height,
                            Segmentation* seg_out = nullptr);

enum class SegmentedMode : std::uint8_t { kRegions = 0, kResidual = 1, kRaw = 2 };

// Standalone stream: mode byte, width and height (varints), body. Falls back
// to pixel-difference or raw coding whenever those are smaller.
std::vector<std::uint8_t> compress_image_segmented(const Image& img);
Image decompress_image_segmented(std::span<const std::uint8_t> stream);

}  // namespace crm::image
