#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "crm/coding/codelength.hpp"
#include "crm/image/image.hpp"

namespace crm::multiview {

inline constexpr double kDefaultEpsilon = 1.0;

// Predicted frame with per-pixel residual variance scale * (|grad|^2 + epsilon).
struct FlowPrediction {
  image::Image predicted;
  double scale = 1.0;
  double epsilon = kDefaultEpsilon;
};

// |grad I|^2 from central differences on replicated borders, times 4 so the
// result is an integer: (I(x+1,y) - I(x-1,y))^2 + (I(x,y+1) - I(x,y-1))^2.
std::vector<std::uint32_t> gradient_energy_x4(const image::Image& img);

// Per-pixel variance s * (|grad I_pred|^2 + epsilon). std::invalid_argument
// if scale or epsilon is not positive.
std::vector<double> flow_variance(const FlowPrediction& pred);

// Sum over pixels of (I - I_pred)^2 log2(e) / (2 var) + log2 Z(var), with Z
// the normalizer of the integer residual Gaussian over [-255, 255].
coding::CodeLengthBits flow_codelength(const image::Image& real, const FlowPrediction& pred);

// Residual coding with the variance rule. The scale s is chosen per frame
// from kScaleCandidates and stored as a 16-bit 8.8 fixed-point value; the
// variance used by the coder is rounded to 1/16 octave so tables can be
// shared.
inline constexpr int kScaleCandidates = 45;
double scale_candidate(int index);  // 2^((index - 32) / 4)

class ResidualCoder {
 public:
  explicit ResidualCoder(double epsilon = kDefaultEpsilon);
  ~ResidualCoder();
  ResidualCoder(ResidualCoder&&) noexcept;
  ResidualCoder& operator=(ResidualCoder&&) noexcept;

  // Payload: scale (u16, 8.8) then the range-coded residuals.
  std::vector<std::uint8_t> encode(const image::Image& real, const image::Image& predicted);
  image::Image decode(std::span<const std::uint8_t> payload, const image::Image& predicted);

  // Ideal codelength of real given predicted at scale s under the coder's
  // rounded variances.
  double ideal_bits(const image::Image& real, const image::Image& predicted, double scale);

 private:
  struct Level;
  Level& level(int index);
  double ideal_bits(const image::Image& real, const image::Image& predicted, std::span<const std::uint32_t> g4,
                    double scale);
  int level_index(double variance) const;

  double epsilon_;
  std::vector<std::unique_ptr<Level>> levels_;
};

}  // namespace crm::multiview
