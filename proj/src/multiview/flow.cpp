#include "crm/multiview/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "crm/coding/byte_io.hpp"
#include "crm/coding/frequency_model.hpp"
#include "crm/coding/gaussian.hpp"
#include "crm/coding/range_coder.hpp"
#include "crm/error.hpp"
#include "crm/image/pixel_diff.hpp"

namespace crm::multiview {

namespace {

constexpr int kResidualLo = -255;
constexpr int kResidualHi = 255;
constexpr int kLevelsPerOctave = 16;
constexpr int kMinLevel = -10 * kLevelsPerOctave;
constexpr int kMaxLevel = 20 * kLevelsPerOctave;

std::uint16_t quantize_scale(double s) {
  return static_cast<std::uint16_t>(std::clamp(std::lround(s * 256.0), 1L, 65535L));
}

}  // namespace

std::vector<std::uint32_t> gradient_energy_x4(const image::Image& img) {
  std::vector<std::uint32_t> out(img.size());
  std::size_t i = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x, ++i) {
      const int gx = img.clamped(x + 1, y) - img.clamped(x - 1, y);
      const int gy = img.clamped(x, y + 1) - img.clamped(x, y - 1);
      out[i] = static_cast<std::uint32_t>(gx * gx + gy * gy);
    }
  }
  return out;
}

std::vector<double> flow_variance(const FlowPrediction& pred) {
  if (!(pred.scale > 0.0) || !(pred.epsilon > 0.0) || !std::isfinite(pred.scale) || !std::isfinite(pred.epsilon))
    throw std::invalid_argument("flow variance needs positive scale and epsilon");
  const auto g4 = gradient_energy_x4(pred.predicted);
  std::vector<double> var(g4.size());
  for (std::size_t i = 0; i < g4.size(); ++i) var[i] = pred.scale * (g4[i] / 4.0 + pred.epsilon);
  return var;
}

coding::CodeLengthBits flow_codelength(const image::Image& real, const FlowPrediction& pred) {
  if (real.width() != pred.predicted.width() || real.height() != pred.predicted.height())
    throw std::invalid_argument("prediction does not match frame size");
  const auto var = flow_variance(pred);
  double bits = 0.0;
  for (std::size_t i = 0; i < var.size(); ++i) {
    const double d = static_cast<double>(real.pixels()[i]) - pred.predicted.pixels()[i];
    bits += d * d * std::numbers::log2e / (2.0 * var[i]) +
            coding::gaussian_log2_normalizer(0.0, var[i], kResidualLo, kResidualHi);
  }
  return coding::CodeLengthBits(bits);
}

double scale_candidate(int index) { return std::exp2((index - 32) / 4.0); }

struct ResidualCoder::Level {
  coding::StaticFrequencyModel model;
  std::vector<double> cost;  // bits per residual symbol under the quantized table
};

ResidualCoder::ResidualCoder(double epsilon) : epsilon_(epsilon), levels_(kMaxLevel - kMinLevel + 1) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
}

ResidualCoder::~ResidualCoder() = default;
ResidualCoder::ResidualCoder(ResidualCoder&&) noexcept = default;
ResidualCoder& ResidualCoder::operator=(ResidualCoder&&) noexcept = default;

int ResidualCoder::level_index(double variance) const {
  const long l = std::lround(kLevelsPerOctave * std::log2(variance));
  return static_cast<int>(std::clamp<long>(l, kMinLevel, kMaxLevel) - kMinLevel);
}

ResidualCoder::Level& ResidualCoder::level(int index) {
  auto& slot = levels_[static_cast<std::size_t>(index)];
  if (!slot) {
    const double var = std::exp2(static_cast<double>(index + kMinLevel) / kLevelsPerOctave);
    auto model = coding::StaticFrequencyModel::from_weights(
        coding::discretized_gaussian(0.0, var, kResidualLo, kResidualHi));
    std::vector<double> cost(image::kResidualAlphabet);
    for (std::uint32_t s = 0; s < cost.size(); ++s) cost[s] = model.cost_bits(s);
    slot = std::make_unique<Level>(Level{std::move(model), std::move(cost)});
  }
  return *slot;
}

double ResidualCoder::ideal_bits(const image::Image& real, const image::Image& predicted, double scale) {
  return ideal_bits(real, predicted, gradient_energy_x4(predicted), scale);
}

double ResidualCoder::ideal_bits(const image::Image& real, const image::Image& predicted,
                                 std::span<const std::uint32_t> g4, double scale) {
  double bits = 0.0;
  for (std::size_t i = 0; i < g4.size(); ++i) {
    const auto& lv = level(level_index(scale * (g4[i] / 4.0 + epsilon_)));
    bits += lv.cost[static_cast<std::size_t>(real.pixels()[i] - predicted.pixels()[i] + image::kResidualOffset)];
  }
  return bits;
}

std::vector<std::uint8_t> ResidualCoder::encode(const image::Image& real, const image::Image& predicted) {
  if (real.width() != predicted.width() || real.height() != predicted.height())
    throw std::invalid_argument("prediction does not match frame size");
  const auto g4 = gradient_energy_x4(predicted);
  std::uint16_t best_q = quantize_scale(1.0);
  double best = INFINITY;
  for (int k = 0; k < kScaleCandidates; ++k) {
    const std::uint16_t q = quantize_scale(scale_candidate(k));
    const double bits = ideal_bits(real, predicted, g4, q / 256.0);
    if (bits < best) {
      best = bits;
      best_q = q;
    }
  }
  const double scale = best_q / 256.0;
  coding::RangeEncoder enc;
  for (std::size_t i = 0; i < g4.size(); ++i) {
    auto& model = level(level_index(scale * (g4[i] / 4.0 + epsilon_))).model;
    enc.encode_symbol(model, static_cast<std::uint32_t>(real.pixels()[i] - predicted.pixels()[i] + image::kResidualOffset));
  }
  coding::ByteWriter w;
  w.put_u16(best_q);
  w.put_bytes(enc.finish());
  return std::move(w).take();
}

image::Image ResidualCoder::decode(std::span<const std::uint8_t> payload, const image::Image& predicted) {
  coding::ByteReader r(payload);
  const std::uint16_t q = r.get_u16();
  if (q == 0) throw DecodeError("residual scale must be positive");
  const double scale = q / 256.0;
  const auto g4 = gradient_energy_x4(predicted);
  coding::RangeDecoder dec(r.get_bytes(r.remaining()));
  image::Image out(predicted.width(), predicted.height());
  for (std::size_t i = 0; i < g4.size(); ++i) {
    auto& model = level(level_index(scale * (g4[i] / 4.0 + epsilon_))).model;
    const int v = predicted.pixels()[i] + static_cast<int>(dec.decode_symbol(model)) - image::kResidualOffset;
    if (v < 0 || v > 255) throw DecodeError("residual reconstructs pixel outside [0, 255]");
    out.pixels()[i] = static_cast<std::uint8_t>(v);
  }
  dec.finish();
  return out;
}

}  // namespace crm::multiview
