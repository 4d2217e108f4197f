#include "frame_coder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "crm/coding/frequency_model.hpp"
#include "crm/coding/range_coder.hpp"
#include "crm/error.hpp"
#include "crm/image/pixel_diff.hpp"

namespace crm::multiview {

std::vector<std::size_t> keyframe_indices(std::size_t frame_count, int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  std::vector<std::size_t> keys;
  for (std::size_t k = 0; k < frame_count; k += static_cast<std::size_t>(stride)) keys.push_back(k);
  if (frame_count > 0 && keys.back() != frame_count - 1) keys.push_back(frame_count - 1);
  return keys;
}

namespace detail {

namespace {

using image::Image;

constexpr std::uint32_t kVectorAlphabet = 2 * kMotionSearch + 1;

struct Vector {
  int dx = 0, dy = 0;
};

int blocks_along(int n) { return (n + kMotionBlock - 1) / kMotionBlock; }

// Encoder-side search: per block, displacement v minimizing the SAD between
// the frame and the reference sampled at x + v.
std::vector<Vector> search_vectors(const Image& frame, const Image& ref) {
  const int bw = blocks_along(frame.width()), bh = blocks_along(frame.height());
  std::vector<Vector> vectors(static_cast<std::size_t>(bw) * bh);
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      const int x0 = bx * kMotionBlock, y0 = by * kMotionBlock;
      const int x1 = std::min(x0 + kMotionBlock, frame.width()), y1 = std::min(y0 + kMotionBlock, frame.height());
      auto sad_of = [&](int dx, int dy, long bound) {
        long sad = 0;
        for (int y = y0; y < y1 && sad < bound; ++y)
          for (int x = x0; x < x1; ++x) sad += std::abs(frame.at(x, y) - ref.clamped(x + dx, y + dy));
        return sad;
      };
      Vector best{};
      long best_sad = sad_of(0, 0, std::numeric_limits<long>::max());
      for (int dy = -kMotionSearch; dy <= kMotionSearch && best_sad > 0; ++dy) {
        for (int dx = -kMotionSearch; dx <= kMotionSearch; ++dx) {
          const long sad = sad_of(dx, dy, best_sad);
          if (sad < best_sad) {
            best_sad = sad;
            best = {dx, dy};
          }
        }
      }
      vectors[static_cast<std::size_t>(by) * bw + bx] = best;
    }
  }
  return vectors;
}

Image compensate(const Image& ref, const std::vector<Vector>& vectors) {
  const int bw = blocks_along(ref.width());
  Image out(ref.width(), ref.height());
  for (int y = 0; y < ref.height(); ++y) {
    for (int x = 0; x < ref.width(); ++x) {
      const auto& v = vectors[static_cast<std::size_t>(y / kMotionBlock) * bw + x / kMotionBlock];
      out.at(x, y) = ref.clamped(x + v.dx, y + v.dy);
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_vectors(const std::vector<Vector>& vectors) {
  coding::AdaptiveFrequencyModel model(kVectorAlphabet);
  coding::RangeEncoder enc;
  for (const auto& v : vectors) {
    enc.encode_symbol(model, static_cast<std::uint32_t>(v.dx + kMotionSearch));
    enc.encode_symbol(model, static_cast<std::uint32_t>(v.dy + kMotionSearch));
  }
  return enc.finish();
}

std::vector<Vector> decode_vectors(std::span<const std::uint8_t> bytes, int width, int height) {
  coding::AdaptiveFrequencyModel model(kVectorAlphabet);
  coding::RangeDecoder dec(bytes);
  std::vector<Vector> vectors(static_cast<std::size_t>(blocks_along(width)) * blocks_along(height));
  for (auto& v : vectors) {
    v.dx = static_cast<int>(dec.decode_symbol(model)) - kMotionSearch;
    v.dy = static_cast<int>(dec.decode_symbol(model)) - kMotionSearch;
  }
  dec.finish();
  return vectors;
}

std::uint8_t blend(int pa, int pb, std::size_t t, std::size_t a, std::size_t b) {
  const auto wa = static_cast<long>(b - t), wb = static_cast<long>(t - a), span = static_cast<long>(b - a);
  return static_cast<std::uint8_t>((wa * pa + wb * pb + span / 2) / span);
}

Image linear_interpolation(const Image& ka, const Image& kb, std::size_t t, std::size_t a, std::size_t b) {
  Image out(ka.width(), ka.height());
  for (std::size_t i = 0; i < out.size(); ++i) out.pixels()[i] = blend(ka.pixels()[i], kb.pixels()[i], t, a, b);
  return out;
}

// Decoder-side search: per block, the displacement v between the keyframes
// whose two motion-compensated samples agree best; frame t sits at the
// fraction (t - a) / (b - a) along v.
Image bilateral_interpolation(const Image& ka, const Image& kb, std::size_t t, std::size_t a, std::size_t b) {
  const double alpha = static_cast<double>(t - a) / static_cast<double>(b - a);
  const int bw = blocks_along(ka.width()), bh = blocks_along(ka.height());
  Image out(ka.width(), ka.height());
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      const int x0 = bx * kMotionBlock, y0 = by * kMotionBlock;
      const int x1 = std::min(x0 + kMotionBlock, ka.width()), y1 = std::min(y0 + kMotionBlock, ka.height());
      auto offsets = [&](int vx, int vy) {
        const int ax = static_cast<int>(std::lround(alpha * vx)), ay = static_cast<int>(std::lround(alpha * vy));
        return std::array<int, 4>{ax, ay, vx - ax, vy - ay};
      };
      auto sad_of = [&](int vx, int vy, long bound) {
        const auto o = offsets(vx, vy);
        long sad = 0;
        for (int y = y0; y < y1 && sad < bound; ++y)
          for (int x = x0; x < x1; ++x) sad += std::abs(ka.clamped(x - o[0], y - o[1]) - kb.clamped(x + o[2], y + o[3]));
        return sad;
      };
      int best_x = 0, best_y = 0;
      long best_sad = sad_of(0, 0, std::numeric_limits<long>::max());
      for (int vy = -kMotionSearch; vy <= kMotionSearch && best_sad > 0; ++vy) {
        for (int vx = -kMotionSearch; vx <= kMotionSearch; ++vx) {
          const long sad = sad_of(vx, vy, best_sad);
          if (sad < best_sad) {
            best_sad = sad;
            best_x = vx;
            best_y = vy;
          }
        }
      }
      const auto o = offsets(best_x, best_y);
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
          out.at(x, y) = blend(ka.clamped(x - o[0], y - o[1]), kb.clamped(x + o[2], y + o[3]), t, a, b);
    }
  }
  return out;
}

struct Span {
  std::optional<std::size_t> previous_key;  // keyframes only
  std::size_t a = 0, b = 0;                 // intermediate frames only
  bool keyframe = false;
};

std::vector<Span> spans_for(std::size_t frame_count, int stride) {
  const auto keys = keyframe_indices(frame_count, stride);
  std::vector<Span> spans(frame_count);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    spans[keys[i]].keyframe = true;
    if (i > 0 && stride >= 2) spans[keys[i]].previous_key = keys[i - 1];
    if (i + 1 < keys.size())
      for (std::size_t t = keys[i] + 1; t < keys[i + 1]; ++t) spans[t] = {std::nullopt, keys[i], keys[i + 1], false};
  }
  return spans;
}

// Prediction for an intermediate frame from decoded keyframes.
Image interpolate(const std::vector<Image>& frames, const Span& s, std::size_t t, bool motion) {
  return motion ? bilateral_interpolation(frames[s.a], frames[s.b], t, s.a, s.b)
                : linear_interpolation(frames[s.a], frames[s.b], t, s.a, s.b);
}

}  // namespace

std::vector<std::size_t> coding_order(std::size_t frame_count, int stride) {
  auto order = keyframe_indices(frame_count, stride);
  std::vector<bool> is_key(frame_count, false);
  for (auto k : order) is_key[k] = true;
  for (std::size_t t = 0; t < frame_count; ++t)
    if (!is_key[t]) order.push_back(t);
  return order;
}

std::vector<FrameMode> encode_frames(coding::ByteWriter& out, const FrameSequence& seq, const FrameLayout& layout,
                                     const ScenePredictor& scene) {
  const auto spans = spans_for(layout.frame_count, layout.stride);
  ResidualCoder residuals(layout.epsilon);
  std::vector<FrameMode> modes(layout.frame_count, FrameMode::kRaw);
  for (std::size_t t : coding_order(layout.frame_count, layout.stride)) {
    const Image& frame = seq.frames[t];
    FrameMode best_mode = FrameMode::kRaw;
    std::vector<std::uint8_t> best(frame.pixels().begin(), frame.pixels().end());
    auto offer = [&](FrameMode mode, std::vector<std::uint8_t> payload) {
      if (payload.size() < best.size()) {
        best = std::move(payload);
        best_mode = mode;
      }
    };
    if (auto intra = image::encode_intra(frame); intra.mode == image::IntraMode::kResidual)
      offer(FrameMode::kIntra, std::move(intra.body));

    const Span& s = spans[t];
    if (s.keyframe && s.previous_key) {
      const Image& ref = seq.frames[*s.previous_key];
      if (layout.motion) {
        const auto vectors = search_vectors(frame, ref);
        coding::ByteWriter w;
        w.put_block(encode_vectors(vectors));
        w.put_bytes(residuals.encode(frame, compensate(ref, vectors)));
        offer(FrameMode::kTemporal, std::move(w).take());
      } else {
        offer(FrameMode::kTemporal, residuals.encode(frame, ref));
      }
    } else if (!s.keyframe) {
      offer(FrameMode::kTemporal, residuals.encode(frame, interpolate(seq.frames, s, t, layout.motion)));
    }
    if (scene)
      if (auto pred = scene(t)) offer(FrameMode::kBlob, residuals.encode(frame, *pred));

    modes[t] = best_mode;
    out.put_u8(static_cast<std::uint8_t>(best_mode));
    out.put_block(best);
  }
  return modes;
}

std::vector<image::Image> decode_frames(coding::ByteReader& in, const FrameLayout& layout,
                                        const ScenePredictor& scene) {
  const auto spans = spans_for(layout.frame_count, layout.stride);
  ResidualCoder residuals(layout.epsilon);
  std::vector<Image> frames(layout.frame_count);
  for (std::size_t t : coding_order(layout.frame_count, layout.stride)) {
    const auto mode = in.get_u8();
    const auto payload = in.get_block();
    const Span& s = spans[t];
    switch (static_cast<FrameMode>(mode)) {
      case FrameMode::kRaw:
        frames[t] = image::decode_intra(image::IntraMode::kRaw, payload, layout.width, layout.height);
        break;
      case FrameMode::kIntra:
        frames[t] = image::decode_intra(image::IntraMode::kResidual, payload, layout.width, layout.height);
        break;
      case FrameMode::kTemporal:
        if (s.keyframe && s.previous_key) {
          const Image& ref = frames[*s.previous_key];
          if (layout.motion) {
            coding::ByteReader r(payload);
            const auto vectors = decode_vectors(r.get_block(), layout.width, layout.height);
            frames[t] = residuals.decode(r.get_bytes(r.remaining()), compensate(ref, vectors));
          } else {
            frames[t] = residuals.decode(payload, ref);
          }
        } else if (!s.keyframe) {
          frames[t] = residuals.decode(payload, interpolate(frames, s, t, layout.motion));
        } else {
          throw DecodeError("first keyframe cannot be temporally predicted");
        }
        break;
      case FrameMode::kBlob: {
        auto pred = scene ? scene(t) : std::nullopt;
        if (!pred) throw DecodeError("blob mode without a blob model");
        frames[t] = residuals.decode(payload, *pred);
        break;
      }
      default:
        throw DecodeError("unknown frame mode");
    }
  }
  return frames;
}

void write_layout(coding::ByteWriter& out, const FrameLayout& layout, double frame_rate) {
  out.put_varint(static_cast<std::uint64_t>(layout.width));
  out.put_varint(static_cast<std::uint64_t>(layout.height));
  out.put_varint(layout.frame_count);
  out.put_f64(frame_rate);
  // Options go with their complement so a damaged option is rejected rather
  // than read as another valid setting.
  const auto stride = static_cast<std::uint16_t>(layout.stride);
  out.put_u16(stride);
  out.put_u16(static_cast<std::uint16_t>(~stride));
  out.put_u8(layout.motion ? 1 : 0);
  out.put_u8(layout.motion ? 0xFE : 0xFF);
  out.put_f64(layout.epsilon);
}

FrameLayout read_layout(coding::ByteReader& in, double& frame_rate) {
  FrameLayout layout;
  const auto w = in.get_varint(), h = in.get_varint(), n = in.get_varint();
  frame_rate = in.get_f64();
  const auto stride = in.get_u16();
  const bool stride_ok = static_cast<std::uint16_t>(~in.get_u16()) == stride;
  const auto motion = in.get_u8();
  const bool motion_ok = static_cast<std::uint8_t>(~in.get_u8()) == motion;
  layout.epsilon = in.get_f64();
  if (w == 0 || h == 0 || w > (1u << 16) || h > (1u << 16)) throw DecodeError("invalid frame dimensions");
  // Each frame needs at least a mode byte and a length byte.
  if (n == 0 || n > in.remaining() / 2) throw DecodeError("invalid frame count");
  if (stride == 0 || !stride_ok) throw DecodeError("invalid keyframe stride");
  if (motion > 1 || !motion_ok) throw DecodeError("invalid motion flag");
  if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) throw DecodeError("invalid frame rate");
  if (!(layout.epsilon > 0.0) || !std::isfinite(layout.epsilon)) throw DecodeError("invalid epsilon");
  layout.width = static_cast<int>(w);
  layout.height = static_cast<int>(h);
  layout.frame_count = n;
  layout.stride = static_cast<int>(stride);
  layout.motion = motion == 1;
  return layout;
}

}  // namespace detail

}  // namespace crm::multiview
