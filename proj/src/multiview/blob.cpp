#include "crm/multiview/blob.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "crm/error.hpp"
#include "crm/image/pixel_diff.hpp"
#include "frame_coder.hpp"

namespace crm::multiview {

namespace {

constexpr int kQ = 16;  // sub-pixel steps
constexpr std::size_t kMinMovingPixels = 4;

int round_q(std::int64_t v) {
  // Nearest integer of v / 16, halves toward +infinity.
  return static_cast<int>((v + kQ / 2) >= 0 ? (v + kQ / 2) / kQ : -((-(v + kQ / 2) + kQ - 1) / kQ));
}

void put_intra(coding::ByteWriter& w, const image::Image& img) {
  const auto c = image::encode_intra(img);
  w.put_u8(static_cast<std::uint8_t>(c.mode));
  w.put_varint(static_cast<std::uint64_t>(img.width()));
  w.put_varint(static_cast<std::uint64_t>(img.height()));
  w.put_block(c.body);
}

image::Image get_intra(coding::ByteReader& r, int max_w, int max_h) {
  const auto mode = r.get_u8();
  const auto w = r.get_varint(), h = r.get_varint();
  if (mode > 1) throw DecodeError("unknown intra mode");
  if (w == 0 || h == 0 || w > static_cast<std::uint64_t>(max_w) || h > static_cast<std::uint64_t>(max_h))
    throw DecodeError("invalid blob image size");
  return image::decode_intra(static_cast<image::IntraMode>(mode), r.get_block(), static_cast<int>(w),
                             static_cast<int>(h));
}

std::vector<std::uint8_t> encode_with(const FrameSequence& seq, const BlobOptions& options,
                                      const std::optional<BlobModel>& model, std::vector<FrameMode>& modes) {
  const detail::FrameLayout layout{seq.width(), seq.height(), seq.frame_count(), options.interp.stride,
                                   options.interp.motion, options.interp.epsilon};
  coding::ByteWriter w;
  w.put_u8(model ? 1 : 0);
  w.put_u8(static_cast<std::uint8_t>(options.tau));
  w.put_u8(static_cast<std::uint8_t>(~options.tau));
  detail::write_layout(w, layout, seq.frame_rate);
  if (model) {
    put_intra(w, model->background);
    put_intra(w, model->patch);
    w.put_i32(model->x0_q);
    w.put_i32(model->y0_q);
    w.put_i32(model->vx_q);
    w.put_i32(model->vy_q);
  }
  detail::ScenePredictor scene;
  if (model) scene = [&](std::size_t t) -> std::optional<image::Image> { return predict_blob_frame(*model, t); };
  modes = detail::encode_frames(w, seq, layout, scene);
  return std::move(w).take();
}

int read_tau(coding::ByteReader& r) {
  const auto tau = r.get_u8();
  if (static_cast<std::uint8_t>(~r.get_u8()) != tau) throw DecodeError("invalid tau");
  return tau;
}

}  // namespace

std::pair<int, int> BlobModel::position(std::size_t t) const {
  const auto tt = static_cast<std::int64_t>(t);
  return {round_q(x0_q + vx_q * tt), round_q(y0_q + vy_q * tt)};
}

image::Image median_background(const FrameSequence& seq, std::span<const std::size_t> frames) {
  if (frames.empty()) throw std::invalid_argument("median of no frames");
  image::Image out(seq.width(), seq.height());
  std::vector<std::uint8_t> values(frames.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k < frames.size(); ++k) values[k] = seq.frames.at(frames[k]).pixels()[i];
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
    std::nth_element(values.begin(), mid, values.end());
    out.pixels()[i] = *mid;
  }
  return out;
}

std::optional<BlobBox> moving_box(const image::Image& frame, const image::Image& background, int tau) {
  BlobBox box{frame.width(), frame.height(), 0, 0};
  std::size_t count = 0;
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      if (std::abs(frame.at(x, y) - background.at(x, y)) <= tau) continue;
      ++count;
      box.x0 = std::min(box.x0, x);
      box.y0 = std::min(box.y0, y);
      box.x1 = std::max(box.x1, x + 1);
      box.y1 = std::max(box.y1, y + 1);
    }
  }
  if (count < kMinMovingPixels) return std::nullopt;
  return box;
}

std::optional<BlobModel> fit_blob_model(const FrameSequence& seq, const BlobOptions& options) {
  seq.validate();
  const auto keys = keyframe_indices(seq.frame_count(), options.interp.stride);
  image::Image background = median_background(seq, keys);
  std::vector<std::optional<BlobBox>> boxes(seq.frame_count());
  std::vector<std::size_t> detected;
  for (std::size_t t = 0; t < seq.frame_count(); ++t) {
    boxes[t] = moving_box(seq.frames[t], background, options.tau);
    if (boxes[t]) detected.push_back(t);
  }
  if (detected.size() < 2) return std::nullopt;

  std::size_t best_inliers = 0, best_i = 0, best_j = 0;
  for (std::size_t a = 0; a < detected.size(); ++a) {
    for (std::size_t b = a + 1; b < detected.size(); ++b) {
      const std::size_t i = detected[a], j = detected[b];
      const auto& bi = *boxes[i];
      const auto& bj = *boxes[j];
      const auto span = static_cast<double>(j - i);
      const auto vx = static_cast<std::int32_t>(std::lround(kQ * (bj.x0 - bi.x0) / span));
      const auto vy = static_cast<std::int32_t>(std::lround(kQ * (bj.y0 - bi.y0) / span));
      const std::int64_t x0 = std::int64_t{kQ} * bi.x0 - std::int64_t{vx} * static_cast<std::int64_t>(i);
      const std::int64_t y0 = std::int64_t{kQ} * bi.y0 - std::int64_t{vy} * static_cast<std::int64_t>(i);
      std::size_t inliers = 0;
      for (std::size_t t : detected) {
        const auto& bt = *boxes[t];
        const auto tt = static_cast<std::int64_t>(t);
        const bool same_size = std::abs((bt.x1 - bt.x0) - (bi.x1 - bi.x0)) <= 1 &&
                               std::abs((bt.y1 - bt.y0) - (bi.y1 - bi.y0)) <= 1;
        inliers += same_size && std::abs(round_q(x0 + vx * tt) - bt.x0) <= 1 && std::abs(round_q(y0 + vy * tt) - bt.y0) <= 1;
      }
      if (inliers > best_inliers) {
        best_inliers = inliers;
        best_i = i;
        best_j = j;
      }
    }
  }
  if (best_inliers < 2) return std::nullopt;

  const auto& bi = *boxes[best_i];
  const auto& bj = *boxes[best_j];
  const auto span = static_cast<double>(best_j - best_i);
  BlobModel model;
  model.vx_q = static_cast<std::int32_t>(std::lround(kQ * (bj.x0 - bi.x0) / span));
  model.vy_q = static_cast<std::int32_t>(std::lround(kQ * (bj.y0 - bi.y0) / span));
  const std::int64_t x0 = std::int64_t{kQ} * bi.x0 - std::int64_t{model.vx_q} * static_cast<std::int64_t>(best_i);
  const std::int64_t y0 = std::int64_t{kQ} * bi.y0 - std::int64_t{model.vy_q} * static_cast<std::int64_t>(best_i);
  if (std::abs(x0) > (1 << 30) || std::abs(y0) > (1 << 30)) return std::nullopt;
  model.x0_q = static_cast<std::int32_t>(x0);
  model.y0_q = static_cast<std::int32_t>(y0);
  model.patch = image::Image(bi.x1 - bi.x0, bi.y1 - bi.y0);
  for (int y = bi.y0; y < bi.y1; ++y)
    for (int x = bi.x0; x < bi.x1; ++x) model.patch.at(x - bi.x0, y - bi.y0) = seq.frames[best_i].at(x, y);
  model.background = std::move(background);
  return model;
}

image::Image predict_blob_frame(const BlobModel& model, std::size_t t) {
  image::Image out = model.background;
  const auto [px, py] = model.position(t);
  for (int y = 0; y < model.patch.height(); ++y) {
    for (int x = 0; x < model.patch.width(); ++x) {
      const long fx = static_cast<long>(px) + x, fy = static_cast<long>(py) + y;
      if (fx < 0 || fy < 0 || fx >= out.width() || fy >= out.height()) continue;
      out.at(static_cast<int>(fx), static_cast<int>(fy)) = model.patch.at(x, y);
    }
  }
  return out;
}

BlobEncoding compress_sequence_blob(const FrameSequence& seq, const BlobOptions& options) {
  seq.validate();
  if (seq.frame_count() < 3) throw std::invalid_argument("blob coding needs at least 3 frames");
  if (options.interp.stride < 1 || options.interp.stride > kMaxStride)
    throw std::invalid_argument("stride must be in [1, 65535]");
  if (options.tau < 0 || options.tau > 255) throw std::invalid_argument("tau must be in [0, 255]");
  BlobEncoding out;
  out.video.bytes = encode_with(seq, options, std::nullopt, out.video.modes);
  if (auto model = fit_blob_model(seq, options)) {
    std::vector<FrameMode> modes;
    auto bytes = encode_with(seq, options, model, modes);
    if (bytes.size() < out.video.bytes.size()) {
      out.video = {std::move(bytes), std::move(modes)};
      out.blob_used = true;
    }
  }
  return out;
}

BlobOptions read_blob_options(std::span<const std::uint8_t> stream) {
  coding::ByteReader r(stream);
  if (r.get_u8() > 1) throw DecodeError("invalid blob flag");
  BlobOptions options;
  options.tau = read_tau(r);
  double rate = 0.0;
  const auto layout = detail::read_layout(r, rate);
  options.interp = {layout.stride, layout.motion, layout.epsilon};
  return options;
}

FrameSequence decompress_sequence_blob(std::span<const std::uint8_t> stream) {
  coding::ByteReader r(stream);
  const auto flag = r.get_u8();
  if (flag > 1) throw DecodeError("invalid blob flag");
  read_tau(r);  // only needed to re-encode
  FrameSequence seq;
  const auto layout = detail::read_layout(r, seq.frame_rate);
  std::optional<BlobModel> model;
  if (flag == 1) {
    model.emplace();
    model->background = get_intra(r, layout.width, layout.height);
    if (model->background.width() != layout.width || model->background.height() != layout.height)
      throw DecodeError("blob background does not match frame size");
    model->patch = get_intra(r, layout.width, layout.height);
    model->x0_q = r.get_i32();
    model->y0_q = r.get_i32();
    model->vx_q = r.get_i32();
    model->vy_q = r.get_i32();
  }
  detail::ScenePredictor scene;
  if (model) scene = [&](std::size_t t) -> std::optional<image::Image> { return predict_blob_frame(*model, t); };
  seq.frames = detail::decode_frames(r, layout, scene);
  r.expect_end("blob stream");
  return seq;
}

}  // namespace crm::multiview
