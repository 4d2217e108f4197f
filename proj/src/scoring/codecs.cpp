#include "crm/scoring/codecs.hpp"

#include <algorithm>
#include <stdexcept>

#include "crm/corpus/pnm.hpp"
#include "crm/error.hpp"
#include "crm/image/pixel_diff.hpp"
#include "crm/image/segmentation.hpp"
#include "crm/multiview/stereo.hpp"
#include "crm/scalar/codec.hpp"

namespace crm::scoring {

namespace {

using Bytes = std::vector<std::uint8_t>;

constexpr std::array<std::string_view, 8> kNames{"uniform", "pixdiff", "segment", "stereo",
                                                 "interp",  "blob",    "gaussian", "interval"};

bool same(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

image::Image canonical_image(std::span<const std::uint8_t> item) {
  auto img = corpus::parse_pgm(item);
  if (!same(corpus::serialize_pgm(img), item)) throw FormatError("image is not in canonical PGM form");
  return img;
}

std::vector<image::Image> canonical_pair(std::span<const std::uint8_t> item) {
  auto images = corpus::parse_pgm_sequence(item);
  if (images.size() != 2) throw FormatError("stereo item must hold exactly two images");
  Bytes again;
  for (const auto& img : images) corpus::append_pgm(again, img);
  if (!same(again, item)) throw FormatError("stereo pair is not in canonical PGM form");
  return images;
}

multiview::FrameSequence canonical_video(std::span<const std::uint8_t> item) {
  auto seq = multiview::parse_video(item);
  if (!same(multiview::serialize_video(seq), item)) throw FormatError("video is not in canonical CRMVID form");
  return seq;
}

}  // namespace

std::string_view codec_name(CodecId id) {
  const auto i = static_cast<std::size_t>(id);
  if (i >= kNames.size()) throw std::invalid_argument("unknown codec id");
  return kNames[i];
}

std::optional<CodecId> codec_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<CodecId>(i);
  return std::nullopt;
}

std::optional<CodecId> codec_from_byte(std::uint8_t value) {
  if (value >= kNames.size()) return std::nullopt;
  return static_cast<CodecId>(value);
}

ItemKind codec_input_kind(CodecId id) {
  switch (id) {
    case CodecId::kUniform: return ItemKind::kBytes;
    case CodecId::kPixdiff:
    case CodecId::kSegment: return ItemKind::kImage;
    case CodecId::kStereo: return ItemKind::kPair;
    case CodecId::kInterp:
    case CodecId::kBlob: return ItemKind::kSequence;
    case CodecId::kGaussian:
    case CodecId::kInterval: return ItemKind::kTrials;
  }
  throw std::invalid_argument("unknown codec id");
}

Bytes codec_encode(CodecId id, std::span<const std::uint8_t> item, const CodecOptions& options) {
  switch (id) {
    case CodecId::kUniform: return Bytes(item.begin(), item.end());
    case CodecId::kPixdiff: return image::compress_image_pixeldiff(canonical_image(item));
    case CodecId::kSegment: return image::compress_image_segmented(canonical_image(item));
    case CodecId::kStereo: {
      const auto pair = canonical_pair(item);
      return multiview::compress_stereo_pair(pair[0], pair[1]).bytes;
    }
    case CodecId::kInterp:
      return multiview::compress_sequence_interp(canonical_video(item), {options.stride, options.motion}).bytes;
    case CodecId::kBlob:
      return multiview::compress_sequence_blob(canonical_video(item),
                                               {options.tau, {options.stride, options.motion}})
          .video.bytes;
    case CodecId::kGaussian: return scalar::compress_trials(item, scalar::default_gaussian_model());
    case CodecId::kInterval: return scalar::compress_trials(item, scalar::default_interval_model());
  }
  throw std::invalid_argument("unknown codec id");
}

Bytes codec_decode(CodecId id, std::span<const std::uint8_t> payload) {
  switch (id) {
    case CodecId::kUniform: return Bytes(payload.begin(), payload.end());
    case CodecId::kPixdiff: return corpus::serialize_pgm(image::decompress_image_pixeldiff(payload));
    case CodecId::kSegment: return corpus::serialize_pgm(image::decompress_image_segmented(payload));
    case CodecId::kStereo: {
      const auto [left, right] = multiview::decompress_stereo_pair(payload);
      Bytes out;
      corpus::append_pgm(out, left);
      corpus::append_pgm(out, right);
      return out;
    }
    case CodecId::kInterp: return multiview::serialize_video(multiview::decompress_sequence_interp(payload));
    case CodecId::kBlob: return multiview::serialize_video(multiview::decompress_sequence_blob(payload));
    case CodecId::kGaussian: return scalar::decompress_trials(payload, scalar::default_gaussian_model());
    case CodecId::kInterval: return scalar::decompress_trials(payload, scalar::default_interval_model());
  }
  throw std::invalid_argument("unknown codec id");
}

CodecOptions codec_options_of(CodecId id, std::span<const std::uint8_t> payload) {
  CodecOptions options;
  if (id == CodecId::kInterp) {
    const auto o = multiview::read_interp_options(payload);
    options.stride = o.stride;
    options.motion = o.motion;
  } else if (id == CodecId::kBlob) {
    const auto o = multiview::read_blob_options(payload);
    options.stride = o.interp.stride;
    options.motion = o.interp.motion;
    options.tau = o.tau;
  }
  return options;
}

}  // namespace crm::scoring
