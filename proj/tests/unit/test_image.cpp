#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "crm/corpus/generators.hpp"
#include "crm/corpus/pnm.hpp"
#include "crm/error.hpp"
#include "crm/image/pixel_diff.hpp"
#include "crm/image/segmentation.hpp"

using namespace crm;
using namespace crm::image;

namespace {

Image natural(const char* name) { return corpus::load_pnm(std::string(CRM_DATA_DIR) + "/natural/" + name + ".pgm"); }

// Direct evaluation of -log2 of the normalized point mass, pixel by pixel.
double oracle_pixel_bits(const Image& img, const std::vector<std::uint32_t>& map, std::uint32_t label,
                         RegionParams p) {
  const double var = p.sigma() * p.sigma();
  double z = 0.0;
  for (int v = 0; v < 256; ++v) z += std::exp(-(v - p.mean()) * (v - p.mean()) / (2 * var));
  double bits = 0.0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] != label) continue;
    const double d = img.pixels()[i] - p.mean();
    bits += -std::log2(std::exp(-d * d / (2 * var)) / z);
  }
  return bits;
}

double mass_within(const ResidualPlane& r, int k) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < r.values.size(); ++i) n += std::abs(r.values[i]) <= k;
  return static_cast<double>(n) / static_cast<double>(r.values.size() - 1);
}

corpus::LabeledImage two_region(int w, int h, double noise, std::uint64_t seed) {
  const std::array<corpus::RegionRect, 2> rects{{{0, 0, w / 2, h, 70.0}, {w / 2, 0, w, h, 170.0}}};
  return corpus::gen_piecewise_constant(w, h, rects, noise, seed);
}

corpus::LabeledImage three_region(int w, int h, double noise, std::uint64_t seed) {
  const std::array<corpus::RegionRect, 3> rects{
      {{0, 0, w / 3, h, 50.0}, {w / 3, 0, w, h / 2, 120.0}, {w / 3, h / 2, w, h, 200.0}}};
  return corpus::gen_piecewise_constant(w, h, rects, noise, seed);
}

}  // namespace

TEST_CASE("pixel difference transform examples") {
  const auto flat = pixel_diff_transform(corpus::gen_constant_image(13, 9, 77));
  CHECK(flat.values[0] == -51);
  for (std::size_t i = 1; i < flat.values.size(); ++i) CHECK(flat.values[i] == 0);

  const auto ramp = pixel_diff_transform(corpus::gen_ramp_image(40, 6));
  CHECK(ramp.values[0] == 0 - 128);
  for (int y = 0; y < 6; ++y)
    for (int x = 1; x < 40; ++x) CHECK(ramp.values[static_cast<std::size_t>(y) * 40 + x] == 1);
  // First column is predicted from above.
  for (int y = 1; y < 6; ++y) CHECK(ramp.values[static_cast<std::size_t>(y) * 40] == 0);
}

TEST_CASE("pixel difference transform inverts exactly") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    corpus::Rng rng(seed);
    const int w = 1 + static_cast<int>(rng.below(40)), h = 1 + static_cast<int>(rng.below(40));
    const Image img = seed % 2 ? corpus::gen_random_image(w, h, seed) : corpus::gen_texture(w, h, seed);
    CHECK(pixel_diff_inverse(pixel_diff_transform(img)) == img);
  }
  const Image cam = natural("camera");
  CHECK(pixel_diff_inverse(pixel_diff_transform(cam)) == cam);

  ResidualPlane bad{2, 1, {100, 200}};  // 228 + 200 > 255
  CHECK_THROWS_AS((void)pixel_diff_inverse(bad), DecodeError);
}

TEST_CASE("natural residuals cluster around zero, random ones do not") {
  const double nat = mass_within(pixel_diff_transform(natural("camera")), 8);
  const double rnd = mass_within(pixel_diff_transform(corpus::gen_random_image(256, 256, 3)), 8);
  CHECK(nat > 0.60);
  // 17 of 511 differences, triangularly weighted: about 17/256.
  CHECK(rnd == doctest::Approx(17.0 / 256).epsilon(0.15));
}

TEST_CASE("pixel difference codec sizes") {
  SUBCASE("natural images beat 8 bits per pixel by 30%") {
    for (const char* name : {"camera", "coins", "text", "clock"}) {
      const Image img = natural(name);
      const auto enc = compress_image_pixeldiff(img);
      CAPTURE(name);
      CHECK(enc.size() <= 0.70 * img.size());
      CHECK(decompress_image_pixeldiff(enc) == img);
    }
  }
  SUBCASE("constant 16x16") {
    const auto enc = compress_image_pixeldiff(corpus::gen_constant_image(16, 16, 77));
    CHECK(8 * enc.size() < 200);
  }
  SUBCASE("uniform random 64x64 stays within 1% plus header") {
    const auto enc = compress_image_pixeldiff(corpus::gen_random_image(64, 64, 11));
    CHECK(8.0 * enc.size() <= 32768 * 1.01 + 8 * 32);
  }
}

TEST_CASE("pixel difference codec rejects corrupt streams") {
  const auto enc = compress_image_pixeldiff(corpus::gen_texture(32, 32, 1));
  CHECK_THROWS_AS((void)decompress_image_pixeldiff(std::span(enc).first(enc.size() - 1)), DecodeError);
  auto bad_mode = enc;
  bad_mode[0] = 9;
  CHECK_THROWS_AS((void)decompress_image_pixeldiff(bad_mode), DecodeError);
}

TEST_CASE("segmentation cost: single region") {
  const Image img = corpus::gen_constant_image(32, 32, 90);
  const auto seg = make_segmentation(img, std::vector<std::uint32_t>(img.size(), 0));
  CHECK(seg.region_count == 1);
  CHECK(seg.params[0].mean_q == 90 * 256);
  CHECK(seg.params[0].sigma_q == kSigmaFloorQ);
  const double pix = oracle_pixel_bits(img, seg.region_map, 0, seg.params[0]);
  CHECK(segmentation_cost(img, seg, 2.0, 64.0).bits() == doctest::Approx(64.0 + pix).epsilon(1e-9));
  CHECK(count_internal_cracks(seg) == 0);
}

TEST_CASE("segmentation cost: vertical split of 32x32") {
  const auto li = two_region(32, 32, 2.0, 5);
  const auto seg = make_segmentation(li.image, li.truth);
  CHECK(count_internal_cracks(seg) == 32);
  double pix = 0.0;
  for (std::uint32_t r = 0; r < 2; ++r) pix += oracle_pixel_bits(li.image, seg.region_map, r, seg.params[r]);
  const double expected = 2 * 64.0 + 2 * (2.0 / 2) * 32 + pix;
  CHECK(segmentation_cost(li.image, seg, 2.0, 64.0).bits() == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("segmentation cost: per-pixel degeneracy loses on constant images") {
  for (double lambda : {64.0, 128.0, 1024.0}) {
    const Image img = corpus::gen_constant_image(12, 12, 40);
    std::vector<std::uint32_t> per_pixel(img.size());
    for (std::uint32_t i = 0; i < per_pixel.size(); ++i) per_pixel[i] = i;
    const auto fine = make_segmentation(img, per_pixel);
    const auto one = make_segmentation(img, std::vector<std::uint32_t>(img.size(), 0));
    const double fine_cost = segmentation_cost(img, fine, 2.0, lambda).bits();
    CHECK(fine_cost > segmentation_cost(img, one, 2.0, lambda).bits());
    CHECK(fine_cost >= lambda * static_cast<double>(img.size()));
  }
}

TEST_CASE("segmentation validation") {
  const Image img = corpus::gen_constant_image(4, 4, 1);
  // Label 0 appears in two separate pieces.
  std::vector<std::uint32_t> disconnected{0, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0};
  CHECK_THROWS_AS((void)make_segmentation(img, disconnected), std::invalid_argument);
  std::vector<std::uint32_t> sparse(16, 2);
  CHECK_THROWS_AS((void)make_segmentation(img, sparse), std::invalid_argument);
  auto seg = make_segmentation(img, std::vector<std::uint32_t>(16, 0));
  seg.params[0].sigma_q = 10;
  CHECK_THROWS_AS(validate_segmentation(seg, img), std::invalid_argument);
}

TEST_CASE("segment_mdl finds two noisy regions") {
  const auto li = two_region(64, 64, 2.0, 21);
  const auto seg = segment_mdl(li.image);
  REQUIRE(seg.region_count == 2);
  std::size_t agree = 0;
  const std::uint32_t left = seg.region_map[0];
  for (std::size_t i = 0; i < li.truth.size(); ++i) agree += (seg.region_map[i] == left) == (li.truth[i] == 0);
  CHECK(static_cast<double>(agree) >= 0.99 * static_cast<double>(li.truth.size()));
}

TEST_CASE("segment_mdl follows boundaries that cut through blocks") {
  const std::array<corpus::RegionRect, 3> rects{{{0, 0, 37, 50, 60.0}, {37, 0, 70, 29, 180.0}, {37, 29, 70, 50, 120.0}}};
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto li = corpus::gen_piecewise_constant(70, 50, rects, 2.0, seed);
    std::vector<double> trace;
    const auto seg = segment_mdl(li.image, kDefaultMu, kDefaultLambda, &trace);
    CHECK(seg.region_count == 3);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < li.truth.size(); ++i)
      agree += seg.region_map[i] == seg.region_map[0] ? li.truth[i] == 0 : li.truth[i] != 0;
    CHECK(static_cast<double>(agree) >= 0.99 * static_cast<double>(li.truth.size()));
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] < trace[i - 1]);
    CHECK(segmentation_cost(li.image, seg, kDefaultMu, kDefaultLambda).bits() ==
          doctest::Approx(trace.back()).epsilon(1e-9));
  }
}

TEST_CASE("segment_mdl: constant and random images collapse to one region") {
  CHECK(segment_mdl(corpus::gen_constant_image(48, 40, 200)).region_count == 1);
  std::vector<double> trace;
  const auto seg = segment_mdl(corpus::gen_random_image(48, 48, 8), kDefaultMu, 1024.0, &trace);
  CHECK(seg.region_count == 1);
  REQUIRE(trace.size() == 36);  // 6x6 blocks, 35 merges
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] < trace[i - 1]);
}

TEST_CASE("segment_mdl cost is monotone and never above the initial partition") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Image img = seed % 2 ? three_region(40, 37, 3.0, seed).image : corpus::gen_texture(40, 37, seed);
    std::vector<double> trace;
    const auto seg = segment_mdl(img, kDefaultMu, kDefaultLambda, &trace);
    validate_segmentation(seg, img);
    REQUIRE(!trace.empty());
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] < trace[i - 1]);
    CHECK(segmentation_cost(img, seg, kDefaultMu, kDefaultLambda).bits() ==
          doctest::Approx(trace.back()).epsilon(1e-9));
  }
}

TEST_CASE("segmented body length tracks the functional") {
  std::vector<Image> images{two_region(64, 64, 2.0, 1).image, three_region(64, 48, 2.0, 2).image,
                            corpus::gen_constant_image(32, 32, 5), corpus::gen_texture(48, 48, 3)};
  for (const auto& img : images) {
    const auto seg = segment_mdl(img);
    const auto body = encode_segmented_body(img, seg);
    const double cost = segmentation_cost(img, seg, kDefaultMu, kDefaultLambda).bits();
    CHECK(8.0 * body.size() <= cost * 1.01 + 64);
    Segmentation back;
    CHECK(decode_segmented_body(body, img.width(), img.height(), &back) == img);
    CHECK(back == seg);
  }
}

TEST_CASE("segmented codec comparisons") {
  SUBCASE("three noisy regions beat pixel difference coding") {
    const Image img = three_region(96, 96, 2.0, 4).image;
    const auto seg = compress_image_segmented(img);
    CHECK(seg[0] == static_cast<std::uint8_t>(SegmentedMode::kRegions));
    CHECK(seg.size() < compress_image_pixeldiff(img).size());
  }
  SUBCASE("constant image within 128 bits of pixel difference") {
    const Image img = corpus::gen_constant_image(64, 64, 17);
    CHECK(8.0 * compress_image_segmented(img).size() <= 8.0 * compress_image_pixeldiff(img).size() + 128);
  }
  SUBCASE("random image within 1% plus header of raw") {
    const Image img = corpus::gen_random_image(64, 64, 12);
    CHECK(8.0 * compress_image_segmented(img).size() <= 32768 * 1.01 + 8 * 32);
  }
}

TEST_CASE("both image codecs are lossless") {
  std::vector<Image> images{corpus::gen_random_image(33, 17, 1), corpus::gen_constant_image(1, 1, 0),
                            corpus::gen_constant_image(20, 3, 255), corpus::gen_ramp_image(300, 4),
                            three_region(50, 50, 2.0, 9).image, natural("text")};
  for (const auto& img : images) {
    CHECK(decompress_image_pixeldiff(compress_image_pixeldiff(img)) == img);
    CHECK(decompress_image_segmented(compress_image_segmented(img)) == img);
  }
}
