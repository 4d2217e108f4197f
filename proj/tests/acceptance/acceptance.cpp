// One pass/fail line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

#include "crm/corpus/files.hpp"
#include "crm/corpus/generators.hpp"
#include "crm/corpus/manifest.hpp"
#include "crm/corpus/pnm.hpp"
#include "crm/image/pixel_diff.hpp"
#include "crm/image/segmentation.hpp"
#include "crm/multiview/blob.hpp"
#include "crm/multiview/flow.hpp"
#include "crm/multiview/interp.hpp"
#include "crm/multiview/stereo.hpp"
#include "crm/scalar/codec.hpp"
#include "crm/scalar/duel.hpp"
#include "crm/scalar/models.hpp"
#include "crm/scalar/trials.hpp"
#include "crm/scoring/archive.hpp"
#include "crm/scoring/nfl.hpp"
#include "crm/scoring/score.hpp"

using namespace crm;
namespace fs = std::filesystem;
using Bytes = std::vector<std::uint8_t>;
using Clock = std::chrono::steady_clock;

namespace {

const fs::path kData = CRM_DATA_DIR;
const fs::path kTool = CRM_TOOL_PATH;

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<fs::path> natural_fixtures() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kData / "natural"))
    if (e.path().extension() == ".pgm") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

image::Image crop(const image::Image& img, int x0, int y0, int w, int h) {
  image::Image out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(x, y) = img.at(x0 + x, y0 + y);
  return out;
}

Bytes pair_file(const image::Image& left, const image::Image& right) {
  Bytes b;
  corpus::append_pgm(b, left);
  corpus::append_pgm(b, right);
  return b;
}

Bytes trials_file(const scalar::TrialSet& trials) {
  const auto text = scalar::serialize_trials(trials);
  return {text.begin(), text.end()};
}

// 1. Theory duel on ballistic trials.
using Big = boost::multiprecision::cpp_bin_float_50;

double oracle_gaussian_bits(double x, double mu, double sigma, double delta) {
  const boost::math::normal_distribution<Big> n{Big(mu), Big(sigma)};
  const Big p = boost::math::cdf(n, Big(x) + Big(delta) / 2) - boost::math::cdf(n, Big(x) - Big(delta) / 2);
  return static_cast<double>(-log(p) / log(Big(2)));
}

Outcome theory_duel() {
  Outcome o;
  const auto start = Clock::now();
  // v sin(theta) / g = 1 s on the way up, so the mean flight time is 2 s.
  const auto trials = scalar::ballistic_generate(1000, 19.6, std::numbers::pi / 6, 9.8, 0.3, 2024);
  const auto gauss = scalar::default_gaussian_model();
  const auto interval = scalar::default_interval_model();
  const auto duel = scalar::theory_duel(trials, gauss, interval);
  const double elapsed = seconds_since(start);

  o.require(duel.total_a < duel.total_b, "Gaussian total below interval total");
  o.require(duel.by_bits == scalar::Preference::kA, "Gaussian preferred");
  const double interval_oracle = -std::log2((1.0 - scalar::kEscapeMass) / 29000.0);
  double worst = 0.0;
  for (double x : trials.outcomes) {
    worst = std::max(worst, std::abs(scalar::scalar_codelength(x, gauss).bits() - oracle_gaussian_bits(x, 2.0, 0.3, 0.001)));
    worst = std::max(worst, std::abs(scalar::scalar_codelength(x, interval).bits() - interval_oracle));
  }
  o.require(worst <= 1e-6, "per-outcome values within 1e-6 bits of the closed form");
  const double li = scalar::scalar_codelength(2.134, interval).bits();
  const double lg = scalar::scalar_codelength(2.134, gauss).bits();
  o.require(std::abs(li - 14.824) < 1e-3, "2.134 costs about 14.824 interval bits");
  o.require(lg < li, "2.134 is cheaper under the Gaussian");
  o.require(elapsed < 1.0, "runtime below 1 s");
  o.note(fmt::format("Gaussian {:.3f} bits vs interval {:.3f} bits; worst oracle gap {:.2e}; x=2.134: {:.4f} vs {:.4f}; "
                     "{:.3f} s",
                     duel.total_a.bits(), duel.total_b.bits(), worst, li, lg, elapsed));
  return o;
}

// 2. Net score example.
Outcome net_score_example() {
  Outcome o;
  const auto a = scoring::net_score(0, 3'300'000'000ULL / 8, "T");
  const auto b = scoring::net_score(6'700'000'000ULL / 8, 2'100'000'000ULL / 8, "T");
  o.require(b.total_bits() == 8'800'000'000ULL, "second total is 8.8e9 bits");
  o.require(a.total_bits() == 3'300'000'000ULL, "first total is 3.3e9 bits");
  o.require(scoring::compare_theories(a, b) == scoring::Preference::kFirst, "first theory preferred");
  o.note(fmt::format("{} vs {} bits, preferred {}", a.total_bits(), b.total_bits(),
                     scoring::to_string(scoring::compare_theories(a, b))));
  return o;
}

// 3. Exhaustive codelength audit.
Outcome nfl_audit_all() {
  Outcome o;
  double slowest = 0.0;
  for (auto codec : scoring::kAllCodecs) {
    for (int n : {8, 12}) {
      const auto start = Clock::now();
      const auto r = scoring::nfl_audit(codec, n);
      const double elapsed = seconds_since(start);
      slowest = std::max(slowest, elapsed);
      const auto name = fmt::format("{} N={}", scoring::codec_name(codec), n);
      o.require(r.mean_ok(), name + " mean >= N");
      o.require(r.kraft_ok(), name + " Kraft sum <= 1 + 1e-9");
      o.require(r.prefix_free, name + " prefix-free");
      if (n == 12) o.require(elapsed < 300.0, name + " within 5 min");
    }
  }
  o.note(fmt::format("8 codecs x N in {{8, 12}}, slowest run {:.2f} s", slowest));
  return o;
}

// 4. Natural images and the random-image limit.
Outcome natural_images() {
  Outcome o;
  std::string sizes;
  for (const auto& path : natural_fixtures()) {
    const auto img = corpus::load_pnm(path);
    const auto stream = image::compress_image_pixeldiff(img);
    const double bpp = 8.0 * static_cast<double>(stream.size()) / static_cast<double>(img.size());
    o.require(bpp <= 0.7 * 8.0, path.stem().string() + " at least 30% below 8 bits/pixel");
    o.require(image::decompress_image_pixeldiff(stream) == img, path.stem().string() + " lossless");
    sizes += fmt::format("{} {:.3f} bpp, ", path.stem().string(), bpp);
  }
  const auto random = corpus::gen_random_image(64, 64, 4);
  const auto stream = image::compress_image_pixeldiff(random);
  o.require(static_cast<double>(stream.size()) <= 4096 * 1.01 + 32, "random 64x64 within 1% + 32 bytes");
  o.note(fmt::format("{}random 64x64 {} bytes", sizes, stream.size()));
  return o;
}

// 5. Losslessness and mutation detection over 1000 cases.
struct Case {
  scoring::CodecId codec;
  Bytes item;
  scoring::CodecOptions options;
};

Case make_case(int k, corpus::Rng& rng, const std::vector<image::Image>& natural) {
  using scoring::CodecId;
  const auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); };
  const std::array<CodecId, 3> image_codecs{CodecId::kUniform, CodecId::kPixdiff, CodecId::kSegment};
  const auto image_codec = image_codecs[static_cast<std::size_t>(k / 8) % 3];
  const auto seed = rng.next();
  switch (k % 8) {
    case 0: return {image_codec, corpus::serialize_pgm(corpus::gen_random_image(pick(1, 32), pick(1, 32), seed)), {}};
    case 1:
      return {image_codec,
              corpus::serialize_pgm(corpus::gen_constant_image(pick(1, 40), pick(1, 40), static_cast<std::uint8_t>(seed))),
              {}};
    case 2: return {image_codec, corpus::serialize_pgm(corpus::gen_ramp_image(pick(1, 48), pick(1, 48))), {}};
    case 3: {
      const int w = pick(16, 48), h = pick(16, 48);
      const std::array<corpus::RegionRect, 3> rects{{{0, 0, w / 2, h, static_cast<double>(pick(0, 255))},
                                                     {w / 2, 0, w, h / 2, static_cast<double>(pick(0, 255))},
                                                     {w / 2, h / 2, w, h, static_cast<double>(pick(0, 255))}}};
      return {image_codec, corpus::serialize_pgm(corpus::gen_piecewise_constant(w, h, rects, pick(0, 4), seed).image),
              {}};
    }
    case 4: {
      const auto& src = natural[static_cast<std::size_t>(k / 8) % natural.size()];
      const int w = pick(1, 48), h = pick(1, 48);
      return {image_codec, corpus::serialize_pgm(crop(src, pick(0, src.width() - w), pick(0, src.height() - h), w, h)),
              {}};
    }
    case 5: {
      const scoring::CodecOptions options{pick(1, 5), rng.below(2) == 0, multiview::kDefaultTau};
      const auto codec = (k / 8) % 2 ? CodecId::kBlob : CodecId::kInterp;
      multiview::FrameSequence seq;
      switch ((k / 16) % 3) {
        case 0: seq = corpus::gen_blob_video(32, 24, pick(3, 7), 6, pick(0, 3), pick(0, 2), 0.0, seed, 1, 1).sequence; break;
        case 1: seq = corpus::gen_translating_texture(pick(8, 32), pick(8, 24), pick(2, 6), pick(-2, 2), pick(-1, 1), seed); break;
        default: seq = corpus::gen_random_video(pick(1, 16), pick(1, 16), pick(2, 5), seed); break;
      }
      return {codec, multiview::serialize_video(seq), options};
    }
    case 6: {
      if ((k / 8) % 2) {
        const int w = pick(8, 40), h = pick(8, 32);
        return {CodecId::kStereo,
                pair_file(corpus::gen_random_image(w, h, seed), corpus::gen_random_image(w, h, seed + 1)), {}};
      }
      const auto p = corpus::gen_stereo_planes(48, 32, pick(0, 2), pick(3, 6), {8, 8, 32, 24, 0}, seed);
      return {CodecId::kStereo, pair_file(p.left, p.right), {}};
    }
    default: {
      const auto trials = scalar::ballistic_generate(static_cast<std::size_t>(pick(1, 60)), 19.6, std::numbers::pi / 6,
                                                     9.8, 0.3, seed);
      return {(k / 8) % 2 ? CodecId::kGaussian : CodecId::kInterval, trials_file(trials), {}};
    }
  }
}

Outcome losslessness() {
  Outcome o;
  std::vector<image::Image> natural;
  for (const auto& p : natural_fixtures()) natural.push_back(corpus::load_pnm(p));
  corpus::Rng rng(5);
  std::size_t lossy = 0, unverified = 0, missed = 0, mutated = 0, coded = 0;
  std::map<std::string, int> per_codec;
  for (int k = 0; k < 1000; ++k) {
    const auto c = make_case(k, rng, natural);
    const std::vector<Bytes> items{c.item};
    const auto archive = scoring::compress_items(c.codec, items, c.options, 1);
    coded += !archive.items[0].raw;
    ++per_codec[std::string(scoring::codec_name(c.codec))];
    if (scoring::decompress_archive(archive, 1) != items) ++lossy;
    const auto bytes = scoring::serialize_archive(archive);
    if (!scoring::verify_roundtrip(bytes, items, 1).passed) ++unverified;
    // One payload bit, and one bit anywhere in the file.
    const auto payload = archive.items[0].payload.size();
    for (int m = 0; m < 2; ++m) {
      const std::size_t start = m == 0 ? scoring::kArchiveHeaderBytes + scoring::kItemHeaderBytes : 0;
      const std::size_t span = m == 0 ? payload : bytes.size();
      if (span == 0) continue;
      auto bad = bytes;
      bad[start + rng.below(span)] ^= static_cast<std::uint8_t>(1u << rng.below(8));
      ++mutated;
      const auto report = scoring::verify_roundtrip(bad, items, 1);
      if (report.passed) ++missed;
    }
  }
  o.require(lossy == 0, fmt::format("{} cases decoded differently", lossy));
  o.require(unverified == 0, fmt::format("{} intact archives failed verification", unverified));
  o.require(missed == 0, fmt::format("{} of {} mutations undetected", missed, mutated));
  std::string mix;
  for (const auto& [name, count] : per_codec) mix += fmt::format("{} {}, ", name, count);
  o.note(fmt::format("1000 cases ({}{} coded, rest raw), {} of {} mutations caught", mix, coded, mutated - missed,
                     mutated));
  return o;
}

// 6. Segmentation.
Outcome segmentation() {
  Outcome o;
  struct Fixture {
    int w, h;
    std::vector<corpus::RegionRect> rects;
  };
  const std::vector<Fixture> fixtures{
      {64, 64, {{0, 0, 32, 64, 70}, {32, 0, 64, 64, 170}}},
      {96, 64, {{0, 0, 40, 64, 60}, {40, 0, 96, 30, 180}, {40, 30, 96, 64, 120}}},
      {96, 96, {{0, 0, 32, 96, 50}, {32, 0, 96, 48, 120}, {32, 48, 96, 96, 200}}},
      {80, 80, {{0, 0, 40, 40, 30}, {40, 0, 80, 40, 90}, {0, 40, 40, 80, 150}, {40, 40, 80, 80, 220}}},
  };
  double worst_agreement = 1.0;
  int count = 0;
  for (std::size_t f = 0; f < fixtures.size(); ++f) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto& fx = fixtures[f];
      const auto li = corpus::gen_piecewise_constant(fx.w, fx.h, fx.rects, 2.0, seed * 100 + f);
      const auto name = fmt::format("fixture {} seed {}", f, seed);
      std::vector<double> trace;
      const auto seg = image::segment_mdl(li.image, image::kDefaultMu, image::kDefaultLambda, &trace);
      o.require(seg.region_count == fx.rects.size(), name + " region count");
      // Map each found region to its majority true label.
      std::map<std::uint32_t, std::map<std::uint32_t, std::size_t>> votes;
      for (std::size_t i = 0; i < li.truth.size(); ++i) ++votes[seg.region_map[i]][li.truth[i]];
      std::size_t agree = 0;
      for (const auto& [region, v] : votes) {
        std::size_t best = 0;
        for (const auto& [label, n] : v) best = std::max(best, n);
        agree += best;
      }
      const double agreement = static_cast<double>(agree) / static_cast<double>(li.truth.size());
      worst_agreement = std::min(worst_agreement, agreement);
      o.require(agreement >= 0.99, name + " pixel agreement >= 99%");
      bool monotone = !trace.empty();
      for (std::size_t i = 1; i < trace.size(); ++i) monotone &= trace[i] < trace[i - 1];
      o.require(monotone, name + " greedy cost strictly decreasing");
      o.require(image::compress_image_segmented(li.image).size() < image::compress_image_pixeldiff(li.image).size(),
                name + " segmented stream smaller than pixel-diff stream");
      std::vector<std::uint32_t> per_pixel(li.image.size());
      for (std::uint32_t i = 0; i < per_pixel.size(); ++i) per_pixel[i] = i;
      const auto degenerate = image::make_segmentation(li.image, per_pixel);
      o.require(image::segmentation_cost(li.image, degenerate, image::kDefaultMu, 64.0) >
                    image::segmentation_cost(li.image, seg, image::kDefaultMu, 64.0),
                name + " per-pixel map loses at lambda 64");
      ++count;
    }
  }
  o.note(fmt::format("{} fixtures, worst agreement {:.4f}", count, worst_agreement));
  return o;
}

// 7. Stereo.
Outcome stereo() {
  Outcome o;
  std::string shifted, random;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto p = corpus::gen_stereo_planes(128, 96, 2, 6, {32, 24, 96, 72, 0}, seed + 40);
    const auto enc = multiview::compress_stereo_pair(p.left, p.right);
    const auto& r = enc.report;
    o.require(r.disparity_bits + r.residual_bits < r.independent_bits, fmt::format("planes {} e + f < d", seed));
    shifted += fmt::format("{}+{}<{} ", r.disparity_bits, r.residual_bits, r.independent_bits);
  }
  const auto camera = corpus::load_pnm(kData / "natural/camera.pgm");
  {
    const auto enc = multiview::compress_stereo_pair(crop(camera, 100, 100, 200, 160), crop(camera, 104, 100, 200, 160));
    const auto& r = enc.report;
    o.require(r.disparity_bits + r.residual_bits < r.independent_bits, "shifted camera crop e + f < d");
  }
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto left = corpus::gen_random_image(96, 96, 2 * seed + 1);
    const auto right = corpus::gen_random_image(96, 96, 2 * seed + 2);
    const auto enc = multiview::compress_stereo_pair(left, right);
    const auto two = image::compress_image_pixeldiff(left).size() + image::compress_image_pixeldiff(right).size();
    o.require(static_cast<double>(enc.bytes.size()) <= 1.01 * static_cast<double>(two) + 16,
              fmt::format("random pair {} within 1% + header", seed));
    random += fmt::format("{}/{} ", enc.bytes.size(), two);
  }
  o.note("planes bits " + shifted + "; random pair bytes vs independent " + random);
  return o;
}

// 8. Video.
Outcome video() {
  Outcome o;
  const auto blob_video = corpus::gen_blob_video(96, 64, 17, 16, 2, 0, 0.0, 4);
  const auto blob = multiview::compress_sequence_blob(blob_video.sequence);
  const auto linear = multiview::compress_sequence_interp(blob_video.sequence, {.stride = 4, .motion = false});
  o.require(static_cast<double>(blob.video.bytes.size()) <= 0.8 * static_cast<double>(linear.bytes.size()),
            "blob at least 20% below linear interpolation");

  const auto texture = corpus::gen_translating_texture(96, 64, 9, 3, 1, 4);
  const auto on = multiview::compress_sequence_interp(texture, {.stride = 4, .motion = true});
  const auto off = multiview::compress_sequence_interp(texture, {.stride = 4, .motion = false});
  o.require(on.bytes.size() < off.bytes.size(), "motion on beats motion off");

  const auto coins = crop(corpus::load_pnm(kData / "natural/coins.pgm"), 0, 0, 64, 64);
  multiview::FrameSequence still;
  for (int t = 0; t < 9; ++t) still.frames.push_back(coins);
  const auto enc = multiview::compress_sequence_interp(still);
  const double key = static_cast<double>(image::compress_image_pixeldiff(coins).size());
  // Normalizer floor: a perfect prediction at the best scale, per predicted frame.
  multiview::ResidualCoder coder;
  double floor_bits = 1e300;
  for (int k = 0; k < multiview::kScaleCandidates; ++k)
    floor_bits = std::min(floor_bits, coder.ideal_bits(coins, coins, multiview::scale_candidate(k)));
  const double bound = 1.2 * key + 8 * floor_bits / 8;
  o.require(static_cast<double>(enc.bytes.size()) < bound, "static sequence below 1.2 keyframes + floors");
  o.note(fmt::format("blob {} vs linear {} bytes ({:.1f}% smaller); motion on {} vs off {}; static {} < {:.0f} "
                     "(keyframe {:.0f}, floor {:.1f} bytes/frame)",
                     blob.video.bytes.size(), linear.bytes.size(),
                     100.0 * (1.0 - static_cast<double>(blob.video.bytes.size()) / static_cast<double>(linear.bytes.size())),
                     on.bytes.size(), off.bytes.size(), enc.bytes.size(), bound, key, floor_bits / 8));
  return o;
}

// 9. Shim additivity with the shipped tool as the declared artifact.
Outcome shim_additivity() {
  Outcome o;
  TempDir dir("crm_acceptance_shim");
  const auto c = corpus::generate_demo_corpus(dir.path / "demo", 1, kData / "natural");
  const auto items = corpus::load_items(dir.path / "demo", c);
  const auto artifact = dir.path / "crm.bin";
  fs::copy_file(kTool, artifact);
  const auto base = fs::file_size(artifact);

  std::vector<scoring::NetScore> scores;
  for (auto codec : scoring::kAllCodecs)
    scores.push_back(scoring::net_score(base, scoring::serialize_archive(scoring::compress_items(codec, items)).size(), c.id));

  std::uint64_t appended = 0;
  for (std::uint64_t s : {1ULL, 7ULL, 4096ULL, 1ULL << 20}) {
    corpus::write_file(dir.path / "shim", Bytes(s, 0x5a));
    {
      auto grown = corpus::read_file(artifact);
      grown.resize(grown.size() + s, 0x5a);
      corpus::write_file(artifact, grown);
    }
    appended += s;
    const auto measured = fs::file_size(artifact);
    o.require(measured == base + appended, "artifact grew by the shim");
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const auto shimmed = scoring::net_score(measured, scores[i].payload_bytes, c.id);
      o.require(shimmed.total_bits() - scores[i].total_bits() == 8 * appended, "score grew by exactly 8s bits");
      o.require(scoring::with_shim(scores[i], appended) == shimmed, "with_shim agrees with the measured file");
      for (std::size_t j = 0; j < scores.size(); ++j) {
        const auto other = scoring::net_score(measured, scores[j].payload_bytes, c.id);
        o.require(scoring::compare_theories(shimmed, other) == scoring::compare_theories(scores[i], scores[j]),
                  "preference unchanged");
      }
    }
  }
  const auto best = *std::min_element(scores.begin(), scores.end(),
                                       [](const auto& a, const auto& b) { return a.payload_bytes < b.payload_bytes; });
  const auto vast = scoring::vastness_check(8.0 * static_cast<double>(best.payload_bytes), 8e6);
  o.note(fmt::format("8 codec scores on corpus '{}', artifact {} bytes, shims 1..1 MiB; best payload / 1 MB shim "
                     "bound = {:.3f}{}",
                     c.id, base, vast.ratio, vast.vast ? " (vast)" : " (not vast)"));
  return o;
}

// 10. Determinism of repeated CLI runs.
std::map<std::string, Bytes> snapshot(const fs::path& root) {
  std::map<std::string, Bytes> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = corpus::read_file(e.path());
  return out;
}

Outcome determinism() {
  Outcome o;
  TempDir dir("crm_acceptance_determinism");
  ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  for (const auto* run : {"a", "b"}) {
    const auto root = dir.path / run;
    const auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
    std::vector<std::string> commands{fmt::format("gen --corpus {} --seed 9 --in {}", q(root / "demo"), q(kData / "natural"))};
    for (auto codec : scoring::kAllCodecs) {
      const auto name = scoring::codec_name(codec);
      const auto archive = root / fmt::format("{}.crma", name);
      commands.push_back(fmt::format("compress --codec {} --corpus {} --out {} --jobs {}", name, q(root / "demo"),
                                     q(archive), run[0] == 'a' ? 1 : 4));
      commands.push_back(fmt::format("score --archive {} --corpus {} --manifest {}", q(archive), q(root / "demo"),
                                     q(root / "board.tsv")));
    }
    for (const auto& cmd : commands) {
      const int status = std::system((q(kTool) + " " + cmd + " > /dev/null").c_str());
      o.require(status == 0, "exit 0 from: crm " + cmd);
    }
  }
  ::unsetenv("SOURCE_DATE_EPOCH");
  const auto a = snapshot(dir.path / "a"), b = snapshot(dir.path / "b");
  o.require(!a.empty() && a == b, "runs produced byte-identical files");
  o.note(fmt::format("{} files (corpus manifest and items, 8 archives, leaderboard) identical across two runs", a.size()));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"theory duel", theory_duel},
      {"net score", net_score_example},
      {"codelength audit", nfl_audit_all},
      {"natural images", natural_images},
      {"losslessness and mutation detection", losslessness},
      {"segmentation", segmentation},
      {"stereo", stereo},
      {"video", video},
      {"shim additivity", shim_additivity},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.passed;
    std::cout << fmt::format("{} {:>2} {}: {}\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail)
              << std::flush;
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed;
}
