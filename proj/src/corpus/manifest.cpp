#include "crm/corpus/manifest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "crm/corpus/files.hpp"
#include "crm/corpus/generators.hpp"
#include "crm/corpus/pnm.hpp"
#include "crm/error.hpp"
#include "crm/scalar/trials.hpp"

namespace crm::corpus {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kHeader = "CRMCORPUS 1";
constexpr std::string_view kRngPrefix = "# rng ";
constexpr std::array<std::string_view, 4> kKindNames{"image", "sequence", "trials", "pair"};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto at = line.find(sep, start);
    out.push_back(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

bool safe_relative(std::string_view p) {
  if (p.empty()) return false;
  const fs::path path(p);
  if (path.is_absolute()) return false;
  return std::none_of(path.begin(), path.end(), [](const fs::path& part) { return part == ".."; });
}

std::string grid_text(int width, int height, auto&& value) {
  std::string out = fmt::format("{} {}\n", width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out += fmt::format("{}{}", x ? " " : "", value(x, y));
    out += '\n';
  }
  return out;
}

struct Writer {
  fs::path dir;
  Corpus corpus;

  void add(std::string id, ItemKind kind, std::string_view ext, std::span<const std::uint8_t> bytes,
           std::string_view truth = {}) {
    CorpusItem item{id, kind, "items/" + id + std::string(ext), bytes.size(), {}};
    write_file(dir / item.path, bytes);
    if (!truth.empty()) {
      item.truth = "truth/" + id + ".txt";
      write_text(dir / item.truth, truth);
    }
    corpus.items.push_back(std::move(item));
  }
};

}  // namespace

std::string_view to_string(ItemKind kind) { return kKindNames.at(static_cast<std::size_t>(kind)); }

std::optional<ItemKind> kind_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == s) return static_cast<ItemKind>(i);
  return std::nullopt;
}

std::uint64_t Corpus::total_bytes() const {
  std::uint64_t n = 0;
  for (const auto& item : items) n += item.size;
  return n;
}

std::string serialize_manifest(const Corpus& corpus) {
  std::string out(kHeader);
  out += '\n';
  if (!corpus.rng.empty()) out += fmt::format("{}{}\n", kRngPrefix, corpus.rng);
  for (const auto& item : corpus.items) {
    out += fmt::format("{}\t{}\t{}\t{}", item.id, to_string(item.kind), item.path, item.size);
    if (!item.truth.empty()) out += "\t" + item.truth;
    out += '\n';
  }
  return out;
}

Corpus parse_manifest(std::string_view text, std::string id) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kHeader) throw FormatError("manifest must start with 'CRMCORPUS 1'");
  Corpus corpus;
  corpus.id = std::move(id);
  std::set<std::string, std::less<>> ids;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = lines[i];
    if (line.starts_with(kRngPrefix)) {
      corpus.rng = line.substr(kRngPrefix.size());
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    const auto where = fmt::format("manifest line {}", i + 1);
    if (f.size() != 4 && f.size() != 5) throw FormatError(where + ": expected 4 or 5 tab-separated fields");
    CorpusItem item;
    item.id = f[0];
    if (item.id.empty()) throw FormatError(where + ": empty id");
    if (!ids.insert(item.id).second) throw FormatError(where + ": duplicate id '" + item.id + "'");
    const auto kind = kind_from_string(f[1]);
    if (!kind) throw FormatError(where + ": unknown kind '" + std::string(f[1]) + "'");
    item.kind = *kind;
    if (!safe_relative(f[2])) throw FormatError(where + ": path must be relative to the corpus");
    item.path = f[2];
    const auto [end, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), item.size);
    if (ec != std::errc() || end != f[3].data() + f[3].size() || f[3].empty())
      throw FormatError(where + ": bad size '" + std::string(f[3]) + "'");
    if (f.size() == 5) {
      if (!safe_relative(f[4])) throw FormatError(where + ": truth path must be relative to the corpus");
      item.truth = f[4];
    }
    corpus.items.push_back(std::move(item));
  }
  return corpus;
}

Corpus load_corpus(const fs::path& dir) {
  const auto text = read_file(dir / kManifestName);
  auto name = fs::absolute(dir).lexically_normal().filename();
  if (name.empty()) name = fs::absolute(dir).lexically_normal().parent_path().filename();
  Corpus corpus = parse_manifest(std::string_view(reinterpret_cast<const char*>(text.data()), text.size()),
                                 name.string());
  for (const auto& item : corpus.items) {
    std::error_code ec;
    const auto size = fs::file_size(dir / item.path, ec);
    if (ec) throw IoError("cannot stat " + (dir / item.path).string());
    if (size != item.size)
      throw FormatError(fmt::format("item '{}' is {} bytes on disk, manifest says {}", item.id, size, item.size));
  }
  return corpus;
}

std::vector<std::vector<std::uint8_t>> load_items(const fs::path& dir, const Corpus& corpus) {
  std::vector<std::vector<std::uint8_t>> out;
  out.reserve(corpus.items.size());
  for (const auto& item : corpus.items) out.push_back(read_file(dir / item.path));
  return out;
}

void save_manifest(const fs::path& dir, const Corpus& corpus) { write_text(dir / kManifestName, serialize_manifest(corpus)); }

Corpus generate_demo_corpus(const fs::path& dir, std::uint64_t seed, const std::optional<fs::path>& natural_dir) {
  std::error_code ec;
  fs::create_directories(dir / "items", ec);
  if (!ec) fs::create_directories(dir / "truth", ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  Writer w{dir, {}};
  w.corpus.id = fs::absolute(dir).lexically_normal().filename().string();
  w.corpus.rng = fmt::format("mt19937_64 seed={}", seed);

  if (natural_dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(*natural_dir, ec))
      if (entry.path().extension() == ".pgm") files.push_back(entry.path());
    if (ec) throw IoError("cannot list " + natural_dir->string());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) w.add("natural-" + f.stem().string(), ItemKind::kImage, ".pgm", serialize_pgm(load_pnm(f)));
  }

  w.add("random-64", ItemKind::kImage, ".pgm", serialize_pgm(gen_random_image(64, 64, seed)));
  w.add("constant-64", ItemKind::kImage, ".pgm", serialize_pgm(gen_constant_image(64, 64, 128)));
  w.add("ramp-64", ItemKind::kImage, ".pgm", serialize_pgm(gen_ramp_image(64, 64)));

  const std::array<RegionRect, 3> regions{{{0, 0, 40, 64, 60}, {40, 0, 96, 30, 180}, {40, 30, 96, 64, 120}}};
  const auto piecewise = gen_piecewise_constant(96, 64, regions, 2.0, seed + 1);
  w.add("piecewise", ItemKind::kImage, ".pgm", serialize_pgm(piecewise.image),
        grid_text(96, 64, [&](int x, int y) { return piecewise.truth[static_cast<std::size_t>(y) * 96 + x]; }));

  const auto stereo = gen_stereo_planes(128, 96, 2, 6, {32, 24, 96, 72, 0}, seed + 2);
  std::vector<std::uint8_t> pair;
  append_pgm(pair, stereo.left);
  append_pgm(pair, stereo.right);
  w.add("stereo-planes", ItemKind::kPair, ".pgm", pair,
        grid_text(128, 96, [&](int x, int y) { return stereo.shift[static_cast<std::size_t>(y) * 128 + x]; }));

  const auto blob = gen_blob_video(96, 64, 17, 16, 2, 0, 0.0, seed + 3);
  std::string trajectory;
  for (std::size_t t = 0; t < blob.trajectory.size(); ++t)
    trajectory += fmt::format("{} {} {}\n", t, blob.trajectory[t].first, blob.trajectory[t].second);
  w.add("blob-video", ItemKind::kSequence, ".crmvid", multiview::serialize_video(blob.sequence), trajectory);
  w.add("texture-video", ItemKind::kSequence, ".crmvid",
        multiview::serialize_video(gen_translating_texture(96, 64, 9, 3, 1, seed + 4)));
  w.add("random-video", ItemKind::kSequence, ".crmvid", multiview::serialize_video(gen_random_video(48, 48, 5, seed + 5)));

  // Flight time 2 v sin(theta) / g = 2 s.
  const auto trials = scalar::ballistic_generate(1000, 19.6, std::numbers::pi / 6, 9.8, 0.3, seed + 6);
  const auto text = scalar::serialize_trials(trials);
  w.add("ballistic", ItemKind::kTrials, ".trials",
        std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));

  save_manifest(dir, w.corpus);
  return w.corpus;
}

}  // namespace crm::corpus
