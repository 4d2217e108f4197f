#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crm::corpus {

inline constexpr std::string_view kManifestName = "manifest.tsv";

enum class ItemKind { kImage, kSequence, kTrials, kPair };
std::string_view to_string(ItemKind kind);
std::optional<ItemKind> kind_from_string(std::string_view s);

struct CorpusItem {
  std::string id;
  ItemKind kind = ItemKind::kImage;
  std::string path;  // relative to the corpus directory
  std::uint64_t size = 0;
  std::string truth;  // relative path of the ground truth file, or empty

  friend bool operator==(const CorpusItem&, const CorpusItem&) = default;
};

struct Corpus {
  std::string id;   // the corpus directory name
  std::string rng;  // generator the synthetic items were drawn from
  std::vector<CorpusItem> items;

  [[nodiscard]] std::uint64_t total_bytes() const;
  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Text form: "CRMCORPUS 1", an optional "# rng <name>" line, then one
// tab-separated line per item: id, kind, path, size[, truth path].
std::string serialize_manifest(const Corpus& corpus);
// FormatError on a bad header, kind, size or a repeated id.
Corpus parse_manifest(std::string_view text, std::string id);

// Reads <dir>/manifest.tsv. FormatError when a listed size does not match
// the file on disk; IoError when a file is missing.
Corpus load_corpus(const std::filesystem::path& dir);
std::vector<std::vector<std::uint8_t>> load_items(const std::filesystem::path& dir, const Corpus& corpus);
void save_manifest(const std::filesystem::path& dir, const Corpus& corpus);

// Writes the demonstration corpus into `dir`: synthetic images, a stereo
// pair, three videos and a trial file drawn from `seed`, plus copies of the
// PGM files found in `natural_dir` (if given). Ground truth goes to
// <dir>/truth, never into the items.
Corpus generate_demo_corpus(const std::filesystem::path& dir, std::uint64_t seed,
                            const std::optional<std::filesystem::path>& natural_dir = std::nullopt);

}  // namespace crm::corpus
