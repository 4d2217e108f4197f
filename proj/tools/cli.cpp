#include "cli.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <ostream>
#include <span>
#include <string_view>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "crm/corpus/files.hpp"
#include "crm/corpus/manifest.hpp"
#include "crm/error.hpp"
#include "crm/scoring/archive.hpp"
#include "crm/scoring/leaderboard.hpp"
#include "crm/scoring/nfl.hpp"
#include "crm/scoring/score.hpp"

namespace crm::cli {

namespace fs = std::filesystem;
using Bytes = std::vector<std::uint8_t>;

namespace {

// Shim bound used for the vastness line of `score`: a 1 MB simulator.
constexpr double kShimBoundBits = 8e6;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string codec = "pixdiff";
  std::string in, out, archive, against, corpus, manifest, compressor;
  std::vector<std::string> archives, compressors;
  int n = 12;
  int stride = multiview::kDefaultStride;
  std::string motion = "on";
  std::uint64_t seed = 1;
  unsigned jobs = 0;
};

std::string bits_and_bytes(std::uint64_t bytes) { return fmt::format("{} bits ({} bytes)", bytes * 8, bytes); }

scoring::CodecId parse_codec(const std::string& name) {
  const auto id = scoring::codec_from_name(name);
  if (!id) throw UsageError("unknown codec '" + name + "'");
  return *id;
}

scoring::CodecOptions codec_options(const Flags& f) {
  if (f.motion != "on" && f.motion != "off") throw UsageError("--motion must be on or off");
  if (f.stride < 1 || f.stride > multiview::kMaxStride) throw UsageError("--stride must be in [1, 65535]");
  return {f.stride, f.motion == "on", multiview::kDefaultTau};
}

std::uint64_t file_size(const fs::path& path) {
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec) throw IoError("cannot stat " + path.string());
  return size;
}

void write_output(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string());
  corpus::write_file(path, bytes);
}

// Items named by --in or --corpus, in manifest order.
std::vector<Bytes> input_items(const std::string& in, const std::string& corpus_dir) {
  if (in.empty() == corpus_dir.empty()) throw UsageError("give exactly one of --in or --corpus");
  if (!in.empty()) return {corpus::read_file(in)};
  return corpus::load_items(corpus_dir, corpus::load_corpus(corpus_dir));
}

int cmd_gen(const Flags& f, std::ostream& out) {
  if (f.corpus.empty()) throw UsageError("gen needs --corpus");
  std::optional<fs::path> natural;
  if (!f.in.empty()) natural = f.in;
  const auto c = corpus::generate_demo_corpus(f.corpus, f.seed, natural);
  fmt::print(out, "corpus {}: {} items, {}\n", c.id, c.items.size(), bits_and_bytes(c.total_bytes()));
  return kOk;
}

int cmd_compress(const Flags& f, std::ostream& out) {
  if (f.out.empty()) throw UsageError("compress needs --out");
  const auto codec = parse_codec(f.codec);
  const auto options = codec_options(f);
  const auto items = input_items(f.in, f.corpus);
  const auto archive = scoring::compress_items(codec, items, options, f.jobs);
  const auto bytes = scoring::serialize_archive(archive);
  write_output(f.out, bytes);
  std::uint64_t original = 0, raw = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    original += items[i].size();
    raw += archive.items[i].raw;
  }
  fmt::print(out, "codec {}: {} items ({} stored raw)\n", scoring::codec_name(codec), items.size(), raw);
  fmt::print(out, "original {}\n", bits_and_bytes(original));
  fmt::print(out, "payload  {}\n", bits_and_bytes(archive.payload_bytes()));
  fmt::print(out, "archive  {}\n", bits_and_bytes(bytes.size()));
  return kOk;
}

int cmd_decompress(const Flags& f, std::ostream& out) {
  if (f.archive.empty() || f.out.empty()) throw UsageError("decompress needs --archive and --out");
  const auto archive = scoring::parse_archive(corpus::read_file(f.archive));
  const auto items = scoring::decompress_archive(archive, f.jobs);
  if (!f.corpus.empty()) {
    const auto c = corpus::load_corpus(f.corpus);
    if (c.items.size() != items.size())
      throw FormatError(fmt::format("archive holds {} items, corpus lists {}", items.size(), c.items.size()));
    for (std::size_t i = 0; i < items.size(); ++i) write_output(fs::path(f.out) / c.items[i].path, items[i]);
  } else if (items.size() == 1) {
    write_output(f.out, items[0]);
  } else {
    for (std::size_t i = 0; i < items.size(); ++i)
      write_output(fs::path(f.out) / fmt::format("item-{:04}", i), items[i]);
  }
  std::uint64_t total = 0;
  for (const auto& item : items) total += item.size();
  fmt::print(out, "decoded {} items, {}\n", items.size(), bits_and_bytes(total));
  return kOk;
}

void print_report(const scoring::VerificationReport& report, std::ostream& out) {
  if (!report.error.empty()) fmt::print(out, "archive error: {}\n", report.error);
  for (const auto& item : report.items)
    if (!item.passed) fmt::print(out, "item {}: FAIL ({})\n", item.index, item.reason);
  fmt::print(out, "archive {} bits ({} bytes), container {} bits, payload {} bits ({} bytes)\n", report.archive_bits,
             report.archive_bits / 8, report.container_bits, report.payload_bits, report.payload_bits / 8);
  fmt::print(out, "verification: {}\n", report.passed ? "PASS" : "FAIL");
}

int cmd_verify(const Flags& f, std::ostream& out) {
  if (f.archive.empty()) throw UsageError("verify needs --archive");
  const auto originals = input_items(f.against, f.corpus);
  const auto report = scoring::verify_roundtrip(corpus::read_file(f.archive), originals, f.jobs);
  print_report(report, out);
  return report.passed ? kOk : kVerificationFailed;
}

std::string corpus_id_of(const std::string& dir) {
  return dir.empty() ? std::string("-") : corpus::load_corpus(dir).id;
}

int cmd_score(const Flags& f, std::ostream& out) {
  if (f.archive.empty()) throw UsageError("score needs --archive");
  const auto compressor = f.compressor.empty() ? 0 : file_size(f.compressor);
  const auto archive_bytes = corpus::read_file(f.archive);
  const auto score = scoring::net_score(compressor, archive_bytes.size(), corpus_id_of(f.corpus));
  fmt::print(out, "compressor {}\n", bits_and_bytes(score.compressor_bytes));
  fmt::print(out, "archive    {}\n", bits_and_bytes(score.payload_bytes));
  fmt::print(out, "net score  {}\n", bits_and_bytes(score.compressor_bytes + score.payload_bytes));
  const auto vast = scoring::vastness_check(static_cast<double>(score.payload_bytes) * 8, kShimBoundBits);
  fmt::print(out, "payload / 1 MB shim bound = {:.6g}{}\n", vast.ratio, vast.vast ? " (vast)" : "");

  if (f.manifest.empty()) return kOk;
  if (f.corpus.empty()) throw UsageError("recording a score needs --corpus to verify against");
  const auto codec = scoring::parse_archive(archive_bytes).codec;
  const auto originals = corpus::load_items(f.corpus, corpus::load_corpus(f.corpus));
  const auto report = scoring::verify_roundtrip(archive_bytes, originals, f.jobs);
  print_report(report, out);

  scoring::Leaderboard board;
  if (fs::exists(f.manifest)) {
    const auto text = corpus::read_file(f.manifest);
    board = scoring::Leaderboard::parse(std::string_view(reinterpret_cast<const char*>(text.data()), text.size()));
  }
  scoring::LeaderboardEntry entry{score.corpus_id,
                                  std::string(scoring::codec_name(codec)),
                                  score.compressor_bytes,
                                  score.payload_bytes,
                                  report.passed ? scoring::EntryStatus::kVerified : scoring::EntryStatus::kFailed,
                                  {},
                                  fs::path(f.archive).filename().string()};
  const auto update = scoring::leaderboard_update(board, entry);
  if (!update.accepted) {
    fmt::print(out, "leaderboard: rejected ({})\n", update.reason);
    return kVerificationFailed;
  }
  corpus::write_text(f.manifest, board.serialize());
  fmt::print(out, "leaderboard: recorded in {}\n", f.manifest);
  return kOk;
}

int cmd_compare(const Flags& f, std::ostream& out) {
  if (f.archives.size() != 2) throw UsageError("compare needs two --archive values");
  if (!f.compressors.empty() && f.compressors.size() != 2)
    throw UsageError("compare needs no --compressor or one per archive");
  const auto id = corpus_id_of(f.corpus);
  std::array<scoring::NetScore, 2> scores;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto compressor = f.compressors.empty() ? 0 : file_size(f.compressors[i]);
    scores[i] = scoring::net_score(compressor, file_size(f.archives[i]), id);
    fmt::print(out, "{}: {} + {} = {}\n", i == 0 ? "first " : "second", bits_and_bytes(compressor),
               bits_and_bytes(scores[i].payload_bytes), bits_and_bytes(compressor + scores[i].payload_bytes));
  }
  fmt::print(out, "preferred: {}\n", scoring::to_string(scoring::compare_theories(scores[0], scores[1])));
  return kOk;
}

int cmd_nfl(const Flags& f, std::ostream& out) {
  const auto codec = parse_codec(f.codec);
  if (f.n < 1 || f.n > scoring::kMaxAuditBits) throw UsageError("--n must be in [1, 16]");
  const auto r = scoring::nfl_audit(codec, f.n, f.jobs);
  fmt::print(out, "codec {}, N = {}, {} inputs ({} stored raw)\n", scoring::codec_name(codec), r.n, r.inputs,
             r.raw_items);
  fmt::print(out, "mean codelength {:.6f} bits ({:.6f} bytes), min {} bits, max {} bits\n", r.mean_bits,
             r.mean_bits / 8, r.min_bits, r.max_bits);
  fmt::print(out, "mean >= N: {}\n", r.mean_ok() ? "yes" : "NO");
  fmt::print(out, "Kraft sum {:.9e} <= 1: {}\n", r.kraft_sum, r.kraft_ok() ? "yes" : "NO");
  fmt::print(out, "prefix-free: {}\n", r.prefix_free ? "yes" : "NO");
  return r.passed() ? kOk : kVerificationFailed;
}

int cmd_leaderboard(const Flags& f, std::ostream& out) {
  if (f.manifest.empty()) throw UsageError("leaderboard needs --manifest");
  const auto text = corpus::read_file(f.manifest);
  const auto board =
      scoring::Leaderboard::parse(std::string_view(reinterpret_cast<const char*>(text.data()), text.size()));
  std::vector<std::string> ids;
  if (!f.corpus.empty()) {
    ids.push_back(fs::exists(fs::path(f.corpus) / corpus::kManifestName) ? corpus_id_of(f.corpus) : f.corpus);
  } else {
    for (const auto& e : board.history())
      if (std::find(ids.begin(), ids.end(), e.corpus_id) == ids.end()) ids.push_back(e.corpus_id);
  }
  for (const auto& id : ids) {
    fmt::print(out, "corpus {}\n", id);
    for (const auto& r : board.ranking(id)) {
      const auto& e = r.entry;
      fmt::print(out, "{:>4}{} {:<10} {} ({} bytes) {} {}\n", r.rank, r.tie ? "=" : " ", e.codec, e.score().total_bits(),
                 e.compressor_bytes + e.payload_bytes, e.timestamp, e.note);
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compression-based scoring of data models"};
  app.name(args.empty() ? "crm" : fs::path(args[0]).filename().string());
  app.require_subcommand(1, 1);
  app.allow_windows_style_options(false);
  Flags f;

  const std::string codecs = "uniform|pixdiff|segment|stereo|interp|blob|gaussian|interval";
  auto* gen = app.add_subcommand("gen", "write the demonstration corpus");
  gen->add_option("--corpus", f.corpus, "output corpus directory")->required();
  gen->add_option("--seed", f.seed, "generator seed");
  gen->add_option("--in", f.in, "directory of natural PGM images to include");

  auto* compress = app.add_subcommand("compress", "compress a file or a corpus into an archive");
  compress->add_option("--codec", f.codec, codecs);
  compress->add_option("--in", f.in, "input file");
  compress->add_option("--corpus", f.corpus, "input corpus directory");
  compress->add_option("--out", f.out, "archive to write")->required();
  compress->add_option("--stride", f.stride, "keyframe stride (video codecs)");
  compress->add_option("--motion", f.motion, "on|off (video codecs)");
  compress->add_option("--jobs", f.jobs, "worker threads, 0 = all");

  auto* decompress = app.add_subcommand("decompress", "decode an archive");
  decompress->add_option("--archive", f.archive)->required();
  decompress->add_option("--out", f.out, "file (one item) or directory")->required();
  decompress->add_option("--corpus", f.corpus, "name outputs after this corpus' item paths");
  decompress->add_option("--jobs", f.jobs);

  auto* verify = app.add_subcommand("verify", "check an archive against the original data");
  verify->add_option("--archive", f.archive)->required();
  verify->add_option("--against", f.against, "original file");
  verify->add_option("--corpus", f.corpus, "original corpus directory");
  verify->add_option("--jobs", f.jobs);

  auto* score = app.add_subcommand("score", "net score of a compressor artifact and an archive");
  score->add_option("--archive", f.archive)->required();
  score->add_option("--compressor", f.compressor, "declared compressor artifact");
  score->add_option("--corpus", f.corpus, "corpus the archive encodes");
  score->add_option("--manifest", f.manifest, "leaderboard file to record a verified score in");
  score->add_option("--jobs", f.jobs);

  auto* compare = app.add_subcommand("compare", "compare two theories by net score");
  compare->add_option("--archive", f.archives, "archive of each theory (twice)")->required();
  compare->add_option("--compressor", f.compressors, "compressor artifact of each theory");
  compare->add_option("--corpus", f.corpus);

  auto* nfl = app.add_subcommand("nfl-audit", "exhaustive codelength audit over all N-bit inputs");
  nfl->add_option("--codec", f.codec, codecs);
  nfl->add_option("--n", f.n, "input bits (1-16)");
  nfl->add_option("--jobs", f.jobs);

  auto* board = app.add_subcommand("leaderboard", "print rankings");
  board->add_option("--manifest", f.manifest, "leaderboard file")->required();
  board->add_option("--corpus", f.corpus, "corpus directory or id");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("crm");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(f, out);
    if (compress->parsed()) return cmd_compress(f, out);
    if (decompress->parsed()) return cmd_decompress(f, out);
    if (verify->parsed()) return cmd_verify(f, out);
    if (score->parsed()) return cmd_score(f, out);
    if (compare->parsed()) return cmd_compare(f, out);
    if (nfl->parsed()) return cmd_nfl(f, out);
    if (board->parsed()) return cmd_leaderboard(f, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    // Unreadable input files count as I/O failures.
    err << "input error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}

}  // namespace crm::cli
