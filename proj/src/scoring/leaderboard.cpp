#include "crm/scoring/leaderboard.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "crm/error.hpp"

namespace crm::scoring {

namespace {

constexpr std::size_t kFields = 8;

bool storable(std::string_view s) { return s.find_first_of("\t\r\n") == std::string_view::npos; }

std::uint64_t parse_u64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty())
    throw FormatError(std::string("leaderboard: bad ") + what + " '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) return out;
    start = tab + 1;
  }
}

}  // namespace

std::string_view to_string(EntryStatus s) {
  switch (s) {
    case EntryStatus::kVerified: return "verified";
    case EntryStatus::kFailed: return "failed";
    case EntryStatus::kUnverified: return "unverified";
  }
  return "?";
}

std::optional<EntryStatus> status_from_string(std::string_view s) {
  for (auto st : {EntryStatus::kVerified, EntryStatus::kFailed, EntryStatus::kUnverified})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

std::vector<RankedEntry> Leaderboard::ranking(std::string_view corpus_id) const {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < history_.size(); ++i)
    if (history_[i].corpus_id == corpus_id && history_[i].status == EntryStatus::kVerified) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ta = history_[a].score().total_bits(), tb = history_[b].score().total_bits();
    if (ta != tb) return ta < tb;
    return history_[a].timestamp < history_[b].timestamp;
  });
  std::vector<RankedEntry> out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    RankedEntry r{k + 1, false, history_[order[k]]};
    const auto total = r.entry.score().total_bits();
    if (k > 0 && out.back().entry.score().total_bits() == total) {
      r.rank = out.back().rank;
      r.tie = out.back().tie = true;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string Leaderboard::serialize() const {
  std::string out = "# corpus\tcodec\tcompressor_bytes\tpayload_bytes\ttotal_bits\tstatus\ttimestamp\tnote\n";
  for (const auto& e : history_) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", e.corpus_id, e.codec, e.compressor_bytes, e.payload_bytes,
                       e.score().total_bits(), to_string(e.status), e.timestamp, e.note);
  }
  return out;
}

Leaderboard Leaderboard::parse(std::string_view text) {
  Leaderboard board;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto f = split_tabs(line);
    if (f.size() != kFields) throw FormatError("leaderboard: expected 8 tab-separated fields");
    LeaderboardEntry e;
    e.corpus_id = f[0];
    e.codec = f[1];
    e.compressor_bytes = parse_u64(f[2], "compressor bytes");
    e.payload_bytes = parse_u64(f[3], "payload bytes");
    const auto total = parse_u64(f[4], "total bits");
    const auto status = status_from_string(f[5]);
    if (!status) throw FormatError("leaderboard: bad status '" + std::string(f[5]) + "'");
    e.status = *status;
    e.timestamp = f[6];
    e.note = f[7];
    try {
      if (e.score().total_bits() != total) throw FormatError("leaderboard: total bits do not match the parts");
    } catch (const std::overflow_error&) {
      throw FormatError("leaderboard: score overflow");
    }
    board.history_.push_back(std::move(e));
  }
  return board;
}

LeaderboardUpdate leaderboard_update(Leaderboard& board, LeaderboardEntry entry) {
  if (entry.status != EntryStatus::kVerified)
    return {false, "entry is " + std::string(to_string(entry.status)) + "; only verified entries are ranked"};
  for (const auto* field : {&entry.corpus_id, &entry.codec, &entry.timestamp, &entry.note})
    if (!storable(*field)) return {false, "fields may not contain tabs or newlines"};
  if (entry.corpus_id.empty() || entry.codec.empty()) return {false, "corpus and codec are required"};
  if (entry.timestamp.empty()) entry.timestamp = iso8601_now();
  try {
    (void)entry.score().total_bits();
  } catch (const std::overflow_error&) {
    return {false, "score overflows 64 bits"};
  }
  board.history_.push_back(std::move(entry));
  return {true, {}};
}

std::string iso8601_now() {
  using namespace std::chrono;
  sys_seconds now = floor<seconds>(system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    std::int64_t v = 0;
    const auto [end, ec] = std::from_chars(epoch, epoch + std::char_traits<char>::length(epoch), v);
    if (ec == std::errc() && *end == '\0') now = sys_seconds(seconds(v));
  }
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now);
}

}  // namespace crm::scoring
