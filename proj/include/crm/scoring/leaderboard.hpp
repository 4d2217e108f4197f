#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crm/scoring/score.hpp"

namespace crm::scoring {

enum class EntryStatus { kVerified, kFailed, kUnverified };
std::string_view to_string(EntryStatus s);
std::optional<EntryStatus> status_from_string(std::string_view s);

struct LeaderboardEntry {
  std::string corpus_id;
  std::string codec;
  std::uint64_t compressor_bytes = 0;
  std::uint64_t payload_bytes = 0;
  EntryStatus status = EntryStatus::kUnverified;
  std::string timestamp;  // ISO-8601 UTC, e.g. 2024-01-31T12:00:00Z
  std::string note;

  [[nodiscard]] NetScore score() const { return {corpus_id, compressor_bytes, payload_bytes}; }
  friend bool operator==(const LeaderboardEntry&, const LeaderboardEntry&) = default;
};

struct RankedEntry {
  std::size_t rank = 0;  // 1-based; tied totals share a rank
  bool tie = false;      // same total as another entry
  LeaderboardEntry entry;
};

struct LeaderboardUpdate {
  bool accepted = false;
  std::string reason;  // why the entry was rejected
};

class Leaderboard;
// Appends a verified entry (stamping it with iso8601_now() when it has no
// timestamp). Entries that are not verified, or whose fields cannot be
// stored, are rejected and the board is left unchanged.
LeaderboardUpdate leaderboard_update(Leaderboard& board, LeaderboardEntry entry);

// Append-only history of accepted entries.
//
// Text form: one tab-separated record per line (corpus, codec, compressor
// bytes, payload bytes, total bits, status, timestamp, note); lines starting
// with '#' are comments. Fields may not contain tabs or newlines.
class Leaderboard {
 public:
  [[nodiscard]] const std::vector<LeaderboardEntry>& history() const { return history_; }

  // Verified entries of one corpus by total bits, then timestamp, then
  // insertion order.
  [[nodiscard]] std::vector<RankedEntry> ranking(std::string_view corpus_id) const;

  [[nodiscard]] std::string serialize() const;
  // FormatError on a malformed record (including a total that does not
  // match its parts).
  static Leaderboard parse(std::string_view text);

 private:
  friend LeaderboardUpdate leaderboard_update(Leaderboard& board, LeaderboardEntry entry);
  std::vector<LeaderboardEntry> history_;
};

// Current UTC time in ISO-8601, or SOURCE_DATE_EPOCH when that is set.
std::string iso8601_now();

}  // namespace crm::scoring
