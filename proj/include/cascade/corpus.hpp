#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "cascade/model.hpp"

namespace cascade {

using MentionIndex = std::uint32_t;

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

enum class RejectReason : std::uint8_t {
  MissingTweetId,
  MissingPublicationId,
  BadKind,
  OriginalWithParent,
  SelfParent,
  BadTimestamp,
  Unreadable,
};

std::string_view to_string(RejectReason reason);

struct Validated {
  MentionRecord record;
  // posted_at was a string that could not be parsed; the record is kept
  // without a timestamp.
  bool timestamp_dropped = false;
};

using ValidationResult = std::variant<Validated, RejectReason>;

// Checks one decoded `mentions.jsonl` object. Non-string identifiers count as
// missing; a non-string, non-null posted_at is rejected as bad_timestamp.
ValidationResult validate_record(const nlohmann::json& raw);

struct IngestReport {
  std::uint64_t records_read = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t duplicates = 0;
  // Duplicates whose publication differs from the first binding.
  std::uint64_t cross_publication_duplicates = 0;
  std::uint64_t orphan_retweets = 0;
  std::uint64_t missing_authors = 0;
  std::uint64_t missing_timestamps = 0;
  std::uint64_t dropped_timestamps = 0;
  std::map<std::string, std::uint64_t, std::less<>> rejections;

  nlohmann::json to_json() const;
  bool operator==(const IngestReport&) const = default;
};

// Immutable collection of accepted mentions. Records live in a deque so the
// id index can hold views into them.
class Corpus {
 public:
  Corpus() = default;
  Corpus(Corpus&&) noexcept = default;
  Corpus& operator=(Corpus&&) noexcept = default;
  Corpus(const Corpus&) = delete;
  Corpus& operator=(const Corpus&) = delete;

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  const MentionRecord& at(MentionIndex index) const { return records_.at(index); }
  const MentionRecord* find(std::string_view tweet_id) const;

  bool has_publication(std::string_view publication_id) const;
  // Mentions of one publication in acceptance order; empty for unknown ids.
  std::span<const MentionIndex> mentions_of(std::string_view publication_id) const;
  // Sorted ascending.
  std::vector<std::string> publication_ids() const;
  std::size_t publication_count() const noexcept { return by_publication_.size(); }

  const IngestReport& report() const noexcept { return report_; }

  // Same accepted mentions, regardless of acceptance order.
  bool operator==(const Corpus& other) const;

 private:
  friend class CorpusBuilder;

  std::deque<MentionRecord> records_;
  std::unordered_map<std::string_view, MentionIndex, StringHash, std::equal_to<>> by_id_;
  std::map<std::string, std::vector<MentionIndex>, std::less<>> by_publication_;
  IngestReport report_;
};

class CorpusBuilder {
 public:
  // First occurrence of a tweet_id wins; later ones are counted as duplicates.
  bool add(MentionRecord record);
  void count_rejection(RejectReason reason);
  IngestReport& report() noexcept { return corpus_.report_; }
  Corpus finish() &&;

 private:
  Corpus corpus_;
};

Corpus ingest_mentions(std::istream& in);
Corpus ingest_mentions_file(const std::string& path);

// Emits accepted records in acceptance order, one object per line.
void write_mentions_jsonl(const Corpus& corpus, std::ostream& out);
nlohmann::json mention_to_json(const MentionRecord& record);

// Number of distinct non-null author ids among a publication's mentions.
std::size_t unique_users(const Corpus& corpus, std::string_view publication_id);

// Publications with at least `min_nutu` unique users, sorted ascending.
std::vector<std::string> select_highly_tweeted(const Corpus& corpus, std::uint64_t min_nutu);

// tweet_id -> latest StatusRecord.
class StatusSnapshot {
 public:
  // Keeps the record with the latest checked_at; on equal checked_at the
  // incoming record replaces the stored one. Returns false if discarded.
  bool merge(StatusRecord record);
  void merge(const StatusSnapshot& other);

  const StatusRecord* find(std::string_view tweet_id) const;
  bool unavailable(std::string_view tweet_id) const;

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  // Records sorted by tweet_id.
  std::vector<const StatusRecord*> sorted() const;

  bool operator==(const StatusSnapshot& other) const { return records_ == other.records_; }

 private:
  std::unordered_map<std::string, StatusRecord, StringHash, std::equal_to<>> records_;
};

struct StatusIngestReport {
  std::uint64_t records_read = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  // Accepted lines later replaced (or discarded) by the latest-wins rule.
  std::uint64_t superseded = 0;
  std::uint64_t unknown_error_codes = 0;
  std::map<std::string, std::uint64_t, std::less<>> rejections;

  nlohmann::json to_json() const;
};

struct StatusIngest {
  StatusSnapshot snapshot;
  StatusIngestReport report;
};

StatusIngest ingest_statuses(std::istream& in);
StatusIngest ingest_statuses_file(const std::string& path);

void write_statuses_jsonl(const StatusSnapshot& snapshot, std::ostream& out);
nlohmann::json status_to_json(const StatusRecord& record);

}  // namespace cascade
