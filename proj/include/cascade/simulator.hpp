#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cascade/corpus.hpp"
#include "cascade/structure.hpp"

namespace cascade {

struct RemovalEvent {
  enum class Kind : std::uint8_t { DeleteTweet, SuspendUser, ProtectUser, RestoreUser };

  Kind kind = Kind::DeleteTweet;
  std::string target;  // tweet id for DeleteTweet, author id otherwise

  static RemovalEvent delete_tweet(std::string id) { return {Kind::DeleteTweet, std::move(id)}; }
  static RemovalEvent suspend_user(std::string id) { return {Kind::SuspendUser, std::move(id)}; }
  static RemovalEvent protect_user(std::string id) { return {Kind::ProtectUser, std::move(id)}; }
  static RemovalEvent restore_user(std::string id) { return {Kind::RestoreUser, std::move(id)}; }

  bool operator==(const RemovalEvent&) const = default;
};

std::string_view to_string(RemovalEvent::Kind kind);
std::optional<RemovalEvent::Kind> parse_event_kind(std::string_view text);

// Unavailable tweets (recorded mentions and assumed originals) with their
// reason, plus the users currently hidden.
//
// A tweet is unavailable iff it was deleted, its author is suspended or
// protected, or it is a retweet whose root is unavailable. Deleted marks are
// permanent. When several causes apply the reason is picked in this order:
// Deleted (own or root's), own Suspended, own Protected, root's reason.
struct CascadeState {
  std::map<std::string, Reason, std::less<>> unavailable;
  std::set<std::string, std::less<>> suspended_users;
  std::set<std::string, std::less<>> protected_users;

  bool operator==(const CascadeState&) const = default;
};

// Index of one structure for repeated event application. Holds views into
// the structure and corpus, which must outlive it.
class CascadeModel {
 public:
  CascadeModel(const DisseminationStructure& structure, const Corpus& corpus);

  // Throws Error("unknown_target") when the event names a tweet or user that
  // is not part of the structure. Restoring a user who is neither suspended
  // nor protected changes nothing.
  void apply(CascadeState& state, const RemovalEvent& event) const;

  bool has_tweet(std::string_view tweet_id) const;
  bool has_author(std::string_view author_id) const;

  std::uint64_t tws() const noexcept { return tws_; }
  std::uint64_t unavailable_mentions(const CascadeState& state) const;
  // Unavailable recorded mentions over TWS.
  double loss(const CascadeState& state) const;

  // One record per recorded mention; assumed originals are not mentions.
  StatusSnapshot to_snapshot(const CascadeState& state, Timestamp checked_at = {}) const;

  // Recorded mentions that one event would make unavailable on a fresh state.
  std::uint64_t single_event_impact(const RemovalEvent& event) const;

  struct Tweet {
    std::string_view id;
    std::optional<std::uint32_t> author;  // index into authors()
    std::optional<std::uint32_t> root;    // index of the root for retweets
    bool recorded = true;
  };

  std::span<const Tweet> tweets() const noexcept { return tweets_; }
  std::span<const std::string_view> authors() const noexcept { return authors_; }
  // Children of the tweet at `index` (empty unless it is a root).
  std::span<const std::uint32_t> children(std::uint32_t index) const { return children_[index]; }

 private:
  std::uint32_t tweet_index(std::string_view id) const;
  std::uint32_t author_index(std::string_view id) const;
  std::optional<Reason> evaluate(const CascadeState& state, std::uint32_t tweet) const;
  void refresh(CascadeState& state, std::uint32_t tweet) const;
  void refresh_user(CascadeState& state, std::uint32_t author) const;

  std::vector<Tweet> tweets_;
  std::vector<std::vector<std::uint32_t>> children_;
  std::unordered_map<std::string_view, std::uint32_t> tweet_lookup_;
  std::vector<std::string_view> authors_;  // sorted
  std::unordered_map<std::string_view, std::uint32_t> author_lookup_;
  std::vector<std::vector<std::uint32_t>> tweets_by_author_;
  std::uint64_t tws_ = 0;
};

CascadeState apply_event(const CascadeState& state, const DisseminationStructure& structure,
                         const Corpus& corpus, const RemovalEvent& event);

// Left fold of apply_event from the all-available state. Errors name the
// offending event index.
CascadeState simulate_state(const DisseminationStructure& structure, const Corpus& corpus,
                            std::span<const RemovalEvent> events);

StatusSnapshot simulate(const DisseminationStructure& structure, const Corpus& corpus,
                        std::span<const RemovalEvent> events, Timestamp checked_at = {});

struct WorstCase {
  RemovalEvent event;
  std::uint64_t unavailable = 0;
  double loss = 0.0;
};

// Exhaustive over DeleteTweet(each original node and retweet) and
// SuspendUser(each author). Ties go to the smaller target id.
WorstCase worst_case_single_event(const DisseminationStructure& structure, const Corpus& corpus);

struct RiskOptions {
  double p_delete = 0.0;
  double p_suspend = 0.0;
  double p_protect = 0.0;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  // Worker threads; results do not depend on it.
  unsigned threads = 1;
};

struct RiskSummary {
  double mean = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  double max = 0.0;
};

// Per-trial loss (TUnR) in trial order. Trial i draws from a generator
// seeded by (seed, i): first one deletion draw per recorded mention in the
// model's tweet order, then per author (sorted) a suspension draw and a
// protection draw; protection applies only to authors not suspended.
// Throws Error("bad_probability") or Error("bad_trials").
std::vector<double> monte_carlo_losses(const DisseminationStructure& structure,
                                       const Corpus& corpus, const RiskOptions& options);

// Quantiles use the nearest-rank rule on the sorted losses.
RiskSummary summarize_losses(std::vector<double> losses);

RiskSummary monte_carlo_risk(const DisseminationStructure& structure, const Corpus& corpus,
                             const RiskOptions& options);

// Line-delimited {"kind": ..., "target": ...}; blank lines skipped.
// Throws Error("bad_scenario") naming the 1-based line.
std::vector<RemovalEvent> parse_scenario(std::istream& in);
std::vector<RemovalEvent> parse_scenario_file(const std::string& path);

}  // namespace cascade
