#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cascade/corpus.hpp"
#include "cascade/simulator.hpp"

namespace cascade::testing {

MentionRecord original(std::string id, std::string pub, std::optional<std::string> author = {});
MentionRecord retweet(std::string id, std::string pub, std::optional<std::string> parent,
                      std::optional<std::string> author = {});

Corpus corpus_of(std::vector<MentionRecord> records);
std::string to_jsonl(const std::vector<MentionRecord>& records);
std::string to_jsonl(const std::vector<StatusRecord>& records);

// The four hypothetical publications "A".."D" (TWS 10 each). Tweet ids are
// "<P>.o<i>" and "<P>.r<i>"; every tweet has its own author "user:<tweet>"
// unless `one_original_author`, in which case all originals of the
// publication are by "user:<P>".
std::vector<MentionRecord> shape_publication(char which, bool one_original_author = false);

struct BreakdownRow {
  const char* altmetric_id;
  std::uint64_t tws;
  std::uint64_t n_ot;
  std::uint64_t n_unt;
  const char* tunr_percent;  // as printed, one decimal
  std::uint64_t n_unot;
  std::uint64_t n_unrt;
  std::uint64_t max_n_unrt;
};

extern const std::array<BreakdownRow, 10> kTopUnavailable;

struct BreakdownFixture {
  std::vector<MentionRecord> mentions;
  std::vector<StatusRecord> statuses;
};

// A corpus shape consistent with one printed row: the unavailable retweets
// concentrated on one hub (a recorded unavailable original, or an assumed one
// when the row has no unavailable original), the rest spread over the other
// originals. Every tweet has a distinct author, so NUTU = TWS.
BreakdownFixture breakdown_fixture(const BreakdownRow& row);

// Up to `max_mentions` mentions for publication `pub` with shared parents,
// orphan retweets, chains, foreign parents and shared or missing authors.
std::vector<MentionRecord> random_publication(std::mt19937_64& rng, const std::string& pub,
                                              std::size_t max_mentions = 30);

// Valid events for the structure of `records`.
std::vector<RemovalEvent> random_events(std::mt19937_64& rng,
                                        const std::vector<MentionRecord>& records,
                                        const std::vector<std::string>& node_ids,
                                        std::size_t max_events = 10);

}  // namespace cascade::testing
