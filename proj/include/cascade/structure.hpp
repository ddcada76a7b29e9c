#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cascade/corpus.hpp"

namespace cascade {

enum class Provenance : std::uint8_t { Recorded, Assumed };

std::string_view to_string(Provenance provenance);

// Prefix of synthetic ids given to assumed originals.
inline constexpr std::string_view kAssumedPrefix = "assumed:";

struct OriginalNode {
  std::string tweet_id;
  Provenance provenance = Provenance::Recorded;
  std::optional<std::string> author_id;
  // Sorted ascending.
  std::vector<std::string> retweet_children;

  bool assumed() const noexcept { return provenance == Provenance::Assumed; }
  bool operator==(const OriginalNode&) const = default;
};

// Two-level forest of one publication: original nodes and the retweets that
// point at them. Originals are sorted by tweet_id.
struct DisseminationStructure {
  std::string publication_id;
  std::vector<OriginalNode> originals;
  // Retweets that ended up on their own assumed node because no parent could
  // be resolved.
  std::uint64_t orphan_singletons = 0;
  // Retweets whose recorded parent was itself a retweet.
  std::uint64_t chained_retweets = 0;

  bool operator==(const DisseminationStructure&) const = default;
};

// Rules:
//  - each recorded original of the publication becomes a Recorded node;
//  - a retweet attaches to the node of its parent id; a parent that is not a
//    recorded original of this publication becomes a shared Assumed node
//    "assumed:<parent>";
//  - a retweet naming another retweet is re-attached to that retweet's root;
//    chains that never reach a known id degrade to the orphan rule;
//  - a retweet without parent gets its own Assumed node "assumed:<retweet>".
// Throws Error("unknown_publication") if the corpus has no such publication.
DisseminationStructure build_structure(const Corpus& corpus, std::string_view publication_id);

struct StructureCensus {
  std::uint64_t n_recorded_originals = 0;
  std::uint64_t n_assumed_originals = 0;
  std::uint64_t n_retweets = 0;
  std::uint64_t orphan_singletons = 0;

  bool operator==(const StructureCensus&) const = default;
};

StructureCensus structure_census(const DisseminationStructure& structure);

// One line per original node:
// {"publication_id", "original_id", "provenance", "children": [...]}
void write_structure_jsonl(const DisseminationStructure& structure, std::ostream& out);
nlohmann::json node_to_json(const DisseminationStructure& structure, const OriginalNode& node);

}  // namespace cascade
