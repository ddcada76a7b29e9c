#include "cascade/structure.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "cascade/error.hpp"

namespace cascade {

std::string_view to_string(Provenance provenance) {
  return provenance == Provenance::Recorded ? "recorded" : "assumed";
}

namespace {

struct RootKey {
  std::string id;
  bool assumed = false;
};

class RootResolver {
 public:
  RootResolver(const Corpus& corpus, std::string_view publication_id)
      : corpus_(corpus), publication_id_(publication_id) {}

  // Follows parent links from `retweet` until a recorded original of this
  // publication or an unrecorded id is reached. nullopt when the chain ends
  // without a parent or loops.
  std::optional<RootKey> resolve(const MentionRecord& retweet) const {
    const MentionRecord* current = &retweet;
    for (std::size_t hops = 0; hops <= corpus_.size(); ++hops) {
      if (!current->parent_tweet_id) return std::nullopt;
      const std::string& parent_id = *current->parent_tweet_id;
      const MentionRecord* parent = corpus_.find(parent_id);
      if (parent == nullptr || parent->publication_id != publication_id_) {
        return RootKey{std::string(kAssumedPrefix) + parent_id, true};
      }
      if (parent->kind == MentionKind::Original) return RootKey{parent_id, false};
      current = parent;
    }
    return std::nullopt;
  }

  bool names_retweet(const MentionRecord& retweet) const {
    if (!retweet.parent_tweet_id) return false;
    const MentionRecord* parent = corpus_.find(*retweet.parent_tweet_id);
    return parent != nullptr && parent->publication_id == publication_id_ &&
           parent->kind == MentionKind::Retweet;
  }

 private:
  const Corpus& corpus_;
  std::string_view publication_id_;
};

}  // namespace

DisseminationStructure build_structure(const Corpus& corpus, std::string_view publication_id) {
  const auto mentions = corpus.mentions_of(publication_id);
  if (mentions.empty()) {
    throw Error("unknown_publication", "no mentions for publication " + std::string(publication_id));
  }

  DisseminationStructure out;
  out.publication_id = std::string(publication_id);
  std::map<std::string, OriginalNode, std::less<>> nodes;

  for (const MentionIndex i : mentions) {
    const MentionRecord& rec = corpus.at(i);
    if (rec.kind != MentionKind::Original) continue;
    OriginalNode& node = nodes[rec.tweet_id];
    node.tweet_id = rec.tweet_id;
    node.provenance = Provenance::Recorded;
    node.author_id = rec.author_id;
  }

  const RootResolver resolver(corpus, publication_id);
  for (const MentionIndex i : mentions) {
    const MentionRecord& rec = corpus.at(i);
    if (rec.kind != MentionKind::Retweet) continue;
    if (resolver.names_retweet(rec)) ++out.chained_retweets;

    auto root = resolver.resolve(rec);
    if (!root) {
      root = RootKey{std::string(kAssumedPrefix) + rec.tweet_id, true};
      ++out.orphan_singletons;
    }
    auto it = nodes.find(root->id);
    if (it == nodes.end()) {
      OriginalNode node;
      node.tweet_id = root->id;
      node.provenance = Provenance::Assumed;
      it = nodes.emplace(root->id, std::move(node)).first;
    }
    it->second.retweet_children.push_back(rec.tweet_id);
  }

  out.originals.reserve(nodes.size());
  for (auto& [_, node] : nodes) {
    std::sort(node.retweet_children.begin(), node.retweet_children.end());
    out.originals.push_back(std::move(node));
  }
  return out;
}

StructureCensus structure_census(const DisseminationStructure& structure) {
  StructureCensus c;
  for (const OriginalNode& node : structure.originals) {
    if (node.assumed()) {
      ++c.n_assumed_originals;
    } else {
      ++c.n_recorded_originals;
    }
    c.n_retweets += node.retweet_children.size();
  }
  c.orphan_singletons = structure.orphan_singletons;
  return c;
}

nlohmann::json node_to_json(const DisseminationStructure& structure, const OriginalNode& node) {
  return nlohmann::json{{"publication_id", structure.publication_id},
                        {"original_id", node.tweet_id},
                        {"provenance", to_string(node.provenance)},
                        {"children", node.retweet_children}};
}

void write_structure_jsonl(const DisseminationStructure& structure, std::ostream& out) {
  for (const OriginalNode& node : structure.originals) {
    out << node_to_json(structure, node).dump() << '\n';
  }
}

}  // namespace cascade
