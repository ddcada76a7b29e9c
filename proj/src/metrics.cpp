#include "cascade/metrics.hpp"

#include <algorithm>
#include <unordered_set>

#include "cascade/error.hpp"

namespace cascade {

TweetCounts tweet_counts(const DisseminationStructure& structure, const Corpus& corpus) {
  TweetCounts c;
  std::unordered_set<std::string_view> authors;
  const auto count_author = [&](std::string_view tweet_id) {
    const MentionRecord* rec = corpus.find(tweet_id);
    if (rec != nullptr && rec->author_id) authors.insert(*rec->author_id);
  };
  for (const OriginalNode& node : structure.originals) {
    if (!node.assumed()) {
      ++c.n_ot;
      count_author(node.tweet_id);
    }
    c.n_rt += node.retweet_children.size();
    for (const std::string& child : node.retweet_children) count_author(child);
  }
  c.tws = c.n_ot + c.n_rt;
  c.nutu = authors.size();
  return c;
}

namespace {

std::uint64_t recorded_originals(const DisseminationStructure& s) {
  return static_cast<std::uint64_t>(
      std::count_if(s.originals.begin(), s.originals.end(),
                    [](const OriginalNode& n) { return !n.assumed(); }));
}

std::uint64_t retweet_total(const DisseminationStructure& s) {
  std::uint64_t n = 0;
  for (const OriginalNode& node : s.originals) n += node.retweet_children.size();
  return n;
}

}  // namespace

double degree_of_originality(const DisseminationStructure& structure) {
  const std::uint64_t n_ot = recorded_originals(structure);
  const std::uint64_t tws = n_ot + retweet_total(structure);
  if (tws == 0) {
    throw Error("empty_publication", "publication " + structure.publication_id + " has no mentions");
  }
  return static_cast<double>(n_ot) / static_cast<double>(tws);
}

double degree_of_concentration(const DisseminationStructure& structure) {
  std::size_t total = 0;
  std::size_t largest = 0;
  for (const OriginalNode& node : structure.originals) {
    total += node.retweet_children.size();
    largest = std::max(largest, node.retweet_children.size());
  }
  if (total == 0) return 0.0;
  return static_cast<double>(largest) / static_cast<double>(total);
}

std::string_view to_string(Quadrant quadrant) {
  switch (quadrant) {
    case Quadrant::A:
      return "A";
    case Quadrant::B:
      return "B";
    case Quadrant::C:
      return "C";
    case Quadrant::D:
      break;
  }
  return "D";
}

StructureMetrics compute_metrics(const DisseminationStructure& structure, const Corpus& corpus) {
  StructureMetrics m;
  m.publication_id = structure.publication_id;
  m.counts = tweet_counts(structure, corpus);
  m.originality = degree_of_originality(structure);
  m.concentration = degree_of_concentration(structure);
  return m;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error("empty_corpus", "median of an empty list");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

Medians corpus_medians(std::span<const StructureMetrics> metrics) {
  if (metrics.empty()) throw Error("empty_corpus", "no publications to take medians over");
  std::vector<double> dos;
  std::vector<double> dcs;
  dos.reserve(metrics.size());
  dcs.reserve(metrics.size());
  for (const StructureMetrics& m : metrics) {
    dos.push_back(m.originality);
    dcs.push_back(m.concentration);
  }
  return Medians{median(std::move(dos)), median(std::move(dcs))};
}

Quadrant classify_quadrant(double originality, double concentration, double median_originality,
                           double median_concentration) noexcept {
  const bool high_do = originality >= median_originality;
  const bool high_dc = concentration >= median_concentration;
  if (high_dc) return high_do ? Quadrant::A : Quadrant::B;
  return high_do ? Quadrant::D : Quadrant::C;
}

UnavailabilityBreakdown unavailability_breakdown(const DisseminationStructure& structure,
                                                 const StatusSnapshot& snapshot) {
  UnavailabilityBreakdown b;
  std::uint64_t tws = 0;
  for (const OriginalNode& node : structure.originals) {
    if (!node.assumed()) {
      ++tws;
      if (snapshot.unavailable(node.tweet_id)) ++b.n_unot;
    }
    std::uint64_t under_node = 0;
    for (const std::string& child : node.retweet_children) {
      if (snapshot.unavailable(child)) ++under_node;
    }
    tws += node.retweet_children.size();
    b.n_unrt += under_node;
    b.max_n_unrt = std::max(b.max_n_unrt, under_node);
  }
  b.n_unt = b.n_unot + b.n_unrt;
  b.tunr = tws == 0 ? 0.0 : static_cast<double>(b.n_unt) / static_cast<double>(tws);
  return b;
}

std::vector<PublicationReport> analyze_publications(const Corpus& corpus,
                                                    const StatusSnapshot& snapshot,
                                                    std::span<const std::string> publication_ids) {
  std::vector<PublicationReport> reports;
  reports.reserve(publication_ids.size());
  for (const std::string& id : publication_ids) {
    const DisseminationStructure structure = build_structure(corpus, id);
    reports.push_back({compute_metrics(structure, corpus),
                       unavailability_breakdown(structure, snapshot)});
  }
  if (reports.empty()) return reports;

  std::vector<StructureMetrics> metrics;
  metrics.reserve(reports.size());
  for (const auto& r : reports) metrics.push_back(r.metrics);
  const Medians med = corpus_medians(metrics);
  for (auto& r : reports) {
    r.metrics.quadrant = classify_quadrant(r.metrics.originality, r.metrics.concentration,
                                           med.originality, med.concentration);
  }
  return reports;
}

}  // namespace cascade
