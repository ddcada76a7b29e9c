#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/corpus.hpp"
#include "cascade/structure.hpp"

namespace cascade {

struct TweetCounts {
  std::uint64_t tws = 0;   // recorded mentions (originals + retweets)
  std::uint64_t nutu = 0;  // distinct non-null authors
  std::uint64_t n_ot = 0;  // recorded originals
  std::uint64_t n_rt = 0;  // retweets

  bool operator==(const TweetCounts&) const = default;
};

// Assumed originals are not mentions and never count here.
TweetCounts tweet_counts(const DisseminationStructure& structure, const Corpus& corpus);

// Recorded originals over recorded mentions. Throws Error("empty_publication")
// when the structure has no recorded mention.
double degree_of_originality(const DisseminationStructure& structure);

// Largest share of retweets attached to one original node, assumed nodes
// included. Zero when there are no retweets.
double degree_of_concentration(const DisseminationStructure& structure);

enum class Quadrant : std::uint8_t { A, B, C, D };

std::string_view to_string(Quadrant quadrant);

struct StructureMetrics {
  std::string publication_id;
  TweetCounts counts;
  double originality = 0.0;
  double concentration = 0.0;
  std::optional<Quadrant> quadrant;
};

StructureMetrics compute_metrics(const DisseminationStructure& structure, const Corpus& corpus);

struct Medians {
  double originality = 0.0;
  double concentration = 0.0;
};

double median(std::vector<double> values);

// Throws Error("empty_corpus") on an empty list.
Medians corpus_medians(std::span<const StructureMetrics> metrics);

// A: high DO, high DC; B: low DO, high DC; C: low, low; D: high DO, low DC.
// Values equal to a median count as high.
Quadrant classify_quadrant(double originality, double concentration, double median_originality,
                           double median_concentration) noexcept;

struct UnavailabilityBreakdown {
  std::uint64_t n_unt = 0;
  double tunr = 0.0;
  std::uint64_t n_unot = 0;
  std::uint64_t n_unrt = 0;
  // Most unavailable retweets under a single original node (recorded or
  // assumed).
  std::uint64_t max_n_unrt = 0;

  bool operator==(const UnavailabilityBreakdown&) const = default;
};

// Mentions missing from the snapshot count as available.
UnavailabilityBreakdown unavailability_breakdown(const DisseminationStructure& structure,
                                                 const StatusSnapshot& snapshot);

struct PublicationReport {
  StructureMetrics metrics;
  UnavailabilityBreakdown breakdown;
};

// Metrics, quadrants and breakdowns for the given publications, in the given
// order. Quadrants use the medians of this set.
std::vector<PublicationReport> analyze_publications(const Corpus& corpus,
                                                    const StatusSnapshot& snapshot,
                                                    std::span<const std::string> publication_ids);

}  // namespace cascade
