#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cascade/corpus.hpp"
#include "cascade/metrics.hpp"

namespace cascade {

struct XminPolicy {
  enum class Kind : std::uint8_t { Fixed, ScanKS };

  Kind kind = Kind::ScanKS;
  std::uint64_t xmin = 1;  // used by Fixed

  static XminPolicy fixed(std::uint64_t xmin) { return {Kind::Fixed, xmin}; }
  static XminPolicy scan_ks() { return {Kind::ScanKS, 1}; }
};

struct PowerLawFit {
  double alpha = 0.0;
  std::uint64_t xmin = 0;
  double ks_distance = 0.0;
  std::uint64_t n_tail = 0;
};

// Discrete power law fitted to the samples >= xmin with the continuity
// corrected estimator
//   alpha = 1 + n / sum(ln(x / (xmin - 1/2)))
// and compared to the tail through the matching approximate CCDF
//   P(X >= x) = ((x - 1/2) / (xmin - 1/2))^(1 - alpha).
// ks_distance is the largest gap between the empirical and fitted CDF over
// the integers of the tail.
//
// ScanKS tries every distinct sample value as xmin and keeps the smallest
// ks_distance (ties: smaller xmin).
//
// Errors: "bad_sample" (a zero sample or xmin), "insufficient_tail" (< 2 tail
// samples), "degenerate_tail" (all tail samples equal).
PowerLawFit fit_power_law(std::span<const std::uint64_t> samples, XminPolicy policy);

struct PdfCcdfPoint {
  std::uint64_t value = 0;
  double pdf = 0.0;
  double ccdf = 0.0;  // P(X >= value)
};

// Throws Error("empty_sample").
std::vector<PdfCcdfPoint> pdf_ccdf(std::span<const std::uint64_t> samples);

// Ranks starting at 1; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of average ranks. Errors: "length_mismatch",
// "too_short" (< 2 pairs), "degenerate_ranks" (a side with all ranks equal).
double spearman(std::span<const double> xs, std::span<const double> ys);

// Spearman between recorded (TWS) and still-available mention counts across
// the given publications.
double stability_correlation(std::span<const StructureMetrics> metrics, const Corpus& corpus,
                             const StatusSnapshot& snapshot);

}  // namespace cascade
