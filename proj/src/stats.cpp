#include "cascade/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cascade/error.hpp"

namespace cascade {

namespace {

// Distinct sorted sample values with suffix counts and suffix log sums, so a
// candidate xmin costs O(1) for alpha and O(distinct tail) for KS.
class TailTable {
 public:
  explicit TailTable(std::span<const std::uint64_t> samples) {
    std::vector<std::uint64_t> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    n_ = sorted.size();
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      values_.push_back(sorted[i]);
      counts_.push_back(j - i);
      i = j;
    }
    const std::size_t d = values_.size();
    suffix_count_.assign(d + 1, 0);
    suffix_log_.assign(d + 1, 0.0);
    log_lo_.resize(d);
    log_hi_.resize(d);
    for (std::size_t k = d; k-- > 0;) {
      const auto v = static_cast<double>(values_[k]);
      suffix_count_[k] = suffix_count_[k + 1] + counts_[k];
      suffix_log_[k] = suffix_log_[k + 1] + static_cast<double>(counts_[k]) * std::log(v);
      log_lo_[k] = std::log(v - 0.5);
      log_hi_[k] = std::log(v + 0.5);
    }
  }

  std::size_t distinct() const { return values_.size(); }
  std::uint64_t value(std::size_t k) const { return values_[k]; }

  // Index of the first distinct value >= x.
  std::size_t lower_bound(std::uint64_t x) const {
    return static_cast<std::size_t>(std::lower_bound(values_.begin(), values_.end(), x) -
                                    values_.begin());
  }

  // Tail starting at distinct index k, with the given xmin (<= values_[k]).
  // Returns nullopt-like error codes through `error`.
  std::optional<PowerLawFit> fit(std::size_t k, std::uint64_t xmin, const char*& error,
                                 double give_up_above = std::numeric_limits<double>::infinity()) const {
    const std::uint64_t n_tail = k < values_.size() ? suffix_count_[k] : 0;
    if (n_tail < 2) {
      error = "insufficient_tail";
      return std::nullopt;
    }
    if (k + 1 == values_.size()) {
      error = "degenerate_tail";
      return std::nullopt;
    }
    const double log_xmin = std::log(static_cast<double>(xmin) - 0.5);
    const double nt = static_cast<double>(n_tail);
    const double log_sum = suffix_log_[k] - nt * log_xmin;
    PowerLawFit fit;
    fit.alpha = 1.0 + nt / log_sum;
    fit.xmin = xmin;
    fit.n_tail = n_tail;

    const double slope = 1.0 - fit.alpha;
    double ks = 0.0;
    for (std::size_t j = k; j < values_.size(); ++j) {
      const double emp_ge = static_cast<double>(suffix_count_[j]) / nt;
      const double emp_gt = static_cast<double>(suffix_count_[j + 1]) / nt;
      // Fitted P(X >= v) and P(X >= v + 1).
      const double fit_ge = std::exp(slope * (log_lo_[j] - log_xmin));
      const double fit_gt = std::exp(slope * (log_hi_[j] - log_xmin));
      ks = std::max({ks, std::abs(emp_ge - fit_ge), std::abs(emp_gt - fit_gt)});
      if (ks > give_up_above) break;
    }
    fit.ks_distance = ks;
    return fit;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> values_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> suffix_count_;
  std::vector<double> suffix_log_;
  std::vector<double> log_lo_;
  std::vector<double> log_hi_;
};

}  // namespace

PowerLawFit fit_power_law(std::span<const std::uint64_t> samples, XminPolicy policy) {
  if (std::find(samples.begin(), samples.end(), 0U) != samples.end()) {
    throw Error("bad_sample", "samples must be positive integers");
  }
  const TailTable table(samples);
  const char* error = "insufficient_tail";

  if (policy.kind == XminPolicy::Kind::Fixed) {
    if (policy.xmin == 0) throw Error("bad_sample", "xmin must be positive");
    auto fit = table.fit(table.lower_bound(policy.xmin), policy.xmin, error);
    if (!fit) throw Error(error, "cannot fit a tail from xmin " + std::to_string(policy.xmin));
    return *fit;
  }

  std::optional<PowerLawFit> best;
  for (std::size_t k = 0; k < table.distinct(); ++k) {
    const double bound = best ? best->ks_distance : std::numeric_limits<double>::infinity();
    auto fit = table.fit(k, table.value(k), error, bound);
    if (fit && (!best || fit->ks_distance < best->ks_distance)) best = fit;
  }
  if (!best) throw Error(error, "no candidate xmin leaves a usable tail");
  return *best;
}

std::vector<PdfCcdfPoint> pdf_ccdf(std::span<const std::uint64_t> samples) {
  if (samples.empty()) throw Error("empty_sample", "no samples");
  std::vector<std::uint64_t> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  std::vector<PdfCcdfPoint> out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    out.push_back({sorted[i], static_cast<double>(j - i) / n,
                   static_cast<double>(sorted.size() - i) / n});
    i = j;
  }
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("length_mismatch", "inputs differ in length");
  if (xs.size() < 2) throw Error("too_short", "need at least two pairs");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  // Average ranks always have mean (n + 1) / 2.
  const double mean = (static_cast<double>(xs.size()) + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("degenerate_ranks", "a side has no rank variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double stability_correlation(std::span<const StructureMetrics> metrics, const Corpus& corpus,
                             const StatusSnapshot& snapshot) {
  std::vector<double> recorded;
  std::vector<double> available;
  recorded.reserve(metrics.size());
  available.reserve(metrics.size());
  for (const StructureMetrics& m : metrics) {
    std::uint64_t unavailable = 0;
    for (const MentionIndex i : corpus.mentions_of(m.publication_id)) {
      if (snapshot.unavailable(corpus.at(i).tweet_id)) ++unavailable;
    }
    recorded.push_back(static_cast<double>(m.counts.tws));
    available.push_back(static_cast<double>(m.counts.tws - std::min(unavailable, m.counts.tws)));
  }
  return spearman(recorded, available);
}

}  // namespace cascade
