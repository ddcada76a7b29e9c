#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cascade/corpus.hpp"
#include "cascade/error.hpp"
#include "cascade/model.hpp"

namespace cascade {

struct LookupVerdict {
  std::string tweet_id;
  bool available = true;
  std::optional<int> error_code;  // only meaningful when unavailable

  bool operator==(const LookupVerdict&) const = default;
};

// Answers availability lookups for batches of at most kMaxBatch ids.
// Implementations must return a verdict for every requested id, must be
// idempotent within one audit, and must tolerate concurrent calls. A
// temporary failure is signalled with TransientSourceError.
class StatusSource {
 public:
  static constexpr std::size_t kMaxBatch = 100;

  virtual ~StatusSource() = default;
  virtual std::vector<LookupVerdict> lookup(std::span<const std::string> ids) = 0;
};

class TransientSourceError : public Error {
 public:
  explicit TransientSourceError(const std::string& message)
      : Error("transient_source_failure", message) {}
};

// Serves verdicts from a recorded snapshot (a statuses.jsonl fixture). Ids the
// fixture does not know are reported available.
class SnapshotStatusSource : public StatusSource {
 public:
  explicit SnapshotStatusSource(StatusSnapshot fixture) : fixture_(std::move(fixture)) {}

  std::vector<LookupVerdict> lookup(std::span<const std::string> ids) override;

 private:
  StatusSnapshot fixture_;
};

struct AuditOptions {
  std::size_t batch_size = StatusSource::kMaxBatch;
  std::size_t max_inflight = 4;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::milliseconds max_backoff{2000};
  // Replaceable for tests; defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;
};

struct AuditResult {
  StatusSnapshot snapshot;
  // Ids whose batch failed on every attempt, in input order.
  std::vector<std::string> unresolved;

  bool complete() const noexcept { return unresolved.empty(); }
  // Throws Error("unresolved_ids") listing the unresolved ids.
  void require_complete() const;
};

// Looks up every id in batches, retrying a failed batch with exponential
// backoff. Throws Error("duplicate_id") if `ids` repeats an id and
// Error("bad_options") for a batch size outside [1, 100].
AuditResult audit(std::span<const std::string> ids, StatusSource& source, Timestamp checked_at,
                  const AuditOptions& options = {});

inline constexpr std::array<Reason, 5> kAllReasons{Reason::Deleted, Reason::Suspended,
                                                   Reason::Protected, Reason::PageNotFound,
                                                   Reason::Other};

struct ReasonTally {
  std::array<std::uint64_t, 5> counts{};  // indexed like kAllReasons
  std::uint64_t total = 0;
  std::array<double, 5> shares{};  // zero when total == 0

  std::uint64_t count(Reason r) const { return counts[static_cast<std::size_t>(r)]; }
  double share(Reason r) const { return shares[static_cast<std::size_t>(r)]; }
};

// Over Unavailable records only.
ReasonTally reason_distribution(const StatusSnapshot& snapshot);

struct YearBucket {
  int year = 0;
  std::uint64_t total_with_date = 0;
  std::uint64_t unavailable = 0;
  double share = 0.0;
};

struct YearlyDistribution {
  std::vector<YearBucket> years;  // ascending
  std::uint64_t undated = 0;
};

// UTC calendar-year buckets over recorded mentions.
YearlyDistribution yearly_distribution(const Corpus& corpus, const StatusSnapshot& snapshot);
// Same, restricted to the mentions of the given publications.
YearlyDistribution yearly_distribution(const Corpus& corpus, const StatusSnapshot& snapshot,
                                       std::span<const std::string> publication_ids);

}  // namespace cascade
