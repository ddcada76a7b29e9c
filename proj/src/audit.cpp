#include "cascade/audit.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace cascade {

std::vector<LookupVerdict> SnapshotStatusSource::lookup(std::span<const std::string> ids) {
  std::vector<LookupVerdict> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) {
    const StatusRecord* r = fixture_.find(id);
    if (r == nullptr || r->available()) {
      out.push_back({id, true, std::nullopt});
    } else {
      out.push_back({id, false, r->error_code});
    }
  }
  return out;
}

void AuditResult::require_complete() const {
  if (complete()) return;
  std::string listed;
  for (const std::string& id : unresolved) {
    if (!listed.empty()) listed += ',';
    listed += id;
  }
  throw Error("unresolved_ids", std::to_string(unresolved.size()) + " ids unresolved: " + listed);
}

namespace {

struct BatchOutcome {
  std::vector<LookupVerdict> verdicts;
  bool resolved = false;
};

// A response is usable only if it answers every requested id.
bool covers(std::span<const std::string> ids, const std::vector<LookupVerdict>& verdicts) {
  std::unordered_set<std::string_view> answered;
  for (const auto& v : verdicts) answered.insert(v.tweet_id);
  return std::all_of(ids.begin(), ids.end(),
                     [&](const std::string& id) { return answered.count(id) != 0; });
}

BatchOutcome run_batch(std::span<const std::string> ids, StatusSource& source,
                       const AuditOptions& options) {
  auto delay = options.initial_backoff;
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    try {
      auto verdicts = source.lookup(ids);
      if (covers(ids, verdicts)) return {std::move(verdicts), true};
    } catch (const TransientSourceError&) {
    }
    if (attempt == options.max_attempts) break;
    if (options.sleep) {
      options.sleep(delay);
    } else {
      std::this_thread::sleep_for(delay);
    }
    delay = std::min(delay * 2, options.max_backoff);
  }
  return {};
}

}  // namespace

AuditResult audit(std::span<const std::string> ids, StatusSource& source, Timestamp checked_at,
                  const AuditOptions& options) {
  if (options.batch_size == 0 || options.batch_size > StatusSource::kMaxBatch) {
    throw Error("bad_options", "batch size must be in [1, 100]");
  }
  {
    std::unordered_set<std::string_view> seen;
    for (const std::string& id : ids) {
      if (!seen.insert(id).second) throw Error("duplicate_id", "id requested twice: " + id);
    }
  }

  const std::size_t n_batches = (ids.size() + options.batch_size - 1) / options.batch_size;
  std::vector<BatchOutcome> outcomes(n_batches);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t b = next++; b < n_batches; b = next++) {
      const std::size_t begin = b * options.batch_size;
      const std::size_t len = std::min(options.batch_size, ids.size() - begin);
      outcomes[b] = run_batch(ids.subspan(begin, len), source, options);
    }
  };

  const std::size_t n_workers = std::clamp<std::size_t>(options.max_inflight, 1, std::max<std::size_t>(n_batches, 1));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  }

  // Merge in batch order so the result does not depend on scheduling.
  AuditResult result;
  for (std::size_t b = 0; b < n_batches; ++b) {
    const std::size_t begin = b * options.batch_size;
    const auto batch = ids.subspan(begin, std::min(options.batch_size, ids.size() - begin));
    if (!outcomes[b].resolved) {
      result.unresolved.insert(result.unresolved.end(), batch.begin(), batch.end());
      continue;
    }
    std::unordered_map<std::string_view, const LookupVerdict*> by_id;
    for (const auto& v : outcomes[b].verdicts) by_id.emplace(v.tweet_id, &v);
    for (const std::string& id : batch) {
      const LookupVerdict& v = *by_id.at(id);
      result.snapshot.merge(v.available ? make_available(id, checked_at)
                                        : make_unavailable(id, v.error_code, checked_at));
    }
  }
  return result;
}

ReasonTally reason_distribution(const StatusSnapshot& snapshot) {
  ReasonTally t;
  for (const StatusRecord* r : snapshot.sorted()) {
    if (r->available()) continue;
    ++t.counts[static_cast<std::size_t>(r->reason.value_or(Reason::Other))];
    ++t.total;
  }
  if (t.total > 0) {
    for (std::size_t i = 0; i < t.counts.size(); ++i) {
      t.shares[i] = static_cast<double>(t.counts[i]) / static_cast<double>(t.total);
    }
  }
  return t;
}

namespace {

void tally_mention(const MentionRecord& rec, const StatusSnapshot& snapshot,
                   std::map<int, YearBucket>& buckets, YearlyDistribution& out) {
  if (!rec.posted_at) {
    ++out.undated;
    return;
  }
  const int year = utc_year(*rec.posted_at);
  YearBucket& b = buckets[year];
  b.year = year;
  ++b.total_with_date;
  if (snapshot.unavailable(rec.tweet_id)) ++b.unavailable;
}

YearlyDistribution finish(std::map<int, YearBucket>& buckets, YearlyDistribution out) {
  for (auto& [_, b] : buckets) {
    b.share = b.total_with_date == 0
                  ? 0.0
                  : static_cast<double>(b.unavailable) / static_cast<double>(b.total_with_date);
    out.years.push_back(b);
  }
  return out;
}

}  // namespace

YearlyDistribution yearly_distribution(const Corpus& corpus, const StatusSnapshot& snapshot) {
  std::map<int, YearBucket> buckets;
  YearlyDistribution out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    tally_mention(corpus.at(static_cast<MentionIndex>(i)), snapshot, buckets, out);
  }
  return finish(buckets, std::move(out));
}

YearlyDistribution yearly_distribution(const Corpus& corpus, const StatusSnapshot& snapshot,
                                       std::span<const std::string> publication_ids) {
  std::map<int, YearBucket> buckets;
  YearlyDistribution out;
  for (const std::string& pub : publication_ids) {
    for (const MentionIndex i : corpus.mentions_of(pub)) {
      tally_mention(corpus.at(i), snapshot, buckets, out);
    }
  }
  return finish(buckets, std::move(out));
}

}  // namespace cascade
