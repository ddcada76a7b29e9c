#include "cascade/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "cascade/error.hpp"

namespace cascade {

using nlohmann::json;

namespace {

// Returns the string value at `key`, or nullptr when absent, null, or not a
// string.
const std::string* string_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return nullptr;
  return it->get_ptr<const std::string*>();
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("unreadable_input", "cannot open " + path);
  return in;
}

}  // namespace

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::MissingTweetId:
      return "missing_tweet_id";
    case RejectReason::MissingPublicationId:
      return "missing_publication_id";
    case RejectReason::BadKind:
      return "bad_kind";
    case RejectReason::OriginalWithParent:
      return "original_with_parent";
    case RejectReason::SelfParent:
      return "self_parent";
    case RejectReason::BadTimestamp:
      return "bad_timestamp";
    case RejectReason::Unreadable:
      break;
  }
  return "unreadable";
}

ValidationResult validate_record(const json& raw) {
  if (!raw.is_object()) return RejectReason::Unreadable;

  const std::string* tweet_id = string_field(raw, "tweet_id");
  if (tweet_id == nullptr || tweet_id->empty()) return RejectReason::MissingTweetId;
  const std::string* publication_id = string_field(raw, "publication_id");
  if (publication_id == nullptr || publication_id->empty()) {
    return RejectReason::MissingPublicationId;
  }
  const std::string* kind_text = string_field(raw, "kind");
  const auto kind = kind_text ? parse_mention_kind(*kind_text) : std::nullopt;
  if (!kind) return RejectReason::BadKind;

  Validated out;
  MentionRecord& rec = out.record;
  rec.tweet_id = *tweet_id;
  rec.publication_id = *publication_id;
  rec.kind = *kind;

  if (const std::string* parent = string_field(raw, "parent_tweet_id");
      parent != nullptr && !parent->empty()) {
    if (rec.kind == MentionKind::Original) return RejectReason::OriginalWithParent;
    if (*parent == rec.tweet_id) return RejectReason::SelfParent;
    rec.parent_tweet_id = *parent;
  }

  if (const std::string* author = string_field(raw, "author_id");
      author != nullptr && !author->empty()) {
    rec.author_id = *author;
  }

  if (const auto it = raw.find("posted_at"); it != raw.end() && !it->is_null()) {
    if (!it->is_string()) return RejectReason::BadTimestamp;
    rec.posted_at = parse_iso8601(it->get_ref<const std::string&>());
    out.timestamp_dropped = !rec.posted_at.has_value();
  }
  return out;
}

json IngestReport::to_json() const {
  return json{{"records_read", records_read},
              {"accepted", accepted},
              {"rejected", rejected},
              {"duplicates", duplicates},
              {"cross_publication_duplicates", cross_publication_duplicates},
              {"orphan_retweets", orphan_retweets},
              {"missing_authors", missing_authors},
              {"missing_timestamps", missing_timestamps},
              {"dropped_timestamps", dropped_timestamps},
              {"rejections", rejections}};
}

const MentionRecord* Corpus::find(std::string_view tweet_id) const {
  const auto it = by_id_.find(tweet_id);
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

bool Corpus::has_publication(std::string_view publication_id) const {
  return by_publication_.find(publication_id) != by_publication_.end();
}

std::span<const MentionIndex> Corpus::mentions_of(std::string_view publication_id) const {
  const auto it = by_publication_.find(publication_id);
  if (it == by_publication_.end()) return {};
  return it->second;
}

std::vector<std::string> Corpus::publication_ids() const {
  std::vector<std::string> ids;
  ids.reserve(by_publication_.size());
  for (const auto& [id, _] : by_publication_) ids.push_back(id);
  return ids;
}

bool Corpus::operator==(const Corpus& other) const {
  if (size() != other.size()) return false;
  return std::all_of(records_.begin(), records_.end(), [&](const MentionRecord& r) {
    const MentionRecord* o = other.find(r.tweet_id);
    return o != nullptr && *o == r;
  });
}

bool CorpusBuilder::add(MentionRecord record) {
  IngestReport& rep = corpus_.report_;
  if (const MentionRecord* existing = corpus_.find(record.tweet_id)) {
    ++rep.duplicates;
    if (existing->publication_id != record.publication_id) ++rep.cross_publication_duplicates;
    return false;
  }
  ++rep.accepted;
  if (record.kind == MentionKind::Retweet && !record.parent_tweet_id) ++rep.orphan_retweets;
  if (!record.author_id) ++rep.missing_authors;
  if (!record.posted_at) ++rep.missing_timestamps;

  const auto index = static_cast<MentionIndex>(corpus_.records_.size());
  const MentionRecord& stored = corpus_.records_.emplace_back(std::move(record));
  corpus_.by_id_.emplace(stored.tweet_id, index);
  auto pub = corpus_.by_publication_.find(stored.publication_id);
  if (pub == corpus_.by_publication_.end()) {
    pub = corpus_.by_publication_.emplace(stored.publication_id, std::vector<MentionIndex>{})
              .first;
  }
  pub->second.push_back(index);
  return true;
}

void CorpusBuilder::count_rejection(RejectReason reason) {
  IngestReport& rep = corpus_.report_;
  ++rep.rejected;
  const auto key = to_string(reason);
  auto it = rep.rejections.find(key);
  if (it == rep.rejections.end()) it = rep.rejections.emplace(std::string(key), 0).first;
  ++it->second;
}

Corpus CorpusBuilder::finish() && { return std::move(corpus_); }

Corpus ingest_mentions(std::istream& in) {
  CorpusBuilder builder;
  std::string line;
  while (std::getline(in, line)) {
    if (is_blank(line)) continue;
    ++builder.report().records_read;
    json raw = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (raw.is_discarded()) {
      builder.count_rejection(RejectReason::Unreadable);
      continue;
    }
    auto result = validate_record(raw);
    if (auto* reject = std::get_if<RejectReason>(&result)) {
      builder.count_rejection(*reject);
      continue;
    }
    auto& ok = std::get<Validated>(result);
    const bool dropped = ok.timestamp_dropped;
    if (builder.add(std::move(ok.record)) && dropped) ++builder.report().dropped_timestamps;
  }
  return std::move(builder).finish();
}

Corpus ingest_mentions_file(const std::string& path) {
  auto in = open_input(path);
  return ingest_mentions(in);
}

json mention_to_json(const MentionRecord& r) {
  json j;
  j["tweet_id"] = r.tweet_id;
  j["publication_id"] = r.publication_id;
  j["author_id"] = r.author_id ? json(*r.author_id) : json(nullptr);
  j["posted_at"] = r.posted_at ? json(format_iso8601(*r.posted_at)) : json(nullptr);
  j["kind"] = to_string(r.kind);
  j["parent_tweet_id"] = r.parent_tweet_id ? json(*r.parent_tweet_id) : json(nullptr);
  return j;
}

void write_mentions_jsonl(const Corpus& corpus, std::ostream& out) {
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    out << mention_to_json(corpus.at(static_cast<MentionIndex>(i))).dump() << '\n';
  }
}

std::size_t unique_users(const Corpus& corpus, std::string_view publication_id) {
  std::unordered_set<std::string_view> authors;
  for (const MentionIndex i : corpus.mentions_of(publication_id)) {
    const auto& author = corpus.at(i).author_id;
    if (author) authors.insert(*author);
  }
  return authors.size();
}

std::vector<std::string> select_highly_tweeted(const Corpus& corpus, std::uint64_t min_nutu) {
  std::vector<std::string> selected;
  for (auto& id : corpus.publication_ids()) {
    if (unique_users(corpus, id) >= min_nutu) selected.push_back(std::move(id));
  }
  return selected;
}

// --- statuses -------------------------------------------------------------

bool StatusSnapshot::merge(StatusRecord record) {
  const auto it = records_.find(record.tweet_id);
  if (it == records_.end()) {
    std::string key = record.tweet_id;
    records_.emplace(std::move(key), std::move(record));
    return true;
  }
  if (record.checked_at < it->second.checked_at) return false;
  it->second = std::move(record);
  return true;
}

void StatusSnapshot::merge(const StatusSnapshot& other) {
  for (const StatusRecord* r : other.sorted()) merge(*r);
}

const StatusRecord* StatusSnapshot::find(std::string_view tweet_id) const {
  const auto it = records_.find(tweet_id);
  return it == records_.end() ? nullptr : &it->second;
}

bool StatusSnapshot::unavailable(std::string_view tweet_id) const {
  const StatusRecord* r = find(tweet_id);
  return r != nullptr && !r->available();
}

std::vector<const StatusRecord*> StatusSnapshot::sorted() const {
  std::vector<const StatusRecord*> out;
  out.reserve(records_.size());
  for (const auto& [_, r] : records_) out.push_back(&r);
  std::sort(out.begin(), out.end(),
            [](const StatusRecord* a, const StatusRecord* b) { return a->tweet_id < b->tweet_id; });
  return out;
}

json StatusIngestReport::to_json() const {
  return json{{"records_read", records_read},
              {"accepted", accepted},
              {"rejected", rejected},
              {"superseded", superseded},
              {"unknown_error_codes", unknown_error_codes},
              {"rejections", rejections}};
}

namespace {

void count_status_rejection(StatusIngestReport& rep, std::string_view reason) {
  ++rep.rejected;
  auto it = rep.rejections.find(reason);
  if (it == rep.rejections.end()) it = rep.rejections.emplace(std::string(reason), 0).first;
  ++it->second;
}

}  // namespace

StatusIngest ingest_statuses(std::istream& in) {
  StatusIngest out;
  StatusIngestReport& rep = out.report;
  std::string line;
  while (std::getline(in, line)) {
    if (is_blank(line)) continue;
    ++rep.records_read;
    const json raw = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (raw.is_discarded() || !raw.is_object()) {
      count_status_rejection(rep, "unreadable");
      continue;
    }
    const std::string* tweet_id = string_field(raw, "tweet_id");
    if (tweet_id == nullptr || tweet_id->empty()) {
      count_status_rejection(rep, "missing_tweet_id");
      continue;
    }
    const std::string* status = string_field(raw, "status");
    if (status == nullptr || (*status != "available" && *status != "unavailable")) {
      count_status_rejection(rep, "bad_status");
      continue;
    }
    const std::string* checked_text = string_field(raw, "checked_at");
    const auto checked_at = checked_text ? parse_iso8601(*checked_text) : std::nullopt;
    if (!checked_at) {
      count_status_rejection(rep, "bad_checked_at");
      continue;
    }
    std::optional<int> code;
    if (const auto it = raw.find("error_code"); it != raw.end() && !it->is_null()) {
      if (!it->is_number_integer()) {
        count_status_rejection(rep, "bad_error_code");
        continue;
      }
      code = it->get<int>();
    }

    StatusRecord record;
    if (*status == "available") {
      if (code) {
        count_status_rejection(rep, "available_with_error_code");
        continue;
      }
      record = make_available(*tweet_id, *checked_at);
    } else {
      record = make_unavailable(*tweet_id, code, *checked_at);
      if (record.reason == Reason::Other) ++rep.unknown_error_codes;
    }

    ++rep.accepted;
    // Either the stored record or the incoming one is now dead weight.
    if (out.snapshot.find(record.tweet_id) != nullptr) ++rep.superseded;
    out.snapshot.merge(std::move(record));
  }
  return out;
}

StatusIngest ingest_statuses_file(const std::string& path) {
  auto in = open_input(path);
  return ingest_statuses(in);
}

json status_to_json(const StatusRecord& r) {
  json j;
  j["tweet_id"] = r.tweet_id;
  j["status"] = to_string(r.availability);
  j["error_code"] = r.error_code ? json(*r.error_code) : json(nullptr);
  j["checked_at"] = format_iso8601(r.checked_at);
  return j;
}

void write_statuses_jsonl(const StatusSnapshot& snapshot, std::ostream& out) {
  for (const StatusRecord* r : snapshot.sorted()) out << status_to_json(*r).dump() << '\n';
}

}  // namespace cascade
