#include "fixtures.hpp"

#include <set>
#include <sstream>

namespace cascade::testing {

MentionRecord original(std::string id, std::string pub, std::optional<std::string> author) {
  MentionRecord r;
  r.tweet_id = std::move(id);
  r.publication_id = std::move(pub);
  r.author_id = std::move(author);
  r.kind = MentionKind::Original;
  return r;
}

MentionRecord retweet(std::string id, std::string pub, std::optional<std::string> parent,
                      std::optional<std::string> author) {
  MentionRecord r;
  r.tweet_id = std::move(id);
  r.publication_id = std::move(pub);
  r.author_id = std::move(author);
  r.kind = MentionKind::Retweet;
  r.parent_tweet_id = std::move(parent);
  return r;
}

Corpus corpus_of(std::vector<MentionRecord> records) {
  CorpusBuilder builder;
  for (auto& r : records) builder.add(std::move(r));
  return std::move(builder).finish();
}

std::string to_jsonl(const std::vector<MentionRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) out << mention_to_json(r).dump() << '\n';
  return out.str();
}

std::string to_jsonl(const std::vector<StatusRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) out << status_to_json(r).dump() << '\n';
  return out.str();
}

std::vector<MentionRecord> shape_publication(char which, bool one_original_author) {
  const std::string pub(1, which);
  // Retweets per original, in original order.
  std::vector<int> fan;
  switch (which) {
    case 'A':
      fan = {4, 0, 0, 0, 0, 0};
      break;
    case 'B':
      fan = {6, 1, 0};
      break;
    case 'C':
      fan = {3, 2, 2};
      break;
    default:
      fan = {1, 1, 1, 1, 0, 0};
      break;
  }
  std::vector<MentionRecord> out;
  int rt = 0;
  for (std::size_t i = 0; i < fan.size(); ++i) {
    const std::string oid = pub + ".o" + std::to_string(i + 1);
    out.push_back(original(oid, pub, one_original_author ? "user:" + pub : "user:" + oid));
    for (int k = 0; k < fan[i]; ++k) {
      const std::string rid = pub + ".r" + std::to_string(++rt);
      out.push_back(retweet(rid, pub, oid, "user:" + rid));
    }
  }
  return out;
}

const std::array<BreakdownRow, 10> kTopUnavailable{{
    {"860866", 2891, 1, 2891, "100.0", 1, 2890, 2890},
    {"1903289", 1274, 3, 1268, "99.5", 0, 1268, 1268},
    {"2433232", 1230, 11, 1213, "98.6", 0, 1213, 1213},
    {"671264", 1241, 23, 1198, "96.5", 0, 1198, 1190},
    {"2598509", 3659, 122, 3440, "94.0", 4, 3436, 3319},
    {"10068074", 1563, 94, 1467, "93.9", 17, 1450, 1426},
    {"20898178", 1017, 34, 950, "93.4", 0, 950, 950},
    {"2983430", 1290, 76, 1195, "92.6", 41, 1154, 151},
    {"20066690", 1367, 10, 1265, "92.5", 1, 1264, 1253},
    {"2939857", 1266, 86, 1145, "90.4", 43, 1102, 248},
}};

BreakdownFixture breakdown_fixture(const BreakdownRow& row) {
  const std::string pub = row.altmetric_id;
  const Timestamp checked{std::chrono::sys_days{std::chrono::year{2019} / 4 / 1}};
  BreakdownFixture fx;
  std::vector<std::string> originals;
  for (std::uint64_t i = 0; i < row.n_ot; ++i) originals.push_back(pub + "-o" + std::to_string(i));

  const bool hub_recorded = row.n_unot > 0;
  const std::string hub = hub_recorded ? originals[0] : pub + "-gone";
  std::set<std::string> unavailable;
  for (std::uint64_t i = 0; i < row.n_unot; ++i) unavailable.insert(originals[i]);

  for (const auto& o : originals) fx.mentions.push_back(original(o, pub, "u-" + o));

  std::uint64_t rt = 0;
  const auto add_retweet = [&](const std::string& parent, bool gone) {
    const std::string id = pub + "-r" + std::to_string(rt++);
    fx.mentions.push_back(retweet(id, pub, parent, "u-" + id));
    if (gone) unavailable.insert(id);
  };

  for (std::uint64_t i = 0; i < row.max_n_unrt; ++i) add_retweet(hub, true);
  const std::size_t first_other = hub_recorded ? 1 : 0;
  const std::size_t n_other = originals.size() - first_other;
  const std::uint64_t spread = row.n_unrt - row.max_n_unrt;
  for (std::uint64_t i = 0; i < spread; ++i) {
    add_retweet(originals[first_other + i % n_other], true);
  }
  const std::uint64_t n_rt = row.tws - row.n_ot;
  for (std::uint64_t i = row.n_unrt; i < n_rt; ++i) add_retweet(hub, false);

  for (const auto& m : fx.mentions) {
    fx.statuses.push_back(unavailable.count(m.tweet_id) != 0
                              ? make_unavailable(m.tweet_id, kErrorDeleted, checked)
                              : make_available(m.tweet_id, checked));
  }
  return fx;
}

std::vector<MentionRecord> random_publication(std::mt19937_64& rng, const std::string& pub,
                                              std::size_t max_mentions) {
  const auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::size_t n = 1 + pick(max_mentions);
  const std::size_t n_authors = 1 + pick(6);
  std::vector<MentionRecord> out;
  std::vector<std::string> originals;
  std::vector<std::string> retweets;

  const auto author = [&]() -> std::optional<std::string> {
    if (pick(8) == 0) return std::nullopt;
    return pub + "-u" + std::to_string(pick(n_authors));
  };

  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = pub + "-t" + std::to_string(i);
    if (pick(3) == 0) {
      out.push_back(original(id, pub, author()));
      originals.push_back(id);
      continue;
    }
    std::optional<std::string> parent;
    switch (pick(10)) {
      case 0:
        break;  // orphan
      case 1:
      case 2:
        parent = pub + "-x" + std::to_string(pick(3));  // unrecorded, often shared
        break;
      case 3:
        if (!retweets.empty()) parent = retweets[pick(retweets.size())];
        break;
      case 4:
        parent = "elsewhere-t" + std::to_string(pick(3));  // another publication
        break;
      default:
        if (!originals.empty()) {
          parent = originals[pick(originals.size())];
        } else {
          parent = pub + "-x0";
        }
        break;
    }
    out.push_back(retweet(id, pub, parent, author()));
    retweets.push_back(id);
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::vector<RemovalEvent> random_events(std::mt19937_64& rng,
                                        const std::vector<MentionRecord>& records,
                                        const std::vector<std::string>& node_ids,
                                        std::size_t max_events) {
  std::vector<std::string> tweets = node_ids;
  std::set<std::string> author_set;
  for (const auto& r : records) {
    tweets.push_back(r.tweet_id);
    if (r.author_id) author_set.insert(*r.author_id);
  }
  const std::vector<std::string> authors(author_set.begin(), author_set.end());
  const auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  std::vector<RemovalEvent> events;
  const std::size_t n = pick(max_events + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = authors.empty() ? 0 : pick(4);
    if (k == 0) {
      events.push_back(RemovalEvent::delete_tweet(tweets[pick(tweets.size())]));
      continue;
    }
    const std::string& a = authors[pick(authors.size())];
    if (k == 1) events.push_back(RemovalEvent::suspend_user(a));
    if (k == 2) events.push_back(RemovalEvent::protect_user(a));
    if (k == 3) events.push_back(RemovalEvent::restore_user(a));
  }
  return events;
}

}  // namespace cascade::testing
