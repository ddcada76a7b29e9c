#include "cascade/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "cascade/error.hpp"

namespace cascade {

std::string_view to_string(RemovalEvent::Kind kind) {
  switch (kind) {
    case RemovalEvent::Kind::DeleteTweet:
      return "delete_tweet";
    case RemovalEvent::Kind::SuspendUser:
      return "suspend_user";
    case RemovalEvent::Kind::ProtectUser:
      return "protect_user";
    case RemovalEvent::Kind::RestoreUser:
      break;
  }
  return "restore_user";
}

std::optional<RemovalEvent::Kind> parse_event_kind(std::string_view text) {
  using K = RemovalEvent::Kind;
  for (const K k : {K::DeleteTweet, K::SuspendUser, K::ProtectUser, K::RestoreUser}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

CascadeModel::CascadeModel(const DisseminationStructure& structure, const Corpus& corpus) {
  std::vector<std::optional<std::string_view>> author_of;
  for (const OriginalNode& node : structure.originals) {
    const auto root = static_cast<std::uint32_t>(tweets_.size());
    tweets_.push_back({node.tweet_id, std::nullopt, std::nullopt, !node.assumed()});
    author_of.push_back(node.author_id ? std::optional<std::string_view>(*node.author_id)
                                       : std::nullopt);
    if (!node.assumed()) ++tws_;
    for (const std::string& child : node.retweet_children) {
      tweets_.push_back({child, std::nullopt, root, true});
      const MentionRecord* rec = corpus.find(child);
      author_of.push_back(rec != nullptr && rec->author_id
                              ? std::optional<std::string_view>(*rec->author_id)
                              : std::nullopt);
      ++tws_;
    }
  }

  children_.resize(tweets_.size());
  for (std::uint32_t i = 0; i < tweets_.size(); ++i) {
    tweet_lookup_.emplace(tweets_[i].id, i);
    if (tweets_[i].root) children_[*tweets_[i].root].push_back(i);
    if (author_of[i]) authors_.push_back(*author_of[i]);
  }
  std::sort(authors_.begin(), authors_.end());
  authors_.erase(std::unique(authors_.begin(), authors_.end()), authors_.end());
  tweets_by_author_.resize(authors_.size());
  for (std::uint32_t a = 0; a < authors_.size(); ++a) author_lookup_.emplace(authors_[a], a);
  for (std::uint32_t i = 0; i < tweets_.size(); ++i) {
    if (!author_of[i]) continue;
    const std::uint32_t a = author_lookup_.at(*author_of[i]);
    tweets_[i].author = a;
    tweets_by_author_[a].push_back(i);
  }
}

bool CascadeModel::has_tweet(std::string_view tweet_id) const {
  return tweet_lookup_.count(tweet_id) != 0;
}

bool CascadeModel::has_author(std::string_view author_id) const {
  return author_lookup_.count(author_id) != 0;
}

std::uint32_t CascadeModel::tweet_index(std::string_view id) const {
  const auto it = tweet_lookup_.find(id);
  if (it == tweet_lookup_.end()) throw Error("unknown_target", "no tweet " + std::string(id));
  return it->second;
}

std::uint32_t CascadeModel::author_index(std::string_view id) const {
  const auto it = author_lookup_.find(id);
  if (it == author_lookup_.end()) throw Error("unknown_target", "no user " + std::string(id));
  return it->second;
}

std::optional<Reason> CascadeModel::evaluate(const CascadeState& state, std::uint32_t t) const {
  const Tweet& tweet = tweets_[t];
  const auto current = [&](std::string_view id) -> std::optional<Reason> {
    const auto it = state.unavailable.find(id);
    if (it == state.unavailable.end()) return std::nullopt;
    return it->second;
  };
  const auto own = current(tweet.id);
  if (own == Reason::Deleted) return Reason::Deleted;
  const auto root = tweet.root ? current(tweets_[*tweet.root].id) : std::nullopt;
  if (root == Reason::Deleted) return Reason::Deleted;
  if (tweet.author) {
    const std::string_view author = authors_[*tweet.author];
    if (state.suspended_users.count(author) != 0) return Reason::Suspended;
    if (state.protected_users.count(author) != 0) return Reason::Protected;
  }
  return root;
}

void CascadeModel::refresh(CascadeState& state, std::uint32_t t) const {
  const auto reason = evaluate(state, t);
  const std::string_view id = tweets_[t].id;
  if (reason) {
    auto it = state.unavailable.find(id);
    if (it == state.unavailable.end()) {
      state.unavailable.emplace(std::string(id), *reason);
    } else {
      it->second = *reason;
    }
  } else if (auto it = state.unavailable.find(id); it != state.unavailable.end()) {
    state.unavailable.erase(it);
  }
}

void CascadeModel::refresh_user(CascadeState& state, std::uint32_t author) const {
  // Roots first: retweets read their root's current mark.
  std::vector<std::uint32_t> retweets;
  for (const std::uint32_t t : tweets_by_author_[author]) {
    if (tweets_[t].root) {
      retweets.push_back(t);
      continue;
    }
    refresh(state, t);
    retweets.insert(retweets.end(), children_[t].begin(), children_[t].end());
  }
  for (const std::uint32_t t : retweets) refresh(state, t);
}

void CascadeModel::apply(CascadeState& state, const RemovalEvent& event) const {
  using K = RemovalEvent::Kind;
  if (event.kind == K::DeleteTweet) {
    const std::uint32_t t = tweet_index(event.target);
    state.unavailable.insert_or_assign(std::string(tweets_[t].id), Reason::Deleted);
    for (const std::uint32_t child : children_[t]) {
      state.unavailable.insert_or_assign(std::string(tweets_[child].id), Reason::Deleted);
    }
    return;
  }

  const std::uint32_t a = author_index(event.target);
  const std::string_view author = authors_[a];
  switch (event.kind) {
    case K::SuspendUser:
      state.suspended_users.emplace(author);
      break;
    case K::ProtectUser:
      state.protected_users.emplace(author);
      break;
    default: {
      const auto erased = state.suspended_users.erase(std::string(author)) +
                          state.protected_users.erase(std::string(author));
      if (erased == 0) return;
      break;
    }
  }
  refresh_user(state, a);
}

std::uint64_t CascadeModel::unavailable_mentions(const CascadeState& state) const {
  std::uint64_t n = 0;
  for (const Tweet& t : tweets_) {
    if (t.recorded && state.unavailable.find(t.id) != state.unavailable.end()) ++n;
  }
  return n;
}

double CascadeModel::loss(const CascadeState& state) const {
  if (tws_ == 0) return 0.0;
  return static_cast<double>(unavailable_mentions(state)) / static_cast<double>(tws_);
}

StatusSnapshot CascadeModel::to_snapshot(const CascadeState& state, Timestamp checked_at) const {
  StatusSnapshot snapshot;
  for (const Tweet& t : tweets_) {
    if (!t.recorded) continue;
    const auto it = state.unavailable.find(t.id);
    if (it == state.unavailable.end()) {
      snapshot.merge(make_available(std::string(t.id), checked_at));
    } else {
      snapshot.merge(make_unavailable(std::string(t.id), error_code_for(it->second), checked_at));
    }
  }
  return snapshot;
}

std::uint64_t CascadeModel::single_event_impact(const RemovalEvent& event) const {
  using K = RemovalEvent::Kind;
  switch (event.kind) {
    case K::DeleteTweet: {
      const std::uint32_t t = tweet_index(event.target);
      return (tweets_[t].recorded ? 1U : 0U) + children_[t].size();
    }
    case K::SuspendUser:
    case K::ProtectUser: {
      const std::uint32_t a = author_index(event.target);
      std::vector<bool> hit(tweets_.size(), false);
      for (const std::uint32_t t : tweets_by_author_[a]) {
        hit[t] = true;
        for (const std::uint32_t c : children_[t]) hit[c] = true;
      }
      std::uint64_t n = 0;
      for (std::uint32_t t = 0; t < tweets_.size(); ++t) {
        if (hit[t] && tweets_[t].recorded) ++n;
      }
      return n;
    }
    case K::RestoreUser:
      author_index(event.target);
      return 0;
  }
  return 0;
}

CascadeState apply_event(const CascadeState& state, const DisseminationStructure& structure,
                         const Corpus& corpus, const RemovalEvent& event) {
  const CascadeModel model(structure, corpus);
  CascadeState next = state;
  model.apply(next, event);
  return next;
}

CascadeState simulate_state(const DisseminationStructure& structure, const Corpus& corpus,
                            std::span<const RemovalEvent> events) {
  const CascadeModel model(structure, corpus);
  CascadeState state;
  for (std::size_t i = 0; i < events.size(); ++i) {
    try {
      model.apply(state, events[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "event " + std::to_string(i) + " (" +
                                std::string(to_string(events[i].kind)) + " " +
                                events[i].target + ")");
    }
  }
  return state;
}

StatusSnapshot simulate(const DisseminationStructure& structure, const Corpus& corpus,
                        std::span<const RemovalEvent> events, Timestamp checked_at) {
  const CascadeState state = simulate_state(structure, corpus, events);
  return CascadeModel(structure, corpus).to_snapshot(state, checked_at);
}

WorstCase worst_case_single_event(const DisseminationStructure& structure, const Corpus& corpus) {
  const CascadeModel model(structure, corpus);
  if (model.tws() == 0) {
    throw Error("empty_publication", "publication " + structure.publication_id + " has no mentions");
  }

  std::optional<WorstCase> best;
  const auto consider = [&](RemovalEvent event) {
    const std::uint64_t n = model.single_event_impact(event);
    const bool better = !best || n > best->unavailable ||
                        (n == best->unavailable && (event.target < best->event.target ||
                                                    (event.target == best->event.target &&
                                                     event.kind < best->event.kind)));
    if (better) best = WorstCase{std::move(event), n, 0.0};
  };
  for (const auto& t : model.tweets()) consider(RemovalEvent::delete_tweet(std::string(t.id)));
  for (const auto a : model.authors()) consider(RemovalEvent::suspend_user(std::string(a)));

  best->loss = static_cast<double>(best->unavailable) / static_cast<double>(model.tws());
  return *best;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) with 53 random bits; avoids the implementation-defined
// standard distributions so streams match across standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error("bad_probability", std::string(name) + " must be in [0, 1]");
  }
}

double run_trial(const CascadeModel& model, const RiskOptions& options, std::uint64_t trial) {
  std::mt19937_64 rng(splitmix64(splitmix64(options.seed) ^ trial));
  const auto tweets = model.tweets();
  const auto authors = model.authors();

  std::vector<char> deleted(tweets.size(), 0);
  for (std::size_t t = 0; t < tweets.size(); ++t) {
    if (tweets[t].recorded) deleted[t] = uniform01(rng) < options.p_delete;
  }
  std::vector<char> hidden(authors.size(), 0);
  for (std::size_t a = 0; a < authors.size(); ++a) {
    const bool suspended = uniform01(rng) < options.p_suspend;
    const bool protect = uniform01(rng) < options.p_protect;
    hidden[a] = suspended || protect;
  }

  const auto own_down = [&](std::size_t t) {
    return deleted[t] != 0 || (tweets[t].author && hidden[*tweets[t].author] != 0);
  };
  std::uint64_t down = 0;
  for (std::size_t t = 0; t < tweets.size(); ++t) {
    if (!tweets[t].recorded) continue;
    if (own_down(t) || (tweets[t].root && own_down(*tweets[t].root))) ++down;
  }
  return model.tws() == 0 ? 0.0 : static_cast<double>(down) / static_cast<double>(model.tws());
}

}  // namespace

std::vector<double> monte_carlo_losses(const DisseminationStructure& structure,
                                       const Corpus& corpus, const RiskOptions& options) {
  check_probability(options.p_delete, "p_delete");
  check_probability(options.p_suspend, "p_suspend");
  check_probability(options.p_protect, "p_protect");
  if (options.trials == 0) throw Error("bad_trials", "trials must be at least 1");

  const CascadeModel model(structure, corpus);
  std::vector<double> losses(options.trials);
  const unsigned n_threads =
      static_cast<unsigned>(std::clamp<std::uint64_t>(options.threads, 1, options.trials));
  const auto work = [&](unsigned worker) {
    for (std::uint64_t i = worker; i < options.trials; i += n_threads) {
      losses[i] = run_trial(model, options, i);
    }
  };
  if (n_threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(work, w);
  }
  return losses;
}

RiskSummary summarize_losses(std::vector<double> losses) {
  RiskSummary s;
  if (losses.empty()) return s;
  std::sort(losses.begin(), losses.end());
  const auto nearest_rank = [&](double q) {
    const auto n = static_cast<double>(losses.size());
    const auto rank = static_cast<std::size_t>(std::ceil(q * n));
    return losses[std::clamp<std::size_t>(rank, 1, losses.size()) - 1];
  };
  double sum = 0.0;
  for (const double l : losses) sum += l;
  s.mean = sum / static_cast<double>(losses.size());
  s.p50 = nearest_rank(0.50);
  s.p90 = nearest_rank(0.90);
  s.p99 = nearest_rank(0.99);
  s.max = losses.back();
  return s;
}

RiskSummary monte_carlo_risk(const DisseminationStructure& structure, const Corpus& corpus,
                             const RiskOptions& options) {
  return summarize_losses(monte_carlo_losses(structure, corpus, options));
}

std::vector<RemovalEvent> parse_scenario(std::istream& in) {
  std::vector<RemovalEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fail = [&](const std::string& what) {
      return Error("bad_scenario", "line " + std::to_string(line_no) + ": " + what);
    };
    const auto raw = nlohmann::json::parse(line, nullptr, false);
    if (raw.is_discarded() || !raw.is_object()) throw fail("not a JSON object");
    const auto kind = raw.find("kind");
    const auto target = raw.find("target");
    if (kind == raw.end() || !kind->is_string()) throw fail("missing kind");
    if (target == raw.end() || !target->is_string() || target->get_ref<const std::string&>().empty()) {
      throw fail("missing target");
    }
    const auto parsed = parse_event_kind(kind->get_ref<const std::string&>());
    if (!parsed) throw fail("unknown kind " + kind->get<std::string>());
    events.push_back({*parsed, target->get<std::string>()});
  }
  return events;
}

std::vector<RemovalEvent> parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("unreadable_input", "cannot open " + path);
  return parse_scenario(in);
}

}  // namespace cascade
