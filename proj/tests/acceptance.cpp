// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cascade/audit.hpp"
#include "cascade/metrics.hpp"
#include "cascade/simulator.hpp"
#include "cascade/stats.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace cascade;
using namespace cascade::testing;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

void note(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cascade-acceptance-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Peak resident set size of this process in bytes.
std::uint64_t peak_rss_bytes() {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("VmHWM:", 0) == 0) return std::stoull(line.substr(6)) * 1024;
  }
  return 0;
}

Outcome shapes() {
  const auto start = Clock::now();
  Outcome o;
  struct Want {
    char pub;
    double dor;
    double dc;
    double tol;
  };
  for (const auto& w : {Want{'A', 0.6, 1.0, 1e-12}, Want{'B', 0.3, 0.857, 0.005},
                        Want{'C', 0.3, 0.429, 0.005}, Want{'D', 0.6, 0.25, 1e-12}}) {
    const Corpus corpus = corpus_of(shape_publication(w.pub));
    const auto m = compute_metrics(build_structure(corpus, std::string(1, w.pub)), corpus);
    note(o, std::abs(m.originality - w.dor) <= 1e-12, std::string(1, w.pub) + " DO " + fmt("%.6f", m.originality));
    note(o, std::abs(m.concentration - w.dc) <= w.tol, std::string(1, w.pub) + " DC " + fmt("%.6f", m.concentration));
  }
  const double t = seconds_since(start);
  note(o, t < 1.0, "runtime " + fmt("%.3f s", t));
  if (o.pass) o.detail = "DO/DC for A-D within tolerance in " + fmt("%.3f s", t);
  return o;
}

Outcome breakdown_rows() {
  const auto start = Clock::now();
  Outcome o;
  for (const std::size_t i : {0U, 1U}) {
    const auto& row = kTopUnavailable[i];
    const auto fx = breakdown_fixture(row);
    // Through the JSONL readers, as the CLI would.
    std::istringstream ms(to_jsonl(fx.mentions));
    std::istringstream ss(to_jsonl(fx.statuses));
    const Corpus corpus = ingest_mentions(ms);
    const StatusSnapshot snap = ingest_statuses(ss).snapshot;
    const std::vector<std::string> ids{row.altmetric_id};
    const auto rep = analyze_publications(corpus, snap, ids).at(0);
    const std::string id = row.altmetric_id;
    note(o, rep.metrics.counts.tws == row.tws, id + " TWS");
    note(o, rep.metrics.counts.n_ot == row.n_ot, id + " N_OT");
    note(o, rep.breakdown.n_unt == row.n_unt, id + " N_UnT");
    note(o, fmt("%.1f", rep.breakdown.tunr * 100.0) == row.tunr_percent,
         id + " TUnR " + fmt("%.1f", rep.breakdown.tunr * 100.0));
    note(o, rep.breakdown.n_unot == row.n_unot, id + " N_UnOT");
    note(o, rep.breakdown.n_unrt == row.n_unrt, id + " N_UnRT");
    note(o, rep.breakdown.max_n_unrt == row.max_n_unrt, id + " Max_N_UnRT");
  }
  const double t = seconds_since(start);
  note(o, t < 1.0, "runtime " + fmt("%.3f s", t));
  if (o.pass) o.detail = "rows 860866 and 1903289 reproduced exactly in " + fmt("%.3f s", t);
  return o;
}

Outcome taxonomy() {
  Outcome o;
  note(o, classify_error(144) == Reason::Deleted, "144");
  note(o, classify_error(63) == Reason::Suspended, "63");
  note(o, classify_error(179) == Reason::Protected, "179");
  note(o, classify_error(34) == Reason::PageNotFound, "34");
  for (int code = -1000; code <= 100000; ++code) {
    if (code == 144 || code == 63 || code == 179 || code == 34) continue;
    if (classify_error(code) != Reason::Other) {
      note(o, false, "code " + std::to_string(code));
      break;
    }
  }
  std::mt19937_64 rng(20190401);
  std::discrete_distribution<int> pick({0.547, 0.259, 0.167, 0.027});
  const std::array<int, 4> codes{144, 63, 179, 34};
  const Timestamp at{};
  StatusSnapshot snap;
  for (int i = 0; i < 100000; ++i) {
    snap.merge(make_unavailable("t" + std::to_string(i), codes[static_cast<std::size_t>(pick(rng))], at));
  }
  const auto tally = reason_distribution(snap);
  const std::array<double, 4> want{0.547, 0.259, 0.167, 0.027};
  double worst = 0;
  for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(tally.shares[i] - want[i]));
  note(o, worst <= 0.01, "share deviation " + fmt("%.4f", worst));
  if (o.pass) o.detail = "codes map exactly; largest share deviation " + fmt("%.4f", worst);
  return o;
}

std::vector<std::string> assumed_nodes(const DisseminationStructure& s) {
  std::vector<std::string> out;
  for (const auto& n : s.originals) {
    if (n.assumed()) out.push_back(n.tweet_id);
  }
  return out;
}

Outcome cascade_equivalence() {
  const auto start = Clock::now();
  Outcome o;
  std::mt19937_64 rng(4);
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto records = random_publication(rng, "p" + std::to_string(i), 30);
    const Corpus corpus = corpus_of(records);
    const auto s = build_structure(corpus, records.front().publication_id);
    const auto events = random_events(rng, records, assumed_nodes(s), 10);
    const auto state = simulate_state(s, corpus, events);
    const std::map<std::string, Reason> got(state.unavailable.begin(), state.unavailable.end());
    if (got == cascade_oracle(records, events)) ++agree;
  }
  const double t = seconds_since(start);
  note(o, agree == 1000, std::to_string(1000 - agree) + " mismatches");
  note(o, t < 30.0, "runtime " + fmt("%.2f s", t));
  if (o.pass) o.detail = "1000/1000 structures agree with the oracle in " + fmt("%.2f s", t);
  return o;
}

Outcome worst_case() {
  Outcome o;
  std::mt19937_64 rng(4);
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto records = random_publication(rng, "p" + std::to_string(i), 30);
    const Corpus corpus = corpus_of(records);
    const auto s = build_structure(corpus, records.front().publication_id);
    random_events(rng, records, assumed_nodes(s), 10);  // keep the same stream as criterion 4
    const auto got = worst_case_single_event(s, corpus);
    const auto [event, count] = brute_force_worst_case(records);
    if (got.event == event && got.unavailable == count) ++agree;
  }
  note(o, agree == 1000, std::to_string(1000 - agree) + " mismatches");
  const Corpus a = corpus_of(shape_publication('A'));
  const auto wa = worst_case_single_event(build_structure(a, "A"), a);
  note(o, wa.event == RemovalEvent::delete_tweet("A.o1") && wa.loss == 0.5,
       "shape A worst " + wa.event.target + " " + fmt("%.3f", wa.loss));
  if (o.pass) o.detail = "1000/1000 match brute force; shape A loss 0.5 at DeleteTweet(A.o1)";
  return o;
}

Outcome power_law() {
  const auto start = Clock::now();
  Outcome o;
  double worst_alpha = 0;
  std::uint64_t lo = UINT64_MAX, hi = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::uint64_t> samples(100000);
    for (auto& x : samples) {
      x = static_cast<std::uint64_t>(std::floor(999.5 * std::pow(1.0 - u(rng), -1.0 / 1.87) + 0.5));
    }
    const auto fit = fit_power_law(samples, XminPolicy::scan_ks());
    worst_alpha = std::max(worst_alpha, std::abs(fit.alpha - 2.87));
    lo = std::min(lo, fit.xmin);
    hi = std::max(hi, fit.xmin);
    note(o, std::abs(fit.alpha - 2.87) <= 0.05, "seed " + std::to_string(seed) + " alpha " + fmt("%.4f", fit.alpha));
    note(o, fit.xmin >= 500 && fit.xmin <= 2000, "seed " + std::to_string(seed) + " xmin " + std::to_string(fit.xmin));
  }
  const double t = seconds_since(start);
  note(o, t < 60.0, "runtime " + fmt("%.2f s", t));
  if (o.pass) {
    o.detail = "10 seeds: max |alpha-2.87| " + fmt("%.4f", worst_alpha) + ", xmin in [" +
               std::to_string(lo) + ", " + std::to_string(hi) + "], " + fmt("%.2f s", t);
  }
  return o;
}

Outcome rank_correlation() {
  Outcome o;
  double worst = 0;
  const auto sweep = [&](const std::vector<double>& xs, std::vector<double> ys) {
    std::sort(ys.begin(), ys.end());
    int n = 0;
    do {
      worst = std::max(worst, std::abs(spearman(xs, ys) - brute_force_spearman(xs, ys)));
      ++n;
    } while (std::next_permutation(ys.begin(), ys.end()));
    return n;
  };
  std::vector<double> distinct(8);
  std::iota(distinct.begin(), distinct.end(), 1.0);
  const int n_plain = sweep(distinct, distinct);
  // Duplicate values make next_permutation visit each distinct arrangement once,
  // so walk index permutations for the tied case.
  const std::vector<double> tied_x{1, 1, 2, 3, 3, 3, 4, 5};
  const std::vector<double> tied_y{2, 2, 2, 5, 6, 6, 7, 8};
  std::vector<int> idx(8);
  std::iota(idx.begin(), idx.end(), 0);
  int n_tied = 0;
  do {
    std::vector<double> ys(8);
    for (int i = 0; i < 8; ++i) ys[static_cast<std::size_t>(i)] = tied_y[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    worst = std::max(worst, std::abs(spearman(tied_x, ys) - brute_force_spearman(tied_x, ys)));
    ++n_tied;
  } while (std::next_permutation(idx.begin(), idx.end()));
  note(o, n_plain == 40320 && n_tied == 40320, "permutation count");
  note(o, worst < 1e-12, "max |delta| " + fmt("%.3e", worst));

  // Heavy-tailed TWS, each mention independently unavailable with p = 0.13.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<MentionRecord> records;
  StatusSnapshot none;
  StatusSnapshot some;
  for (int p = 0; p < 400; ++p) {
    const std::string pub = "pub" + std::to_string(p);
    const auto tws = static_cast<int>(std::floor(99.5 * std::pow(1.0 - u(rng), -1.0 / 1.87) + 0.5));
    const int capped = std::min(tws, 20000);
    for (int i = 0; i < capped; ++i) {
      const std::string id = pub + "-" + std::to_string(i);
      if (i % 3 == 0) {
        records.push_back(original(id, pub, "u" + std::to_string(rng() % 50000)));
      } else {
        records.push_back(retweet(id, pub, pub + "-" + std::to_string(i - i % 3), "u" + std::to_string(rng() % 50000)));
      }
      if (u(rng) < 0.13) some.merge(make_unavailable(id, 144, Timestamp{}));
    }
  }
  const Corpus corpus = corpus_of(records);
  std::vector<StructureMetrics> metrics;
  for (const auto& pub : corpus.publication_ids()) {
    metrics.push_back(compute_metrics(build_structure(corpus, pub), corpus));
  }
  const double clean = stability_correlation(metrics, corpus, none);
  const double noisy = stability_correlation(metrics, corpus, some);
  note(o, clean == 1.0, "zero unavailability rho " + fmt("%.6f", clean));
  note(o, noisy >= 0.9, "13% unavailability rho " + fmt("%.4f", noisy));
  if (o.pass) {
    o.detail = "2 x 40320 permutations, max |delta| " + fmt("%.1e", worst) + "; rho 1.0 clean, " +
               fmt("%.4f", noisy) + " at 13%";
  }
  return o;
}

Outcome quadrants() {
  Outcome o;
  std::mt19937_64 rng(8);
  std::string summary;
  for (const bool coarse : {false, true}) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<StructureMetrics> ms(10000);
    for (auto& m : ms) {
      m.originality = coarse ? std::round(u(rng) * 20) / 20 : u(rng);
      m.concentration = coarse ? std::round(u(rng) * 20) / 20 : u(rng);
    }
    const Medians med = corpus_medians(ms);
    std::array<std::size_t, 4> groups{};
    std::size_t high_do = 0, high_dc = 0, ties_do = 0, ties_dc = 0;
    for (const auto& m : ms) {
      const bool hd = m.originality >= med.originality;
      const bool hc = m.concentration >= med.concentration;
      const int members = int(hd && hc) + int(!hd && hc) + int(!hd && !hc) + int(hd && !hc);
      note(o, members == 1, "predicate overlap");
      const Quadrant q = classify_quadrant(m.originality, m.concentration, med.originality, med.concentration);
      const Quadrant expect = hd ? (hc ? Quadrant::A : Quadrant::D) : (hc ? Quadrant::B : Quadrant::C);
      note(o, q == expect, "quadrant mismatch");
      ++groups[static_cast<std::size_t>(q)];
      high_do += hd;
      high_dc += hc;
      ties_do += m.originality == med.originality;
      ties_dc += m.concentration == med.concentration;
    }
    note(o, groups[0] + groups[1] + groups[2] + groups[3] == ms.size(), "groups not exhaustive");
    const auto off = [](std::size_t high) { return std::abs(static_cast<double>(high) - 5000.0); };
    note(o, off(high_do) <= std::max<double>(std::ceil(static_cast<double>(ties_do)), 0.0), "DO split " + std::to_string(high_do));
    note(o, off(high_dc) <= std::max<double>(std::ceil(static_cast<double>(ties_dc)), 0.0), "DC split " + std::to_string(high_dc));
    summary += std::string(coarse ? "; tied grid" : "continuous") + ": DO high " + std::to_string(high_do) +
               " (ties " + std::to_string(ties_do) + "), DC high " + std::to_string(high_dc) +
               " (ties " + std::to_string(ties_dc) + ")";
  }
  if (o.pass) o.detail = "10000 pairs, exclusive and exhaustive; " + summary;
  return o;
}

// Streams a synthetic corpus; returns the number of lines written.
std::uint64_t write_synthetic_corpus(const fs::path& path, std::uint64_t total) {
  std::ofstream out(path, std::ios::binary);
  std::mt19937_64 rng(2643531);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::string buf;
  buf.reserve(1 << 20);
  char line[320];
  std::uint64_t written = 0;
  std::uint64_t tweet = 0;
  for (std::uint64_t pub = 0; written < total; ++pub) {
    const auto size = std::min<std::uint64_t>(
        total - written,
        std::min<std::uint64_t>(50000, static_cast<std::uint64_t>(std::floor(0.5 * std::pow(1.0 - u(rng), -1.0 / 1.1) + 0.5)) + 1));
    std::vector<std::uint64_t> originals;
    for (std::uint64_t i = 0; i < size; ++i, ++tweet) {
      const std::uint64_t author = rng() % 1500000;
      const long long secs = 1325376000LL + static_cast<long long>(rng() % (7ULL * 365 * 86400));
      const std::time_t tt = secs;
      std::tm tm{};
      gmtime_r(&tt, &tm);
      char when[32];
      std::strftime(when, sizeof when, "%Y-%m-%dT%H:%M:%SZ", &tm);
      const double r = u(rng);
      int n = 0;
      if (originals.empty() || r < 0.3) {
        n = std::snprintf(line, sizeof line,
                          "{\"tweet_id\":\"%llu\",\"publication_id\":\"p%llu\",\"author_id\":\"u%llu\","
                          "\"posted_at\":\"%s\",\"kind\":\"original\",\"parent_tweet_id\":null}\n",
                          static_cast<unsigned long long>(tweet), static_cast<unsigned long long>(pub),
                          static_cast<unsigned long long>(author), when);
        originals.push_back(tweet);
      } else {
        std::string parent;
        if (r < 0.33) {
          parent = "\"x" + std::to_string(tweet / 7) + "\"";  // unrecorded root
        } else if (r < 0.335) {
          parent = "null";
        } else {
          // Skewed toward the first original, like a viral hub.
          const auto k = static_cast<std::size_t>(std::pow(u(rng), 3.0) * static_cast<double>(originals.size()));
          parent = "\"" + std::to_string(originals[std::min(k, originals.size() - 1)]) + "\"";
        }
        n = std::snprintf(line, sizeof line,
                          "{\"tweet_id\":\"%llu\",\"publication_id\":\"p%llu\",\"author_id\":\"u%llu\","
                          "\"posted_at\":\"%s\",\"kind\":\"retweet\",\"parent_tweet_id\":%s}\n",
                          static_cast<unsigned long long>(tweet), static_cast<unsigned long long>(pub),
                          static_cast<unsigned long long>(author), when, parent.c_str());
      }
      buf.append(line, static_cast<std::size_t>(n));
      if (buf.size() > (1 << 20) - 512) {
        out << buf;
        buf.clear();
      }
      ++written;
    }
  }
  out << buf;
  return written;
}

Outcome performance() {
  Outcome o;
  const fs::path dir = scratch_dir("perf");
  const fs::path file = dir / "mentions.jsonl";
  const std::uint64_t lines = write_synthetic_corpus(file, 2600000);

  const auto start = Clock::now();
  std::size_t n_pubs = 0;
  std::size_t n_mentions = 0;
  {
    const Corpus corpus = ingest_mentions_file(file.string());
    n_mentions = corpus.size();
    const auto pubs = corpus.publication_ids();
    n_pubs = pubs.size();
    const auto reports = analyze_publications(corpus, StatusSnapshot{}, pubs);
    note(o, reports.size() == n_pubs, "report count");
  }
  const double t = seconds_since(start);
  const double rss_gb = static_cast<double>(peak_rss_bytes()) / (1024.0 * 1024.0 * 1024.0);
  fs::remove_all(dir);

  note(o, lines == 2600000 && n_mentions == lines, "mentions " + std::to_string(n_mentions));
  note(o, t < 60.0, "runtime " + fmt("%.2f s", t));
  note(o, rss_gb < 2.0, "peak RSS " + fmt("%.2f GB", rss_gb));
  const std::string measured = std::to_string(n_mentions) + " mentions, " + std::to_string(n_pubs) +
                               " publications: " + fmt("%.2f s", t) + ", peak RSS " + fmt("%.2f GB", rss_gb);
  o.detail = o.pass ? measured : o.detail + " (" + measured + ")";
  return o;
}

int run_cli(const std::string& args) {
  const int raw = std::system((std::string(CASCADE_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome determinism() {
  Outcome o;
  const fs::path dir = scratch_dir("determinism");
  std::vector<MentionRecord> mentions;
  std::vector<StatusRecord> statuses;
  for (const auto& row : kTopUnavailable) {
    auto fx = breakdown_fixture(row);
    mentions.insert(mentions.end(), fx.mentions.begin(), fx.mentions.end());
    statuses.insert(statuses.end(), fx.statuses.begin(), fx.statuses.end());
  }
  std::ofstream(dir / "mentions.jsonl") << to_jsonl(mentions);
  std::ofstream(dir / "statuses.jsonl") << to_jsonl(statuses);
  const std::string in = " --mentions " + (dir / "mentions.jsonl").string() + " --statuses " +
                         (dir / "statuses.jsonl").string();

  std::size_t files = 0;
  for (const std::string run : {"a", "b"}) {
    const std::string out = " --out " + (dir / run).string();
    note(o, run_cli("simulate --seed 42 --mentions " + (dir / "mentions.jsonl").string() + out) == 0,
         "simulate exit");
    note(o, run_cli("metrics" + in + out) == 0, "metrics exit");
    note(o, run_cli("breakdown" + in + out) == 0, "breakdown exit");
    note(o, run_cli("audit" + in + out) == 0, "audit exit");
    note(o, run_cli("correlate" + in + out) == 0, "correlate exit");
    note(o, run_cli("fit --mentions " + (dir / "mentions.jsonl").string() + out) == 0,
         "fit exit");
  }
  const std::string risk = read_file(dir / "a" / "risk.csv");
  note(o, !risk.empty() && risk == read_file(dir / "b" / "risk.csv"), "risk.csv differs");
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    ++files;
    note(o, read_file(entry.path()) == read_file(dir / "b" / entry.path().filename()),
         entry.path().filename().string() + " differs");
  }
  note(o, files >= 9, "only " + std::to_string(files) + " report files");
  fs::remove_all(dir);
  if (o.pass) o.detail = "simulate --seed 42 twice byte-identical; " + std::to_string(files) + " report files stable";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"shape fixtures DO/DC", shapes},
      {"top-unavailability rows", breakdown_rows},
      {"error taxonomy and reason shares", taxonomy},
      {"cascade oracle equivalence", cascade_equivalence},
      {"worst-case single event", worst_case},
      {"power-law recovery", power_law},
      {"spearman and stability correlation", rank_correlation},
      {"quadrant partition", quadrants},
      {"performance budget", performance},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << (i + 1) << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL")
              << " - " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
