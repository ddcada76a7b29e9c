#include "cascade/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "cascade/audit.hpp"
#include "cascade/corpus.hpp"
#include "cascade/error.hpp"
#include "cascade/metrics.hpp"
#include "cascade/report.hpp"
#include "cascade/simulator.hpp"
#include "cascade/stats.hpp"
#include "cascade/structure.hpp"

namespace cascade {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string mentions;
  std::string statuses;
  std::string scenario;
  std::string samples;
  std::string out_dir = ".";
  std::uint64_t min_nutu = 1000;
  std::optional<std::uint64_t> seed;
  std::uint64_t trials = 1000;
  double p_delete = 0.10;
  double p_suspend = 0.02;
  double p_protect = 0.01;
  std::size_t top = 0;
  std::optional<std::uint64_t> xmin;
  std::string checked_at;
  std::size_t max_inflight = 4;
};

// Raised for problems the user must fix in the invocation (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw Error("missing_input", path + " is not a readable file");
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw Error("unwritable_output", "cannot create " + dir);
}

std::size_t inflight_from_env() {
  const char* raw = std::getenv("CASCADE_MAX_INFLIGHT");
  if (raw == nullptr || *raw == '\0') return 4;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1) throw UsageError("CASCADE_MAX_INFLIGHT must be a positive integer");
  return static_cast<std::size_t>(v);
}

StatusSnapshot load_statuses(const std::string& path) {
  if (path.empty()) return {};
  return ingest_statuses_file(path).snapshot;
}

std::vector<PublicationReport> selected_reports(const Corpus& corpus, const StatusSnapshot& snapshot,
                                                std::uint64_t min_nutu) {
  const auto selected = select_highly_tweeted(corpus, min_nutu);
  return analyze_publications(corpus, snapshot, selected);
}

template <typename Writer>
void emit(const RunConfig& cfg, const char* name, Writer&& writer) {
  std::ostringstream buf;
  writer(buf);
  write_file_atomic(fs::path(cfg.out_dir) / name, buf.str());
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  require_file(cfg.mentions, "--mentions");
  if (!cfg.statuses.empty()) require_file(cfg.statuses, "--statuses");
  const Corpus corpus = ingest_mentions_file(cfg.mentions);
  nlohmann::json summary{{"mentions", corpus.report().to_json()}};
  bool clean = corpus.report().rejected == 0;
  if (!cfg.statuses.empty()) {
    const auto statuses = ingest_statuses_file(cfg.statuses);
    summary["statuses"] = statuses.report.to_json();
    clean = clean && statuses.report.rejected == 0;
  }
  out << summary.dump() << '\n';
  return clean ? kExitOk : kExitFailure;
}

int cmd_metrics(const RunConfig& cfg) {
  require_file(cfg.mentions, "--mentions");
  if (!cfg.statuses.empty()) require_file(cfg.statuses, "--statuses");
  ensure_out_dir(cfg.out_dir);
  const Corpus corpus = ingest_mentions_file(cfg.mentions);
  const auto reports = selected_reports(corpus, load_statuses(cfg.statuses), cfg.min_nutu);
  emit(cfg, "metrics.csv", [&](std::ostream& o) { write_metrics_csv(reports, o); });
  return kExitOk;
}

int cmd_breakdown(const RunConfig& cfg) {
  require_file(cfg.mentions, "--mentions");
  require_file(cfg.statuses, "--statuses");
  ensure_out_dir(cfg.out_dir);
  const Corpus corpus = ingest_mentions_file(cfg.mentions);
  const auto reports = selected_reports(corpus, load_statuses(cfg.statuses), cfg.min_nutu);
  emit(cfg, "breakdown.csv", [&](std::ostream& o) { write_breakdown_csv(reports, cfg.top, o); });
  return kExitOk;
}

int cmd_audit(const RunConfig& cfg, std::ostream& err) {
  require_file(cfg.mentions, "--mentions");
  require_file(cfg.statuses, "--statuses");
  ensure_out_dir(cfg.out_dir);
  const Corpus corpus = ingest_mentions_file(cfg.mentions);
  StatusSnapshot fixture = load_statuses(cfg.statuses);

  Timestamp checked_at{};
  if (!cfg.checked_at.empty()) {
    const auto parsed = parse_iso8601(cfg.checked_at);
    if (!parsed) throw UsageError("--checked-at is not an ISO-8601 timestamp");
    checked_at = *parsed;
  } else {
    for (const StatusRecord* r : fixture.sorted()) checked_at = std::max(checked_at, r->checked_at);
  }

  const auto selected = select_highly_tweeted(corpus, cfg.min_nutu);
  std::vector<std::string> ids;
  for (const auto& pub : selected) {
    for (const MentionIndex i : corpus.mentions_of(pub)) ids.push_back(corpus.at(i).tweet_id);
  }
  std::sort(ids.begin(), ids.end());

  SnapshotStatusSource source(std::move(fixture));
  AuditOptions options;
  options.max_inflight = cfg.max_inflight;
  const AuditResult result = audit(ids, source, checked_at, options);

  emit(cfg, "snapshot.jsonl", [&](std::ostream& o) { write_statuses_jsonl(result.snapshot, o); });
  emit(cfg, "reasons.csv",
       [&](std::ostream& o) { write_reason_csv(reason_distribution(result.snapshot), o); });
  emit(cfg, "yearly.csv", [&](std::ostream& o) {
    write_yearly_csv(yearly_distribution(corpus, result.snapshot, selected), o);
  });
  if (!result.complete()) {
    err << "audit: " << result.unresolved.size() << " ids unresolved\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg) {
  require_file(cfg.mentions, "--mentions");
  const bool scenario_mode = !cfg.scenario.empty();
  if (scenario_mode) {
    require_file(cfg.scenario, "--scenario");
  } else if (!cfg.seed) {
    throw UsageError("--seed is required for Monte Carlo runs");
  }
  ensure_out_dir(cfg.out_dir);

  const Corpus corpus = ingest_mentions_file(cfg.mentions);
  std::vector<RemovalEvent> events;
  if (scenario_mode) {
    events = parse_scenario_file(cfg.scenario);
    std::set<std::string_view> authors;
    for (const auto& pub : corpus.publication_ids()) {
      for (const auto idx : corpus.mentions_of(pub)) {
        if (const auto& a = corpus.at(idx).author_id) authors.insert(*a);
      }
    }
    for (std::size_t i = 0; i < events.size(); ++i) {
      const auto& e = events[i];
      const bool known = e.kind == RemovalEvent::Kind::DeleteTweet
                             ? corpus.find(e.target) != nullptr ||
                                   e.target.rfind(kAssumedPrefix, 0) == 0
                             : authors.count(e.target) > 0;
      if (!known) {
        throw Error("unknown_target", "scenario event " + std::to_string(i) + " names " + e.target);
      }
    }
  }

  RiskOptions risk;
  risk.p_delete = cfg.p_delete;
  risk.p_suspend = cfg.p_suspend;
  risk.p_protect = cfg.p_protect;
  risk.trials = cfg.trials;
  risk.seed = cfg.seed.value_or(0);
  risk.threads = std::max(1U, std::thread::hardware_concurrency());

  std::vector<RiskRow> rows;
  for (const auto& pub : select_highly_tweeted(corpus, cfg.min_nutu)) {
    const DisseminationStructure structure = build_structure(corpus, pub);
    RiskRow row;
    row.publication_id = pub;
    row.worst = worst_case_single_event(structure, corpus);
    if (scenario_mode) {
      // Each publication replays the events that concern it.
      const CascadeModel model(structure, corpus);
      CascadeState state;
      for (const auto& e : events) {
        const bool applies = e.kind == RemovalEvent::Kind::DeleteTweet ? model.has_tweet(e.target)
                                                                       : model.has_author(e.target);
        if (applies) model.apply(state, e);
      }
      const double loss = model.loss(state);
      row.summary = RiskSummary{loss, loss, loss, loss, loss};
    } else {
      row.summary = monte_carlo_risk(structure, corpus, risk);
    }
    rows.push_back(std::move(row));
  }
  emit(cfg, "risk.csv", [&](std::ostream& o) { write_risk_csv(rows, o); });
  return kExitOk;
}

std::vector<std::uint64_t> read_samples(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::uint64_t> samples;
  std::string token;
  while (in >> token) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
      throw Error("bad_sample", "not a non-negative integer: " + token);
    }
    samples.push_back(v);
  }
  return samples;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::uint64_t> samples;
  if (!cfg.samples.empty()) {
    require_file(cfg.samples, "--samples");
    samples = read_samples(cfg.samples);
  } else {
    require_file(cfg.mentions, "--mentions");
    const Corpus corpus = ingest_mentions_file(cfg.mentions);
    for (const auto& pub : corpus.publication_ids()) {
      const auto nutu = unique_users(corpus, pub);
      if (nutu > 0) samples.push_back(nutu);
    }
  }
  ensure_out_dir(cfg.out_dir);
  const PowerLawFit fit =
      fit_power_law(samples, cfg.xmin ? XminPolicy::fixed(*cfg.xmin) : XminPolicy::scan_ks());
  const std::string summary = fit_to_json(fit).dump();
  write_file_atomic(fs::path(cfg.out_dir) / "fit.json", summary + "\n");
  emit(cfg, "pdf_ccdf.csv", [&](std::ostream& o) { write_pdf_csv(pdf_ccdf(samples), o); });
  out << summary << '\n';
  return kExitOk;
}

int cmd_correlate(const RunConfig& cfg, std::ostream& out) {
  require_file(cfg.mentions, "--mentions");
  require_file(cfg.statuses, "--statuses");
  ensure_out_dir(cfg.out_dir);
  const Corpus corpus = ingest_mentions_file(cfg.mentions);
  const StatusSnapshot snapshot = load_statuses(cfg.statuses);
  std::vector<StructureMetrics> metrics;
  for (const auto& pub : select_highly_tweeted(corpus, cfg.min_nutu)) {
    metrics.push_back(compute_metrics(build_structure(corpus, pub), corpus));
  }
  const double rho = stability_correlation(metrics, corpus, snapshot);
  const nlohmann::json summary{{"rho", rho}, {"publications", metrics.size()}};
  write_file_atomic(fs::path(cfg.out_dir) / "correlation.json", summary.dump() + "\n");
  out << summary.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Dissemination-structure stability toolkit for tweet mentions", "cascade"};
  app.require_subcommand(1);

  const auto add_inputs = [&](CLI::App* sub, bool statuses) {
    sub->add_option("--mentions", cfg.mentions, "mentions.jsonl");
    if (statuses) sub->add_option("--statuses", cfg.statuses, "statuses.jsonl");
    sub->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  };
  const auto add_min_nutu = [&](CLI::App* sub) {
    sub->add_option("--min-nutu", cfg.min_nutu, "Minimum unique users per publication")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };

  auto* validate = app.add_subcommand("validate", "Print the ingestion report");
  add_inputs(validate, true);

  auto* metrics = app.add_subcommand("metrics", "Per-publication metrics CSV");
  add_inputs(metrics, true);
  add_min_nutu(metrics);

  auto* audit_cmd = app.add_subcommand("audit", "Audit availability against a status fixture");
  add_inputs(audit_cmd, true);
  add_min_nutu(audit_cmd);
  audit_cmd->add_option("--checked-at", cfg.checked_at, "Check time (ISO-8601)");

  auto* breakdown = app.add_subcommand("breakdown", "Unavailability breakdown CSV");
  add_inputs(breakdown, true);
  add_min_nutu(breakdown);
  breakdown->add_option("--top", cfg.top, "Keep the N highest TUnR rows (0: all)");

  auto* simulate_cmd = app.add_subcommand("simulate", "Scenario replay or Monte Carlo risk CSV");
  add_inputs(simulate_cmd, false);
  add_min_nutu(simulate_cmd);
  simulate_cmd->add_option("--scenario", cfg.scenario, "Event scenario (jsonl)");
  simulate_cmd->add_option("--seed", cfg.seed, "Seed for Monte Carlo runs");
  simulate_cmd->add_option("--trials", cfg.trials)->capture_default_str()->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--p-delete", cfg.p_delete)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--p-suspend", cfg.p_suspend)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--p-protect", cfg.p_protect)->capture_default_str()->check(CLI::Range(0.0, 1.0));

  auto* fit = app.add_subcommand("fit", "Power-law fit of the unique-user distribution");
  add_inputs(fit, false);
  fit->add_option("--samples", cfg.samples, "Whitespace-separated integers instead of mentions");
  fit->add_option("--xmin", cfg.xmin, "Fixed xmin (default: KS scan)")->check(CLI::PositiveNumber);

  auto* correlate = app.add_subcommand("correlate", "Spearman of recorded vs available counts");
  add_inputs(correlate, true);
  add_min_nutu(correlate);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("cascade");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    cfg.max_inflight = inflight_from_env();
    if (validate->parsed()) return cmd_validate(cfg, out);
    if (metrics->parsed()) return cmd_metrics(cfg);
    if (audit_cmd->parsed()) return cmd_audit(cfg, err);
    if (breakdown->parsed()) return cmd_breakdown(cfg);
    if (simulate_cmd->parsed()) return cmd_simulate(cfg);
    if (fit->parsed()) return cmd_fit(cfg, out);
    if (correlate->parsed()) return cmd_correlate(cfg, out);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace cascade
