#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cascade/audit.hpp"
#include "cascade/cli.hpp"
#include "cascade/corpus.hpp"
#include "cascade/error.hpp"
#include "cascade/metrics.hpp"
#include "cascade/simulator.hpp"
#include "cascade/stats.hpp"
#include "cascade/structure.hpp"

namespace py = pybind11;
using namespace cascade;

namespace {

py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict structure_dict(const DisseminationStructure& s) {
  py::list nodes;
  for (const auto& n : s.originals) {
    py::dict d;
    d["tweet_id"] = n.tweet_id;
    d["provenance"] = std::string(to_string(n.provenance));
    d["author_id"] = n.author_id;
    d["children"] = n.retweet_children;
    nodes.append(d);
  }
  py::dict out;
  out["publication_id"] = s.publication_id;
  out["originals"] = nodes;
  out["orphan_singletons"] = s.orphan_singletons;
  out["chained_retweets"] = s.chained_retweets;
  return out;
}

py::dict report_dict(const PublicationReport& r) {
  const auto& m = r.metrics;
  py::dict d;
  d["publication_id"] = m.publication_id;
  d["TWS"] = m.counts.tws;
  d["NUTU"] = m.counts.nutu;
  d["N_OT"] = m.counts.n_ot;
  d["N_RT"] = m.counts.n_rt;
  d["DO"] = m.originality;
  d["DC"] = m.concentration;
  d["quadrant"] = m.quadrant ? py::object(py::str(std::string(to_string(*m.quadrant)))) : py::object(py::none());
  d["N_UnT"] = r.breakdown.n_unt;
  d["TUnR"] = r.breakdown.tunr;
  d["N_UnOT"] = r.breakdown.n_unot;
  d["N_UnRT"] = r.breakdown.n_unrt;
  d["Max_N_UnRT"] = r.breakdown.max_n_unrt;
  return d;
}

RemovalEvent to_event(const std::pair<std::string, std::string>& e) {
  const auto kind = parse_event_kind(e.first);
  if (!kind) throw Error("bad_scenario", "unknown event kind " + e.first);
  return {*kind, e.second};
}

py::dict worst_dict(const WorstCase& w) {
  py::dict d;
  d["kind"] = std::string(to_string(w.event.kind));
  d["target"] = w.event.target;
  d["unavailable"] = w.unavailable;
  d["loss"] = w.loss;
  return d;
}

Timestamp parse_time(const std::string& text) {
  const auto t = parse_iso8601(text);
  if (!t) throw Error("bad_checked_at", "not an ISO-8601 timestamp: " + text);
  return *t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dissemination structures, availability audits and removal cascades";

  py::register_exception<Error>(m, "CascadeError", PyExc_RuntimeError);

  py::class_<Corpus>(m, "Corpus")
      .def("__len__", &Corpus::size)
      .def("publication_ids", &Corpus::publication_ids)
      .def("has_publication", &Corpus::has_publication)
      .def("report", [](const Corpus& c) { return to_py(c.report().to_json()); })
      .def("unique_users", [](const Corpus& c, const std::string& pub) { return unique_users(c, pub); })
      .def("select_highly_tweeted",
           [](const Corpus& c, std::uint64_t min_nutu) { return select_highly_tweeted(c, min_nutu); },
           py::arg("min_nutu") = 1000);

  py::class_<StatusSnapshot>(m, "StatusSnapshot")
      .def(py::init<>())
      .def("__len__", &StatusSnapshot::size)
      .def("__eq__", [](const StatusSnapshot& a, const StatusSnapshot& b) { return a == b; })
      .def("records", [](const StatusSnapshot& s) {
        py::list out;
        for (const StatusRecord* r : s.sorted()) out.append(to_py(status_to_json(*r)));
        return out;
      });

  m.def("load_mentions", &ingest_mentions_file, py::arg("path"));
  m.def("parse_mentions", [](const std::string& text) {
    std::istringstream in(text);
    return ingest_mentions(in);
  }, py::arg("text"));
  m.def("load_statuses", [](const std::string& path) {
    auto r = ingest_statuses_file(path);
    return py::make_tuple(std::move(r.snapshot), to_py(r.report.to_json()));
  }, py::arg("path"));
  m.def("parse_statuses", [](const std::string& text) {
    std::istringstream in(text);
    auto r = ingest_statuses(in);
    return py::make_tuple(std::move(r.snapshot), to_py(r.report.to_json()));
  }, py::arg("text"));

  m.def("structure", [](const Corpus& c, const std::string& pub) {
    return structure_dict(build_structure(c, pub));
  }, py::arg("corpus"), py::arg("publication_id"));

  m.def("analyze", [](const Corpus& c, const StatusSnapshot& snap, const std::vector<std::string>& pubs) {
    py::list out;
    for (const auto& r : analyze_publications(c, snap, pubs)) out.append(report_dict(r));
    return out;
  }, py::arg("corpus"), py::arg("snapshot"), py::arg("publication_ids"));

  m.def("audit", [](const std::vector<std::string>& ids, const StatusSnapshot& fixture,
                    const std::string& checked_at, std::size_t max_inflight) {
    SnapshotStatusSource source(fixture);
    AuditOptions opts;
    opts.max_inflight = max_inflight;
    AuditResult r;
    {
      py::gil_scoped_release release;
      r = audit(ids, source, parse_time(checked_at), opts);
    }
    return py::make_tuple(std::move(r.snapshot), r.unresolved);
  }, py::arg("ids"), py::arg("fixture"), py::arg("checked_at"), py::arg("max_inflight") = 4);

  m.def("reason_distribution", [](const StatusSnapshot& snap) {
    const auto t = reason_distribution(snap);
    py::dict out;
    for (const Reason r : kAllReasons) out[py::str(std::string(to_string(r)))] = py::make_tuple(t.count(r), t.share(r));
    return out;
  }, py::arg("snapshot"));

  m.def("simulate", [](const Corpus& c, const std::string& pub,
                       const std::vector<std::pair<std::string, std::string>>& events) {
    const auto s = build_structure(c, pub);
    std::vector<RemovalEvent> evs;
    for (const auto& e : events) evs.push_back(to_event(e));
    const auto state = simulate_state(s, c, evs);
    const CascadeModel model(s, c);
    py::dict unavailable;
    for (const auto& [id, reason] : state.unavailable) unavailable[py::str(id)] = std::string(to_string(reason));
    py::dict out;
    out["unavailable"] = unavailable;
    out["loss"] = model.loss(state);
    return out;
  }, py::arg("corpus"), py::arg("publication_id"), py::arg("events"));

  m.def("worst_case", [](const Corpus& c, const std::string& pub) {
    return worst_dict(worst_case_single_event(build_structure(c, pub), c));
  }, py::arg("corpus"), py::arg("publication_id"));

  m.def("monte_carlo", [](const Corpus& c, const std::string& pub, double p_delete, double p_suspend,
                          double p_protect, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
    const auto s = build_structure(c, pub);
    RiskOptions o{p_delete, p_suspend, p_protect, trials, seed, threads};
    RiskSummary r;
    {
      py::gil_scoped_release release;
      r = monte_carlo_risk(s, c, o);
    }
    py::dict d;
    d["mean"] = r.mean;
    d["p50"] = r.p50;
    d["p90"] = r.p90;
    d["p99"] = r.p99;
    d["max"] = r.max;
    return d;
  }, py::arg("corpus"), py::arg("publication_id"), py::arg("p_delete") = 0.10, py::arg("p_suspend") = 0.02,
     py::arg("p_protect") = 0.01, py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def("fit_power_law", [](const std::vector<std::uint64_t>& samples, std::optional<std::uint64_t> xmin) {
    const auto f = fit_power_law(samples, xmin ? XminPolicy::fixed(*xmin) : XminPolicy::scan_ks());
    py::dict d;
    d["alpha"] = f.alpha;
    d["xmin"] = f.xmin;
    d["ks_distance"] = f.ks_distance;
    d["n_tail"] = f.n_tail;
    return d;
  }, py::arg("samples"), py::arg("xmin") = py::none());

  m.def("pdf_ccdf", [](const std::vector<std::uint64_t>& samples) {
    std::vector<std::tuple<std::uint64_t, double, double>> out;
    for (const auto& p : pdf_ccdf(samples)) out.emplace_back(p.value, p.pdf, p.ccdf);
    return out;
  }, py::arg("samples"));

  m.def("spearman", [](const std::vector<double>& xs, const std::vector<double>& ys) {
    return spearman(xs, ys);
  }, py::arg("xs"), py::arg("ys"));

  m.def("classify_error", [](int code) { return std::string(to_string(classify_error(code))); },
        py::arg("code"));

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "cascade");
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
