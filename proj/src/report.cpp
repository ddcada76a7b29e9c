#include "cascade/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <ostream>

#include "cascade/error.hpp"

namespace cascade {

std::string format_fixed6(double value) {
  // to_chars rounds the exact binary value correctly, i.e. ties to even.
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, 6);
  std::string out(buf.data(), res.ptr);
  if (out == "-0.000000") out.erase(0, 1);
  return out;
}

void write_metrics_csv(std::span<const PublicationReport> reports, std::ostream& out) {
  out << kMetricsHeader << '\n';
  for (const auto& r : reports) {
    const auto& m = r.metrics;
    const auto& b = r.breakdown;
    out << m.publication_id << ',' << m.counts.tws << ',' << m.counts.nutu << ','
        << m.counts.n_ot << ',' << m.counts.n_rt << ',' << format_fixed6(m.originality) << ','
        << format_fixed6(m.concentration) << ','
        << (m.quadrant ? to_string(*m.quadrant) : std::string_view{}) << ',' << b.n_unt << ','
        << format_fixed6(b.tunr) << ',' << b.n_unot << ',' << b.n_unrt << ',' << b.max_n_unrt
        << '\n';
  }
}

void write_breakdown_csv(std::span<const PublicationReport> reports, std::size_t top,
                         std::ostream& out) {
  std::vector<const PublicationReport*> rows;
  rows.reserve(reports.size());
  for (const auto& r : reports) rows.push_back(&r);
  std::sort(rows.begin(), rows.end(), [](const PublicationReport* a, const PublicationReport* b) {
    if (a->breakdown.tunr != b->breakdown.tunr) return a->breakdown.tunr > b->breakdown.tunr;
    return a->metrics.publication_id < b->metrics.publication_id;
  });
  if (top > 0 && rows.size() > top) rows.resize(top);

  out << kBreakdownHeader << '\n';
  for (const auto* r : rows) {
    const auto& b = r->breakdown;
    out << r->metrics.publication_id << ',' << r->metrics.counts.tws << ','
        << r->metrics.counts.n_ot << ',' << b.n_unt << ',' << format_fixed6(b.tunr) << ','
        << b.n_unot << ',' << b.n_unrt << ',' << b.max_n_unrt << '\n';
  }
}

void write_yearly_csv(const YearlyDistribution& yearly, std::ostream& out) {
  out << kYearlyHeader << '\n';
  for (const auto& y : yearly.years) {
    out << y.year << ',' << y.total_with_date << ',' << y.unavailable << ','
        << format_fixed6(y.share) << '\n';
  }
}

void write_reason_csv(const ReasonTally& tally, std::ostream& out) {
  out << kReasonHeader << '\n';
  for (const Reason r : kAllReasons) {
    out << to_string(r) << ',' << tally.count(r) << ',' << format_fixed6(tally.share(r)) << '\n';
  }
}

void write_risk_csv(std::span<const RiskRow> rows, std::ostream& out) {
  out << kRiskHeader << '\n';
  for (const auto& row : rows) {
    const auto& s = row.summary;
    out << row.publication_id << ',' << format_fixed6(s.mean) << ',' << format_fixed6(s.p50)
        << ',' << format_fixed6(s.p90) << ',' << format_fixed6(s.p99) << ','
        << format_fixed6(s.max) << ',' << to_string(row.worst.event.kind) << ','
        << row.worst.event.target << ',' << format_fixed6(row.worst.loss) << '\n';
  }
}

void write_pdf_csv(std::span<const PdfCcdfPoint> points, std::ostream& out) {
  out << kPdfHeader << '\n';
  for (const auto& p : points) {
    out << p.value << ',' << format_fixed6(p.pdf) << ',' << format_fixed6(p.ccdf) << '\n';
  }
}

nlohmann::json fit_to_json(const PowerLawFit& fit) {
  return nlohmann::json{{"alpha", fit.alpha},
                        {"xmin", fit.xmin},
                        {"ks_distance", fit.ks_distance},
                        {"n_tail", fit.n_tail}};
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("unwritable_output", "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error("unwritable_output", "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("unwritable_output", "cannot move output into " + path.string());
  }
}

}  // namespace cascade
