#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cascade/audit.hpp"
#include "cascade/metrics.hpp"
#include "cascade/simulator.hpp"
#include "cascade/stats.hpp"

namespace cascade {

// Fixed notation with 6 decimals, rounding the exact binary value half to even.
std::string format_fixed6(double value);

inline constexpr std::string_view kMetricsHeader =
    "publication_id,TWS,NUTU,N_OT,N_RT,DO,DC,quadrant,N_UnT,TUnR,N_UnOT,N_UnRT,Max_N_UnRT";
inline constexpr std::string_view kBreakdownHeader =
    "publication_id,TWS,N_OT,N_UnT,TUnR,N_UnOT,N_UnRT,Max_N_UnRT";
inline constexpr std::string_view kYearlyHeader = "year,total_with_date,unavailable,share";
inline constexpr std::string_view kReasonHeader = "reason,count,share";
inline constexpr std::string_view kRiskHeader =
    "publication_id,mean_loss,p50,p90,p99,max_loss,worst_event_kind,worst_event_target,worst_loss";
inline constexpr std::string_view kPdfHeader = "value,pdf,ccdf";

void write_metrics_csv(std::span<const PublicationReport> reports, std::ostream& out);

// Sorted by TUnR descending, then publication_id; at most `top` rows when
// top > 0.
void write_breakdown_csv(std::span<const PublicationReport> reports, std::size_t top,
                         std::ostream& out);

void write_yearly_csv(const YearlyDistribution& yearly, std::ostream& out);
void write_reason_csv(const ReasonTally& tally, std::ostream& out);

struct RiskRow {
  std::string publication_id;
  RiskSummary summary;
  WorstCase worst;
};

void write_risk_csv(std::span<const RiskRow> rows, std::ostream& out);
void write_pdf_csv(std::span<const PdfCcdfPoint> points, std::ostream& out);

nlohmann::json fit_to_json(const PowerLawFit& fit);

// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace cascade
