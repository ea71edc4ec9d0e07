#pragma once

// Report emission: the per-row CSV, a JSON summary that round-trips, and
// two-column plot data files.

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "swlab/sweep.hpp"

namespace swlab {

enum class ReportFormat { Csv, Json };

/// Throws Error(Config) for anything other than "csv" or "json".
ReportFormat parse_report_format(std::string_view name);

inline constexpr std::string_view kCsvHeader = "n,p,p_tilde,alpha,family,param,numerator,denominator,ratio,flags";

/// Header plus one line per row; reals printed with 17 significant digits.
void write_rows_csv(std::ostream& os, const std::vector<RatioRow>& rows);

/// Everything in the report, rows included. Non-finite reals are written as
/// the strings "inf", "-inf" and "nan".
nlohmann::json report_to_json(const SweepReport& report);
SweepReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BlowupFit& fit);

/// Csv: ratios.csv (+ lemma_ratios.csv when present) and summary.json.
/// Json: report.json. plot_data adds plot/*.dat. Returns the files written.
std::vector<std::filesystem::path> emit_reports(const SweepReport& report, const std::filesystem::path& dir,
                                                ReportFormat format, bool plot_data);

}  // namespace swlab
