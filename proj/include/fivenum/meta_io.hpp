#pragma once

// Study rows in and conversion records out: CSV with the fixed header
// `study_id,n,min,q1,median,q3,max` (blank cells for absent fields), and the
// JSON shapes shared by the CLI and the HTTP service. Formats are documented
// in docs/formats.md.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fivenum/estimators.hpp"
#include "json.hpp"

namespace fivenum {

inline constexpr std::string_view kStudyCsvHeader = "study_id,n,min,q1,median,q3,max";

struct StudyRow {
  std::string study_id;
  std::optional<std::int64_t> n;
  std::optional<double> min, q1, median, q3, max;
  // Raw cell text in header order after study_id, echoed on output so that
  // inputs round-trip exactly.
  std::vector<std::string> raw;
  std::size_t line = 0;                 // 1-based line in the source file
  std::vector<Violation> cell_errors;   // unparseable cells (not_a_number, invalid_n)

  FiveNumberSummary summary() const;
};

/// S1, S2 or S3 from which fields are present; ValidationError
/// (insufficient_summary naming the missing fields) otherwise.
Scenario detect_scenario(const StudyRow& row);

struct ConversionRecord {
  StudyRow row;
  std::optional<EstimateResult> result;  // absent when `errors` is non-empty
  std::vector<Violation> errors;
  std::vector<Violation> warnings;
};

/// Parses a study CSV. Blank lines are skipped; cells may be quoted.
/// Throws ParseError (with line number) for a wrong header, a wrong number
/// of cells or an unterminated quote. Bad numbers are reported per row.
std::vector<StudyRow> parse_study_csv(std::istream& in);

ConversionRecord convert_row(const StudyRow& row);
std::vector<ConversionRecord> convert_rows(const std::vector<StudyRow>& rows);

/// parse_study_csv + convert_rows; ParseError also when the file can't be read.
std::vector<ConversionRecord> convert_file(const std::filesystem::path& path);

struct OutputOptions {
  bool full_precision = false;  // %.17g instead of %.6g for estimates
};

/// Input columns echoed verbatim, then
/// est_mean,est_sd,mean_method,sd_method,warnings,errors
/// (codes separated by ';').
std::string records_csv(const std::vector<ConversionRecord>& records, const OutputOptions& opt = {});

nlohmann::json records_json(const std::vector<ConversionRecord>& records);

/// {"scenario", "mean", "sd", "methods": {...}, "weights": [...], "warnings": [...]}.
nlohmann::json estimate_json(const EstimateResult& r);
nlohmann::json violations_json(const std::vector<Violation>& v);

/// Summary from a JSON object with optional numeric fields
/// min, q1, median, q3, max and n. Type problems are returned as violations.
FiveNumberSummary summary_from_json(const nlohmann::json& j, std::vector<Violation>& problems);

std::string format_number(double v, bool full_precision);

}  // namespace fivenum
