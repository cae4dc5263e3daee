#include "fivenum/meta_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>

namespace fivenum {

namespace {

using nlohmann::json;

constexpr const char* kFieldNames[] = {"n", "min", "q1", "median", "q3", "max"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Splits one logical CSV record; quoted cells may span lines. Returns false
// at end of input.
bool read_record(std::istream& in, std::vector<std::string>& cells, std::size_t& line) {
  cells.clear();
  std::string text;
  if (!std::getline(in, text)) return false;
  ++line;
  const std::size_t start_line = line;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == text.size()) {
      if (!quoted) break;
      std::string more;
      if (!std::getline(in, more)) throw ParseError("unterminated quoted cell", start_line);
      ++line;
      cell += '\n';
      text = std::move(more);
      i = static_cast<std::size_t>(-1);
      continue;
    }
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (ch == '\r' && i + 1 == text.size()) {
      // CRLF line ending
    } else {
      cell += ch;
    }
  }
  cells.push_back(std::move(cell));
  return true;
}

bool blank(const std::vector<std::string>& cells) {
  return cells.size() == 1 && trim(cells[0]).empty();
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_n(std::string_view s, std::vector<Violation>& problems) {
  std::int64_t n = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
  if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return n;
  if (const auto d = parse_double(s)) {
    if (std::isfinite(*d) && *d == std::trunc(*d) && std::fabs(*d) < 9e15)
      return static_cast<std::int64_t>(*d);
    problems.push_back({std::string(codes::invalid_n), "n = '" + std::string(s) + "' is not a whole number"});
    return std::nullopt;
  }
  problems.push_back({std::string(codes::not_a_number), "n: '" + std::string(s) + "' is not a number"});
  return std::nullopt;
}

std::string csv_cell(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string join_codes(const std::vector<Violation>& v) {
  std::string out;
  for (const auto& x : v) {
    if (!out.empty()) out += ';';
    out += x.code;
  }
  return out;
}

}  // namespace

FiveNumberSummary StudyRow::summary() const { return {min, q1, median, q3, max, n}; }

Scenario detect_scenario(const StudyRow& row) { return detect_scenario(row.summary()); }

std::vector<StudyRow> parse_study_csv(std::istream& in) {
  std::vector<StudyRow> rows;
  std::vector<std::string> cells;
  std::size_t line = 0;

  bool have_header = false;
  while (!have_header && read_record(in, cells, line)) {
    if (blank(cells)) continue;
    std::string header;
    for (std::size_t k = 0; k < cells.size(); ++k) header += (k ? "," : "") + std::string(trim(cells[k]));
    if (header.rfind("\xEF\xBB\xBF", 0) == 0) header.erase(0, 3);
    if (header != kStudyCsvHeader)
      throw ParseError("header must be '" + std::string(kStudyCsvHeader) + "', got '" + header + "'", line);
    have_header = true;
  }

  while (read_record(in, cells, line)) {
    if (blank(cells)) continue;
    if (cells.size() != 7)
      throw ParseError("expected 7 cells, found " + std::to_string(cells.size()), line);
    StudyRow row;
    row.line = line;
    row.study_id = std::string(trim(cells[0]));
    std::optional<double>* values[] = {&row.min, &row.q1, &row.median, &row.q3, &row.max};
    for (std::size_t k = 1; k < 7; ++k) {
      const std::string_view text = trim(cells[k]);
      row.raw.emplace_back(text);
      if (text.empty()) continue;
      if (k == 1) {
        row.n = parse_n(text, row.cell_errors);
      } else if (const auto v = parse_double(text)) {
        *values[k - 2] = *v;
      } else {
        row.cell_errors.push_back({std::string(codes::not_a_number),
                                   std::string(kFieldNames[k - 1]) + ": '" + std::string(text) +
                                       "' is not a number"});
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ConversionRecord convert_row(const StudyRow& row) {
  ConversionRecord rec;
  rec.row = row;
  if (!row.cell_errors.empty()) {
    rec.errors = row.cell_errors;
    return rec;
  }
  try {
    rec.result = estimate(row.summary());
    rec.warnings = rec.result->warnings;
  } catch (const ValidationError& e) {
    rec.errors = e.violations();
  }
  return rec;
}

std::vector<ConversionRecord> convert_rows(const std::vector<StudyRow>& rows) {
  std::vector<ConversionRecord> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(convert_row(r));
  return out;
}

std::vector<ConversionRecord> convert_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return convert_rows(parse_study_csv(in));
}

std::string format_number(double v, bool full_precision) {
  char buf[40];
  std::snprintf(buf, sizeof buf, full_precision ? "%.17g" : "%.6g", v);
  return buf;
}

std::string records_csv(const std::vector<ConversionRecord>& records, const OutputOptions& opt) {
  std::string out = std::string(kStudyCsvHeader) + ",est_mean,est_sd,mean_method,sd_method,warnings,errors\n";
  for (const auto& rec : records) {
    out += csv_cell(rec.row.study_id);
    for (std::size_t k = 0; k < 6; ++k) out += "," + csv_cell(k < rec.row.raw.size() ? rec.row.raw[k] : "");
    if (rec.result) {
      out += "," + format_number(rec.result->mean, opt.full_precision);
      out += "," + format_number(rec.result->sd, opt.full_precision);
      out += "," + rec.result->mean_method.label() + "," + rec.result->sd_method.label();
    } else {
      out += ",,,,";
    }
    out += "," + csv_cell(join_codes(rec.warnings)) + "," + csv_cell(join_codes(rec.errors)) + "\n";
  }
  return out;
}

json violations_json(const std::vector<Violation>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back({{"code", x.code}, {"message", x.message}});
  return out;
}

json estimate_json(const EstimateResult& r) {
  auto method = [](const MethodId& m) {
    return json{{"id", m.label()}, {"description", std::string(m.description())}};
  };
  json weights = json::array();
  for (const auto& w : r.weights_used) weights.push_back({{"label", w.label}, {"value", w.value}});
  return {{"scenario", std::string(to_string(r.scenario))},
          {"mean", r.mean},
          {"sd", r.sd},
          {"methods", {{"mean", method(r.mean_method)}, {"sd", method(r.sd_method)}}},
          {"weights", weights},
          {"warnings", violations_json(r.warnings)}};
}

json records_json(const std::vector<ConversionRecord>& records) {
  json out = json::array();
  for (const auto& rec : records) {
    json input = {{"study_id", rec.row.study_id}, {"line", rec.row.line}};
    const std::optional<double>* values[] = {&rec.row.min, &rec.row.q1, &rec.row.median, &rec.row.q3,
                                             &rec.row.max};
    input["n"] = rec.row.n ? json(*rec.row.n) : json(nullptr);
    for (std::size_t k = 0; k < 5; ++k)
      input[kFieldNames[k + 1]] = *values[k] ? json(**values[k]) : json(nullptr);
    json item = {{"input", input}};
    if (rec.result) {
      item["result"] = estimate_json(*rec.result);
    } else {
      item["result"] = nullptr;
    }
    item["errors"] = violations_json(rec.errors);
    out.push_back(item);
  }
  return out;
}

FiveNumberSummary summary_from_json(const json& j, std::vector<Violation>& problems) {
  FiveNumberSummary s;
  if (!j.is_object()) {
    problems.push_back({std::string(codes::malformed_request), "request body must be a JSON object"});
    return s;
  }
  if (const auto it = j.find("n"); it != j.end() && !it->is_null()) {
    if (it->is_number_integer()) {
      s.n = it->get<std::int64_t>();
    } else if (it->is_number_float()) {
      const double d = it->get<double>();
      if (std::isfinite(d) && d == std::trunc(d) && std::fabs(d) < 9e15)
        s.n = static_cast<std::int64_t>(d);
      else
        problems.push_back({std::string(codes::invalid_n), "n must be a whole number"});
    } else {
      problems.push_back({std::string(codes::not_a_number), "n must be a number"});
    }
  }
  std::optional<double>* values[] = {&s.a, &s.q1, &s.m, &s.q3, &s.b};
  for (std::size_t k = 0; k < 5; ++k) {
    const char* name = kFieldNames[k + 1];
    const auto it = j.find(name);
    if (it == j.end() || it->is_null()) continue;
    if (it->is_number())
      *values[k] = it->get<double>();
    else
      problems.push_back({std::string(codes::not_a_number), std::string(name) + " must be a number"});
  }
  return s;
}

}  // namespace fivenum
