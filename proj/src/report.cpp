#include <fstream>
#include <iostream>

#include <json.hpp>

#include "batesqc/error.hpp"
#include "batesqc/runner.hpp"

namespace batesqc {

namespace {

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

}  // namespace

std::string report_to_json(const ValidationReport& report) {
  nlohmann::ordered_json j;
  j["total_pages"] = report.total_pages;
  j["raw_match_rate"] = report.raw_match_rate;
  j["corrected_match_rate"] = report.corrected_match_rate;
  j["conf_missing_rate"] = report.conf_missing_rate;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (FindingKind kind : kAllFindingKinds) counts[std::string(to_string(kind))] = report.count(kind);
  j["per_kind_counts"] = std::move(counts);
  nlohmann::ordered_json findings = nlohmann::ordered_json::array();
  for (const Finding& f : report.findings) {
    nlohmann::ordered_json item;
    item["kind"] = to_string(f.kind);
    if (f.expected) item["bates_expected"] = *f.expected;
    if (f.observed) item["observed"] = *f.observed;
    if (f.image) item["image"] = *f.image;
    item["detail"] = f.detail;
    findings.push_back(std::move(item));
  }
  j["findings"] = std::move(findings);
  // Replacement keeps odd OCR bytes from aborting serialization.
  return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

std::string report_to_csv(const ValidationReport& report) {
  std::string out = "kind,bates_expected,observed,image,detail\n";
  for (const Finding& f : report.findings) {
    out += std::string(to_string(f.kind));
    out += ',' + csv_field(f.expected.value_or(""));
    out += ',' + csv_field(f.observed.value_or(""));
    out += ',' + csv_field(f.image.value_or(""));
    out += ',' + csv_field(f.detail);
    out += '\n';
  }
  return out;
}

int emit_report(const ValidationReport& report, const JobConfig& cfg) {
  try {
    if (cfg.output.json_path) write_file(*cfg.output.json_path, report_to_json(report));
    if (cfg.output.csv_path) write_file(*cfg.output.csv_path, report_to_csv(report));
  } catch (const Error& e) {
    std::cerr << "batesqc: " << e.what() << '\n';
    return kExitFatal;
  }
  const bool clean = std::all_of(report.findings.begin(), report.findings.end(),
                                 [](const Finding& f) { return f.kind == FindingKind::Match; });
  return clean ? kExitClean : kExitFindings;
}

}  // namespace batesqc
