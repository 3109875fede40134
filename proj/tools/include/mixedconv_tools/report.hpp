#pragma once

// Report serialization. A report is a JSON-lines file
//
//   {"schema":1,"kind":"header","command":...,"timestamp":...,"settings":{...}}
//   {"schema":1,"kind":"record","index":0,...}
//   ...
//   {"schema":1,"kind":"summary",...}
//
// plus a CSV with one row per record (scalar fields only). Keys are sorted
// and numbers use the shortest round-trip form, so equal inputs give equal
// bytes apart from the header timestamp. Non-finite numbers are written as
// the strings "inf", "-inf" and "nan".

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixedconv/harness.hpp"
#include "mixedconv/stft.hpp"

namespace mixedconv::tools {

using nlohmann::json;

inline constexpr int kReportSchema = 1;

json number(double x);

json to_json(const InstanceParams& params);
json to_json(const VerificationRecord& rec);
json to_json(const SuiteSummary& summary);
json to_json(const YoungReport& report);
json to_json(const SharpnessResult& result);
json to_json(const TransferReport& report);
json to_json(const WindowChangeLevel& level);
json to_json(const TraceStage& stage);

struct Report {
  std::string command;
  json settings = json::object();
  std::vector<json> records;
  json summary = json::object();
};

std::string render_jsonl(const Report& report, const std::string& timestamp);
std::string render_csv(const Report& report);

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

struct WrittenReport {
  std::string jsonl;
  std::string csv;
};

/// Writes <dir>/<command>.jsonl and <dir>/<command>_summary.csv.
WrittenReport write_report(const Report& report, const std::string& dir,
                           const std::string& timestamp);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace mixedconv::tools
