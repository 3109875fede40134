#include "mixedconv_tools/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace mixedconv::tools {

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

namespace {

json numbers(std::span<const double> xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

}  // namespace

json to_json(const InstanceParams& p) {
  json j;
  j["dim"] = p.dim;
  j["basis"] = p.basis;
  j["periodic"] = p.periodic;
  j["generator"] = to_string(p.generator);
  j["alpha"] = p.alpha;
  j["center"] = p.center;
  j["shear"] = p.shear;
  json trig = json::array();
  for (const auto& t : p.trig)
    trig.push_back({{"freq", t.freq}, {"amplitude", t.amplitude}, {"phase", t.phase}});
  j["trig"] = trig;
  j["offset"] = p.offset;
  json seq = json::array();
  for (const auto& [index, value] : p.a)
    seq.push_back({{"index", index}, {"value", value}});
  j["sequence"] = seq;
  j["p"] = p.p.to_string();
  j["r"] = p.r.to_string();
  j["omega"] = p.omega;
  j["v"] = p.v;
  j["omega_line_only"] = p.omega_line_only;
  j["half_width"] = p.half_width;
  j["periods"] = p.periods;
  return j;
}

json to_json(const VerificationRecord& rec) {
  json j;
  j["index"] = rec.index;
  j["seed"] = rec.seed;
  j["instance"] = to_json(rec.params);
  j["dim"] = rec.params.dim;
  j["resolution"] = rec.resolution;
  j["lhs"] = number(rec.lhs);
  j["rhs"] = number(rec.rhs);
  j["admissible_constant"] = number(rec.admissible_constant);
  j["moderate_constant"] = number(rec.moderate_constant);
  j["midpoint_constant"] = number(rec.midpoint_constant);
  j["quad_margin"] = rec.quad_margin;
  j["ratio"] = number(rec.ratio);
  j["pass"] = rec.pass;
  j["rejection"] = rec.rejection;
  if (rec.refinement) {
    const auto& r = *rec.refinement;
    j["refinement"] = {{"resolution", r.resolution},
                       {"lhs", number(r.lhs)},
                       {"rhs", number(r.rhs)},
                       {"lhs_change", number(r.lhs_change)},
                       {"rhs_change", number(r.rhs_change)},
                       {"pass", r.pass}};
  }
  return j;
}

json to_json(const SuiteSummary& s) {
  return {{"count", s.count},
          {"passed", s.passed},
          {"rejected", s.rejected},
          {"max_ratio", number(s.max_ratio)},
          {"max_lhs_change", number(s.max_lhs_change)},
          {"max_rhs_change", number(s.max_rhs_change)},
          {"pass", s.pass}};
}

json to_json(const YoungReport& r) {
  return {{"trials", r.trials},
          {"violations_young", r.violations_young},
          {"max_slack_young", number(r.max_slack_young)},
          {"violations_quasi", r.violations_quasi},
          {"max_slack_quasi", number(r.max_slack_quasi)},
          {"tolerance", r.tolerance},
          {"pass", r.pass}};
}

json to_json(const SharpnessResult& r) {
  return {{"N", r.N},
          {"lhs", number(r.lhs)},
          {"rhs", number(r.rhs)},
          {"ratio", number(r.ratio)},
          {"expected", number(r.expected)},
          {"relative_error", number(std::abs(r.ratio - r.expected) / r.expected)}};
}

json to_json(const TransferReport& r) {
  return {{"shift_residual", number(r.shift_residual)},
          {"xi_residual", number(r.xi_residual)},
          {"max_magnitude", number(r.max_magnitude)},
          {"relative_shift_residual", number(r.relative_shift_residual)},
          {"relative_xi_residual", number(r.relative_xi_residual)},
          {"alternative_pairing_residual", number(r.alternative_pairing_residual)},
          {"flag_alternative_pairing", r.flag_alternative_pairing},
          {"shift_residual_map", numbers(r.shift_residual_map)},
          {"pass", r.pass}};
}

json to_json(const WindowChangeLevel& l) {
  return {{"c_hat", number(l.c_hat)},
          {"lhs_max", number(l.lhs_max)},
          {"rhs_max", number(l.rhs_max)},
          {"cells_compared", l.cells_compared}};
}

json to_json(const TraceStage& s) {
  return {{"k", s.k},
          {"exponent", number(s.exponent)},
          {"cells", s.g.size()},
          {"max_ratio", number(s.max_ratio)},
          {"pass", s.pass}};
}

std::string render_jsonl(const Report& report, const std::string& timestamp) {
  std::string out;
  json header{{"schema", kReportSchema},
              {"kind", "header"},
              {"command", report.command},
              {"timestamp", timestamp},
              {"settings", report.settings}};
  out += header.dump() + '\n';
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    json rec = report.records[i];
    rec["schema"] = kReportSchema;
    rec["kind"] = "record";
    if (!rec.contains("index")) rec["index"] = i;
    out += rec.dump() + '\n';
  }
  json summary = report.summary;
  summary["schema"] = kReportSchema;
  summary["kind"] = "summary";
  out += summary.dump() + '\n';
  return out;
}

namespace {

std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

}  // namespace

std::string render_csv(const Report& report) {
  std::vector<std::string> columns;
  std::set<std::string> seen;
  for (const auto& rec : report.records) {
    for (const auto& [key, value] : rec.items()) {
      if (value.is_structured() || seen.count(key)) continue;
      seen.insert(key);
      columns.push_back(key);
    }
  }
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& rec : report.records) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      auto it = rec.find(columns[c]);
      if (it != rec.end()) out += csv_cell(*it);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

WrittenReport write_report(const Report& report, const std::string& dir,
                           const std::string& timestamp) {
  namespace fs = std::filesystem;
  WrittenReport paths;
  paths.jsonl = (fs::path(dir) / (report.command + ".jsonl")).string();
  paths.csv = (fs::path(dir) / (report.command + "_summary.csv")).string();
  write_atomic(paths.jsonl, render_jsonl(report, timestamp));
  write_atomic(paths.csv, render_csv(report));
  return paths;
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace mixedconv::tools
