#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "mixedconv_tools/app.hpp"
#include "mixedconv_tools/config.hpp"
#include "mixedconv_tools/report.hpp"

using namespace mixedconv;
using namespace mixedconv::tools;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mixedconv");
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("mixedconv_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<json> lines(const fs::path& path) {
  std::vector<json> out;
  std::istringstream in(slurp(path));
  for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
  return out;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  auto path = dir / "config.json";
  std::ofstream(path) << text;
  return path;
}

const char* kHandConfig = R"({
  "axes": {"periodic": [true], "resolution": 32},
  "exponents": {"p": "2", "r": "1"},
  "generator": {"kind": "periodic_trig", "offset": 1.0},
  "sequence": [{"index": [0], "value": 1.0}, {"index": [1], "value": 1.0}]
})";

}  // namespace

TEST(Config, MalformedJsonNamesLine) {
  try {
    parse_config("{\n  \"axes\": {\n    \"periodic\": [true,\n  }\n}");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.where(), "line 4");
  }
}

TEST(Config, SchemaErrorsNameLineAndField) {
  try {
    parse_config("{\n  \"harness\": {\n    \"count\": -3\n  }\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.where(), "line 3, field harness.count");
  }
  try {
    parse_config("{\"axes\": {\"periodc\": [true]}}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.where(), "line 1, field axes.periodc");
    EXPECT_NE(std::string(e.what()).find("unknown field"), std::string::npos);
  }
  EXPECT_THROW(parse_config("{\"nonsense\": {}}"), ConfigError);
  EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
}

TEST(Config, InstanceFieldsAreChecked) {
  auto cfg = parse_config(kHandConfig);
  auto params = instance_from_config(cfg);
  EXPECT_EQ(params.dim, 1);
  EXPECT_EQ(params.a.size(), 2u);
  EXPECT_EQ(params.p.entries()[0], 2.0);

  auto bad = parse_config(R"({"axes": {"periodic": [true, false]},
    "exponents": {"p": "2", "r": "1,1"}, "sequence": []})");
  try {
    instance_from_config(bad);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(e.where().find("exponents.p"), std::string::npos);
  }
  auto no_seq = parse_config(R"({"axes": {"periodic": [true]}, "exponents": {"p": "2", "r": "1"}})");
  EXPECT_THROW(instance_from_config(no_seq), ConfigError);
}

TEST(Config, ExponentForms) {
  auto a = exponents_from_json(json("2,inf"), "p");
  auto b = exponents_from_json(json::parse(R"([2, "inf"])"), "p");
  EXPECT_EQ(a.entries()[0], b.entries()[0]);
  EXPECT_TRUE(a.is_infinite(1) && b.is_infinite(1));
  EXPECT_THROW(exponents_from_json(json("0,1"), "p"), ConfigError);
}

TEST(Config, SettingsDefaultsAndOverrides) {
  auto s = settings_from_config(parse_config(R"({"axes": {"resolution": 48}, "harness": {"seed": 9}})"));
  EXPECT_EQ(s.seed, 9u);
  EXPECT_EQ(s.resolution, 48);
  EXPECT_EQ(s.count, 10);
}

TEST(Report, RenderIsCanonical) {
  Report rep;
  rep.command = "demo";
  rep.settings = {{"z", 1}, {"a", 2}};
  rep.records.push_back({{"index", 0}, {"value", number(kInf)}, {"nested", json::object()}});
  rep.summary = {{"pass", true}};
  auto text = render_jsonl(rep, "2020-01-01T00:00:00Z");
  std::istringstream in(text);
  std::string header, record, summary, extra;
  std::getline(in, header);
  std::getline(in, record);
  std::getline(in, summary);
  EXPECT_FALSE(std::getline(in, extra));
  EXPECT_NE(header.find("\"kind\":\"header\""), std::string::npos);
  EXPECT_LT(header.find("\"a\":2"), header.find("\"z\":1"));
  EXPECT_NE(record.find("\"value\":\"inf\""), std::string::npos);
  EXPECT_NE(summary.find("\"kind\":\"summary\""), std::string::npos);
  EXPECT_EQ(render_jsonl(rep, "2020-01-01T00:00:00Z"), text);

  auto csv = render_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')).find("nested"), std::string::npos);
  EXPECT_NE(csv.find("inf"), std::string::npos);
  EXPECT_EQ(number(0.1).dump(), "0.1");
}

TEST(Report, TimestampFormat) {
  EXPECT_TRUE(std::regex_match(utc_timestamp(), std::regex(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\dZ)")));
}

TEST(Cli, SuiteWritesTenRecords) {
  auto dir = scratch("suite");
  auto r = invoke({"suite", "--seed", "1", "--count", "10", "--dims", "1,2",
                   "--resolution", "32", "--out", dir.string(), "--no-plots"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto rows = lines(dir / "suite.jsonl");
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows.front()["kind"], "header");
  EXPECT_EQ(rows.back()["kind"], "summary");
  EXPECT_EQ(rows.back()["count"], 10);
  for (std::size_t i = 1; i <= 10; ++i) {
    EXPECT_EQ(rows[i]["kind"], "record");
    EXPECT_EQ(rows[i]["index"], i - 1);
    EXPECT_EQ(rows[i]["schema"], kReportSchema);
  }
  EXPECT_TRUE(fs::exists(dir / "suite_summary.csv"));
}

TEST(Cli, ReportsAreByteIdenticalModuloTimestamp) {
  auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& dir : {a, b}) {
    auto r = invoke({"suite", "--seed", "5", "--count", "4", "--dims", "1,2,3",
                     "--resolution", "32", "--out", dir.string(), "--no-plots"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  const std::regex stamp(R"("timestamp":"[^"]*")");
  auto ta = std::regex_replace(slurp(a / "suite.jsonl"), stamp, "");
  auto tb = std::regex_replace(slurp(b / "suite.jsonl"), stamp, "");
  EXPECT_EQ(ta, tb);
  EXPECT_EQ(slurp(a / "suite_summary.csv"), slurp(b / "suite_summary.csv"));
}

TEST(Cli, SharpnessRatio) {
  auto dir = scratch("sharp");
  auto r = invoke({"sharpness", "--N", "16", "--out", dir.string(), "--no-plots"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto rows = lines(dir / "sharpness.jsonl");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[1]["ratio"].get<double>(), 4.0, 1e-9);
}

TEST(Cli, VerifyHandInstance) {
  auto dir = scratch("verify");
  auto cfg = write_config(dir, kHandConfig);
  auto r = invoke({"verify", "--config", cfg.string(), "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto rows = lines(dir / "verify.jsonl");
  EXPECT_NEAR(rows[1]["ratio"].get<double>(), 1.0, 1e-9);
}

TEST(Cli, FailingCheckExitsOneAndNamesRecord) {
  auto dir = scratch("fail");
  // r = 2 is outside the admissible region, so the instance is rejected.
  std::string text = kHandConfig;
  text.replace(text.find("\"r\": \"1\""), 8, "\"r\": \"2\"");
  auto cfg = write_config(dir, text);
  auto r = invoke({"verify", "--config", cfg.string(), "--out", dir.string()});
  EXPECT_EQ(r.code, kExitCheckFailed);
  EXPECT_NE(r.err.find("record 0"), std::string::npos) << r.err;
}

TEST(Cli, UsageAndConfigErrorsExitTwo) {
  auto dir = scratch("usage");
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"no-such-command"}).code, kExitUsage);
  EXPECT_EQ(invoke({"verify", "--out", dir.string()}).code, kExitUsage);
  auto missing = invoke({"verify", "--config", (dir / "absent.json").string(), "--out", dir.string()});
  EXPECT_EQ(missing.code, kExitUsage);
  EXPECT_NE(missing.err.find("config error"), std::string::npos);
  auto cfg = write_config(dir, "{\n\"harness\": {\"seed\": \"x\"}\n}");
  auto bad = invoke({"suite", "--config", cfg.string(), "--out", dir.string()});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("line 2, field harness.seed"), std::string::npos) << bad.err;
  EXPECT_EQ(invoke({"suite", "--count", "0", "--out", dir.string()}).code, kExitUsage);
}

TEST(Cli, EnvironmentOutputDirectoryWins) {
  auto dir = scratch("env");
  auto other = scratch("env_other");
  ::setenv("MIXEDCONV_OUT", dir.string().c_str(), 1);
  auto r = invoke({"young", "--trials", "20", "--out", other.string()});
  ::unsetenv("MIXEDCONV_OUT");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "young.jsonl"));
  EXPECT_FALSE(fs::exists(other / "young.jsonl"));
}
