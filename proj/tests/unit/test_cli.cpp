#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qss::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp_path(const std::string& name) { return std::string(QSS_TEST_TMPDIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(CliRun, HonestPlainReport) {
  const auto r = run({"run", "--rounds", "50", "--trials", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["report"]["detection_probability"], 0.0);
  EXPECT_EQ(j["spec"]["rounds"], 50);
  EXPECT_TRUE(j["report"].contains("odd_error_rate"));
  EXPECT_TRUE(j["report"].contains("mean_carrier_fidelity"));
}

TEST(CliRun, PlainSplitUndetected) {
  const auto r = run({"run", "--attack", "split", "--policy", "plain", "--trials", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["report"]["detection_probability"], 0.0);
  EXPECT_EQ(j["report"]["bob_recovery_rate"], 1.0);
}

TEST(CliRun, ThetaSplitDetected) {
  const auto r = run({"run", "--variant", "theta", "--theta", "0.7", "1.1", "--attack", "split", "--trials", "300"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_GE(nlohmann::json::parse(r.out)["report"]["detection_probability"].get<double>(), 0.97);
}

TEST(CliRun, OutputFilesAndDeterminism) {
  const std::vector<std::string> base{"run", "--variant", "theta", "--theta", "0.7", "1.1", "--attack",
                                      "split", "--trials", "30", "--seed", "9"};
  auto a = base;
  a.insert(a.end(), {"--out", tmp_path("report_a.json"), "--transcripts", tmp_path("tx.jsonl")});
  auto b = base;
  b.insert(b.end(), {"--out", tmp_path("report_b.json"), "--threads", "3"});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  EXPECT_EQ(slurp(tmp_path("report_a.json")), slurp(tmp_path("report_b.json")));

  std::istringstream lines(slurp(tmp_path("tx.jsonl")));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("carrier_fidelity"));
    ++count;
  }
  EXPECT_EQ(count, 30 * 100);
}

TEST(CliRun, ConfigFileAndPrecedence) {
  const std::string cfg = tmp_path("cfg.json");
  std::ofstream(cfg) << R"({"rounds": 12, "trials": 3, "variant": "theta", "theta": [0.7, 1.1]})";
  const auto r = run({"run", "--config", cfg, "--rounds", "14"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["spec"]["rounds"], 14);
  EXPECT_EQ(j["spec"]["trials"], 3);
  EXPECT_EQ(j["spec"]["variant"], "theta");

  std::ofstream(tmp_path("bad.json")) << R"({"roundz": 12})";
  EXPECT_EQ(run({"run", "--config", tmp_path("bad.json")}).code, 1);
}

TEST(CliRun, InvalidConfigExitsOne) {
  EXPECT_EQ(run({"run", "--variant", "theta"}).code, 1);
  EXPECT_EQ(run({"run", "--variant", "theta", "--theta", "0", "0"}).code, 1);
  EXPECT_EQ(run({"run", "--variant", "theta", "--theta", "0.7", "1.1", "1.0"}).code, 1);
  EXPECT_EQ(run({"run", "--trials", "0"}).code, 1);
  EXPECT_EQ(run({"run", "--announce-frac", "0"}).code, 1);
  EXPECT_EQ(run({"run", "--policy", "w"}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
}

TEST(CliRun, DistinctErrorMessages) {
  const auto a = run({"run", "--trials", "0"});
  const auto b = run({"run", "--announce-frac", "2"});
  const auto c = run({"run", "--variant", "theta", "--theta", "0", "0"});
  EXPECT_NE(a.err, b.err);
  EXPECT_NE(b.err, c.err);
  EXPECT_NE(c.err.find("degenerate"), std::string::npos);
}

TEST(CliRun, IoErrorExitsThree) {
  EXPECT_EQ(run({"run", "--out", "/nonexistent-dir/x.json"}).code, 3);
  EXPECT_EQ(run({"run", "--config", "/nonexistent-dir/c.json"}).code, 3);
}

TEST(CliVerify, DegenerateAnglesFail) {
  const auto r = run({"verify", "--theta", "0", "0", "0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("[FAIL] hardened angles"), std::string::npos);
}

TEST(CliVerify, SumViolationBreaksToggle) {
  const auto r = run({"verify", "--theta", "0.7", "1.1", "1.0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("[FAIL] theta toggle: H(ta)H(tb)H(tc) GHZ = E"), std::string::npos);
}

TEST(CliVerify, JsonOutput) {
  const auto r = run({"verify", "--json"});
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["passed"].get<bool>(), r.code == 0);
  EXPECT_GT(j["checks"].size(), 10u);
}

TEST(CliSynthesize, Json) {
  const auto r = run({"synthesize"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["matrix"].size(), 8u);
  EXPECT_LT(j["unitarity_defect"].get<double>(), 1e-10);
  EXPECT_LT(j["residuals"][0].get<double>(), 1e-8);
  EXPECT_EQ(run({"synthesize", "--blank", "q"}).code, 1);
}

TEST(CliSweep, CsvAndSinglePointConsistency) {
  const auto r = run({"sweep", "--trials", "40", "--rounds", "40", "--point", "0.7:1.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header.rfind("theta_a,theta_b,theta_c,detection_probability", 0), 0u);

  const auto single = run({"run", "--variant", "theta", "--theta", "0.7", "1.1", "--attack", "split", "--trials",
                           "40", "--rounds", "40"});
  const double p = nlohmann::json::parse(single.out)["report"]["detection_probability"];
  std::vector<std::string> cells;
  std::stringstream ss(row);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  ASSERT_GE(cells.size(), 4u);
  EXPECT_DOUBLE_EQ(std::stod(cells[3]), p);
}

TEST(CliSweep, RejectsDegenerateGridPoint) {
  EXPECT_EQ(run({"sweep", "--trials", "2", "--symmetric", "0"}).code, 1);
}

TEST(CliHelp, ExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

}  // namespace
