#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / ("qs2lab_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

Result run(const std::string& args, const std::string& env = "") {
  const auto dir = scratch();
  const std::string out = (dir / "stdout").string(), err = (dir / "stderr").string();
  const std::string cmd = env + " '" + QS2LAB_CLI_PATH + "' " + args + " >'" + out + "' 2>'" + err + "'";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<json> jsonl(const std::string& text) {
  std::vector<json> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) rows.push_back(json::parse(line));
  return rows;
}

}  // namespace

TEST(CliRun, LweHadamardWinsEveryTrial) {
  auto r = run("run --scheme toy-lwe --game qind-qcpa --attack lwe-hadamard --trials 500 --seed 7");
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = jsonl(r.out);
  ASSERT_EQ(rows.size(), 501u);
  EXPECT_EQ(rows.back()["record_type"], "estimate");
  EXPECT_EQ(rows.back()["win_rate"], 1.0);
  for (const auto& row : rows) EXPECT_EQ(row["schema_version"], 1);
}

TEST(CliRun, RolloHadamardNearThreeQuarters) {
  auto r = run("run --scheme toy-rollo --game qind-qcpa --attack rollo-hadamard --trials 4000 --seed 7");
  ASSERT_EQ(r.code, 0) << r.err;
  const json est = jsonl(r.out).back();
  const double sigma = std::sqrt(0.75 * 0.25 / 4000);
  EXPECT_NEAR(est["win_rate"].get<double>(), 0.75, 3 * sigma);
}

TEST(CliRun, NonIsometricSchemeExitsTwo) {
  auto r = run("run --scheme almost-constant --game qind-qcpa --attack blind --trials 10 --seed 7");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("game undefined: non-isometric scheme"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(CliRun, ConfigErrorsExitOne) {
  EXPECT_EQ(run("run --scheme toy-lwe --game qind-qcpa --attack lwe-hadamard --trials 5").code, 1);
  EXPECT_EQ(run("run --scheme no-such --game qind-qcpa --attack blind --trials 5 --seed 1").code, 1);
  EXPECT_EQ(run("run --scheme toy-lwe --game qind-qcpa --attack blind --trials 0 --seed 1").code, 1);
  EXPECT_EQ(run("run --scheme toy-lwe --game qind-qcpa --attack nope --trials 5 --seed 1").code, 1);
  EXPECT_EQ(run("run --scheme toy-lwe --game ind-qcpa --attack lwe-hadamard --trials 5 --seed 1").code, 1);
  EXPECT_EQ(run("run --scheme toy-lwe --game qind-ske --attack blind --trials 5 --seed 1").code, 1);
  EXPECT_EQ(run("run --scheme toy-lwe --param n=9 --game qind-qcpa --attack blind --trials 5 --seed 1").code, 1);
  auto r = run("run --scheme toy-lwe --game qind-qcpa --attack blind --trials 5 --seed 1", "QS2LAB_THREADS=none");
  EXPECT_EQ(r.code, 1);
}

TEST(CliRun, OutputIsByteIdenticalAcrossRunsAndThreadCounts) {
  const auto dir = scratch();
  const std::string a = (dir / "a.jsonl").string(), b = (dir / "b.jsonl").string(), c = (dir / "c.jsonl").string();
  const std::string base = "run --scheme hybrid --game qind-qcpa --attack hybrid-lifting --trials 300 --seed 11 ";
  ASSERT_EQ(run(base + "--output " + a, "QS2LAB_THREADS=1").code, 0);
  ASSERT_EQ(run(base + "--output " + b, "QS2LAB_THREADS=1").code, 0);
  ASSERT_EQ(run(base + "--output " + c, "QS2LAB_THREADS=6").code, 0);
  EXPECT_FALSE(slurp(a).empty());
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a), slurp(c));
}

TEST(CliRun, CsvFormat) {
  auto r = run("run --scheme toy-rollo --game ind-qcpa --attack c1-pad-guess --trials 20 --seed 3 --format csv");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "schema_version,record_type,trial,secret_bit,guess,win,seed,oracle_calls,resampled,trials,wins,win_rate,"
            "advantage,stderr");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 21);
}

TEST(CliRun, OtherGames) {
  auto ske = run("run --scheme ske-otp-prf --game qind-ske --attack ske-hadamard --trials 100 --seed 3");
  EXPECT_EQ(ske.code, 0) << ske.err;
  auto forbidden = run("run --scheme toy-rollo --game forbidden-randomness --trials 100 --seed 3");
  ASSERT_EQ(forbidden.code, 0) << forbidden.err;
  EXPECT_EQ(jsonl(forbidden.out).back()["win_rate"], 1.0);
  auto superposed =
      run("run --scheme toy-rollo --game forbidden-randomness --randomness superposed --messages 0,1 --trials 50 "
          "--seed 3");
  ASSERT_EQ(superposed.code, 0) << superposed.err;
  EXPECT_EQ(jsonl(superposed.out).back()["win_rate"], 1.0);
  auto embedded = run("run --scheme toy-rollo --game qind-qcpa --attack embed:c1-pad-guess --trials 50 --seed 3");
  EXPECT_EQ(embedded.code, 0) << embedded.err;
}

TEST(CliClassify, BuiltinsMatchTheExpectedClasses) {
  auto lwe = run("classify --scheme toy-lwe --seed 7");
  ASSERT_EQ(lwe.code, 0) << lwe.err;
  const json j = json::parse(lwe.out);
  EXPECT_EQ(j["correctness"]["kind"], "Partial");
  EXPECT_EQ(j["recoverable"], "yes");
  EXPECT_EQ(j["isometry"]["kind"], "IsometricWitnessed");
  EXPECT_EQ(j["type2_path"], "fig3");

  const json t = json::parse(run("classify --scheme transformed --seed 7").out);
  EXPECT_EQ(t["recoverable"], "no-rec-declared");
  EXPECT_EQ(t["type2_path"], "fig8");

  const json a = json::parse(run("classify --scheme almost-constant --seed 7").out);
  EXPECT_EQ(a["isometry"]["kind"], "NonIsometricWitnessed");
  for (const char* f : {"r", "m1", "m2", "c"}) EXPECT_TRUE(a["isometry"]["witness"].contains(f)) << f;
}

TEST(CliClassify, DescriptorErrorsExitOne) {
  EXPECT_EQ(run("classify --scheme '{\"name\": 3}' --seed 1").code, 1);
  EXPECT_EQ(run("classify --scheme '{bad json' --seed 1").code, 1);
}

TEST(CliClassify, SchemeFromFileAndInlineJson) {
  const auto path = scratch() / "scheme.json";
  std::ofstream(path) << R"({"name": "toy-rollo", "seed": 5, "params": {"m_bits": 2}})";
  auto file = run("classify --scheme '" + path.string() + "' --seed 1");
  ASSERT_EQ(file.code, 0) << file.err;
  auto inline_json = run(R"(classify --scheme '{"name": "toy-rollo", "seed": 5, "params": {"m_bits": 2}}' --seed 1)");
  EXPECT_EQ(file.out, inline_json.out);
  EXPECT_EQ(json::parse(file.out)["descriptor"]["params"]["m_bits"], 2);
}

TEST(CliVerify, PassesAndReportsInjectedFaults) {
  auto rollo = run("verify-operators --scheme toy-rollo --seed 7");
  EXPECT_EQ(rollo.code, 0) << rollo.err;
  EXPECT_EQ(json::parse(rollo.out)["result"], "pass");

  auto perfect = run("verify-operators --scheme toy-lwe --param profile=noiseless --seed 7");
  ASSERT_EQ(perfect.code, 0) << perfect.err;
  const json report = json::parse(perfect.out);
  bool saw_fig2 = false;
  for (const auto& c : report["checks"]) saw_fig2 |= c["operator"] == "type2-fig2";
  EXPECT_TRUE(saw_fig2);

  auto faulty = run("verify-operators --scheme toy-rollo --param fault=rec --seed 7");
  EXPECT_EQ(faulty.code, 3);
  EXPECT_NE(faulty.err.find("m="), std::string::npos);
  EXPECT_NE(faulty.err.find("r="), std::string::npos);
}

TEST(CliMisc, AttackListAndDescribe) {
  auto list = run("attacks");
  ASSERT_EQ(list.code, 0);
  auto rows = jsonl(list.out);
  EXPECT_GE(rows.size(), 7u);
  for (const auto& row : rows) EXPECT_TRUE(row.contains("claimed_win_rate"));
  auto desc = run("describe --scheme hybrid --param ske=ske-random-perm --seed 4");
  ASSERT_EQ(desc.code, 0) << desc.err;
  const json d = json::parse(desc.out);
  EXPECT_EQ(d["params"]["ske"]["name"], "ske-random-perm");
  EXPECT_EQ(d["seed"], 4);
}
