#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "massey/workbench.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = MASSEY_WORKBENCH_PATH;
const std::string kConfigs = MASSEY_CONFIG_DIR;

std::string cfg(const std::string& name) { return kConfigs + "/" + name; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("massey-harness-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Exit status of the CLI; stdout and stderr land in files under dir_.
  int run(const std::string& args, const std::string& env = {}) {
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" + kBin + "' " + args + " >'" + path("stdout") +
                            "' 2>'" + path("stderr") + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string slurp(const std::string& name) const {
    std::ifstream f(path(name));
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  json report(const std::string& name) const { return json::parse(slurp(name)); }

  std::string write(const std::string& name, const std::string& body) const {
    std::ofstream(path(name)) << body;
    return path(name);
  }

  fs::path dir_;
};

json strip_timing(json j) {
  j.erase("timing");
  return j;
}

}  // namespace

TEST_F(Cli, DefectOfHomomorphismIsZero) {
  ASSERT_EQ(run("defect --config '" + cfg("defect_homomorphism.json") + "' --out '" + path("r.json") + "'"), 0);
  const json r = report("r.json");
  EXPECT_EQ(r["schema_version"], massey::kReportSchemaVersion);
  EXPECT_EQ(r["command"], "defect");
  EXPECT_EQ(r["status"], "pass");
  EXPECT_EQ(r["measured"]["defect_max"], "0/1");
  EXPECT_TRUE(r["timing"].contains("started_at"));
  EXPECT_NE(slurp("stdout").find("report written to"), std::string::npos);
}

TEST_F(Cli, ReportSubcommandRendersStoredJson) {
  ASSERT_EQ(run("defect --config '" + cfg("defect_brooks.json") + "' --out '" + path("r.json") + "'"), 0);
  const json r = report("r.json");
  ASSERT_EQ(run("report '" + path("r.json") + "'"), 0);
  const std::string table = slurp("stdout");
  EXPECT_EQ(table, massey::render_table(r));
  for (const auto& s : r["stages"]) EXPECT_NE(table.find(s["name"].get<std::string>()), std::string::npos);
  EXPECT_EQ(r["measured"]["defect_max"], "1/1");
}

TEST_F(Cli, SameSeedSameReportExceptTiming) {
  const std::string c = "defect --config '" + cfg("defect_rolli.json") + "' --seed 5 --out '";
  ASSERT_EQ(run(c + path("a.json") + "'"), 0);
  ASSERT_EQ(run(c + path("b.json") + "' --jobs 3"), 0);
  EXPECT_EQ(strip_timing(report("a.json")).dump(), strip_timing(report("b.json")).dump());
  EXPECT_EQ(report("a.json")["config"]["overrides"]["seed"], 5);
}

TEST_F(Cli, MasseyReportsAreDeterministicAcrossJobs) {
  const std::string c = "verify-primitive --config '" + cfg("massey_standard.json") + "' --radius 3 --out '";
  ASSERT_EQ(run(c + path("a.json") + "' --jobs 1"), 0);
  ASSERT_EQ(run(c + path("b.json") + "' --jobs 4"), 0);
  EXPECT_EQ(strip_timing(report("a.json")).dump(), strip_timing(report("b.json")).dump());
}

TEST_F(Cli, PerturbedLambdaFailsWithCounterexample) {
  EXPECT_EQ(run("verify-primitive --config '" + cfg("mutation_perturb_lambda.json") + "' --radius 3 --out '" +
                path("r.json") + "'"),
            1);
  const json r = report("r.json");
  EXPECT_EQ(r["status"], "fail");
  bool any = false;
  for (const auto& s : r["stages"])
    if (s["status"] == "fail") {
      any = true;
      EXPECT_TRUE(s.contains("counterexample")) << s["name"];
    }
  EXPECT_TRUE(any);
  EXPECT_NE(slurp("stdout").find("counterexample"), std::string::npos);
}

TEST_F(Cli, MalformedConfigExitsTwoWithoutReport) {
  const std::string bad = write("bad.json", "{\"rank\": 2, \"phi\": ");
  EXPECT_EQ(run("defect --config '" + bad + "' --out '" + path("r.json") + "'"), 2);
  EXPECT_FALSE(fs::exists(path("r.json")));
  EXPECT_NE(slurp("stderr").find("config error"), std::string::npos);
}

TEST_F(Cli, UnknownKeysAndBadValuesExitTwo) {
  const std::string typo = write("typo.json", R"({"rank": 2, "phi": {"spec": {"family": "letter"}, "lambda": {}}, "defekt": {}})");
  EXPECT_EQ(run("defect --config '" + typo + "' --out '" + path("r.json") + "'"), 2);
  const std::string bad_piece =
      write("piece.json", R"({"rank": 2, "phi": {"spec": {"family": "brooks", "word": "ab"}, "lambda": {"aa": 1}}})");
  EXPECT_EQ(run("defect --config '" + bad_piece + "' --out '" + path("r.json") + "'"), 2);
  const std::string overlap =
      write("overlap.json", R"({"rank": 2, "phi": {"spec": {"family": "brooks", "word": "aba"}, "lambda": {"aba": 1}}})");
  EXPECT_EQ(run("defect --config '" + overlap + "' --out '" + path("r.json") + "'"), 2);
  EXPECT_FALSE(fs::exists(path("r.json")));
}

TEST_F(Cli, InvalidPlansExitTwo) {
  std::ifstream in(cfg("massey_standard.json"));
  json base = json::parse(in);
  json ladder = base;
  ladder["plan"]["max_len_ladder"] = {50, 25};
  EXPECT_EQ(run("verify-primitive --config '" + write("l.json", ladder.dump()) + "' --out '" + path("r.json") + "'"), 2);
  json zero = base;
  zero["plan"]["default_samples"] = 0;
  EXPECT_EQ(run("verify-primitive --config '" + write("z.json", zero.dump()) + "' --out '" + path("r.json") + "'"), 2);
  json mut = base;
  mut["mutation"] = "flip-everything";
  EXPECT_EQ(run("verify-primitive --config '" + write("m.json", mut.dump()) + "' --out '" + path("r.json") + "'"), 2);
  json k = base;
  k["k1"] = 3;
  EXPECT_EQ(run("verify-primitive --config '" + write("k.json", k.dump()) + "' --out '" + path("r.json") + "'"), 2);
  EXPECT_FALSE(fs::exists(path("r.json")));
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("frobnicate --config '" + cfg("axioms.json") + "'"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("defect"), 2);
  EXPECT_EQ(run("defect --config '" + path("missing.json") + "'"), 2);
  EXPECT_EQ(run("defect --config '" + cfg("defect_brooks.json") + "' --jobs 0"), 2);
  EXPECT_EQ(run("report '" + cfg("defect_brooks.json") + "'"), 2);
}

TEST_F(Cli, EnumerationCapFromEnvironment) {
  EXPECT_EQ(run("verify-primitive --config '" + cfg("massey_standard.json") + "' --out '" + path("r.json") + "'",
                std::string(massey::kEnumerationCapEnv) + "=1000"),
            3);
  EXPECT_FALSE(fs::exists(path("r.json")));
  EXPECT_NE(slurp("stderr").find("enumeration cap"), std::string::npos);
  EXPECT_EQ(run("defect --config '" + cfg("defect_brooks.json") + "'", std::string(massey::kEnumerationCapEnv) + "=lots"), 2);
  EXPECT_EQ(run("defect --config '" + cfg("defect_brooks.json") + "' --out '" + path("r.json") + "'",
                std::string(massey::kEnumerationCapEnv) + "=100000000"),
            0);
  EXPECT_EQ(report("r.json")["config"]["overrides"]["enumeration_cap"], 100000000);
}

TEST_F(Cli, DefaultOutputPath) {
  const std::string cmd = "cd '" + dir_.string() + "' && '" + kBin + "' defect --config '" +
                          cfg("defect_homomorphism.json") + "' >/dev/null 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(path("defect-report.json")));
}

TEST(RunCommand, InProcessMatchesContract) {
  std::ostringstream out, err;
  const auto tmp = (fs::temp_directory_path() / ("massey-inproc-" + std::to_string(::getpid()) + ".json")).string();
  EXPECT_EQ(massey::run_command("defect", cfg("defect_homomorphism.json"), {}, tmp, out, err), massey::kExitPass);
  std::ifstream f(tmp);
  const json r = json::parse(f);
  EXPECT_EQ(r["status"], "pass");
  EXPECT_EQ(r["stages"].size(), 2u);
  fs::remove(tmp);
  EXPECT_EQ(massey::run_command("nope", cfg("defect_homomorphism.json"), {}, tmp, out, err), massey::kExitConfig);
  EXPECT_FALSE(fs::exists(tmp));
}
