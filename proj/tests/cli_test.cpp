#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  std::string cmd = std::string(WEAKLIE_CLI) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("weaklie_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string emit(const std::string& name, const std::string& params = "") {
    Outcome r = run("catalog emit " + name + " " + params);
    EXPECT_EQ(r.code, 0) << name;
    return write(name + ".json", r.out);
  }

  std::string write(const std::string& file, const std::string& text) {
    fs::path p = dir_ / file;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

json findings(const Outcome& r) { return json::parse(r.out)["commands"][0]["findings"]; }

}  // namespace

TEST_F(Cli, CatalogListAndUnknownExample) {
  Outcome r = run("catalog list");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rigid_body"), std::string::npos);
  EXPECT_EQ(run("catalog emit nothing_here").code, 2);
  EXPECT_EQ(run("catalog emit minkowski").code, 2);
  EXPECT_EQ(run("catalog emit minkowski --param n=4").code, 0);
  EXPECT_EQ(run("catalog emit minkowski --param n").code, 2);
}

TEST_F(Cli, CheckKasnerTimeTranslation) {
  std::string f = emit("kasner");
  Outcome r = run("check " + f + " --json");
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["version"], "0.1.0");
  EXPECT_EQ(j["seed"], 0);
  json t = j["commands"][0]["findings"]["generators"][0];
  EXPECT_EQ(t["name"], "T");
  EXPECT_FALSE(t["motion"].get<bool>());
  EXPECT_EQ(t["drag_rank"]["rank"], 3);
  EXPECT_FALSE(t["drag"]["zero"].get<bool>());
}

TEST_F(Cli, CheckWeaklyStaticIsGenuineWeak) {
  std::string f = emit("weakly_static");
  Outcome r = run("check " + f + " --json");
  ASSERT_EQ(r.code, 0);
  json t = findings(r)["generators"][0];
  EXPECT_TRUE(t["genuine_weak"].get<bool>());
  EXPECT_TRUE(t["drag2"]["zero"].get<bool>());
}

TEST_F(Cli, CheckWithCollineationsAndIntegrability) {
  std::string f = emit("appendix3_solution");
  Outcome r = run("check " + f + " --collineations --integrability --json");
  ASSERT_EQ(r.code, 0);
  json t = findings(r)["generators"][0];
  EXPECT_TRUE(t["homothetic"].get<bool>());
  EXPECT_TRUE(t["collineations"]["affine"]["zero"].get<bool>());
  EXPECT_TRUE(t["integrability"]["cond1a"]["zero"].get<bool>());
}

TEST_F(Cli, CheckScalarsUnderModes) {
  std::string f = emit("g3_scalar_def2");
  Outcome d2 = run("check " + f + " --mode def2 --json");
  ASSERT_EQ(d2.code, 0);
  EXPECT_TRUE(findings(d2)["scalars"]["f"]["pass"].get<bool>());
  EXPECT_EQ(run("check " + f + " --mode def4").code, 2);
}

TEST_F(Cli, AlgebraRigidBody) {
  std::string f = emit("rigid_body");
  Outcome r = run("algebra " + f + " --json");
  ASSERT_EQ(r.code, 0);
  json a = findings(r);
  EXPECT_TRUE(a["involutive"].get<bool>());
  EXPECT_FALSE(a["lie_algebra"].get<bool>());
  EXPECT_TRUE(a["jacobi"]["zero"].get<bool>());
  EXPECT_EQ(a["tau_rank"]["rank"], 4);
  EXPECT_EQ(a["tau_rank"]["signature"], json::parse("[1, 3, 3]"));
}

TEST_F(Cli, AlgebraReportsNonInvolutiveInBand) {
  std::string f = write("span.json", R"json({
    "manifold": {"coordinates": ["x1", "x2", "x3"]},
    "vectors": {"X1": ["1", "0", "0"], "X2": ["0", "1", "x1"]}
  })json");
  Outcome r = run("algebra " + f + " --json");
  EXPECT_EQ(r.code, 0);
  EXPECT_FALSE(findings(r)["involutive"].get<bool>());
}

TEST_F(Cli, DragAndCurvature) {
  std::string f = emit("kasner");
  Outcome d = run("drag " + f + " --vector T --json");
  ASSERT_EQ(d.code, 0);
  EXPECT_EQ(findings(d)["rank"], 3);
  EXPECT_EQ(run("drag " + f + " --vector Q").code, 2);
  Outcome c = run("curvature " + f + " --json");
  ASSERT_EQ(c.code, 0);
  EXPECT_TRUE(findings(c)["ricci_flat"].get<bool>());
  Outcome s = run("curvature " + emit("weak_sss_surface") + " --json");
  ASSERT_EQ(s.code, 0);
  EXPECT_TRUE(findings(s).contains("gaussian_curvature"));
}

TEST_F(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("check " + (dir_ / "missing.json").string()).code, 2);
  EXPECT_EQ(run("check " + write("bad.json", "{ not json")).code, 2);
  EXPECT_EQ(run("check " + write("float.json", R"({"manifold": {"coordinates": ["u", "v"]}, "vectors": {"X": ["0.5", "1"]}})")).code,
            2);
  EXPECT_EQ(run("check " + write("unk.json", R"({"manifold": {"coordinates": ["u", "v"]}, "vectors": {"X": ["w", "1"]}})")).code,
            2);
  EXPECT_EQ(run("curvature " + write("deg.json", R"({"manifold": {"coordinates": ["u", "v"]}, "metric": [["1", "1"], ["1"]]})")).code,
            2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("check " + emit("kasner") + " --samples 2").code, 2);
  EXPECT_EQ(run("check " + emit("kasner") + " --seed banana").code, 2);
}

TEST_F(Cli, SeedFromEnvironment) {
  std::string f = emit("g3_metric");
  std::string cmd = std::string("WEAKLIE_SEED=31 ") + WEAKLIE_CLI + " check " + f + " --json";
  FILE* p = popen(cmd.c_str(), "r");
  ASSERT_NE(p, nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  pclose(p);
  EXPECT_EQ(json::parse(out)["seed"], 31);
  EXPECT_EQ(json::parse(run("check " + f + " --seed 5 --json").out)["seed"], 5);
}

TEST_F(Cli, VerifyPaperSingleCriterion) {
  Outcome ok = run("verify-paper --only AC-1 --json");
  EXPECT_EQ(ok.code, 0);
  json j = json::parse(ok.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["commands"][0]["name"], "AC-1");
  Outcome table = run("verify-paper --only AC-2");
  EXPECT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("AC-2"), std::string::npos);
  EXPECT_EQ(run("verify-paper --only AC-8").code, 1);
  EXPECT_EQ(run("verify-paper --only AC-99").code, 2);
}
