#include "covrel/catalog.hpp"
#include "covrel/scenario_io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace covrel;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(COVREL_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Json json_of(const CliResult& r) { return Json::parse(r.out); }

class Cli : public ::testing::Test {
 protected:
  std::filesystem::path dir;

  void SetUp() override {
    dir = std::filesystem::temp_directory_path() /
          ("covrel_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir);
  }
  void TearDown() override { std::filesystem::remove_all(dir); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir / name;
    std::ofstream(path, std::ios::binary) << text;
    return path.string();
  }
  std::string write(const std::string& name, const Scenario& s) { return write(name, dump_scenario(s)); }
};

FPoly F(std::vector<Rational> d) { return FPoly(std::move(d)); }

}  // namespace

TEST_F(Cli, VerifyExampleOneBothWays) {
  const CliResult yes = run("verify " + write("e1.json", example1(F({0, 2, -2}))));
  EXPECT_EQ(yes.code, 0);
  const Json jy = json_of(yes);
  EXPECT_EQ(jy["symbolic"]["holds"], "yes");
  EXPECT_EQ(jy["agreement"], "agree");
  EXPECT_LE(jy["numeric"]["residual"].get<double>(), 1e-8);
  EXPECT_EQ(jy["exit_code"], 0);

  const CliResult no = run("verify " + write("e1b.json", example1(F({0, 1, 1}))));
  EXPECT_EQ(no.code, 1);
  const Json jn = json_of(no);
  EXPECT_EQ(jn["symbolic"]["holds"], "no");
  EXPECT_TRUE(jn["symbolic"].contains("witness"));
  EXPECT_GE(jn["numeric"]["residual"].get<double>(), 1e-4);
}

TEST_F(Cli, VerifyRejectsInvertedStrip) {
  Scenario s = example1(F({0, 2, -2}));
  Json j = scenario_to_json(s);
  j["alpha"] = 2;
  j["beta"] = 0;
  const CliResult r = run("verify " + write("bad.json", j.dump(2)));
  EXPECT_EQ(r.code, 3);
  const Json d = json_of(r);
  EXPECT_EQ(d["exit_code"], 3);
  bool found = false;
  for (const auto& x : d["diagnostics"]) found = found || x["code"] == "alpha-not-less-than-beta";
  EXPECT_TRUE(found);
}

TEST_F(Cli, MalformedFileNamesTheField) {
  Json j = scenario_to_json(example1(F({0, 2, -2})));
  j["hull"]["lo"] = "one";
  const CliResult r = run("verify " + write("bad.json", j.dump(2)));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("hull.lo"), std::string::npos) << r.out;
  EXPECT_EQ(run("verify " + write("broken.json", "{\"label\": ")).code, 3);
  EXPECT_EQ(run("verify " + (dir / "missing.json").string()).code, 3);
}

TEST_F(Cli, OutFlagAndPretty) {
  const std::string file = write("e1.json", example1(F({0, 2, -2})));
  const std::string out = (dir / "report.json").string();
  const CliResult r = run("--out " + out + " verify " + file);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(Json::parse(ss.str())["exit_code"], 0);

  const CliResult p = run("--pretty verify " + file);
  EXPECT_EQ(p.code, 0);
  EXPECT_NE(p.out.find("verdict    yes"), std::string::npos);
}

TEST_F(Cli, GridFlagsChangeTheGrid) {
  const std::string file = write("e1.json", example1(F({0, 2, -2})));
  const Json j = json_of(run("--grid-panels 16 --grid-nodes 4 --p 2 verify " + file));
  EXPECT_EQ(j["numeric"]["grid_size"], 64);
  EXPECT_EQ(j["numeric"]["p_norms"].size(), 1u);
}

TEST_F(Cli, ClassifyExamples) {
  const CliResult c2 = run("classify --d1 1 --d2 1 --a1 1 --c1 0 --alpha 0 --beta 2 --a0 -1");
  EXPECT_EQ(c2.code, 0);
  EXPECT_EQ(json_of(c2)["case"], "Case2");
  EXPECT_EQ(json_of(c2)["holds"], "yes");

  const CliResult deg = run("classify --d1 1 --d2 1 --a1 0 --c1 0 --a0 1");
  EXPECT_EQ(json_of(deg)["case"], "DegenerateAZero");
  EXPECT_EQ(deg.code, 1);

  const CliResult c1 = run("classify --d1 1 --d2 0 --a0 3 --a1 -2 --c1 1/2");
  EXPECT_EQ(json_of(c1)["case"], "Case1");
  EXPECT_EQ(c1.code, 0);

  EXPECT_EQ(run("classify --a0 x").code, 3);
  EXPECT_EQ(run("classify --alpha 1 --beta 1").code, 3);
}

TEST_F(Cli, SolveExamples) {
  EXPECT_EQ(json_of(run("solve --d1 1 --d2 1 --a1 1 --c1 0 --alpha 0 --beta 2"))["a0"], "-1");
  EXPECT_EQ(json_of(run("solve --d1 0 --d2 1 --a1 0 --c1 0 --alpha 0 --beta 1"))["a0"], "1");
  const std::string emitted = (dir / "solved.json").string();
  const CliResult s5 = run("solve --d1 0 --d2 1 --a1 0 --c1 1 --alpha 0 --beta 1 --emit-scenario " + emitted);
  EXPECT_EQ(s5.code, 0);
  EXPECT_EQ(json_of(s5)["a0"], "1/2");
  const CliResult v = run("verify " + emitted);
  EXPECT_EQ(v.code, 0);
  EXPECT_LE(json_of(v)["numeric"]["residual"].get<double>(), 1e-10);

  EXPECT_EQ(json_of(run("solve --d1 1 --d2 0"))["a0"], "free");
  const CliResult none = run("solve --d1 2 --d2 1 --a1 1 --c1 1");
  EXPECT_EQ(none.code, 1);
  EXPECT_EQ(json_of(none)["a0"], "no solution");
}

TEST_F(Cli, ReproduceExamples) {
  const CliResult e1 = run("reproduce E1");
  EXPECT_EQ(e1.code, 0);
  EXPECT_NE(e1.out.find("computed mu = 1, matches stated mu = 1"), std::string::npos);

  const CliResult e2 = run("reproduce E2");
  EXPECT_EQ(e2.code, 1);
  EXPECT_NE(e2.out.find("DISCREPANCY: stated mu = 0"), std::string::npos);
  EXPECT_NE(e2.out.find("0.636619772368"), std::string::npos);

  const CliResult e3 = run("reproduce E3");
  EXPECT_EQ(e3.code, 0);
  EXPECT_LE(json_of(e3)["numeric"]["residual"].get<double>(), 1e-10);

  const CliResult e5 = run("reproduce E5");
  EXPECT_EQ(e5.code, 0);
  EXPECT_EQ(json_of(e5)["reports"].size(), 6u);

  const CliResult lau = run("reproduce LAURENT");
  EXPECT_EQ(lau.code, 1);
  EXPECT_NE(lau.out.find("laurent obstruction confirmed"), std::string::npos);

  const CliResult bad = run("reproduce E99");
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.out.find("E2-corrected"), std::string::npos);
}

TEST_F(Cli, SweepContract) {
  const CliResult one = run("sweep --count 1 --seed 1 --family separable");
  EXPECT_EQ(one.code == 0 || one.code == 1, true);
  EXPECT_EQ(run("sweep --count 0").code, 3);
  EXPECT_EQ(run("sweep --count 3 --family nope").code, 3);
  const CliResult twenty = run("sweep --count 20 --seed 7 --family multA");
  const Json j = json_of(twenty);
  EXPECT_NE(twenty.code, 2);
  EXPECT_EQ(j["count"], 20);
}

TEST_F(Cli, ReportsAreDeterministic) {
  const std::string file = write("e1.json", example1(F({0, 1, 1})));
  EXPECT_EQ(run("verify " + file).out, run("verify " + file).out);
  EXPECT_EQ(run("reproduce E2").out, run("reproduce E2").out);
  EXPECT_EQ(run("sweep --count 10 --seed 3 --family bilinear").out, run("sweep --count 10 --seed 3 --family bilinear").out);
}

TEST_F(Cli, UsageErrorsExitThree) {
  EXPECT_EQ(run("").code, 3);
  EXPECT_EQ(run("frobnicate").code, 3);
  EXPECT_EQ(run("verify").code, 3);
}
