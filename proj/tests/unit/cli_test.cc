// Copyright 2026 The Fuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "support/oracles.h"

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
};

// Runs fusec with stderr discarded.
Outcome Fusec(const std::string& args) {
  std::string cmd = std::string(FUSEC_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  Outcome r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("fusec_" + std::string(::testing::UnitTest::GetInstance()
                                      ->current_test_info()
                                      ->name()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string Write(const std::string& name, const std::string& text) {
    fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string Golden(const std::string& name) {
    return fuse::testing::SourcePath("tests/golden/" + name + ".fuse");
  }

  fs::path dir;
};

TEST_F(CliTest, Version) {
  Outcome r = Fusec("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "fusec 0.1.0\n");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Fusec("").code, 4);
  EXPECT_EQ(Fusec("frobnicate").code, 4);
  EXPECT_EQ(Fusec("check").code, 4);
  EXPECT_EQ(Fusec("check " + (dir / "missing.fuse").string()).code, 4);
}

TEST_F(CliTest, CheckExitCodesFollowGoldens) {
  for (const fuse::testing::Golden& g : fuse::testing::LoadGoldens()) {
    EXPECT_EQ(Fusec("check " + Golden(g.name)).code, g.accept ? 0 : 1) << g.name;
  }
}

TEST_F(CliTest, ParseErrorExitsTwo) {
  EXPECT_EQ(Fusec("check " + Write("bad.fuse", "let A: float[;")).code, 2);
}

TEST_F(CliTest, DiagnosticNamesFileLineAndCode) {
  std::string f = Write("c.fuse", "let A: float[8 bank 2];\nlet x = A[0];\nlet y = A[2];\n");
  std::string cmd = std::string(FUSEC_PATH) + " check " + f + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  char buf[512] = {};
  size_t n = fread(buf, 1, sizeof buf - 1, pipe);
  pclose(pipe);
  std::string err(buf, n);
  EXPECT_NE(err.find(f + ":3:"), std::string::npos) << err;
  EXPECT_NE(err.find("error[E-CONSUMED]"), std::string::npos) << err;
}

TEST_F(CliTest, CheckReportIsJson) {
  Outcome r = Fusec("check --report json " + Golden("combine_dot"));
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out).is_object());
}

TEST_F(CliTest, DesugarPrintsCoreDeclarations) {
  Outcome r = Fusec("desugar " + Golden("two_ports"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("decl A_p1: float[10] aliases A;"), std::string::npos);
  EXPECT_EQ(Fusec("desugar " + Golden("consumed_read")).code, 1);
}

TEST_F(CliTest, InterpWithInitComputesDotProduct) {
  std::string prog = Write("dot.fuse",
                           "let A: float[4 bank 2];\nlet B: float[4 bank 2];\n"
                           "let C: float[1];\nlet dot = 0.0;\n"
                           "for (let i = 0..4) unroll 2 { let v = A[i] * B[i]; }"
                           " combine { dot += v; }\n---\nC[0] := dot;\n");
  std::string init = Write("init.json", R"({"A": [1, 2, 3, 4], "B": [0.5, 0.5, 2, 1]})");
  for (const std::string& mode : {"", " --big-step"}) {
    Outcome r = Fusec("interp " + prog + " --init " + init + mode);
    ASSERT_EQ(r.code, 0) << mode;
    nlohmann::json j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["outcome"], "completed");
    // 0.5 + 1 + 6 + 4
    EXPECT_DOUBLE_EQ(j["memories"]["C"][0].get<double>(), 11.5);
    EXPECT_EQ(j["memories"]["A"].size(), 4u);
  }
}

TEST_F(CliTest, InterpRuntimeOutcomesExitThree) {
  std::string loop = Write("loop.fuse", "let w = true;\nwhile (w) { skip }\n");
  Outcome r = Fusec("interp --fuel 100 " + loop);
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(nlohmann::json::parse(r.out)["outcome"], "fuel-exhausted");
  std::string stuck = Golden("consumed_read");
  EXPECT_EQ(Fusec("interp " + stuck).code, 1);
  EXPECT_EQ(Fusec("interp --force " + stuck).code, 3);
}

TEST_F(CliTest, InterpRejectsBadInit) {
  std::string init = Write("init.json", R"({"A": [1, 2]})");
  EXPECT_EQ(Fusec("interp " + Golden("shrink") + " --init " + init).code, 4);
  std::string broken = Write("broken.json", "{");
  EXPECT_EQ(Fusec("interp " + Golden("shrink") + " --init " + broken).code, 4);
}

TEST_F(CliTest, EmitWritesFileAndPlan) {
  std::string out = (dir / "k.cpp").string();
  Outcome r = Fusec("emit " + Golden("split_dot") + " -o " + out + " --plan json");
  ASSERT_EQ(r.code, 0);
  nlohmann::json plan = nlohmann::json::parse(r.out);
  EXPECT_EQ(plan["memories"].size(), 2u);
  EXPECT_NE(fuse::testing::ReadFile(out).find("ARRAY_PARTITION variable=A cyclic factor=4 dim=1"),
            std::string::npos);
  EXPECT_EQ(Fusec("emit " + Golden("insufficient_banks") + " -o " + out).code, 1);
}

TEST_F(CliTest, FuzzWritesReport) {
  std::string report = (dir / "r.json").string();
  Outcome r = Fusec("fuzz --count 50 --surface 10 --seed 2 --report " + report);
  ASSERT_EQ(r.code, 0);
  nlohmann::json j = nlohmann::json::parse(fuse::testing::ReadFile(report));
  EXPECT_TRUE(j.is_object());
  EXPECT_NE(r.out.find("ok"), std::string::npos);
}

TEST_F(CliTest, DseWritesCsv) {
  std::string tpl = Write("t.tpl", "let A: float[8 bank @{B}];\n"
                                    "for (let i = 0..8) unroll @{U} { A[i] := 1.0; }\n");
  std::string dom = Write("d.json", R"({"B": [1, 2], "U": [1, 2]})");
  Outcome r = Fusec("dse --template " + tpl + " --domains " + dom);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "B,U,verdict,error_code,micros");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
  EXPECT_NE(r.out.find("1,2,rejected,E-BANKS,"), std::string::npos);
  std::string bad = Write("bad.json", R"({"B": [1]})");
  EXPECT_EQ(Fusec("dse --template " + tpl + " --domains " + bad).code, 4);
}

}  // namespace
