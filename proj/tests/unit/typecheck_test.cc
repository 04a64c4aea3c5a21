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

#include <string>

#include "fuse/diagnostic.h"
#include "fuse/parser.h"
#include "fuse/typecheck.h"
#include "json.hpp"
#include "support/oracles.h"

namespace fuse {
namespace {

CheckResult Check(const std::string& source) {
  return CheckProgram(ParseOrThrow(source));
}

std::string CodeOf(const std::string& source) {
  CheckResult r = Check(source);
  if (r.ok) return "accept";
  return r.diagnostics.empty() ? "?" : r.diagnostics[0].code;
}

TEST(GoldenTest, EveryGoldenMatchesItsExpectation) {
  for (const testing::Golden& g : testing::LoadGoldens()) {
    EXPECT_EQ(CodeOf(g.source), g.accept ? "accept" : g.code) << g.name;
  }
}

TEST(GoldenTest, SuiteCoversFourteenPrograms) {
  std::set<std::string> names;
  for (const testing::Golden& g : testing::LoadGoldens()) names.insert(g.name);
  EXPECT_EQ(testing::VerdictSuite().size(), 14u);
  for (const std::string& n : testing::VerdictSuite()) EXPECT_TRUE(names.count(n)) << n;
}

struct Case {
  const char* name;
  const char* source;
  const char* want;
};

class VerdictTest : public ::testing::TestWithParam<Case> {};

TEST_P(VerdictTest, Matches) {
  EXPECT_EQ(CodeOf(GetParam().source), GetParam().want);
}

INSTANTIATE_TEST_SUITE_P(
    Small, VerdictTest,
    ::testing::Values(
        Case{"distinct_banks", "let A: float[8 bank 2]; let x = A[0]; let y = A[1];", "accept"},
        Case{"same_bank", "let A: float[8 bank 2]; let x = A[0]; let y = A[2];", "E-CONSUMED"},
        Case{"ordered_restores", "let A: float[8 bank 2]; let x = A[0] --- let y = A[2];", "accept"},
        Case{"unroll_matches_banks", "let A: float[8 bank 2]; for (let i = 0..8) unroll 2 { A[i] := 1.0; }", "accept"},
        Case{"unroll_exceeds_banks", "let A: float[8 bank 2]; for (let i = 0..8) unroll 4 { A[i] := 1.0; }", "E-BANKS"},
        Case{"unroll_not_dividing", "let A: float[8 bank 2]; for (let i = 0..7) unroll 2 { A[i] := 1.0; }", "E-DIVIDES"},
        Case{"double_write", "let A: float[8 bank 2]; A[0] := 1.0; A[0] := 2.0;", "E-WRITECAP"},
        Case{"bad_init", "let x: bit<32> = true;", "E-TYPE"},
        Case{"unbound", "let x = y;", "E-TYPE"},
        Case{"bank_not_dividing", "let A: float[8 bank 3];", "E-DIVIDES"},
        Case{"shrink_not_dividing", "let A: float[8 bank 4]; view v = shrink A[by 3];", "E-VIEW"},
        Case{"computed_index", "let A: float[8 bank 2]; for (let i = 0..8) unroll 2 { A[2*i] := 1.0; }", "E-INDEX"},
        Case{"constant_out_of_range", "let A: float[8 bank 2]; let x = A[9];", "E-INDEX"},
        Case{"physical_write", "let A: float[8 bank 2]; A{1}[3] := 1.0;", "accept"},
        Case{"combine_reduce", "let A: float[8 bank 2]; let s = 0.0; for (let i = 0..8) unroll 2 { let v = A[i]; } combine { s += v; }", "accept"},
        Case{"outer_assign_in_unroll", "let A: float[8 bank 2]; let s = 0.0; for (let i = 0..8) unroll 2 { let v = A[i]; s := v; }", "E-TYPE"},
        Case{"two_ports", "let A: float{2}[8]; let x = A[0]; let y = A[1];", "accept"},
        Case{"two_ports_three_reads", "let A: float{2}[8]; let x = A[0]; let y = A[1]; let z = A[2];", "E-CONSUMED"}),
    [](const ::testing::TestParamInfo<Case>& info) { return info.param.name; });

TEST(IteratorTypeTest, CopiesSpanUnrollFactor) {
  EXPECT_EQ(IteratorIndexType(0, 8, 4), (IdxType{0, 4}));
  EXPECT_EQ(IteratorIndexType(0, 8, 1), (IdxType{0, 1}));
  EXPECT_THROW(IteratorIndexType(0, 9, 2), DiagnosticError);
}

TEST(BanksOfAccessTest, LiteralHitsOneBank) {
  IndexForm lit{IndexForm::kLiteral, 7, {}};
  EXPECT_EQ(BanksOfAccess(lit, BankSpec{8, 4}), (std::set<int64_t>{3}));
}

TEST(BanksOfAccessTest, IteratorCopiesHitEveryBank) {
  IndexForm it{IndexForm::kIterator, 0, IdxType{0, 4}};
  EXPECT_EQ(BanksOfAccess(it, BankSpec{8, 4}), (std::set<int64_t>{0, 1, 2, 3}));
  EXPECT_THROW(BanksOfAccess(it, BankSpec{8, 2}), DiagnosticError);
}

TEST(BanksOfAccessTest, ScalarMayHitAnyBank) {
  IndexForm s{IndexForm::kScalar, 0, {}};
  EXPECT_EQ(BanksOfAccess(s, BankSpec{8, 2}), (std::set<int64_t>{0, 1}));
}

TEST(ReportTest, ListsMemoriesLoopsAndSteps) {
  CheckResult r = Check(
      "let A: float[8 bank 2];\n"
      "for (let i = 0..8) unroll 2 { let x = A[i]; }");
  ASSERT_TRUE(r.ok);
  ASSERT_EQ(r.report.memories.size(), 1u);
  EXPECT_EQ(r.report.memories[0].first, "A");
  ASSERT_EQ(r.report.loops.size(), 1u);
  EXPECT_EQ(r.report.loops[0].unroll, 2);
  nlohmann::json j = nlohmann::json::parse(r.report.ToJson());
  EXPECT_TRUE(j.is_object());
}

TEST(DiagnosticTest, PointsAtOffendingAccess) {
  CheckResult r = Check("let A: float[8 bank 2];\nlet x = A[0];\nlet y = A[2];");
  ASSERT_FALSE(r.ok);
  EXPECT_EQ(r.diagnostics[0].span.line, 3u);
}

}  // namespace
}  // namespace fuse
