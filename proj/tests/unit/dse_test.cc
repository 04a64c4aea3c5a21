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

#include <set>
#include <sstream>

#include "fuse/dse.h"
#include "json.hpp"
#include "support/oracles.h"

namespace fuse::dse {
namespace {

TEST(TemplateTest, HolesInFirstAppearanceOrder) {
  Template t = Template::Parse("a @{X} b @{Y} c @{X}");
  EXPECT_EQ(t.holes, (std::vector<std::string>{"X", "Y"}));
  EXPECT_EQ(Instantiate(t, {{"X", 3}, {"Y", 40}}), "a 3 b 40 c 3");
}

TEST(TemplateTest, MissingValueThrows) {
  Template t = Template::Parse("@{X} @{Y}");
  EXPECT_THROW(Instantiate(t, {{"X", 1}}), std::invalid_argument);
}

TEST(TemplateTest, UnterminatedHoleThrows) {
  EXPECT_THROW(Template::Parse("let x = @{X;"), std::invalid_argument);
}

TEST(DomainsTest, FirstNameVariesSlowest) {
  Domains d = Domains::FromJson(R"({"A": [1, 2], "B": [5, 6, 7]})");
  EXPECT_EQ(d.Size(), 6);
  EXPECT_EQ(d.Point(0), (std::vector<int64_t>{1, 5}));
  EXPECT_EQ(d.Point(1), (std::vector<int64_t>{1, 6}));
  EXPECT_EQ(d.Point(3), (std::vector<int64_t>{2, 5}));
  EXPECT_EQ(d.Point(5), (std::vector<int64_t>{2, 7}));
  EXPECT_EQ(d.Assignment(d.Point(4)), (std::map<std::string, int64_t>{{"A", 2}, {"B", 6}}));
}

TEST(DomainsTest, RejectsMalformedInput) {
  EXPECT_THROW(Domains::FromJson("[1, 2]"), std::invalid_argument);
  EXPECT_THROW(Domains::FromJson(R"({"A": []})"), std::invalid_argument);
  EXPECT_THROW(Domains::FromJson(R"({"A": [-1]})"), std::invalid_argument);
  EXPECT_THROW(Domains::FromJson(R"({"A": [1.5]})"), std::invalid_argument);
}

TEST(SweepTest, VerdictsAndCodes) {
  Template t = Template::Parse(
      "let A: float[8 bank @{B}];\nfor (let i = 0..8) unroll @{U} { A[i] := 1.0; }");
  Domains d = Domains::FromJson(R"({"B": [1, 2, 3], "U": [1, 2]})");
  std::vector<SweepRow> rows = Sweep(t, d);
  ASSERT_EQ(rows.size(), 6u);
  // B=1: U=1 accepted, U=2 needs 2 banks.
  EXPECT_EQ(rows[0].verdict, "accepted");
  EXPECT_EQ(rows[1].verdict, "rejected");
  EXPECT_EQ(rows[1].error_code, "E-BANKS");
  EXPECT_EQ(rows[2].verdict, "accepted");
  EXPECT_EQ(rows[3].verdict, "accepted");
  // 3 does not divide 8.
  EXPECT_EQ(rows[4].error_code, "E-DIVIDES");
  Summary s = Summarize(rows);
  EXPECT_EQ(s.total, 6);
  EXPECT_EQ(s.accepted, 3);
  EXPECT_DOUBLE_EQ(s.ratio(), 0.5);
  nlohmann::json j = nlohmann::json::parse(s.ToJson());
  EXPECT_EQ(j["by_verdict"]["rejected"], 3);
}

TEST(SweepTest, ParseErrorsAreRowsToo) {
  Template t = Template::Parse("let A: float[@{N}];");
  std::vector<SweepRow> rows = Sweep(t, Domains::FromJson(R"({"N": [4]})"));
  EXPECT_EQ(rows[0].verdict, "accepted");
  SweepRow bad = CheckSource("let A: float[;");
  EXPECT_EQ(bad.verdict, "parse-error");
  EXPECT_EQ(bad.error_code, "E-PARSE");
}

TEST(SweepTest, HoleWithoutDomainThrows) {
  Template t = Template::Parse("@{A} @{B}");
  EXPECT_THROW(Sweep(t, Domains::FromJson(R"({"A": [1]})")), std::invalid_argument);
}

TEST(CsvTest, HeaderAndRows) {
  Domains d = Domains::FromJson(R"({"A": [1], "B": [2]})");
  std::ostringstream out;
  WriteCsv(d, {{{1, 2}, "rejected", "E-BANKS", 17}}, out);
  EXPECT_EQ(out.str(), "A,B,verdict,error_code,micros\n1,2,rejected,E-BANKS,17\n");
}

class GemmSweep : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    tpl = new Template(Template::Parse(
        testing::ReadFile(testing::SourcePath("tests/dse/gemm_blocked.fuse.tpl"))));
    domains = new Domains(Domains::FromJson(
        testing::ReadFile(testing::SourcePath("tests/dse/gemm_domains.json"))));
    rows = new std::vector<SweepRow>(Sweep(*tpl, *domains, 2));
  }
  static void TearDownTestSuite() {
    delete tpl;
    delete domains;
    delete rows;
  }
  static Template* tpl;
  static Domains* domains;
  static std::vector<SweepRow>* rows;
};

Template* GemmSweep::tpl = nullptr;
Domains* GemmSweep::domains = nullptr;
std::vector<SweepRow>* GemmSweep::rows = nullptr;

TEST_F(GemmSweep, SpaceHas32000Points) {
  EXPECT_EQ(domains->Size(), 4 * 4 * 4 * 4 * 5 * 5 * 5);
  EXPECT_EQ(rows->size(), 32000u);
  std::set<std::vector<int64_t>> distinct;
  for (const SweepRow& r : *rows) distinct.insert(r.point);
  EXPECT_EQ(distinct.size(), 32000u);
}

TEST_F(GemmSweep, AcceptedSetEqualsClosedForm) {
  int64_t accepted = 0;
  for (const SweepRow& r : *rows) {
    std::map<std::string, int64_t> a = domains->Assignment(r.point);
    bool legal = testing::GemmLegal(a["BANK11"], a["BANK12"], a["BANK21"],
                                    a["BANK22"], a["UNROLL1"], a["UNROLL2"],
                                    a["UNROLL3"]);
    EXPECT_EQ(r.verdict == "accepted", legal) << ::testing::PrintToString(r.point);
    accepted += legal;
  }
  EXPECT_EQ(Summarize(*rows).accepted, accepted);
}

TEST_F(GemmSweep, NoParseErrors) {
  EXPECT_EQ(Summarize(*rows).by_verdict.count("parse-error"), 0u);
}

TEST_F(GemmSweep, SingleThreadedMatches) {
  std::vector<SweepRow> one = Sweep(*tpl, *domains, 1);
  ASSERT_EQ(one.size(), rows->size());
  for (size_t k = 0; k < one.size(); k += 97) {
    EXPECT_EQ(one[k].point, (*rows)[k].point);
    EXPECT_EQ(one[k].verdict, (*rows)[k].verdict);
    EXPECT_EQ(one[k].error_code, (*rows)[k].error_code);
  }
}

}  // namespace
}  // namespace fuse::dse
