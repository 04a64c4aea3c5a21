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

#include "fuse/core/check.h"
#include "fuse/core/printer.h"
#include "fuse/soundness.h"
#include "json.hpp"

namespace fuse::soundness {
namespace {

TEST(GeneratorTest, DeterministicInSeed) {
  GeneratedProgram a = GenerateWellTyped({.seed = 42});
  GeneratedProgram b = GenerateWellTyped({.seed = 42});
  GeneratedProgram c = GenerateWellTyped({.seed = 43});
  EXPECT_EQ(Digest(a.program), Digest(b.program));
  EXPECT_EQ(a.init, b.init);
  EXPECT_NE(Digest(a.program), Digest(c.program));
}

TEST(GeneratorTest, ProgramsCoreCheck) {
  for (uint64_t seed = 0; seed < 300; ++seed) {
    GeneratedProgram g = GenerateWellTyped({.seed = seed});
    EXPECT_EQ(core::CheckProgram(g.program), std::nullopt)
        << core::PrintProgram(g.program);
  }
}

TEST(GeneratorTest, ProducesLoopsAndConditionals) {
  int whiles = 0;
  int ifs = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    std::string text = core::PrintProgram(GenerateWellTyped({.seed = seed}).program);
    whiles += text.find("while") != std::string::npos;
    ifs += text.find("if") != std::string::npos;
  }
  EXPECT_GT(whiles, 10);
  EXPECT_GT(ifs, 10);
}

TEST(ProgressPreservationTest, HoldsOnGeneratedPrograms) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    GeneratedProgram g = GenerateWellTyped({.seed = seed});
    Verdict v = AssertProgressPreservation(g.program, g.init, 1'000'000);
    EXPECT_EQ(v.outcome, core::Outcome::kCompleted) << v.violation;
    EXPECT_TRUE(v.progress_ok && v.preservation_ok && v.agree) << v.violation;
  }
}

TEST(ProgressPreservationTest, FlagsIllTypedStartingCommand) {
  core::Program p;
  p.memories = {{"a", ScalarType::Bit(32), 2, "a"}};
  p.body = core::MakePar(core::MakeLet("x", core::MakeRead("a", core::MakeInt(0))),
                         core::MakeLet("y", core::MakeRead("a", core::MakeInt(1))));
  Verdict v = AssertProgressPreservation(p, core::Store::ForProgram(p), 1000);
  EXPECT_FALSE(v.preservation_ok);
  EXPECT_EQ(v.steps, 0);
  EXPECT_FALSE(v.violation.empty());
  EXPECT_EQ(core::SmallStepRun(p, core::Store::ForProgram(p), 1000).outcome,
            core::Outcome::kStuck);
}

TEST(MutationTest, SwapSeqToParCountsCompositions) {
  using namespace core;
  CmdPtr c = MakeSeq(MakeSkip(), MakeSeq(MakeSkip(), MakeSkip()));
  ASSERT_NE(SwapSeqToPar(c, 0), nullptr);
  ASSERT_NE(SwapSeqToPar(c, 1), nullptr);
  EXPECT_EQ(SwapSeqToPar(c, 2), nullptr);
  EXPECT_TRUE(std::holds_alternative<Par>(SwapSeqToPar(c, 0)->node));
}

TEST(MutationTest, NegativeControlFindsNoUnsoundMutant) {
  NegativeControl total;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    GeneratedProgram g = GenerateWellTyped({.seed = seed});
    NegativeControl n = RunNegativeControl(g.program, g.init, 100000);
    total.mutants += n.mutants;
    total.rejected += n.rejected;
    total.unsound += n.unsound;
  }
  EXPECT_GT(total.mutants, 0);
  EXPECT_GT(total.rejected, 0);
  EXPECT_EQ(total.unsound, 0);
}

TEST(ShrinkTest, KeepsFailurePredicate) {
  GeneratedProgram g = GenerateWellTyped({.seed = 9, .max_depth = 5});
  auto writes_something = [](const core::Program& p) {
    return core::PrintProgram(p).find(":=") != std::string::npos;
  };
  ASSERT_TRUE(writes_something(g.program));
  core::Program small = Shrink(g.program, writes_something);
  EXPECT_TRUE(writes_something(small));
  EXPECT_LE(core::Size(*small.body), core::Size(*g.program.body));
  EXPECT_EQ(core::CheckProgram(small), std::nullopt);
}

TEST(FuzzTest, SmallRunIsClean) {
  FuzzReport r = RunFuzz({.count = 300, .seed = 3, .surface_count = 30});
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.core.programs, 300);
  EXPECT_EQ(r.core.stuck, 0);
  EXPECT_EQ(r.elaborated.programs, 30);
  EXPECT_EQ(r.elaborated.stuck, 0);
  nlohmann::json j = nlohmann::json::parse(r.ToJson());
  EXPECT_TRUE(j.is_object());
}

TEST(FuzzTest, ThreadCountDoesNotChangeTallies) {
  FuzzReport one = RunFuzz({.count = 200, .seed = 5, .jobs = 1});
  FuzzReport four = RunFuzz({.count = 200, .seed = 5, .jobs = 4});
  EXPECT_EQ(one.core.steps, four.core.steps);
  EXPECT_EQ(one.core.completed, four.core.completed);
}

}  // namespace
}  // namespace fuse::soundness
