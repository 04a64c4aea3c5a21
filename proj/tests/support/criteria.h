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

#ifndef FUSE_TESTS_SUPPORT_CRITERIA_H_
#define FUSE_TESTS_SUPPORT_CRITERIA_H_

#include <cstdint>
#include <optional>
#include <string>

#include "fuse/backend.h"
#include "fuse/surface_gen.h"

namespace fuse::testing {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

CriterionResult GoldenVerdicts();
CriterionResult DseReproduction(int jobs);
CriterionResult EmpiricalSoundness(int count, uint64_t seed, int jobs);
CriterionResult SemanticsAgreement(int count, uint64_t seed);
CriterionResult ElaborationPreservation(int count, uint64_t seed);
CriterionResult ViewLowering();
CriterionResult BackendPragmas();

// Runs the elaborated program and the reference evaluator from the same
// initial memories. Returns a description of the first difference.
std::optional<std::string> CompareWithReference(const SurfaceProgram& p);

// Physical-layout check of every view access on memories of size <= 16 with
// 1, 2 or 4 banks. Returns the number of accesses checked, or a mismatch.
std::optional<std::string> CheckViewAccesses(int64_t* checked);

// Reads of the split dot product, grouped by time step.
std::optional<std::string> CheckSplitDot();

// Rebuilds the memory and loop parts of a plan from the pragmas and loop
// headers in emitted text.
EmitPlan PlanFromText(const std::string& cxx);

// The gemm template instantiated at one point.
std::string GemmSource(int64_t bank11, int64_t bank12, int64_t bank21,
                       int64_t bank22, int64_t unroll1, int64_t unroll2,
                       int64_t unroll3);

}  // namespace fuse::testing

#endif  // FUSE_TESTS_SUPPORT_CRITERIA_H_
