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

#ifndef FUSE_SOUNDNESS_H_
#define FUSE_SOUNDNESS_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fuse/core/ast.h"
#include "fuse/core/eval.h"

namespace fuse::soundness {

struct GenConfig {
  uint64_t seed = 0;
  int max_depth = 4;
  int max_memories = 3;
  int max_memory_size = 8;
  int max_loop_trips = 3;
  double while_probability = 0.15;
  int64_t fuel = 1'000'000;
};

struct GeneratedProgram {
  core::Program program;
  core::Store init;  // zero variables, random memory contents
};

// Generates a program that core::CheckProgram accepts by threading Gamma and
// Delta through construction. Deterministic in `config`.
GeneratedProgram GenerateWellTyped(const GenConfig& config);

struct Verdict {
  std::string digest;
  core::Outcome outcome = core::Outcome::kCompleted;
  int64_t steps = 0;
  bool agree = true;
  bool progress_ok = true;
  bool preservation_ok = true;
  std::string violation;
  core::CmdPtr residual;  // command at the violating step
};

// Small-steps `program` from `init`, re-checking the residual after every
// step against contexts rebuilt from (sigma, rho), and requiring every
// checked non-skip residual to step. Also compares against big-step.
Verdict AssertProgressPreservation(const core::Program& program,
                                   const core::Store& init, int64_t fuel);

// True iff big-step and iterated small-step agree on outcome and, when both
// complete, on (sigma, rho).
bool CompareSemantics(const core::Program& program, const core::Store& init,
                      int64_t fuel);

// Hex digest of the printed program.
std::string Digest(const core::Program& program);

// Replaces subcommands with skip while the program still type-checks and
// `fails` still holds.
core::Program Shrink(const core::Program& program,
                     const std::function<bool(const core::Program&)>& fails);

// Replaces the n-th ordered composition (preorder) with an unordered one.
// Returns null when there are fewer than n + 1 of them.
core::CmdPtr SwapSeqToPar(const core::CmdPtr& cmd, int n);

struct NegativeControl {
  int mutants = 0;
  int rejected = 0;   // core check rejects the mutant
  int completed = 0;  // accepted and still runs without getting stuck
  int unsound = 0;    // accepted yet stuck
};

NegativeControl RunNegativeControl(const core::Program& program,
                                   const core::Store& init, int64_t fuel,
                                   int max_mutants = 4);

struct FuzzOptions {
  int count = 1000;
  uint64_t seed = 1;
  int64_t fuel = 1'000'000;
  int jobs = 1;
  int surface_count = 0;  // elaborated surface programs to fuzz as well
};

struct FuzzFailure {
  uint64_t seed = 0;
  std::string kind;
  std::string message;
  std::string program;  // minimized, printed
};

struct FuzzReport {
  struct Tally {
    int programs = 0;
    int completed = 0;
    int stuck = 0;
    int runtime_errors = 0;
    int fuel_exhausted = 0;
    int progress_violations = 0;
    int preservation_violations = 0;
    int disagreements = 0;
    int64_t steps = 0;
  };
  Tally core;
  Tally elaborated;
  int elaborated_core_checked = 0;
  NegativeControl negative;
  std::vector<FuzzFailure> failures;
  double seconds = 0;

  bool ok() const;
  std::string ToJson() const;
};

FuzzReport RunFuzz(const FuzzOptions& options);

}  // namespace fuse::soundness

#endif  // FUSE_SOUNDNESS_H_
