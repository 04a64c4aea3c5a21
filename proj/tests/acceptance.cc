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

// Runs the seven acceptance criteria and prints one line per criterion.
// Exits nonzero when any criterion fails.

#include <cstdio>
#include <functional>
#include <vector>

#include "support/criteria.h"

int main() {
  using fuse::testing::CriterionResult;
  const std::vector<std::function<CriterionResult()>> criteria = {
      [] { return fuse::testing::GoldenVerdicts(); },
      [] { return fuse::testing::DseReproduction(1); },
      [] { return fuse::testing::EmpiricalSoundness(10000, 1, 1); },
      [] { return fuse::testing::SemanticsAgreement(1000, 7); },
      [] { return fuse::testing::ElaborationPreservation(500, 11); },
      [] { return fuse::testing::ViewLowering(); },
      [] { return fuse::testing::BackendPragmas(); },
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    CriterionResult r = criteria[i]();
    std::printf("criterion %zu: %s: %s\n", i + 1, r.pass ? "PASS" : "FAIL",
                r.detail.c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}
