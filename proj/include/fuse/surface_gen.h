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

#ifndef FUSE_SURFACE_GEN_H_
#define FUSE_SURFACE_GEN_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fuse/ast.h"
#include "fuse/scalar.h"

namespace fuse {

struct SurfaceGenConfig {
  uint64_t seed = 0;
  int max_memories = 3;
  int max_statements = 5;
  int max_attempts = 64;
};

// A random surface program accepted by the checker plus initial contents
// (row-major) for each of its top-level memories.
struct SurfaceProgram {
  std::string source;
  Program program;
  std::map<std::string, std::vector<Value>> init;
};

// Draws candidate programs until one type-checks. Generated loops never
// write a memory they also read, so lockstep and sequential execution of
// their copies coincide.
SurfaceProgram GenerateSurface(const SurfaceGenConfig& config);

}  // namespace fuse

#endif  // FUSE_SURFACE_GEN_H_
