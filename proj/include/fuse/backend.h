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

#ifndef FUSE_BACKEND_H_
#define FUSE_BACKEND_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fuse/ast.h"

namespace fuse {

struct PartitionPragma {
  int64_t factor = 1;
  int dim = 1;  // 1-based
  bool operator==(const PartitionPragma&) const = default;
};

struct MemoryPlan {
  std::string name;     // surface name
  std::string emitted;  // C++ identifier
  std::vector<PartitionPragma> partitions;  // banked dimensions only
  std::string resource;  // RAM_1P_BRAM or RAM_2P_BRAM
  bool operator==(const MemoryPlan&) const = default;
};

struct LoopPlan {
  std::string iter;
  int64_t unroll = 1;  // an UNROLL pragma is emitted iff unroll > 1
  bool operator==(const LoopPlan&) const = default;
};

struct EmitPlan {
  std::vector<MemoryPlan> memories;  // declaration order
  std::vector<LoopPlan> loops;       // source order
  // Surface identifier to emitted identifier, first declaration order.
  std::vector<std::pair<std::string, std::string>> names;

  std::string ToJson() const;
  static EmitPlan FromJson(const std::string& text);
  bool operator==(const EmitPlan&) const = default;
};

// C++ for HLS: one void function whose parameters are the top-level memories.
// View accesses are rewritten to index arithmetic on the underlying memory;
// combine blocks run after the body of each iteration.
std::string EmitCxx(const Program& program,
                    const std::string& function_name = "kernel");

EmitPlan MakeEmitPlan(const Program& program);

}  // namespace fuse

#endif  // FUSE_BACKEND_H_
