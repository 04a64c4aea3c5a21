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

#ifndef FUSE_ELABORATE_H_
#define FUSE_ELABORATE_H_

#include <map>
#include <string>
#include <vector>

#include "fuse/ast.h"
#include "fuse/core/ast.h"
#include "fuse/core/eval.h"

namespace fuse {

// A surface memory split into one core memory per flat bank.
struct BankedMemory {
  std::string name;
  MemType type;
  // Core memory holding each flat bank; port aliases are not listed.
  std::vector<std::string> banks;
};

struct Elaboration {
  core::Program program;
  std::vector<BankedMemory> memories;

  const BankedMemory* Find(const std::string& name) const;
};

// Name of the core memory for `flat_bank` of `mem` (port 0) and of its
// additional port aliases.
std::string BankMemoryName(const std::string& mem, const MemType& type,
                           int64_t flat_bank);
std::string PortAliasName(const std::string& bank_memory, int64_t port);

// Desugars a program accepted by CheckProgram. Throws DiagnosticError for
// constructs the checker would reject.
Elaboration Elaborate(const Program& program);

// Logical contents (row-major) of every surface memory in `store`.
std::map<std::string, std::vector<Value>> LogicalContents(
    const Elaboration& e, const core::Store& store);

// Writes logical contents (row-major) of `mem` into the bank stores.
void LoadLogical(const Elaboration& e, core::Store& store,
                 const std::string& mem, const std::vector<Value>& data);

}  // namespace fuse

#endif  // FUSE_ELABORATE_H_
