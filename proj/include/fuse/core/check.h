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

#ifndef FUSE_CORE_CHECK_H_
#define FUSE_CORE_CHECK_H_

#include <map>
#include <optional>
#include <set>
#include <string>

#include "fuse/core/ast.h"

namespace fuse::core {

using Gamma = std::map<std::string, ScalarType>;
using Delta = std::set<std::string>;

// Typing judgment Gamma, Delta |- c -| Gamma', Delta'. Memory accesses
// remove the memory from Delta; `mems` supplies element types and Delta*.
class Checker {
 public:
  explicit Checker(const Program& program);

  // Returns the type of `e` and updates `delta`, or an error message.
  std::optional<ScalarType> CheckExpr(const Gamma& gamma, Delta& delta,
                                      const Expr& e, std::string* error) const;
  // Updates `gamma` and `delta` in place.
  bool CheckCmd(Gamma& gamma, Delta& delta, const Cmd& c,
                std::string* error) const;

  const Delta& all_memories() const { return all_; }

 private:
  const Program& program_;
  Delta all_;
};

// Checks the program body with empty Gamma and Delta = Delta*. Returns an
// error message on failure.
std::optional<std::string> CheckProgram(const Program& program);

// Checks a residual command in the context reconstructed from a runtime
// state: Gamma from the variable store, Delta = Delta* \ rho.
std::optional<std::string> CheckResidual(const Program& program,
                                         const std::map<std::string, Value>& vars,
                                         const AccessSet& rho, const Cmd& c);

}  // namespace fuse::core

#endif  // FUSE_CORE_CHECK_H_
