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

#ifndef FUSE_CORE_EVAL_H_
#define FUSE_CORE_EVAL_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fuse/core/ast.h"

namespace fuse::core {

// Runtime state sigma: variables plus backing stores for memories.
struct Store {
  std::map<std::string, Value> vars;
  std::map<std::string, std::vector<Value>> stores;
  std::map<std::string, std::string> alias;  // memory name -> store name

  // Zero-initialized stores for every memory of `program`.
  static Store ForProgram(const Program& program);

  std::vector<Value>& Memory(const std::string& name);
  const std::vector<Value>& Memory(const std::string& name) const;

  // Compares variables and stores, ignoring aliases.
  bool operator==(const Store& other) const;
};

enum class Outcome { kCompleted, kStuck, kRuntimeError, kFuelExhausted };

const char* OutcomeName(Outcome o);

struct RunResult {
  Outcome outcome = Outcome::kCompleted;
  Store store;
  AccessSet rho;
  int64_t steps = 0;  // small steps, or loop iterations for big-step
  std::string message;
};

// Big-step evaluation. Fuel bounds the total number of while iterations.
RunResult BigStep(const Program& program, Store store, int64_t fuel);

// One small step of (sigma, rho, c).
class SmallStepper {
 public:
  // Called after each successful memory access with the access set of the
  // enclosing time step, which already includes `mem`.
  using AccessHook = std::function<void(const std::string& mem, int64_t index,
                                        bool write, const AccessSet& rho)>;

  explicit SmallStepper(const Program& program) : program_(program) {}

  void set_access_hook(AccessHook hook) { hook_ = std::move(hook); }

  // Returns false when no rule applies (`stuck_reason` set) or on a runtime
  // error (`runtime_error` set); the state is then unchanged. On success
  // updates the state in place.
  bool Step(Store& store, AccessSet& rho, CmdPtr& cmd,
            std::string* runtime_error, std::string* stuck_reason) const;

 private:
  void StepExpr(Store& store, AccessSet& rho, ExprPtr& e) const;
  void StepCmd(Store& store, AccessSet& rho, CmdPtr& c) const;

  const Program& program_;
  AccessHook hook_;
};

// Iterates small steps until skip, a stuck state, an error, or `fuel` steps.
RunResult SmallStepRun(const Program& program, Store store, int64_t fuel,
                       SmallStepper::AccessHook hook = nullptr);

}  // namespace fuse::core

#endif  // FUSE_CORE_EVAL_H_
