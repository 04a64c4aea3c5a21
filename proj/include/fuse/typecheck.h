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

#ifndef FUSE_TYPECHECK_H_
#define FUSE_TYPECHECK_H_

#include <set>
#include <string>
#include <vector>

#include "fuse/ast.h"
#include "fuse/diagnostic.h"
#include "fuse/views.h"

namespace fuse {

struct LoopReport {
  std::string iter;
  int64_t lo = 0;
  int64_t hi = 0;
  int64_t unroll = 1;
  Span span;
};

struct BankUse {
  std::string memory;
  int64_t bank = 0;
  int64_t used = 0;
  int64_t ports = 1;
};

// Bank credits consumed by one logical time step.
struct StepReport {
  Span span;
  std::vector<BankUse> uses;
};

struct AcceptReport {
  std::vector<std::pair<std::string, MemType>> memories;
  std::vector<ViewInfo> views;
  std::vector<LoopReport> loops;
  std::vector<StepReport> steps;

  std::string ToJson() const;
};

struct CheckResult {
  bool ok = false;
  AcceptReport report;
  std::vector<Diagnostic> diagnostics;
};

CheckResult CheckProgram(const Program& program);

// Static type of the iterator of `for (let i = lo..hi) unroll k`: idx{0..k}.
// Throws E-DIVIDES when k does not divide the range.
IdxType IteratorIndexType(int64_t lo, int64_t hi, int64_t unroll, Span span = {});

// How an index expression may select banks.
struct IndexForm {
  enum Kind { kLiteral, kIterator, kScalar } kind = kLiteral;
  int64_t value = 0;  // literal value
  IdxType idx;        // iterator copies
};

// Banks of `dim` touched by all copies of an index. Iterators with k > 1
// copies require k to equal the banking factor (E-BANKS); an iterator without
// copies or a plain scalar may touch any bank.
std::set<int64_t> BanksOfAccess(const IndexForm& index, const BankSpec& dim,
                                Span span = {});

}  // namespace fuse

#endif  // FUSE_TYPECHECK_H_
