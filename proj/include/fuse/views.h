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

#ifndef FUSE_VIEWS_H_
#define FUSE_VIEWS_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fuse/ast.h"

namespace fuse {

// A checked view declaration. Views may sit on top of other views; `root` is
// the physical memory at the bottom of the chain.
struct ViewInfo {
  std::string name;
  ViewKind kind = ViewKind::kShrink;
  std::string underlying;
  std::string root;
  MemType type;
  // shrink: factor per dimension; split: {w}; suffix: aligned coefficient
  // per dimension (the banking factor).
  std::vector<int64_t> factors;
  // suffix and shift: start offset per dimension.
  std::vector<ExprPtr> offsets;
};

using BankSets = std::vector<std::set<int64_t>>;

// Memories and views visible at a program point.
class MemoryEnv {
 public:
  void AddMemory(const std::string& name, const MemType& type);
  void AddView(const ViewInfo& view);
  void RemoveView(const std::string& name);

  bool Has(const std::string& name) const;
  bool IsView(const std::string& name) const;
  const MemType& TypeOf(const std::string& name) const;
  const ViewInfo* View(const std::string& name) const;
  const std::string& RootOf(const std::string& name) const;
  // The chain from `name` down to its root, `name` first.
  std::vector<std::string> Chain(const std::string& name) const;
  // Nearest shift view on the chain (including `name`), else the root.
  std::string CreditDomain(const std::string& name) const;

  const std::map<std::string, MemType>& memories() const { return memories_; }
  const std::map<std::string, ViewInfo>& views() const { return views_; }

 private:
  std::map<std::string, MemType> memories_;
  std::map<std::string, ViewInfo> views_;
};

// Validates a view declaration against its underlying memory or view.
// Throws DiagnosticError (E-VIEW, E-DIVIDES, E-TYPE).
ViewInfo CheckViewDecl(const ViewDecl& decl, Span span, const MemoryEnv& env);

// Every bank of every dimension.
BankSets AllBanks(const MemType& type);

// Underlying per-dimension banks reachable from the given view banks.
BankSets MapBanksToUnderlying(const ViewInfo& view, const MemType& under,
                              const BankSets& banks);

// Maps bank sets of `name` down the chain until `stop` (an element of
// Chain(name)).
BankSets MapBanksDown(const MemoryEnv& env, const std::string& name,
                      const std::string& stop, const BankSets& banks);

std::set<int64_t> FlatBankSet(const MemType& type, const BankSets& banks);

// View logical index to underlying logical index.
std::vector<int64_t> ViewToUnderlying(const ViewInfo& view,
                                      const std::vector<int64_t>& index,
                                      const std::vector<int64_t>& offsets);
std::vector<ExprPtr> ViewToUnderlyingExpr(const ViewInfo& view,
                                          const std::vector<ExprPtr>& index,
                                          const std::vector<ExprPtr>& offsets);

}  // namespace fuse

#endif  // FUSE_VIEWS_H_
