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

#ifndef FUSE_CORE_AST_H_
#define FUSE_CORE_AST_H_

// The core calculus: unbanked memories, variables, ordered (---) and
// unordered (;) composition, if/while over boolean variables.

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fuse/scalar.h"

namespace fuse::core {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
struct Cmd;
using CmdPtr = std::shared_ptr<const Cmd>;

// Set of memories accessed in the current logical time step.
using AccessSet = std::set<std::string>;

struct Val {
  Value value;
};
struct Var {
  std::string name;
};
struct Bop {
  BinOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Read {
  std::string mem;
  ExprPtr index;
};

struct Expr {
  std::variant<Val, Var, Bop, Read> node;
};

struct ExprCmd {
  ExprPtr expr;
};
struct Let {
  std::string name;
  ExprPtr init;
};
// c1 --- c2
struct Seq {
  CmdPtr first;
  CmdPtr second;
};
// c1 ~rho~ c2: an ordered composition whose first half is running. Only
// produced by small-step evaluation.
struct InterSeq {
  CmdPtr first;
  AccessSet rho;
  CmdPtr second;
};
// c1 ; c2
struct Par {
  CmdPtr first;
  CmdPtr second;
};
struct If {
  std::string cond;
  CmdPtr then_branch;
  CmdPtr else_branch;
};
struct While {
  std::string cond;
  CmdPtr body;
};
struct Assign {
  std::string name;
  ExprPtr value;
};
struct Write {
  std::string mem;
  ExprPtr index;
  ExprPtr value;
};
struct Skip {};

struct Cmd {
  std::variant<ExprCmd, Let, Seq, InterSeq, Par, If, While, Assign, Write, Skip>
      node;
};

// A memory available to the program. Port aliases name the same backing
// store but are distinct for access tracking.
struct MemDecl {
  std::string name;
  ScalarType elem;
  int64_t size = 0;
  std::string store;  // equals `name` unless this is an alias
};

struct Program {
  std::vector<MemDecl> memories;
  CmdPtr body;

  const MemDecl* FindMemory(const std::string& name) const;
};

ExprPtr MakeVal(Value v);
ExprPtr MakeInt(int64_t v, int width = 32);
ExprPtr MakeBool(bool b);
ExprPtr MakeVar(std::string name);
ExprPtr MakeBop(BinOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr MakeRead(std::string mem, ExprPtr index);

CmdPtr MakeExprCmd(ExprPtr e);
CmdPtr MakeLet(std::string name, ExprPtr init);
CmdPtr MakeAssign(std::string name, ExprPtr value);
CmdPtr MakeWrite(std::string mem, ExprPtr index, ExprPtr value);
CmdPtr MakeIf(std::string cond, CmdPtr then_branch, CmdPtr else_branch);
CmdPtr MakeWhile(std::string cond, CmdPtr body);
CmdPtr MakeSkip();
CmdPtr MakeSeq(CmdPtr first, CmdPtr second);
CmdPtr MakeInterSeq(CmdPtr first, AccessSet rho, CmdPtr second);
CmdPtr MakePar(CmdPtr first, CmdPtr second);
// Right-nested compositions; empty lists give skip, singletons the element.
CmdPtr MakeSeq(const std::vector<CmdPtr>& cmds);
CmdPtr MakePar(const std::vector<CmdPtr>& cmds);

bool IsSkip(const Cmd& c);
bool IsValue(const Expr& e);

bool Equal(const ExprPtr& a, const ExprPtr& b);
bool Equal(const CmdPtr& a, const CmdPtr& b);

// Number of command nodes.
int64_t Size(const Cmd& c);

}  // namespace fuse::core

#endif  // FUSE_CORE_AST_H_
