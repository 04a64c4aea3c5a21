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

#ifndef FUSE_AST_H_
#define FUSE_AST_H_

// Surface syntax tree. Nodes are immutable and shared through
// shared_ptr<const T>, so rewriting passes copy only the spine they touch.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fuse/diagnostic.h"
#include "fuse/scalar.h"

namespace fuse {

struct BankSpec {
  int64_t size = 1;
  int64_t banks = 1;
  bool operator==(const BankSpec&) const = default;
};

struct MemType {
  ScalarType elem;
  std::vector<BankSpec> dims;
  int64_t ports = 1;

  int64_t FlatBanks() const;
  int64_t TotalSize() const;
  std::string ToString() const;
  bool operator==(const MemType&) const = default;
};

// Static type of an unrolled iterator: copies lo..hi within one logical
// iteration.
struct IdxType {
  int64_t lo = 0;
  int64_t hi = 1;
  bool operator==(const IdxType&) const = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
struct Cmd;
using CmdPtr = std::shared_ptr<const Cmd>;

struct NumLit {
  std::string text;
  bool is_float = false;
  int64_t int_value = 0;
  double float_value = 0.0;
};
struct BoolLit {
  bool value = false;
};
struct VarRef {
  std::string name;
};
struct Binary {
  BinOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
// A[i][j] (logical) or A{b}[o] (physical). Physical banks are literals: either
// one flat bank or one per dimension.
struct Access {
  std::string mem;
  std::vector<int64_t> banks;
  std::vector<ExprPtr> indices;
  bool physical() const { return !banks.empty(); }
};

struct Expr {
  std::variant<NumLit, BoolLit, VarRef, Binary, Access> node;
  Span span;
};

struct Let {
  std::string name;
  std::optional<ScalarType> type;
  ExprPtr init;
};
struct MemDecl {
  std::string name;
  MemType type;
};

enum class ViewKind { kShrink, kSuffix, kShift, kSplit };
std::string_view ViewKindName(ViewKind kind);

// One argument expression per dimension of the underlying memory (split
// takes exactly one).
struct ViewDecl {
  std::string name;
  ViewKind kind;
  std::string underlying;
  std::vector<ExprPtr> args;
};

// Unordered composition c1; c2; ... (n >= 2).
struct Par {
  std::vector<CmdPtr> cmds;
};
// Ordered composition c1 --- c2 --- ... (n >= 2).
struct Seq {
  std::vector<CmdPtr> cmds;
};
struct Block {
  CmdPtr body;
};
struct For {
  std::string iter;
  int64_t lo = 0;
  int64_t hi = 0;
  int64_t unroll = 1;
  CmdPtr body;
  CmdPtr combine;  // null when absent
};
struct While {
  ExprPtr cond;
  CmdPtr body;
};
struct If {
  ExprPtr cond;
  CmdPtr then_branch;
  CmdPtr else_branch;  // null when absent
};
struct Assign {
  std::string name;
  ExprPtr value;
};
struct Store {
  ExprPtr target;  // an Access
  ExprPtr value;
};

enum class ReduceOp { kAdd, kSub, kMul, kDiv };
std::string_view ReduceOpSymbol(ReduceOp op);  // "+=" etc.
BinOp ReduceOpBinOp(ReduceOp op);

// x += e, A[i] += e. A reducer inside combine blocks, compound assignment
// elsewhere.
struct Reduce {
  ReduceOp op;
  ExprPtr target;  // VarRef or Access
  ExprPtr value;
};
struct ExprStmt {
  ExprPtr expr;
};
struct Skip {};

struct Cmd {
  std::variant<Let, MemDecl, ViewDecl, Par, Seq, Block, For, While, If, Assign,
               Store, Reduce, ExprStmt, Skip>
      node;
  Span span;
};

struct Program {
  CmdPtr body;
};

ExprPtr MakeExpr(decltype(Expr::node) node, Span span = {});
CmdPtr MakeCmd(decltype(Cmd::node) node, Span span = {});
ExprPtr MakeInt(int64_t v, Span span = {});
ExprPtr MakeVar(std::string name, Span span = {});
ExprPtr MakeBinary(BinOp op, ExprPtr lhs, ExprPtr rhs, Span span = {});
CmdPtr MakeSkip();

// Structural equality ignoring spans.
bool Equal(const Expr& a, const Expr& b);
bool Equal(const Cmd& a, const Cmd& b);
bool Equal(const ExprPtr& a, const ExprPtr& b);
bool Equal(const CmdPtr& a, const CmdPtr& b);

// Integer value of a constant expression over integer literals, or nullopt.
// Division must be exact and non-zero to fold; `inexact` is set when a
// division by a constant leaves a remainder.
std::optional<int64_t> FoldConstant(const Expr& e, bool* inexact = nullptr);

}  // namespace fuse

#endif  // FUSE_AST_H_
