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

#include "fuse/ast.h"

#include <sstream>

namespace fuse {

std::string FormatDiagnostic(std::string_view file, const Diagnostic& diag) {
  std::ostringstream os;
  os << file << ":" << diag.span.line << ":" << diag.span.col << ": ";
  switch (diag.severity) {
    case Severity::kError:
      os << "error";
      break;
    case Severity::kWarning:
      os << "warning";
      break;
    case Severity::kNote:
      os << "note";
      break;
  }
  os << "[" << diag.code << "]: " << diag.message;
  return os.str();
}

int64_t MemType::FlatBanks() const {
  int64_t n = 1;
  for (const BankSpec& d : dims) n *= d.banks;
  return n;
}

int64_t MemType::TotalSize() const {
  int64_t n = 1;
  for (const BankSpec& d : dims) n *= d.size;
  return n;
}

std::string MemType::ToString() const {
  std::string out = elem.ToString();
  if (ports != 1) out += "{" + std::to_string(ports) + "}";
  for (const BankSpec& d : dims) {
    out += "[" + std::to_string(d.size);
    if (d.banks != 1) out += " bank " + std::to_string(d.banks);
    out += "]";
  }
  return out;
}

std::string_view ViewKindName(ViewKind kind) {
  switch (kind) {
    case ViewKind::kShrink: return "shrink";
    case ViewKind::kSuffix: return "suffix";
    case ViewKind::kShift: return "shift";
    case ViewKind::kSplit: return "split";
  }
  return "?";
}

std::string_view ReduceOpSymbol(ReduceOp op) {
  switch (op) {
    case ReduceOp::kAdd: return "+=";
    case ReduceOp::kSub: return "-=";
    case ReduceOp::kMul: return "*=";
    case ReduceOp::kDiv: return "/=";
  }
  return "?";
}

BinOp ReduceOpBinOp(ReduceOp op) {
  switch (op) {
    case ReduceOp::kAdd: return BinOp::kAdd;
    case ReduceOp::kSub: return BinOp::kSub;
    case ReduceOp::kMul: return BinOp::kMul;
    case ReduceOp::kDiv: return BinOp::kDiv;
  }
  return BinOp::kAdd;
}

ExprPtr MakeExpr(decltype(Expr::node) node, Span span) {
  return std::make_shared<const Expr>(Expr{std::move(node), span});
}

CmdPtr MakeCmd(decltype(Cmd::node) node, Span span) {
  return std::make_shared<const Cmd>(Cmd{std::move(node), span});
}

ExprPtr MakeInt(int64_t v, Span span) {
  return MakeExpr(NumLit{std::to_string(v), false, v, 0.0}, span);
}

ExprPtr MakeVar(std::string name, Span span) {
  return MakeExpr(VarRef{std::move(name)}, span);
}

ExprPtr MakeBinary(BinOp op, ExprPtr lhs, ExprPtr rhs, Span span) {
  return MakeExpr(Binary{op, std::move(lhs), std::move(rhs)}, span);
}

CmdPtr MakeSkip() { return MakeCmd(Skip{}); }

namespace {

bool EqualVec(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!Equal(a[i], b[i])) return false;
  }
  return true;
}

bool EqualVec(const std::vector<CmdPtr>& a, const std::vector<CmdPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!Equal(a[i], b[i])) return false;
  }
  return true;
}

struct ExprEq {
  const Expr& other;
  bool operator()(const NumLit& a) const {
    const auto& b = std::get<NumLit>(other.node);
    return a.text == b.text && a.is_float == b.is_float;
  }
  bool operator()(const BoolLit& a) const {
    return a.value == std::get<BoolLit>(other.node).value;
  }
  bool operator()(const VarRef& a) const {
    return a.name == std::get<VarRef>(other.node).name;
  }
  bool operator()(const Binary& a) const {
    const auto& b = std::get<Binary>(other.node);
    return a.op == b.op && Equal(a.lhs, b.lhs) && Equal(a.rhs, b.rhs);
  }
  bool operator()(const Access& a) const {
    const auto& b = std::get<Access>(other.node);
    return a.mem == b.mem && a.banks == b.banks && EqualVec(a.indices, b.indices);
  }
};

struct CmdEq {
  const Cmd& other;
  template <typename T>
  const T& o() const {
    return std::get<T>(other.node);
  }
  bool operator()(const Let& a) const {
    const auto& b = o<Let>();
    return a.name == b.name && a.type == b.type && Equal(a.init, b.init);
  }
  bool operator()(const MemDecl& a) const {
    const auto& b = o<MemDecl>();
    return a.name == b.name && a.type == b.type;
  }
  bool operator()(const ViewDecl& a) const {
    const auto& b = o<ViewDecl>();
    return a.name == b.name && a.kind == b.kind &&
           a.underlying == b.underlying && EqualVec(a.args, b.args);
  }
  bool operator()(const Par& a) const { return EqualVec(a.cmds, o<Par>().cmds); }
  bool operator()(const Seq& a) const { return EqualVec(a.cmds, o<Seq>().cmds); }
  bool operator()(const Block& a) const { return Equal(a.body, o<Block>().body); }
  bool operator()(const For& a) const {
    const auto& b = o<For>();
    return a.iter == b.iter && a.lo == b.lo && a.hi == b.hi &&
           a.unroll == b.unroll && Equal(a.body, b.body) &&
           Equal(a.combine, b.combine);
  }
  bool operator()(const While& a) const {
    const auto& b = o<While>();
    return Equal(a.cond, b.cond) && Equal(a.body, b.body);
  }
  bool operator()(const If& a) const {
    const auto& b = o<If>();
    return Equal(a.cond, b.cond) && Equal(a.then_branch, b.then_branch) &&
           Equal(a.else_branch, b.else_branch);
  }
  bool operator()(const Assign& a) const {
    const auto& b = o<Assign>();
    return a.name == b.name && Equal(a.value, b.value);
  }
  bool operator()(const Store& a) const {
    const auto& b = o<Store>();
    return Equal(a.target, b.target) && Equal(a.value, b.value);
  }
  bool operator()(const Reduce& a) const {
    const auto& b = o<Reduce>();
    return a.op == b.op && Equal(a.target, b.target) && Equal(a.value, b.value);
  }
  bool operator()(const ExprStmt& a) const {
    return Equal(a.expr, o<ExprStmt>().expr);
  }
  bool operator()(const Skip&) const { return true; }
};

}  // namespace

bool Equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(ExprEq{b}, a.node);
}

bool Equal(const Cmd& a, const Cmd& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(CmdEq{b}, a.node);
}

bool Equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return Equal(*a, *b);
}

bool Equal(const CmdPtr& a, const CmdPtr& b) {
  if (!a || !b) return !a && !b;
  return Equal(*a, *b);
}

std::optional<int64_t> FoldConstant(const Expr& e, bool* inexact) {
  if (const auto* lit = std::get_if<NumLit>(&e.node)) {
    if (lit->is_float) return std::nullopt;
    return lit->int_value;
  }
  const auto* bin = std::get_if<Binary>(&e.node);
  if (bin == nullptr) return std::nullopt;
  std::optional<int64_t> l = FoldConstant(*bin->lhs, inexact);
  std::optional<int64_t> r = FoldConstant(*bin->rhs, inexact);
  if (!l || !r) return std::nullopt;
  switch (bin->op) {
    case BinOp::kAdd: return *l + *r;
    case BinOp::kSub: return *l - *r;
    case BinOp::kMul: return *l * *r;
    case BinOp::kDiv:
      if (*r == 0) return std::nullopt;
      if (*l % *r != 0) {
        if (inexact != nullptr) *inexact = true;
        return std::nullopt;
      }
      return *l / *r;
    case BinOp::kMod:
      if (*r == 0) return std::nullopt;
      return *l % *r;
    default:
      return std::nullopt;
  }
}

}  // namespace fuse
