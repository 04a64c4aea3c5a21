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

#include "fuse/core/ast.h"

namespace fuse::core {

const MemDecl* Program::FindMemory(const std::string& name) const {
  for (const MemDecl& m : memories) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

namespace {
ExprPtr E(decltype(Expr::node) node) {
  return std::make_shared<const Expr>(Expr{std::move(node)});
}
CmdPtr C(decltype(Cmd::node) node) {
  return std::make_shared<const Cmd>(Cmd{std::move(node)});
}
}  // namespace

ExprPtr MakeVal(Value v) { return E(Val{v}); }
ExprPtr MakeInt(int64_t v, int width) { return E(Val{Value::Bit(v, width)}); }
ExprPtr MakeBool(bool b) { return E(Val{Value::Bool(b)}); }
ExprPtr MakeVar(std::string name) { return E(Var{std::move(name)}); }
ExprPtr MakeBop(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  return E(Bop{op, std::move(lhs), std::move(rhs)});
}
ExprPtr MakeRead(std::string mem, ExprPtr index) {
  return E(Read{std::move(mem), std::move(index)});
}

CmdPtr MakeExprCmd(ExprPtr e) { return C(ExprCmd{std::move(e)}); }
CmdPtr MakeLet(std::string name, ExprPtr init) {
  return C(Let{std::move(name), std::move(init)});
}
CmdPtr MakeAssign(std::string name, ExprPtr value) {
  return C(Assign{std::move(name), std::move(value)});
}
CmdPtr MakeWrite(std::string mem, ExprPtr index, ExprPtr value) {
  return C(Write{std::move(mem), std::move(index), std::move(value)});
}
CmdPtr MakeIf(std::string cond, CmdPtr then_branch, CmdPtr else_branch) {
  return C(If{std::move(cond), std::move(then_branch), std::move(else_branch)});
}
CmdPtr MakeWhile(std::string cond, CmdPtr body) {
  return C(While{std::move(cond), std::move(body)});
}
CmdPtr MakeSkip() {
  static const CmdPtr* skip = new CmdPtr(C(Skip{}));
  return *skip;
}
CmdPtr MakeSeq(CmdPtr first, CmdPtr second) {
  return C(Seq{std::move(first), std::move(second)});
}
CmdPtr MakeInterSeq(CmdPtr first, AccessSet rho, CmdPtr second) {
  return C(InterSeq{std::move(first), std::move(rho), std::move(second)});
}
CmdPtr MakePar(CmdPtr first, CmdPtr second) {
  return C(Par{std::move(first), std::move(second)});
}

CmdPtr MakeSeq(const std::vector<CmdPtr>& cmds) {
  if (cmds.empty()) return MakeSkip();
  CmdPtr out = cmds.back();
  for (size_t i = cmds.size() - 1; i-- > 0;) out = MakeSeq(cmds[i], out);
  return out;
}

CmdPtr MakePar(const std::vector<CmdPtr>& cmds) {
  if (cmds.empty()) return MakeSkip();
  CmdPtr out = cmds.back();
  for (size_t i = cmds.size() - 1; i-- > 0;) out = MakePar(cmds[i], out);
  return out;
}

bool IsSkip(const Cmd& c) { return std::holds_alternative<Skip>(c.node); }
bool IsValue(const Expr& e) { return std::holds_alternative<Val>(e.node); }

bool Equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->node.index() != b->node.index()) return false;
  if (const auto* v = std::get_if<Val>(&a->node)) {
    return v->value == std::get<Val>(b->node).value;
  }
  if (const auto* v = std::get_if<Var>(&a->node)) {
    return v->name == std::get<Var>(b->node).name;
  }
  if (const auto* o = std::get_if<Bop>(&a->node)) {
    const auto& p = std::get<Bop>(b->node);
    return o->op == p.op && Equal(o->lhs, p.lhs) && Equal(o->rhs, p.rhs);
  }
  const auto& r = std::get<Read>(a->node);
  const auto& s = std::get<Read>(b->node);
  return r.mem == s.mem && Equal(r.index, s.index);
}

bool Equal(const CmdPtr& a, const CmdPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->node.index() != b->node.index()) return false;
  const auto& bn = b->node;
  if (const auto* x = std::get_if<ExprCmd>(&a->node)) {
    return Equal(x->expr, std::get<ExprCmd>(bn).expr);
  }
  if (const auto* x = std::get_if<Let>(&a->node)) {
    const auto& y = std::get<Let>(bn);
    return x->name == y.name && Equal(x->init, y.init);
  }
  if (const auto* x = std::get_if<Seq>(&a->node)) {
    const auto& y = std::get<Seq>(bn);
    return Equal(x->first, y.first) && Equal(x->second, y.second);
  }
  if (const auto* x = std::get_if<InterSeq>(&a->node)) {
    const auto& y = std::get<InterSeq>(bn);
    return x->rho == y.rho && Equal(x->first, y.first) &&
           Equal(x->second, y.second);
  }
  if (const auto* x = std::get_if<Par>(&a->node)) {
    const auto& y = std::get<Par>(bn);
    return Equal(x->first, y.first) && Equal(x->second, y.second);
  }
  if (const auto* x = std::get_if<If>(&a->node)) {
    const auto& y = std::get<If>(bn);
    return x->cond == y.cond && Equal(x->then_branch, y.then_branch) &&
           Equal(x->else_branch, y.else_branch);
  }
  if (const auto* x = std::get_if<While>(&a->node)) {
    const auto& y = std::get<While>(bn);
    return x->cond == y.cond && Equal(x->body, y.body);
  }
  if (const auto* x = std::get_if<Assign>(&a->node)) {
    const auto& y = std::get<Assign>(bn);
    return x->name == y.name && Equal(x->value, y.value);
  }
  if (const auto* x = std::get_if<Write>(&a->node)) {
    const auto& y = std::get<Write>(bn);
    return x->mem == y.mem && Equal(x->index, y.index) &&
           Equal(x->value, y.value);
  }
  return true;
}

int64_t Size(const Cmd& c) {
  if (const auto* x = std::get_if<Seq>(&c.node)) {
    return 1 + Size(*x->first) + Size(*x->second);
  }
  if (const auto* x = std::get_if<InterSeq>(&c.node)) {
    return 1 + Size(*x->first) + Size(*x->second);
  }
  if (const auto* x = std::get_if<Par>(&c.node)) {
    return 1 + Size(*x->first) + Size(*x->second);
  }
  if (const auto* x = std::get_if<If>(&c.node)) {
    return 1 + Size(*x->then_branch) + Size(*x->else_branch);
  }
  if (const auto* x = std::get_if<While>(&c.node)) return 1 + Size(*x->body);
  return 1;
}

}  // namespace fuse::core
