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

#include "fuse/core/check.h"

namespace fuse::core {

namespace {

bool Compatible(ScalarType target, ScalarType value) {
  if (target.kind == ScalarKind::kBool || value.kind == ScalarKind::kBool) {
    return target.kind == value.kind;
  }
  return true;
}

bool Fail(std::string* error, std::string message) {
  if (error != nullptr) *error = std::move(message);
  return false;
}

Delta Intersect(const Delta& a, const Delta& b) {
  Delta out;
  for (const std::string& m : a) {
    if (b.count(m)) out.insert(m);
  }
  return out;
}

Gamma Intersect(const Gamma& a, const Gamma& b) {
  Gamma out;
  for (const auto& [name, type] : a) {
    auto it = b.find(name);
    if (it != b.end() && it->second == type) out.emplace(name, type);
  }
  return out;
}

}  // namespace

Checker::Checker(const Program& program) : program_(program) {
  for (const MemDecl& m : program.memories) all_.insert(m.name);
}

std::optional<ScalarType> Checker::CheckExpr(const Gamma& gamma, Delta& delta,
                                             const Expr& e,
                                             std::string* error) const {
  if (const auto* v = std::get_if<Val>(&e.node)) return v->value.type;
  if (const auto* v = std::get_if<Var>(&e.node)) {
    auto it = gamma.find(v->name);
    if (it == gamma.end()) {
      Fail(error, "unbound variable '" + v->name + "'");
      return std::nullopt;
    }
    return it->second;
  }
  if (const auto* o = std::get_if<Bop>(&e.node)) {
    std::optional<ScalarType> l = CheckExpr(gamma, delta, *o->lhs, error);
    if (!l) return std::nullopt;
    std::optional<ScalarType> r = CheckExpr(gamma, delta, *o->rhs, error);
    if (!r) return std::nullopt;
    std::optional<ScalarType> t = BinOpResultType(o->op, *l, *r);
    if (!t) {
      Fail(error, "operator " + std::string(BinOpSymbol(o->op)) +
                      " cannot combine " + l->ToString() + " and " +
                      r->ToString());
    }
    return t;
  }
  const auto& rd = std::get<Read>(e.node);
  const MemDecl* mem = program_.FindMemory(rd.mem);
  if (mem == nullptr) {
    Fail(error, "unknown memory '" + rd.mem + "'");
    return std::nullopt;
  }
  std::optional<ScalarType> idx = CheckExpr(gamma, delta, *rd.index, error);
  if (!idx) return std::nullopt;
  if (!idx->is_bit()) {
    Fail(error, "index of '" + rd.mem + "' has type " + idx->ToString());
    return std::nullopt;
  }
  if (!delta.erase(rd.mem)) {
    Fail(error, "memory '" + rd.mem + "' is not available");
    return std::nullopt;
  }
  return mem->elem;
}

bool Checker::CheckCmd(Gamma& gamma, Delta& delta, const Cmd& c,
                       std::string* error) const {
  if (std::holds_alternative<Skip>(c.node)) return true;
  if (const auto* x = std::get_if<ExprCmd>(&c.node)) {
    return CheckExpr(gamma, delta, *x->expr, error).has_value();
  }
  if (const auto* x = std::get_if<Let>(&c.node)) {
    std::optional<ScalarType> t = CheckExpr(gamma, delta, *x->init, error);
    if (!t) return false;
    auto it = gamma.find(x->name);
    if (it != gamma.end() && it->second != *t) {
      return Fail(error, "'" + x->name + "' rebound from " +
                             it->second.ToString() + " to " + t->ToString());
    }
    gamma[x->name] = *t;
    return true;
  }
  if (const auto* x = std::get_if<Assign>(&c.node)) {
    auto it = gamma.find(x->name);
    if (it == gamma.end()) {
      return Fail(error, "assignment to unbound '" + x->name + "'");
    }
    std::optional<ScalarType> t = CheckExpr(gamma, delta, *x->value, error);
    if (!t) return false;
    if (!Compatible(it->second, *t)) {
      return Fail(error, "cannot assign " + t->ToString() + " to '" + x->name +
                             "' of type " + it->second.ToString());
    }
    return true;
  }
  if (const auto* x = std::get_if<Write>(&c.node)) {
    const MemDecl* mem = program_.FindMemory(x->mem);
    if (mem == nullptr) return Fail(error, "unknown memory '" + x->mem + "'");
    std::optional<ScalarType> idx = CheckExpr(gamma, delta, *x->index, error);
    if (!idx) return false;
    if (!idx->is_bit()) {
      return Fail(error,
                  "index of '" + x->mem + "' has type " + idx->ToString());
    }
    std::optional<ScalarType> t = CheckExpr(gamma, delta, *x->value, error);
    if (!t) return false;
    if (!Compatible(mem->elem, *t)) {
      return Fail(error, "cannot store " + t->ToString() + " into '" + x->mem +
                             "' of " + mem->elem.ToString());
    }
    if (!delta.erase(x->mem)) {
      return Fail(error, "memory '" + x->mem + "' is not available");
    }
    return true;
  }
  if (const auto* x = std::get_if<Par>(&c.node)) {
    return CheckCmd(gamma, delta, *x->first, error) &&
           CheckCmd(gamma, delta, *x->second, error);
  }
  if (const auto* x = std::get_if<Seq>(&c.node)) {
    Delta d1 = delta;
    if (!CheckCmd(gamma, d1, *x->first, error)) return false;
    Delta d2 = delta;
    if (!CheckCmd(gamma, d2, *x->second, error)) return false;
    delta = Intersect(d1, d2);
    return true;
  }
  if (const auto* x = std::get_if<InterSeq>(&c.node)) {
    Delta d1 = delta;
    if (!CheckCmd(gamma, d1, *x->first, error)) return false;
    Delta d2;
    for (const std::string& m : all_) {
      if (!x->rho.count(m)) d2.insert(m);
    }
    if (!CheckCmd(gamma, d2, *x->second, error)) return false;
    delta = Intersect(d1, d2);
    return true;
  }
  if (const auto* x = std::get_if<If>(&c.node)) {
    auto it = gamma.find(x->cond);
    if (it == gamma.end() || it->second.kind != ScalarKind::kBool) {
      return Fail(error, "condition '" + x->cond + "' is not a bool");
    }
    Gamma g1 = gamma, g2 = gamma;
    Delta d1 = delta, d2 = delta;
    if (!CheckCmd(g1, d1, *x->then_branch, error)) return false;
    if (!CheckCmd(g2, d2, *x->else_branch, error)) return false;
    gamma = Intersect(g1, g2);
    delta = Intersect(d1, d2);
    return true;
  }
  const auto& w = std::get<While>(c.node);
  auto it = gamma.find(w.cond);
  if (it == gamma.end() || it->second.kind != ScalarKind::kBool) {
    return Fail(error, "condition '" + w.cond + "' is not a bool");
  }
  Gamma g1 = gamma;
  return CheckCmd(g1, delta, *w.body, error);
}

std::optional<std::string> CheckProgram(const Program& program) {
  Checker checker(program);
  Gamma gamma;
  Delta delta = checker.all_memories();
  std::string error;
  if (!checker.CheckCmd(gamma, delta, *program.body, &error)) return error;
  return std::nullopt;
}

std::optional<std::string> CheckResidual(
    const Program& program, const std::map<std::string, Value>& vars,
    const AccessSet& rho, const Cmd& c) {
  Checker checker(program);
  Gamma gamma;
  for (const auto& [name, v] : vars) gamma.emplace(name, v.type);
  Delta delta;
  for (const std::string& m : checker.all_memories()) {
    if (!rho.count(m)) delta.insert(m);
  }
  std::string error;
  if (!checker.CheckCmd(gamma, delta, c, &error)) return error;
  return std::nullopt;
}

}  // namespace fuse::core
