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

#include "fuse/core/eval.h"

#include <stdexcept>

namespace fuse::core {

Store Store::ForProgram(const Program& program) {
  Store s;
  for (const MemDecl& m : program.memories) {
    const std::string& store = m.store.empty() ? m.name : m.store;
    s.alias[m.name] = store;
    if (!s.stores.count(store)) {
      s.stores[store].assign(m.size, Value::Zero(m.elem));
    }
  }
  return s;
}

std::vector<Value>& Store::Memory(const std::string& name) {
  auto it = alias.find(name);
  return stores.at(it == alias.end() ? name : it->second);
}

const std::vector<Value>& Store::Memory(const std::string& name) const {
  auto it = alias.find(name);
  return stores.at(it == alias.end() ? name : it->second);
}

bool Store::operator==(const Store& other) const {
  return vars == other.vars && stores == other.stores;
}

const char* OutcomeName(Outcome o) {
  switch (o) {
    case Outcome::kCompleted: return "completed";
    case Outcome::kStuck: return "stuck";
    case Outcome::kRuntimeError: return "runtime-error";
    case Outcome::kFuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

namespace {

struct Stuck : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RuntimeFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutOfFuel {};

bool Assignable(ScalarType target, ScalarType value) {
  return (target.kind == ScalarKind::kBool) ==
         (value.kind == ScalarKind::kBool);
}

Value Apply(BinOp op, const Value& l, const Value& r) {
  if (!BinOpResultType(op, l.type, r.type)) {
    throw Stuck("operator " + std::string(BinOpSymbol(op)) +
                " applied to " + l.type.ToString() + " and " +
                r.type.ToString());
  }
  try {
    return ApplyBinOp(op, l, r);
  } catch (const ArithError& e) {
    throw RuntimeFault(e.what());
  }
}

const Value& Lookup(const Store& s, const std::string& name) {
  auto it = s.vars.find(name);
  if (it == s.vars.end()) throw Stuck("unbound variable '" + name + "'");
  return it->second;
}

int64_t CheckedIndex(const Program& p, const std::string& mem, const Value& v) {
  const MemDecl* m = p.FindMemory(mem);
  if (m == nullptr) throw Stuck("unknown memory '" + mem + "'");
  if (!v.type.is_bit()) throw Stuck("non-integer index into '" + mem + "'");
  int64_t i = v.AsInt();
  if (i < 0 || i >= m->size) {
    throw RuntimeFault("index " + std::to_string(i) + " out of bounds for '" +
                       mem + "' of size " + std::to_string(m->size));
  }
  return i;
}

void Claim(AccessSet& rho, const std::string& mem) {
  if (!rho.insert(mem).second) {
    throw Stuck("memory '" + mem + "' accessed twice in one time step");
  }
}

bool Condition(const Store& s, const std::string& name) {
  const Value& v = Lookup(s, name);
  if (v.type.kind != ScalarKind::kBool) {
    throw Stuck("condition '" + name + "' is not a bool");
  }
  return v.b;
}

void AssignVar(Store& s, const std::string& name, const Value& v) {
  auto it = s.vars.find(name);
  if (it == s.vars.end()) throw Stuck("assignment to unbound '" + name + "'");
  if (!Assignable(it->second.type, v.type)) {
    throw Stuck("cannot assign " + v.type.ToString() + " to '" + name + "'");
  }
  it->second = ConvertTo(v, it->second.type);
}

void WriteMem(const Program& p, Store& s, AccessSet& rho,
              const std::string& mem, const Value& index, const Value& v) {
  int64_t i = CheckedIndex(p, mem, index);
  const MemDecl* m = p.FindMemory(mem);
  if (!Assignable(m->elem, v.type)) {
    throw Stuck("cannot store " + v.type.ToString() + " into '" + mem + "'");
  }
  Claim(rho, mem);
  s.Memory(mem)[i] = ConvertTo(v, m->elem);
}

class BigStepper {
 public:
  BigStepper(const Program& p, int64_t fuel) : p_(p), fuel_(fuel) {}

  Value Eval(Store& s, AccessSet& rho, const Expr& e) {
    if (const auto* v = std::get_if<Val>(&e.node)) return v->value;
    if (const auto* v = std::get_if<Var>(&e.node)) return Lookup(s, v->name);
    if (const auto* o = std::get_if<Bop>(&e.node)) {
      Value l = Eval(s, rho, *o->lhs);
      Value r = Eval(s, rho, *o->rhs);
      return Apply(o->op, l, r);
    }
    const auto& rd = std::get<Read>(e.node);
    Value idx = Eval(s, rho, *rd.index);
    int64_t i = CheckedIndex(p_, rd.mem, idx);
    Claim(rho, rd.mem);
    return s.Memory(rd.mem)[i];
  }

  void Exec(Store& s, AccessSet& rho, const Cmd& c) {
    if (std::holds_alternative<Skip>(c.node)) return;
    if (const auto* x = std::get_if<ExprCmd>(&c.node)) {
      Eval(s, rho, *x->expr);
      return;
    }
    if (const auto* x = std::get_if<Let>(&c.node)) {
      Value v = Eval(s, rho, *x->init);
      s.vars[x->name] = v;
      return;
    }
    if (const auto* x = std::get_if<Assign>(&c.node)) {
      Value v = Eval(s, rho, *x->value);
      AssignVar(s, x->name, v);
      return;
    }
    if (const auto* x = std::get_if<Write>(&c.node)) {
      Value idx = Eval(s, rho, *x->index);
      Value v = Eval(s, rho, *x->value);
      WriteMem(p_, s, rho, x->mem, idx, v);
      return;
    }
    if (const auto* x = std::get_if<Par>(&c.node)) {
      Exec(s, rho, *x->first);
      Exec(s, rho, *x->second);
      return;
    }
    if (const auto* x = std::get_if<Seq>(&c.node)) {
      AccessSet r2 = rho;
      Exec(s, rho, *x->first);
      Exec(s, r2, *x->second);
      rho.insert(r2.begin(), r2.end());
      return;
    }
    if (const auto* x = std::get_if<InterSeq>(&c.node)) {
      AccessSet r2 = x->rho;
      Exec(s, rho, *x->first);
      Exec(s, r2, *x->second);
      rho.insert(r2.begin(), r2.end());
      return;
    }
    if (const auto* x = std::get_if<If>(&c.node)) {
      Exec(s, rho, Condition(s, x->cond) ? *x->then_branch : *x->else_branch);
      return;
    }
    const auto& w = std::get<While>(c.node);
    AccessSet entry = rho;
    while (Condition(s, w.cond)) {
      if (iterations_ >= fuel_) throw OutOfFuel{};
      ++iterations_;
      AccessSet r = entry;
      Exec(s, r, *w.body);
      rho.insert(r.begin(), r.end());
    }
  }

  int64_t iterations() const { return iterations_; }

 private:
  const Program& p_;
  int64_t fuel_;
  int64_t iterations_ = 0;
};

}  // namespace

RunResult BigStep(const Program& program, Store store, int64_t fuel) {
  RunResult out;
  BigStepper stepper(program, fuel);
  AccessSet rho;
  try {
    stepper.Exec(store, rho, *program.body);
    out.outcome = Outcome::kCompleted;
  } catch (const Stuck& e) {
    out.outcome = Outcome::kStuck;
    out.message = e.what();
  } catch (const RuntimeFault& e) {
    out.outcome = Outcome::kRuntimeError;
    out.message = e.what();
  } catch (const OutOfFuel&) {
    out.outcome = Outcome::kFuelExhausted;
    out.message = "fuel exhausted";
  }
  out.store = std::move(store);
  out.rho = std::move(rho);
  out.steps = stepper.iterations();
  return out;
}

void SmallStepper::StepExpr(Store& store, AccessSet& rho, ExprPtr& e) const {
  if (std::holds_alternative<Val>(e->node)) throw Stuck("value cannot step");
  if (const auto* v = std::get_if<Var>(&e->node)) {
    e = MakeVal(Lookup(store, v->name));
    return;
  }
  if (const auto* o = std::get_if<Bop>(&e->node)) {
    if (!IsValue(*o->lhs)) {
      ExprPtr l = o->lhs;
      StepExpr(store, rho, l);
      e = MakeBop(o->op, l, o->rhs);
      return;
    }
    if (!IsValue(*o->rhs)) {
      ExprPtr r = o->rhs;
      StepExpr(store, rho, r);
      e = MakeBop(o->op, o->lhs, r);
      return;
    }
    e = MakeVal(Apply(o->op, std::get<Val>(o->lhs->node).value,
                      std::get<Val>(o->rhs->node).value));
    return;
  }
  const auto& rd = std::get<Read>(e->node);
  if (!IsValue(*rd.index)) {
    ExprPtr i = rd.index;
    StepExpr(store, rho, i);
    e = MakeRead(rd.mem, i);
    return;
  }
  int64_t i = CheckedIndex(program_, rd.mem, std::get<Val>(rd.index->node).value);
  Claim(rho, rd.mem);
  e = MakeVal(store.Memory(rd.mem)[i]);
  if (hook_) hook_(rd.mem, i, false, rho);
}

void SmallStepper::StepCmd(Store& s, AccessSet& r, CmdPtr& c) const {
  const Cmd& cur = *c;
  if (std::holds_alternative<Skip>(cur.node)) {
    throw Stuck("skip cannot step");
  }
  if (const auto* x = std::get_if<ExprCmd>(&cur.node)) {
    if (IsValue(*x->expr)) {
      c = MakeSkip();
      return;
    }
    ExprPtr e = x->expr;
    StepExpr(s, r, e);
    c = MakeExprCmd(e);
    return;
  }
  if (const auto* x = std::get_if<Let>(&cur.node)) {
    if (IsValue(*x->init)) {
      s.vars[x->name] = std::get<Val>(x->init->node).value;
      c = MakeSkip();
      return;
    }
    ExprPtr e = x->init;
    StepExpr(s, r, e);
    c = MakeLet(x->name, e);
    return;
  }
  if (const auto* x = std::get_if<Assign>(&cur.node)) {
    if (IsValue(*x->value)) {
      AssignVar(s, x->name, std::get<Val>(x->value->node).value);
      c = MakeSkip();
      return;
    }
    ExprPtr e = x->value;
    StepExpr(s, r, e);
    c = MakeAssign(x->name, e);
    return;
  }
  if (const auto* x = std::get_if<Write>(&cur.node)) {
    if (!IsValue(*x->index)) {
      ExprPtr e = x->index;
      StepExpr(s, r, e);
      c = MakeWrite(x->mem, e, x->value);
      return;
    }
    if (!IsValue(*x->value)) {
      ExprPtr e = x->value;
      StepExpr(s, r, e);
      c = MakeWrite(x->mem, x->index, e);
      return;
    }
    const Value& index = std::get<Val>(x->index->node).value;
    WriteMem(program_, s, r, x->mem, index, std::get<Val>(x->value->node).value);
    if (hook_) hook_(x->mem, index.AsInt(), true, r);
    c = MakeSkip();
    return;
  }
  if (const auto* x = std::get_if<Par>(&cur.node)) {
    if (IsSkip(*x->first)) {
      c = x->second;
      return;
    }
    CmdPtr first = x->first;
    StepCmd(s, r, first);
    c = MakePar(first, x->second);
    return;
  }
  if (const auto* x = std::get_if<Seq>(&cur.node)) {
    c = MakeInterSeq(x->first, r, x->second);
    return;
  }
  if (const auto* x = std::get_if<InterSeq>(&cur.node)) {
    if (!IsSkip(*x->first)) {
      CmdPtr first = x->first;
      StepCmd(s, r, first);
      c = MakeInterSeq(first, x->rho, x->second);
      return;
    }
    if (!IsSkip(*x->second)) {
      AccessSet inner = x->rho;
      CmdPtr second = x->second;
      StepCmd(s, inner, second);
      c = MakeInterSeq(x->first, std::move(inner), second);
      return;
    }
    r.insert(x->rho.begin(), x->rho.end());
    c = MakeSkip();
    return;
  }
  if (const auto* x = std::get_if<If>(&cur.node)) {
    c = Condition(s, x->cond) ? x->then_branch : x->else_branch;
    return;
  }
  const auto& w = std::get<While>(cur.node);
  c = MakeIf(w.cond, MakeSeq(w.body, c), MakeSkip());
}

bool SmallStepper::Step(Store& store, AccessSet& rho, CmdPtr& cmd,
                        std::string* runtime_error,
                        std::string* stuck_reason) const {
  try {
    StepCmd(store, rho, cmd);
  } catch (const Stuck& e) {
    if (stuck_reason != nullptr) *stuck_reason = e.what();
    return false;
  } catch (const RuntimeFault& e) {
    if (runtime_error != nullptr) *runtime_error = e.what();
    return false;
  }
  return true;
}

RunResult SmallStepRun(const Program& program, Store store, int64_t fuel,
                       SmallStepper::AccessHook hook) {
  RunResult out;
  SmallStepper stepper(program);
  stepper.set_access_hook(std::move(hook));
  CmdPtr c = program.body;
  AccessSet rho;
  while (!IsSkip(*c)) {
    if (out.steps >= fuel) {
      out.outcome = Outcome::kFuelExhausted;
      out.message = "fuel exhausted";
      break;
    }
    std::string rt, stuck;
    if (!stepper.Step(store, rho, c, &rt, &stuck)) {
      out.outcome = rt.empty() ? Outcome::kStuck : Outcome::kRuntimeError;
      out.message = rt.empty() ? stuck : rt;
      break;
    }
    ++out.steps;
  }
  out.store = std::move(store);
  out.rho = std::move(rho);
  return out;
}

}  // namespace fuse::core
