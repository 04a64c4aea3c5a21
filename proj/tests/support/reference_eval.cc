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

#include "support/reference_eval.h"

#include <optional>

namespace fuse::testing {

namespace {

struct RefMemory {
  MemType type;
  std::vector<Value> data;
};

struct RefView {
  ViewKind kind;
  std::string underlying;
  std::vector<int64_t> offsets;  // suffix and shift
  int64_t width = 1;             // split
};

class Reference {
 public:
  Reference(const std::map<std::string, std::vector<Value>>& init,
            int64_t budget)
      : init_(init), budget_(budget) {}

  void Exec(const Cmd& c) {
    if (const auto* let = std::get_if<Let>(&c.node)) {
      Value v = Eval(*let->init);
      scopes_.back()[let->name] = let->type ? ConvertTo(v, *let->type) : v;
    } else if (const auto* m = std::get_if<MemDecl>(&c.node)) {
      RefMemory mem{m->type, {}};
      auto it = init_.find(m->name);
      if (it != init_.end()) {
        for (const Value& v : it->second) {
          mem.data.push_back(ConvertTo(v, m->type.elem));
        }
      }
      mem.data.resize(m->type.TotalSize(), Value::Zero(m->type.elem));
      memories_[m->name] = std::move(mem);
    } else if (const auto* v = std::get_if<ViewDecl>(&c.node)) {
      RefView view{v->kind, v->underlying, {}, 1};
      if (v->kind == ViewKind::kSplit) {
        view.width = Eval(*v->args[0]).AsInt();
      } else if (v->kind != ViewKind::kShrink) {
        for (const ExprPtr& a : v->args) view.offsets.push_back(Eval(*a).AsInt());
      }
      views_.back()[v->name] = std::move(view);
    } else if (const auto* p = std::get_if<Par>(&c.node)) {
      for (const CmdPtr& x : p->cmds) Exec(*x);
    } else if (const auto* s = std::get_if<Seq>(&c.node)) {
      for (const CmdPtr& x : s->cmds) Exec(*x);
    } else if (const auto* b = std::get_if<Block>(&c.node)) {
      Scoped(*b->body);
    } else if (const auto* f = std::get_if<For>(&c.node)) {
      for (int64_t i = f->lo; i < f->hi; ++i) {
        Tick();
        Push();
        scopes_.back()[f->iter] = Value::Bit(i, 32);
        Exec(*f->body);
        if (f->combine) Exec(*f->combine);
        Pop();
      }
    } else if (const auto* w = std::get_if<While>(&c.node)) {
      while (Truth(*w->cond)) {
        Tick();
        Scoped(*w->body);
      }
    } else if (const auto* i = std::get_if<If>(&c.node)) {
      if (Truth(*i->cond)) {
        Scoped(*i->then_branch);
      } else if (i->else_branch) {
        Scoped(*i->else_branch);
      }
    } else if (const auto* a = std::get_if<Assign>(&c.node)) {
      Value& slot = Var(a->name);
      slot = ConvertTo(Eval(*a->value), slot.type);
    } else if (const auto* st = std::get_if<Store>(&c.node)) {
      Value v = Eval(*st->value);
      auto [mem, index] = Locate(std::get<Access>(st->target->node));
      mem->data[index] = ConvertTo(v, mem->type.elem);
    } else if (const auto* r = std::get_if<Reduce>(&c.node)) {
      Value v = Eval(*r->value);
      BinOp op = ReduceOpBinOp(r->op);
      if (const auto* ref = std::get_if<VarRef>(&r->target->node)) {
        Value& slot = Var(ref->name);
        slot = ConvertTo(ApplyBinOp(op, slot, v), slot.type);
      } else {
        auto [mem, index] = Locate(std::get<Access>(r->target->node));
        Value& cell = mem->data[index];
        cell = ConvertTo(ApplyBinOp(op, cell, v), mem->type.elem);
      }
    } else if (const auto* e = std::get_if<ExprStmt>(&c.node)) {
      Eval(*e->expr);
    }
  }

  std::map<std::string, std::vector<Value>> Contents() const {
    std::map<std::string, std::vector<Value>> out;
    for (const auto& [name, m] : memories_) out[name] = m.data;
    return out;
  }

 private:
  void Tick() {
    if (--budget_ < 0) throw ReferenceError("iteration budget exhausted");
  }
  void Push() {
    scopes_.emplace_back();
    views_.emplace_back();
  }
  void Pop() {
    scopes_.pop_back();
    views_.pop_back();
  }
  void Scoped(const Cmd& c) {
    Push();
    Exec(c);
    Pop();
  }

  Value& Var(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    throw ReferenceError("unbound variable " + name);
  }

  const RefView* View(const std::string& name) const {
    for (auto it = views_.rbegin(); it != views_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  bool Truth(const Expr& e) {
    Value v = Eval(e);
    if (v.type.kind != ScalarKind::kBool) throw ReferenceError("non-bool test");
    return v.b;
  }

  // Logical index from a physical (bank, offset) pair under cyclic banking.
  static std::vector<int64_t> FromPhysical(const MemType& t,
                                           std::vector<int64_t> banks,
                                           std::vector<int64_t> offsets) {
    size_t n = t.dims.size();
    if (banks.size() == 1 && n > 1) {
      int64_t flat = banks[0];
      banks.assign(n, 0);
      for (size_t d = n; d-- > 0;) {
        banks[d] = flat % t.dims[d].banks;
        flat /= t.dims[d].banks;
      }
    }
    if (offsets.size() == 1 && n > 1) {
      int64_t flat = offsets[0];
      offsets.assign(n, 0);
      for (size_t d = n; d-- > 0;) {
        int64_t extent = t.dims[d].size / t.dims[d].banks;
        offsets[d] = flat % extent;
        flat /= extent;
      }
    }
    std::vector<int64_t> idx(n);
    for (size_t d = 0; d < n; ++d) {
      if (banks[d] < 0 || banks[d] >= t.dims[d].banks) {
        throw ReferenceError("bank out of range");
      }
      idx[d] = offsets[d] * t.dims[d].banks + banks[d];
    }
    return idx;
  }

  std::pair<RefMemory*, int64_t> Locate(const Access& a) {
    std::vector<int64_t> idx;
    for (const ExprPtr& e : a.indices) idx.push_back(Eval(*e).AsInt());
    std::string name = a.mem;
    while (const RefView* v = View(name)) {
      switch (v->kind) {
        case ViewKind::kShrink:
          break;
        case ViewKind::kSuffix:
        case ViewKind::kShift:
          for (size_t d = 0; d < idx.size(); ++d) idx[d] += v->offsets[d];
          break;
        case ViewKind::kSplit:
          idx = {v->width * idx[1] + idx[0]};
          break;
      }
      name = v->underlying;
    }
    auto it = memories_.find(name);
    if (it == memories_.end()) throw ReferenceError("unknown memory " + name);
    RefMemory& m = it->second;
    if (a.physical()) idx = FromPhysical(m.type, a.banks, idx);
    if (idx.size() != m.type.dims.size()) throw ReferenceError("rank mismatch");
    int64_t flat = 0;
    for (size_t d = 0; d < idx.size(); ++d) {
      if (idx[d] < 0 || idx[d] >= m.type.dims[d].size) {
        throw ReferenceError("index out of bounds on " + name);
      }
      flat = flat * m.type.dims[d].size + idx[d];
    }
    return {&m, flat};
  }

  Value Eval(const Expr& e) {
    if (const auto* n = std::get_if<NumLit>(&e.node)) {
      return n->is_float ? Value::Float(n->float_value)
                         : Value::Bit(n->int_value, 32);
    }
    if (const auto* b = std::get_if<BoolLit>(&e.node)) return Value::Bool(b->value);
    if (const auto* v = std::get_if<VarRef>(&e.node)) return Var(v->name);
    if (const auto* a = std::get_if<Access>(&e.node)) {
      auto [mem, index] = Locate(*a);
      return mem->data[index];
    }
    const auto& bin = std::get<Binary>(e.node);
    Value l = Eval(*bin.lhs);
    Value r = Eval(*bin.rhs);
    return ApplyBinOp(bin.op, l, r);
  }

  const std::map<std::string, std::vector<Value>>& init_;
  int64_t budget_;
  std::map<std::string, RefMemory> memories_;
  std::vector<std::map<std::string, Value>> scopes_{1};
  std::vector<std::map<std::string, RefView>> views_{1};
};

}  // namespace

std::map<std::string, std::vector<Value>> ReferenceRun(
    const Program& program,
    const std::map<std::string, std::vector<Value>>& init,
    int64_t max_iterations) {
  Reference r(init, max_iterations);
  r.Exec(*program.body);
  return r.Contents();
}

}  // namespace fuse::testing
