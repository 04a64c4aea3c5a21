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

#include "fuse/elaborate.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "fuse/layout.h"
#include "fuse/views.h"

namespace fuse {

const BankedMemory* Elaboration::Find(const std::string& name) const {
  for (const BankedMemory& m : memories) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

std::string BankMemoryName(const std::string& mem, const MemType& type,
                           int64_t flat_bank) {
  if (type.FlatBanks() == 1) return mem;
  return mem + "_" + std::to_string(flat_bank);
}

std::string PortAliasName(const std::string& bank_memory, int64_t port) {
  if (port == 0) return bank_memory;
  return bank_memory + "_p" + std::to_string(port);
}

namespace {

int64_t FloorMod(int64_t a, int64_t b) {
  int64_t r = a % b;
  return r < 0 ? r + b : r;
}

// sum(coef * var) + constant over core variables.
struct Affine {
  std::map<std::string, int64_t> terms;
  int64_t constant = 0;

  static Affine Const(int64_t c) {
    Affine a;
    a.constant = c;
    return a;
  }
  static Affine Var(const std::string& name, int64_t coef = 1) {
    Affine a;
    if (coef != 0) a.terms[name] = coef;
    return a;
  }
  Affine& operator+=(const Affine& o) {
    for (const auto& [v, k] : o.terms) {
      if ((terms[v] += k) == 0) terms.erase(v);
    }
    constant += o.constant;
    return *this;
  }
  Affine Scaled(int64_t k) const {
    Affine a;
    if (k == 0) return a;
    for (const auto& [v, c] : terms) a.terms[v] = c * k;
    a.constant = constant * k;
    return a;
  }
  bool DivisibleBy(int64_t b) const {
    return std::all_of(terms.begin(), terms.end(),
                       [b](const auto& t) { return t.second % b == 0; });
  }
};

core::ExprPtr ToExpr(const Affine& a) {
  core::ExprPtr out;
  for (const auto& [v, k] : a.terms) {
    core::ExprPtr term = core::MakeVar(v);
    if (k != 1) term = core::MakeBop(BinOp::kMul, core::MakeInt(k), term);
    out = out ? core::MakeBop(BinOp::kAdd, out, term) : term;
  }
  if (!out) return core::MakeInt(a.constant);
  if (a.constant > 0) {
    out = core::MakeBop(BinOp::kAdd, out, core::MakeInt(a.constant));
  } else if (a.constant < 0) {
    out = core::MakeBop(BinOp::kSub, out, core::MakeInt(-a.constant));
  }
  return out;
}

void CollectNames(const Expr& e, std::set<std::string>& out) {
  if (const auto* v = std::get_if<VarRef>(&e.node)) {
    out.insert(v->name);
  } else if (const auto* b = std::get_if<Binary>(&e.node)) {
    CollectNames(*b->lhs, out);
    CollectNames(*b->rhs, out);
  } else if (const auto* a = std::get_if<Access>(&e.node)) {
    out.insert(a->mem);
    for (const ExprPtr& i : a->indices) CollectNames(*i, out);
  }
}

void CollectNames(const Cmd& c, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Let>) {
          out.insert(n.name);
          CollectNames(*n.init, out);
        } else if constexpr (std::is_same_v<T, MemDecl>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, ViewDecl>) {
          out.insert(n.name);
          for (const ExprPtr& a : n.args) CollectNames(*a, out);
        } else if constexpr (std::is_same_v<T, Par> || std::is_same_v<T, Seq>) {
          for (const CmdPtr& x : n.cmds) CollectNames(*x, out);
        } else if constexpr (std::is_same_v<T, Block>) {
          CollectNames(*n.body, out);
        } else if constexpr (std::is_same_v<T, For>) {
          out.insert(n.iter);
          CollectNames(*n.body, out);
          if (n.combine) CollectNames(*n.combine, out);
        } else if constexpr (std::is_same_v<T, While>) {
          CollectNames(*n.cond, out);
          CollectNames(*n.body, out);
        } else if constexpr (std::is_same_v<T, If>) {
          CollectNames(*n.cond, out);
          CollectNames(*n.then_branch, out);
          if (n.else_branch) CollectNames(*n.else_branch, out);
        } else if constexpr (std::is_same_v<T, Assign>) {
          out.insert(n.name);
          CollectNames(*n.value, out);
        } else if constexpr (std::is_same_v<T, Store>) {
          CollectNames(*n.target, out);
          CollectNames(*n.value, out);
        } else if constexpr (std::is_same_v<T, Reduce>) {
          CollectNames(*n.target, out);
          CollectNames(*n.value, out);
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          CollectNames(*n.expr, out);
        }
      },
      c.node);
}

using Combo = std::map<int, int64_t>;

struct Binding {
  enum Kind { kScalar, kIterator, kView, kHidden } kind = kScalar;
  std::string core_name;  // scalar base name or loop counter
  std::vector<int> copy_loops;
  int loop_id = -1;
  int64_t lo = 0;
  int64_t unroll = 1;
  int64_t trips = 0;
  ViewInfo view;
  std::vector<Affine> offsets;  // suffix and shift views
};

// Accesses of the current logical time step, mirroring the core rho.
struct StepCtx {
  struct Cached {
    std::string temp;
    std::string root;
    std::set<std::string> vars;
  };
  std::set<std::string> rho;
  std::map<std::string, Cached> cache;
  std::set<std::string> written;

  StepCtx Fresh() const {
    StepCtx s;
    s.rho = rho;
    return s;
  }
  // Joins parts that each started from this state.
  void Join(const std::vector<StepCtx>& parts) {
    for (const StepCtx& p : parts) {
      rho.insert(p.rho.begin(), p.rho.end());
      written.insert(p.written.begin(), p.written.end());
    }
    for (auto it = cache.begin(); it != cache.end();) {
      it = written.count(it->second.root) ? cache.erase(it) : std::next(it);
    }
  }
  void Invalidate(const std::string& var) {
    for (auto it = cache.begin(); it != cache.end();) {
      it = it->second.vars.count(var) ? cache.erase(it) : std::next(it);
    }
  }
};

core::CmdPtr ParOf(const std::vector<core::CmdPtr>& cmds) {
  std::vector<core::CmdPtr> kept;
  for (const core::CmdPtr& c : cmds) {
    if (!core::IsSkip(*c)) kept.push_back(c);
  }
  return core::MakePar(kept);
}

core::CmdPtr SeqOf(const std::vector<core::CmdPtr>& cmds) {
  std::vector<core::CmdPtr> kept;
  for (const core::CmdPtr& c : cmds) {
    if (!core::IsSkip(*c)) kept.push_back(c);
  }
  return core::MakeSeq(kept);
}

class Elaborator {
 public:
  explicit Elaborator(const Program& program) : program_(program) {
    CollectNames(*program.body, reserved_);
  }

  Elaboration Run() {
    scopes_.emplace_back();
    StepCtx st;
    out_.program.body = Lower(*program_.body, st, {Combo{}});
    return std::move(out_);
  }

 private:
  // ---- names ----

  bool Taken(const std::string& name) const {
    return reserved_.count(name) > 0 || declared_.count(name) > 0;
  }

  // Core name for a surface declaration; later declarations of the same
  // name get numbered variants.
  std::string Declare(const std::string& base) {
    if (!declared_.count(base)) {
      declared_.insert(base);
      return base;
    }
    for (int n = 2;; ++n) {
      std::string cand = base + "_" + std::to_string(n);
      if (!Taken(cand)) {
        declared_.insert(cand);
        return cand;
      }
    }
  }

  std::string Temp(const char* prefix) {
    while (true) {
      std::string cand = prefix + std::to_string(next_temp_++);
      if (!Taken(cand)) {
        declared_.insert(cand);
        return cand;
      }
    }
  }

  static std::string CopyName(const Binding& b, const Combo& combo) {
    std::string s = b.core_name;
    for (int id : b.copy_loops) s += "__" + std::to_string(combo.at(id));
    return s;
  }

  std::vector<int> CopyLoops() const {
    std::vector<int> out;
    for (const auto& [id, k] : unroll_) out.push_back(id);
    return out;
  }

  const Binding& Lookup(const std::string& name, Span span) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return found->second;
    }
    Fail(codes::kType, span, "unknown name '" + name + "'");
  }

  void Bump(const std::string& var, StepCtx& st) {
    ++versions_[var];
    st.Invalidate(var);
  }

  // ---- expressions ----

  // A single-trip loop keeps its counter at 0.
  Affine IterAffine(const Binding& b, const Combo& combo) const {
    Affine a = b.trips == 1 ? Affine() : Affine::Var(b.core_name, b.unroll);
    a += Affine::Const(b.lo + (b.unroll > 1 ? combo.at(b.loop_id) : 0));
    return a;
  }

  Affine IndexAffine(const Expr& e, const Combo& combo) const {
    if (std::optional<int64_t> c = FoldConstant(e)) return Affine::Const(*c);
    if (const auto* ref = std::get_if<VarRef>(&e.node)) {
      const Binding& b = Lookup(ref->name, e.span);
      if (b.kind == Binding::kScalar) return Affine::Var(CopyName(b, combo));
      if (b.kind == Binding::kIterator) return IterAffine(b, combo);
    }
    Fail(codes::kIndex, e.span, "unsupported index expression");
  }

  core::ExprPtr LowerExpr(const Expr& e, StepCtx& st, const Combo& combo,
                          std::vector<core::CmdPtr>& pieces) {
    if (const auto* lit = std::get_if<NumLit>(&e.node)) {
      return core::MakeVal(lit->is_float ? Value::Float(lit->float_value)
                                         : Value::Bit(lit->int_value, 32));
    }
    if (const auto* b = std::get_if<BoolLit>(&e.node)) {
      return core::MakeBool(b->value);
    }
    if (const auto* ref = std::get_if<VarRef>(&e.node)) {
      const Binding& b = Lookup(ref->name, e.span);
      if (b.kind == Binding::kScalar) return core::MakeVar(CopyName(b, combo));
      if (b.kind == Binding::kIterator) return ToExpr(IterAffine(b, combo));
      Fail(codes::kType, e.span, "'" + ref->name + "' is not a value");
    }
    if (const auto* bin = std::get_if<Binary>(&e.node)) {
      core::ExprPtr l = LowerExpr(*bin->lhs, st, combo, pieces);
      core::ExprPtr r = LowerExpr(*bin->rhs, st, combo, pieces);
      return core::MakeBop(bin->op, l, r);
    }
    return EmitRead(std::get<Access>(e.node), e.span, st, combo, pieces);
  }

  // ---- memory accesses ----

  struct RootAccess {
    const BankedMemory* mem = nullptr;
    bool physical = false;
    int64_t flat_bank = 0;
    Affine offset;
    std::vector<Affine> index;
    std::string key;
    std::set<std::string> vars;
  };

  std::string AffineKey(const Affine& a, std::set<std::string>& vars) const {
    std::string s;
    for (const auto& [v, k] : a.terms) {
      auto it = versions_.find(v);
      s += std::to_string(k) + "*" + v + "@" +
           std::to_string(it == versions_.end() ? 0 : it->second) + "+";
      vars.insert(v);
    }
    return s + std::to_string(a.constant);
  }

  const BankedMemory* Memory(const std::string& name) const {
    auto it = memory_index_.find(name);
    return it == memory_index_.end() ? nullptr : &out_.memories[it->second];
  }

  RootAccess Resolve(const Access& a, Span span, const Combo& combo) const {
    RootAccess r;
    if (a.physical()) {
      r.mem = Memory(a.mem);
      if (r.mem == nullptr) {
        Fail(codes::kView, span, "physical bank access is only supported on memories");
      }
      const MemType& t = r.mem->type;
      r.physical = true;
      r.flat_bank = a.banks.size() == 1 ? a.banks[0] : FlattenBank(t, a.banks);
      if (a.indices.size() == 1) {
        r.offset = IndexAffine(*a.indices[0], combo);
      } else {
        for (size_t d = 0; d < a.indices.size(); ++d) {
          r.offset = r.offset.Scaled(t.dims[d].size / t.dims[d].banks);
          r.offset += IndexAffine(*a.indices[d], combo);
        }
      }
      r.key = a.mem + "{" + std::to_string(r.flat_bank) + "}[" +
              AffineKey(r.offset, r.vars) + "]";
      return r;
    }
    std::vector<Affine> idx;
    for (const ExprPtr& i : a.indices) idx.push_back(IndexAffine(*i, combo));
    std::string name = a.mem;
    while (Memory(name) == nullptr) {
      const Binding& b = Lookup(name, span);
      if (b.kind != Binding::kView) {
        Fail(codes::kType, span, "'" + name + "' is not a memory");
      }
      switch (b.view.kind) {
        case ViewKind::kShrink:
          break;
        case ViewKind::kSuffix:
        case ViewKind::kShift:
          for (size_t d = 0; d < idx.size(); ++d) idx[d] += b.offsets[d];
          break;
        case ViewKind::kSplit: {
          Affine flat = idx[1].Scaled(b.view.factors[0]);
          flat += idx[0];
          idx = {flat};
          break;
        }
      }
      name = b.view.underlying;
    }
    r.mem = Memory(name);
    r.index = std::move(idx);
    r.key = name;
    for (const Affine& i : r.index) r.key += "[" + AffineKey(i, r.vars) + "]";
    return r;
  }

  struct Location {
    int64_t flat_bank = 0;
    core::ExprPtr offset;
    std::string condition;  // empty for the final alternative
  };

  // Alternatives for reaching `r`; banks that are not static are selected at
  // run time through condition variables emitted into `pieces`.
  std::vector<Location> Locate(const RootAccess& r,
                               std::vector<core::CmdPtr>& pieces) {
    const MemType& t = r.mem->type;
    if (r.physical) return {{r.flat_bank, ToExpr(r.offset), ""}};
    size_t n = t.dims.size();
    std::vector<std::vector<int64_t>> cand(n);
    std::vector<std::string> dyn(n);
    Affine static_offset;
    core::ExprPtr offset;
    bool dynamic = false;
    for (size_t d = 0; d < n; ++d) {
      int64_t banks = t.dims[d].banks;
      int64_t extent = t.dims[d].size / banks;
      const Affine& i = r.index[d];
      if (i.DivisibleBy(banks)) {
        int64_t bank = FloorMod(i.constant, banks);
        cand[d] = {bank};
        Affine o;
        for (const auto& [v, k] : i.terms) o.terms[v] = k / banks;
        o.constant = (i.constant - bank) / banks;
        static_offset = static_offset.Scaled(extent);
        static_offset += o;
        if (offset) {
          offset = core::MakeBop(BinOp::kAdd,
                                 core::MakeBop(BinOp::kMul, offset,
                                               core::MakeInt(extent)),
                                 ToExpr(o));
        } else if (dynamic) {
          offset = ToExpr(o);
        }
        continue;
      }
      dynamic = true;
      dyn[d] = Temp("_i");
      pieces.push_back(core::MakeLet(dyn[d], ToExpr(i)));
      int64_t g = banks;
      for (const auto& [v, k] : i.terms) g = std::gcd(g, k);
      for (int64_t b = 0; b < banks; ++b) {
        if (FloorMod(b - i.constant, g) == 0) cand[d].push_back(b);
      }
      core::ExprPtr o = core::MakeBop(BinOp::kDiv, core::MakeVar(dyn[d]),
                                      core::MakeInt(banks));
      core::ExprPtr prior = offset ? offset : ToExpr(static_offset);
      offset = d == 0 ? o
                      : core::MakeBop(BinOp::kAdd,
                                      core::MakeBop(BinOp::kMul, prior,
                                                    core::MakeInt(extent)),
                                      o);
    }
    if (!dynamic) {
      std::vector<int64_t> bank;
      for (size_t d = 0; d < n; ++d) bank.push_back(cand[d][0]);
      return {{FlattenBank(t, bank), ToExpr(static_offset), ""}};
    }
    std::vector<Location> out;
    std::vector<int64_t> pick(n, 0);
    while (true) {
      std::vector<int64_t> bank;
      core::ExprPtr cond;
      for (size_t d = 0; d < n; ++d) {
        bank.push_back(cand[d][pick[d]]);
        if (dyn[d].empty()) continue;
        core::ExprPtr test = core::MakeBop(
            BinOp::kEq,
            core::MakeBop(BinOp::kMod, core::MakeVar(dyn[d]),
                          core::MakeInt(t.dims[d].banks)),
            core::MakeInt(bank.back()));
        cond = cond ? core::MakeBop(BinOp::kAnd, cond, test) : test;
      }
      Location loc{FlattenBank(t, bank), offset, ""};
      int d = static_cast<int>(n) - 1;
      while (d >= 0 && ++pick[d] == static_cast<int64_t>(cand[d].size())) {
        pick[d] = 0;
        --d;
      }
      if (d >= 0) {
        loc.condition = Temp("_c");
        pieces.push_back(core::MakeLet(loc.condition, cond));
      }
      out.push_back(std::move(loc));
      if (d < 0) break;
    }
    return out;
  }

  std::string Port(const BankedMemory& mem, int64_t flat_bank, StepCtx& st) {
    const std::string& bank = mem.banks[flat_bank];
    for (int64_t p = 0; p < mem.type.ports; ++p) {
      std::string name = PortAliasName(bank, p);
      if (st.rho.insert(name).second) return name;
    }
    return bank;
  }

  template <typename Leaf>
  core::CmdPtr Dispatch(const RootAccess& r, StepCtx& st,
                        std::vector<core::CmdPtr>& pieces, Leaf leaf) {
    std::vector<Location> locs = Locate(r, pieces);
    std::vector<std::string> ports;
    for (const Location& l : locs) ports.push_back(Port(*r.mem, l.flat_bank, st));
    core::CmdPtr chain;
    for (size_t i = locs.size(); i-- > 0;) {
      core::CmdPtr c = leaf(ports[i], locs[i].offset);
      chain = chain ? core::MakeIf(locs[i].condition, c, chain) : c;
    }
    return chain;
  }

  core::ExprPtr EmitRead(const Access& a, Span span, StepCtx& st,
                         const Combo& combo, std::vector<core::CmdPtr>& pieces) {
    RootAccess r = Resolve(a, span, combo);
    if (auto it = st.cache.find(r.key); it != st.cache.end()) {
      return core::MakeVar(it->second.temp);
    }
    std::string temp = Temp("_r");
    pieces.push_back(Dispatch(r, st, pieces, [&](const std::string& m,
                                                 core::ExprPtr off) {
      return core::MakeLet(temp, core::MakeRead(m, off));
    }));
    st.cache[r.key] = StepCtx::Cached{temp, r.mem->name, r.vars};
    return core::MakeVar(temp);
  }

  void EmitWrite(const Access& a, Span span, core::ExprPtr value, StepCtx& st,
                 const Combo& combo, std::vector<core::CmdPtr>& pieces) {
    RootAccess r = Resolve(a, span, combo);
    pieces.push_back(Dispatch(r, st, pieces, [&](const std::string& m,
                                                 core::ExprPtr off) {
      return core::MakeWrite(m, off, value);
    }));
    st.written.insert(r.mem->name);
  }

  // ---- commands ----

  core::CmdPtr Lower(const Cmd& c, StepCtx& st,
                     const std::vector<Combo>& combos) {
    std::vector<core::CmdPtr> pieces;
    if (const auto* let = std::get_if<Let>(&c.node)) {
      Binding b;
      b.core_name = Declare(let->name);
      b.copy_loops = CopyLoops();
      for (const Combo& combo : combos) {
        core::ExprPtr init = LowerExpr(*let->init, st, combo, pieces);
        std::string name = CopyName(b, combo);
        if (let->type) {
          pieces.push_back(core::MakeLet(name, core::MakeVal(Value::Zero(*let->type))));
          pieces.push_back(core::MakeAssign(name, init));
        } else {
          pieces.push_back(core::MakeLet(name, init));
        }
      }
      scopes_.back()[let->name] = b;
    } else if (const auto* mem = std::get_if<MemDecl>(&c.node)) {
      DeclareMemory(*mem);
    } else if (const auto* view = std::get_if<ViewDecl>(&c.node)) {
      LowerView(*view, c.span, st, combos.front(), pieces);
    } else if (const auto* par = std::get_if<Par>(&c.node)) {
      for (const CmdPtr& item : par->cmds) pieces.push_back(Lower(*item, st, combos));
    } else if (const auto* seq = std::get_if<Seq>(&c.node)) {
      std::vector<core::CmdPtr> steps;
      std::vector<StepCtx> parts;
      for (const CmdPtr& part : seq->cmds) {
        StepCtx s = st.Fresh();
        steps.push_back(Lower(*part, s, combos));
        parts.push_back(std::move(s));
      }
      st.Join(parts);
      return SeqOf(steps);
    } else if (const auto* block = std::get_if<Block>(&c.node)) {
      scopes_.emplace_back();
      core::CmdPtr out = Lower(*block->body, st, combos);
      scopes_.pop_back();
      return out;
    } else if (const auto* loop = std::get_if<For>(&c.node)) {
      LowerFor(*loop, st, combos, pieces);
    } else if (const auto* w = std::get_if<While>(&c.node)) {
      LowerWhile(*w, st, combos, pieces);
    } else if (const auto* i = std::get_if<If>(&c.node)) {
      LowerIf(*i, st, combos, pieces);
    } else if (const auto* a = std::get_if<Assign>(&c.node)) {
      const Binding& b = Lookup(a->name, c.span);
      for (const Combo& combo : combos) {
        core::ExprPtr v = LowerExpr(*a->value, st, combo, pieces);
        std::string name = CopyName(b, combo);
        pieces.push_back(core::MakeAssign(name, v));
        Bump(name, st);
      }
    } else if (const auto* s = std::get_if<Store>(&c.node)) {
      const auto& target = std::get<Access>(s->target->node);
      for (const Combo& combo : combos) {
        core::ExprPtr v = LowerExpr(*s->value, st, combo, pieces);
        EmitWrite(target, s->target->span, v, st, combo, pieces);
      }
    } else if (const auto* r = std::get_if<Reduce>(&c.node)) {
      const auto* ref = std::get_if<VarRef>(&r->target->node);
      if (ref == nullptr) {
        Fail(codes::kConsumed, c.span,
             "compound assignment to memory outside a combine block reads and "
             "writes it in one time step");
      }
      const Binding& b = Lookup(ref->name, c.span);
      for (const Combo& combo : combos) {
        core::ExprPtr v = LowerExpr(*r->value, st, combo, pieces);
        std::string name = CopyName(b, combo);
        pieces.push_back(core::MakeAssign(
            name, core::MakeBop(ReduceOpBinOp(r->op), core::MakeVar(name), v)));
        Bump(name, st);
      }
    } else if (const auto* es = std::get_if<ExprStmt>(&c.node)) {
      for (const Combo& combo : combos) {
        pieces.push_back(core::MakeExprCmd(LowerExpr(*es->expr, st, combo, pieces)));
      }
    }
    return ParOf(pieces);
  }

  void DeclareMemory(const MemDecl& mem) {
    BankedMemory bm;
    bm.name = mem.name;
    bm.type = mem.type;
    int64_t size = BankSize(mem.type);
    for (int64_t b = 0; b < mem.type.FlatBanks(); ++b) {
      std::string bank = BankMemoryName(mem.name, mem.type, b);
      bm.banks.push_back(bank);
      for (int64_t p = 0; p < mem.type.ports; ++p) {
        out_.program.memories.push_back(
            core::MemDecl{PortAliasName(bank, p), mem.type.elem, size, bank});
      }
    }
    memory_index_[mem.name] = out_.memories.size();
    out_.memories.push_back(std::move(bm));
    env_.AddMemory(mem.name, mem.type);
  }

  Affine BindOffset(const Expr& arg, StepCtx& st, const Combo& combo,
                    std::vector<core::CmdPtr>& pieces) {
    if (std::optional<int64_t> c = FoldConstant(arg)) return Affine::Const(*c);
    const Expr* inner = &arg;
    int64_t coef = 1;
    if (const auto* bin = std::get_if<Binary>(&arg.node);
        bin != nullptr && bin->op == BinOp::kMul) {
      if (std::optional<int64_t> k = FoldConstant(*bin->lhs)) {
        coef = *k;
        inner = bin->rhs.get();
      } else if (std::optional<int64_t> k = FoldConstant(*bin->rhs)) {
        coef = *k;
        inner = bin->lhs.get();
      }
    }
    std::string temp = Temp("_o");
    pieces.push_back(core::MakeLet(temp, LowerExpr(*inner, st, combo, pieces)));
    return Affine::Var(temp, coef);
  }

  void LowerView(const ViewDecl& decl, Span span, StepCtx& st,
                 const Combo& combo, std::vector<core::CmdPtr>& pieces) {
    Binding b;
    b.kind = Binding::kView;
    b.view = CheckViewDecl(decl, span, env_);
    for (const ExprPtr& off : b.view.offsets) {
      b.offsets.push_back(BindOffset(*off, st, combo, pieces));
    }
    env_.AddView(b.view);
    scopes_.back()[decl.name] = std::move(b);
  }

  void LowerIf(const If& i, StepCtx& st, const std::vector<Combo>& combos,
               std::vector<core::CmdPtr>& pieces) {
    for (const Combo& combo : combos) {
      std::string cond = Temp("_c");
      pieces.push_back(core::MakeLet(cond, LowerExpr(*i.cond, st, combo, pieces)));
      StepCtx then_ctx = st;
      scopes_.emplace_back();
      core::CmdPtr then_cmd = Lower(*i.then_branch, then_ctx, {combo});
      scopes_.pop_back();
      StepCtx else_ctx = st;
      core::CmdPtr else_cmd = core::MakeSkip();
      if (i.else_branch) {
        scopes_.emplace_back();
        else_cmd = Lower(*i.else_branch, else_ctx, {combo});
        scopes_.pop_back();
      }
      st.Join({then_ctx, else_ctx});
      pieces.push_back(core::MakeIf(cond, then_cmd, else_cmd));
    }
  }

  void LowerWhile(const While& w, StepCtx& st, const std::vector<Combo>& combos,
                  std::vector<core::CmdPtr>& pieces) {
    std::string cond = Temp("_c");
    pieces.push_back(core::MakeLet(cond, LowerExpr(*w.cond, st, combos.front(), pieces)));
    StepCtx body_ctx = st.Fresh();
    scopes_.emplace_back();
    core::CmdPtr body = Lower(*w.body, body_ctx, combos);
    scopes_.pop_back();
    std::vector<core::CmdPtr> scratch;
    core::CmdPtr next = core::MakeAssign(
        cond, LowerExpr(*w.cond, body_ctx, combos.front(), scratch));
    st.Join({body_ctx});
    pieces.push_back(core::MakeWhile(cond, SeqOf({body, next})));
  }

  void LowerFor(const For& loop, StepCtx& st, const std::vector<Combo>& combos,
                std::vector<core::CmdPtr>& pieces) {
    int id = next_loop_id_++;
    std::string counter = Declare(loop.iter);
    std::string cond = Temp("_c");
    int64_t trips = (loop.hi - loop.lo) / loop.unroll;
    core::ExprPtr test = core::MakeBop(BinOp::kLt, core::MakeVar(counter),
                                       core::MakeInt(trips));
    pieces.push_back(core::MakeLet(counter, core::MakeInt(0)));
    pieces.push_back(core::MakeLet(cond, test));

    scopes_.emplace_back();
    Binding iter;
    iter.kind = Binding::kIterator;
    iter.core_name = counter;
    iter.copy_loops = CopyLoops();
    iter.loop_id = id;
    iter.lo = loop.lo;
    iter.unroll = loop.unroll;
    iter.trips = trips;
    scopes_.back()[loop.iter] = iter;

    std::vector<Combo> inner = combos;
    if (loop.unroll > 1) {
      unroll_.emplace_back(id, loop.unroll);
      inner.clear();
      for (const Combo& combo : combos) {
        for (int64_t u = 0; u < loop.unroll; ++u) {
          Combo c = combo;
          c[id] = u;
          inner.push_back(std::move(c));
        }
      }
    }
    std::vector<StepCtx> parts;
    std::vector<core::CmdPtr> steps;
    StepCtx body_ctx = st.Fresh();
    scopes_.emplace_back();
    steps.push_back(Lower(*loop.body, body_ctx, inner));
    std::map<std::string, Binding> body_scope = scopes_.back();
    scopes_.pop_back();
    parts.push_back(std::move(body_ctx));
    if (loop.unroll > 1) unroll_.pop_back();

    if (loop.combine) {
      scopes_.emplace_back();
      if (loop.unroll > 1) {
        Binding hidden;
        hidden.kind = Binding::kHidden;
        scopes_.back()[loop.iter] = hidden;
      }
      for (const auto& [name, b] : body_scope) {
        if (b.kind == Binding::kScalar) scopes_.back()[name] = b;
      }
      StepCtx comb = st.Fresh();
      steps.push_back(LowerCombine(*loop.combine, comb, combos, id, loop.unroll));
      parts.push_back(std::move(comb));
      scopes_.pop_back();
    }
    scopes_.pop_back();
    steps.push_back(core::MakePar(
        core::MakeAssign(counter, core::MakeBop(BinOp::kAdd,
                                                core::MakeVar(counter),
                                                core::MakeInt(1))),
        core::MakeAssign(cond, test)));
    st.Join(parts);
    pieces.push_back(core::MakeWhile(cond, SeqOf(steps)));
  }

  static void Reducers(const Cmd& c, std::vector<const Cmd*>& out) {
    if (const auto* par = std::get_if<Par>(&c.node)) {
      for (const CmdPtr& item : par->cmds) Reducers(*item, out);
    } else if (const auto* block = std::get_if<Block>(&c.node)) {
      Reducers(*block->body, out);
    } else if (std::holds_alternative<Reduce>(c.node)) {
      out.push_back(&c);
    } else if (!std::holds_alternative<Skip>(c.node)) {
      Fail(codes::kType, c.span, "combine blocks may only contain reducers");
    }
  }

  // Left fold over the copies of loop `id`, in increasing copy order.
  core::ExprPtr Fold(const Reduce& r, core::ExprPtr acc, StepCtx& st,
                     const Combo& combo, int id, int64_t copies) {
    std::vector<core::CmdPtr> none;
    for (int64_t w = 0; w < copies; ++w) {
      Combo c = combo;
      c[id] = w;
      acc = core::MakeBop(ReduceOpBinOp(r.op), acc,
                          LowerExpr(*r.value, st, c, none));
    }
    return acc;
  }

  core::CmdPtr LowerCombine(const Cmd& c, StepCtx& st,
                            const std::vector<Combo>& combos, int id,
                            int64_t copies) {
    std::vector<const Cmd*> reducers;
    Reducers(c, reducers);
    StepCtx read_ctx = st.Fresh();
    StepCtx write_ctx = st.Fresh();
    std::vector<core::CmdPtr> reads;
    std::vector<core::CmdPtr> writes;
    for (const Cmd* cmd : reducers) {
      const auto& r = std::get<Reduce>(cmd->node);
      for (const Combo& combo : combos) {
        if (const auto* ref = std::get_if<VarRef>(&r.target->node)) {
          std::string name = CopyName(Lookup(ref->name, cmd->span), combo);
          writes.push_back(core::MakeAssign(
              name, Fold(r, core::MakeVar(name), write_ctx, combo, id, copies)));
          Bump(name, write_ctx);
          continue;
        }
        const auto& target = std::get<Access>(r.target->node);
        core::ExprPtr old =
            EmitRead(target, r.target->span, read_ctx, combo, reads);
        EmitWrite(target, r.target->span,
                  Fold(r, old, write_ctx, combo, id, copies), write_ctx, combo,
                  writes);
      }
    }
    st.Join({read_ctx, write_ctx});
    return SeqOf({ParOf(reads), ParOf(writes)});
  }

  const Program& program_;
  Elaboration out_;
  std::map<std::string, size_t> memory_index_;
  MemoryEnv env_;
  std::vector<std::map<std::string, Binding>> scopes_;
  std::vector<std::pair<int, int64_t>> unroll_;
  std::set<std::string> reserved_;
  std::set<std::string> declared_;
  std::map<std::string, int> versions_;
  int next_temp_ = 0;
  int next_loop_id_ = 0;
};

}  // namespace

Elaboration Elaborate(const Program& program) {
  return Elaborator(program).Run();
}

std::map<std::string, std::vector<Value>> LogicalContents(
    const Elaboration& e, const core::Store& store) {
  std::map<std::string, std::vector<Value>> out;
  for (const BankedMemory& m : e.memories) {
    std::vector<Value>& data = out[m.name];
    for (int64_t flat = 0; flat < m.type.TotalSize(); ++flat) {
      PhysLoc loc = LogicalToPhysical(m.type, UnflattenIndex(m.type, flat));
      data.push_back(store.Memory(m.banks[loc.flat_bank])[loc.flat_offset]);
    }
  }
  return out;
}

void LoadLogical(const Elaboration& e, core::Store& store,
                 const std::string& mem, const std::vector<Value>& data) {
  const BankedMemory* m = e.Find(mem);
  if (m == nullptr) return;
  for (int64_t flat = 0; flat < m->type.TotalSize() &&
                         flat < static_cast<int64_t>(data.size());
       ++flat) {
    PhysLoc loc = LogicalToPhysical(m->type, UnflattenIndex(m->type, flat));
    store.Memory(m->banks[loc.flat_bank])[loc.flat_offset] =
        ConvertTo(data[flat], m->type.elem);
  }
}

}  // namespace fuse
