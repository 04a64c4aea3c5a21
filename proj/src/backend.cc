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

#include "fuse/backend.h"

#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "fuse/layout.h"
#include "fuse/printer.h"
#include "fuse/views.h"

namespace fuse {

namespace {

const std::set<std::string>& CxxKeywords() {
  static const std::set<std::string> kWords = {
      "alignas", "alignof", "and", "asm", "auto", "bool", "break", "case",
      "catch", "char", "class", "const", "constexpr", "continue", "default",
      "delete", "do", "double", "else", "enum", "explicit", "export", "extern",
      "false", "float", "for", "friend", "goto", "if", "inline", "int", "long",
      "mutable", "namespace", "new", "not", "operator", "or", "private",
      "protected", "public", "register", "return", "short", "signed", "sizeof",
      "static", "struct", "switch", "template", "this", "throw", "true", "try",
      "typedef", "typename", "union", "unsigned", "using", "virtual", "void",
      "volatile", "while", "xor", "kernel"};
  return kWords;
}

std::string CxxType(ScalarType t) {
  switch (t.kind) {
    case ScalarKind::kBit: return "ap_int<" + std::to_string(t.width) + ">";
    case ScalarKind::kFloat: return "float";
    case ScalarKind::kBool: return "bool";
  }
  return "int";
}

std::string Resource(const MemType& t) {
  return t.ports > 1 ? "RAM_2P_BRAM" : "RAM_1P_BRAM";
}

MemoryPlan PlanFor(const std::string& name, const std::string& emitted,
                   const MemType& t) {
  MemoryPlan m{name, emitted, {}, Resource(t)};
  for (size_t d = 0; d < t.dims.size(); ++d) {
    if (t.dims[d].banks > 1) {
      m.partitions.push_back({t.dims[d].banks, static_cast<int>(d + 1)});
    }
  }
  return m;
}

bool IsTop(const Cmd& c) {
  return std::holds_alternative<Par>(c.node) ||
         std::holds_alternative<Seq>(c.node);
}

// Top-level memory declarations, reached without entering a block, loop or
// conditional.
void TopMemories(const Cmd& c, std::vector<const MemDecl*>& out) {
  if (const auto* m = std::get_if<MemDecl>(&c.node)) {
    out.push_back(m);
  } else if (const auto* p = std::get_if<Par>(&c.node)) {
    for (const CmdPtr& x : p->cmds) TopMemories(*x, out);
  } else if (const auto* s = std::get_if<Seq>(&c.node)) {
    for (const CmdPtr& x : s->cmds) TopMemories(*x, out);
  }
}

class Emitter {
 public:
  explicit Emitter(const Program& program) : program_(program) {}

  std::string Run(const std::string& function_name) {
    scopes_.emplace_back();
    std::vector<const MemDecl*> top;
    TopMemories(*program_.body, top);
    std::string params;
    for (const MemDecl* m : top) {
      std::string name = Declare(m->name, m->type.elem);
      env_.AddMemory(m->name, m->type);
      top_.insert(m);
      if (!params.empty()) params += ", ";
      params += CxxType(m->type.elem) + " " + name + Dims(m->type);
      plan_.memories.push_back(PlanFor(m->name, name, m->type));
    }
    out_ << "#include <ap_int.h>\n\nvoid " << function_name << "(" << params
         << ") {\n";
    for (const MemoryPlan& m : plan_.memories) Pragmas(m, 1);
    Stmts(*program_.body, 1);
    out_ << "}\n";
    return out_.str();
  }

  const EmitPlan& plan() const { return plan_; }

 private:
  static std::string Pad(int indent) { return std::string(2 * indent, ' '); }

  static std::string Dims(const MemType& t) {
    std::string s;
    for (const BankSpec& d : t.dims) s += "[" + std::to_string(d.size) + "]";
    return s;
  }

  void Pragmas(const MemoryPlan& m, int indent) {
    out_ << Pad(indent) << "#pragma HLS resource variable=" << m.emitted
         << " core=" << m.resource << "\n";
    for (const PartitionPragma& p : m.partitions) {
      out_ << Pad(indent) << "#pragma HLS ARRAY_PARTITION variable="
           << m.emitted << " cyclic factor=" << p.factor << " dim=" << p.dim
           << "\n";
    }
  }

  std::string Declare(const std::string& name, ScalarType type) {
    std::string emitted = name;
    if (CxxKeywords().count(name)) emitted += "_";
    if (!named_.count(name)) {
      named_.insert(name);
      plan_.names.emplace_back(name, emitted);
    }
    scopes_.back()[name] = {emitted, type};
    return emitted;
  }

  const std::pair<std::string, ScalarType>* Find(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  std::string Emitted(const std::string& name) const {
    const auto* b = Find(name);
    return b != nullptr ? b->first : name;
  }

  ScalarType TypeOf(const Expr& e) const {
    if (const auto* n = std::get_if<NumLit>(&e.node)) {
      return n->is_float ? ScalarType::Float() : ScalarType::Bit(32);
    }
    if (std::holds_alternative<BoolLit>(e.node)) return ScalarType::Bool();
    if (const auto* v = std::get_if<VarRef>(&e.node)) {
      const auto* b = Find(v->name);
      return b != nullptr ? b->second : ScalarType::Bit(32);
    }
    if (const auto* a = std::get_if<Access>(&e.node)) {
      return env_.Has(a->mem) ? env_.TypeOf(a->mem).elem : ScalarType::Float();
    }
    const auto& bin = std::get<Binary>(e.node);
    if (IsComparison(bin.op) || IsLogical(bin.op)) return ScalarType::Bool();
    std::optional<ScalarType> t =
        BinOpResultType(bin.op, TypeOf(*bin.lhs), TypeOf(*bin.rhs));
    return t.value_or(ScalarType::Float());
  }

  ExprPtr Plus(ExprPtr a, ExprPtr b) const {
    if (std::optional<int64_t> c = FoldConstant(*a); c && *c == 0) return b;
    if (std::optional<int64_t> c = FoldConstant(*b); c && *c == 0) return a;
    return MakeBinary(BinOp::kAdd, a, b);
  }

  ExprPtr Times(int64_t k, ExprPtr e) const {
    if (k == 1) return e;
    return MakeBinary(BinOp::kMul, MakeInt(k), e);
  }

  // Rewrites an access through views and physical banks into a logical
  // access on the underlying memory.
  ExprPtr LowerAccess(const Access& a) const {
    std::vector<ExprPtr> idx;
    for (const ExprPtr& i : a.indices) idx.push_back(Lower(*i));
    std::string name = a.mem;
    if (a.physical() && env_.Has(name) && !env_.IsView(name)) {
      const MemType& t = env_.TypeOf(name);
      std::vector<int64_t> banks = a.banks;
      if (banks.size() == 1 && t.dims.size() > 1) {
        banks = UnflattenBank(t, banks[0]);
      }
      std::vector<ExprPtr> offsets = idx;
      if (offsets.size() == 1 && t.dims.size() > 1) {
        offsets.clear();
        int64_t below = 1;
        for (size_t d = t.dims.size(); d-- > 0;) {
          int64_t extent = t.dims[d].size / t.dims[d].banks;
          ExprPtr o = below == 1 ? idx[0]
                                 : MakeBinary(BinOp::kDiv, idx[0], MakeInt(below));
          if (d > 0) o = MakeBinary(BinOp::kMod, o, MakeInt(extent));
          offsets.insert(offsets.begin(), o);
          below *= extent;
        }
      }
      idx.clear();
      for (size_t d = 0; d < t.dims.size(); ++d) {
        idx.push_back(Plus(Times(t.dims[d].banks, offsets[d]), MakeInt(banks[d])));
      }
    }
    while (env_.IsView(name)) {
      const ViewInfo& v = *env_.View(name);
      switch (v.kind) {
        case ViewKind::kShrink:
          break;
        case ViewKind::kSuffix:
        case ViewKind::kShift:
          for (size_t d = 0; d < idx.size() && d < v.offsets.size(); ++d) {
            idx[d] = Plus(Lower(*v.offsets[d]), idx[d]);
          }
          break;
        case ViewKind::kSplit:
          idx = {Plus(Times(v.factors[0], idx[1]), idx[0])};
          break;
      }
      name = v.underlying;
    }
    Access out;
    out.mem = Emitted(name);
    out.indices = std::move(idx);
    return MakeExpr(std::move(out));
  }

  ExprPtr Lower(const Expr& e) const {
    if (const auto* v = std::get_if<VarRef>(&e.node)) {
      return MakeVar(Emitted(v->name));
    }
    if (const auto* a = std::get_if<Access>(&e.node)) return LowerAccess(*a);
    if (const auto* b = std::get_if<Binary>(&e.node)) {
      return MakeBinary(b->op, Lower(*b->lhs), Lower(*b->rhs));
    }
    return MakeExpr(e.node);
  }

  std::string Text(const Expr& e) const { return PrintExpr(*Lower(e)); }

  void Braced(const Cmd& body, int indent) {
    out_ << "{\n";
    scopes_.emplace_back();
    Stmts(body, indent + 1);
    scopes_.pop_back();
    out_ << Pad(indent) << "}";
  }

  void Stmts(const Cmd& c, int indent) {
    if (const auto* p = std::get_if<Par>(&c.node)) {
      for (const CmdPtr& x : p->cmds) Stmts(*x, indent);
    } else if (const auto* s = std::get_if<Seq>(&c.node)) {
      for (const CmdPtr& x : s->cmds) Stmts(*x, indent);
    } else {
      Stmt(c, indent);
    }
  }

  void Stmt(const Cmd& c, int indent) {
    const std::string pad = Pad(indent);
    if (const auto* let = std::get_if<Let>(&c.node)) {
      ScalarType t = let->type ? *let->type : TypeOf(*let->init);
      std::string init = Text(*let->init);
      out_ << pad << CxxType(t) << " " << Declare(let->name, t) << " = " << init
           << ";\n";
    } else if (const auto* m = std::get_if<MemDecl>(&c.node)) {
      if (top_.count(m)) return;
      std::string name = Declare(m->name, m->type.elem);
      env_.AddMemory(m->name, m->type);
      out_ << pad << CxxType(m->type.elem) << " " << name << Dims(m->type)
           << ";\n";
      plan_.memories.push_back(PlanFor(m->name, name, m->type));
      Pragmas(plan_.memories.back(), indent);
    } else if (const auto* v = std::get_if<ViewDecl>(&c.node)) {
      try {
        env_.AddView(CheckViewDecl(*v, c.span, env_));
      } catch (const DiagnosticError&) {
        // Plans are extracted from rejected programs too; such a view is
        // left unresolved.
      }
    } else if (const auto* b = std::get_if<Block>(&c.node)) {
      out_ << pad;
      Braced(*b->body, indent);
      out_ << "\n";
    } else if (const auto* f = std::get_if<For>(&c.node)) {
      plan_.loops.push_back({f->iter, f->unroll});
      scopes_.emplace_back();
      std::string it = Declare(f->iter, ScalarType::Bit(32));
      out_ << pad << "for (int " << it << " = " << f->lo << "; " << it << " < "
           << f->hi << "; " << it << "++) {\n";
      if (f->unroll > 1) {
        out_ << Pad(indent + 1) << "#pragma HLS UNROLL factor=" << f->unroll
             << " skip_exit_check\n";
      }
      Stmts(*f->body, indent + 1);
      if (f->combine) Stmts(*f->combine, indent + 1);
      scopes_.pop_back();
      out_ << pad << "}\n";
    } else if (const auto* w = std::get_if<While>(&c.node)) {
      out_ << pad << "while (" << Text(*w->cond) << ") ";
      Braced(*w->body, indent);
      out_ << "\n";
    } else if (const auto* i = std::get_if<If>(&c.node)) {
      out_ << pad << "if (" << Text(*i->cond) << ") ";
      Braced(*i->then_branch, indent);
      if (i->else_branch) {
        out_ << " else ";
        Braced(*i->else_branch, indent);
      }
      out_ << "\n";
    } else if (const auto* a = std::get_if<Assign>(&c.node)) {
      out_ << pad << Emitted(a->name) << " = " << Text(*a->value) << ";\n";
    } else if (const auto* s = std::get_if<Store>(&c.node)) {
      out_ << pad << Text(*s->target) << " = " << Text(*s->value) << ";\n";
    } else if (const auto* r = std::get_if<Reduce>(&c.node)) {
      out_ << pad << Text(*r->target) << " " << ReduceOpSymbol(r->op) << " "
           << Text(*r->value) << ";\n";
    } else if (const auto* e = std::get_if<ExprStmt>(&c.node)) {
      out_ << pad << "(void)(" << Text(*e->expr) << ");\n";
    } else if (IsTop(c)) {
      Stmts(c, indent);
    }
  }

  const Program& program_;
  std::ostringstream out_;
  EmitPlan plan_;
  MemoryEnv env_;
  std::set<const MemDecl*> top_;
  std::set<std::string> named_;
  std::vector<std::map<std::string, std::pair<std::string, ScalarType>>>
      scopes_;
};

}  // namespace

std::string EmitPlan::ToJson() const {
  nlohmann::ordered_json j;
  j["memories"] = nlohmann::ordered_json::array();
  for (const MemoryPlan& m : memories) {
    nlohmann::ordered_json parts = nlohmann::ordered_json::array();
    for (const PartitionPragma& p : m.partitions) {
      parts.push_back({{"factor", p.factor}, {"dim", p.dim}});
    }
    j["memories"].push_back({{"name", m.name},
                             {"emitted", m.emitted},
                             {"resource", m.resource},
                             {"partitions", parts}});
  }
  j["loops"] = nlohmann::ordered_json::array();
  for (const LoopPlan& l : loops) {
    j["loops"].push_back({{"iter", l.iter}, {"unroll", l.unroll}});
  }
  j["names"] = nlohmann::ordered_json::array();
  for (const auto& [from, to] : names) j["names"].push_back({from, to});
  return j.dump(2);
}

EmitPlan EmitPlan::FromJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  EmitPlan plan;
  for (const auto& m : j.at("memories")) {
    MemoryPlan mp;
    mp.name = m.at("name").get<std::string>();
    mp.emitted = m.at("emitted").get<std::string>();
    mp.resource = m.at("resource").get<std::string>();
    for (const auto& p : m.at("partitions")) {
      mp.partitions.push_back(
          {p.at("factor").get<int64_t>(), p.at("dim").get<int>()});
    }
    plan.memories.push_back(std::move(mp));
  }
  for (const auto& l : j.at("loops")) {
    plan.loops.push_back(
        {l.at("iter").get<std::string>(), l.at("unroll").get<int64_t>()});
  }
  for (const auto& n : j.at("names")) {
    plan.names.emplace_back(n.at(0).get<std::string>(),
                            n.at(1).get<std::string>());
  }
  return plan;
}

std::string EmitCxx(const Program& program, const std::string& function_name) {
  return Emitter(program).Run(function_name);
}

EmitPlan MakeEmitPlan(const Program& program) {
  Emitter e(program);
  e.Run("kernel");
  return e.plan();
}

}  // namespace fuse
