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

#include "fuse/typecheck.h"

#include <algorithm>
#include <map>
#include <optional>

#include "fuse/layout.h"
#include "json.hpp"

namespace fuse {

IdxType IteratorIndexType(int64_t lo, int64_t hi, int64_t unroll, Span span) {
  int64_t n = hi - lo;
  if (unroll < 1 || n % unroll != 0) {
    Fail(codes::kDivides, span,
         "unroll factor " + std::to_string(unroll) +
             " does not divide the iteration count " + std::to_string(n));
  }
  return IdxType{0, unroll};
}

std::set<int64_t> BanksOfAccess(const IndexForm& index, const BankSpec& dim,
                                Span span) {
  std::set<int64_t> out;
  switch (index.kind) {
    case IndexForm::kLiteral:
      out.insert(index.value % dim.banks);
      return out;
    case IndexForm::kIterator: {
      int64_t copies = index.idx.hi - index.idx.lo;
      if (copies > 1) {
        if (copies != dim.banks) {
          Fail(codes::kBanks, span,
               "insufficient banks: " + std::to_string(copies) +
                   " parallel copies need " + std::to_string(copies) +
                   " banks, the dimension has " + std::to_string(dim.banks));
        }
        for (int64_t u = index.idx.lo; u < index.idx.hi; ++u) {
          out.insert(u % dim.banks);
        }
        return out;
      }
      break;
    }
    case IndexForm::kScalar:
      break;
  }
  for (int64_t b = 0; b < dim.banks; ++b) out.insert(b);
  return out;
}

namespace {

struct VarInfo {
  enum Kind { kScalar, kIterator, kCombineReg, kHidden } kind = kScalar;
  ScalarType type;
  int version = 0;
  // Unrolled loops enclosing the definition; the variable has one copy per
  // combination of their copies.
  std::vector<int> copy_loops;
  int loop_id = -1;
  int64_t lo = 0;
  int64_t hi = 0;
  int64_t unroll = 1;
};

struct Scope {
  std::map<std::string, VarInfo> vars;
  std::vector<std::string> views;
};

struct UnrollCtx {
  int loop_id;
  int64_t copies;
};

struct CapInfo {
  bool write = false;
  std::string root;
};

// Resources of the current logical time step.
struct StepState {
  // Credits used per root memory bank.
  std::map<std::string, std::vector<int64_t>> used;
  // Credits used per bank of shift views that claimed their root.
  std::map<std::string, std::vector<int64_t>> view_used;
  std::set<std::string> claimed;
  std::map<std::string, CapInfo> caps;
  // Root memory -> the name it was accessed through.
  std::map<std::string, std::string> paths;
  std::set<std::string> written;
};

constexpr char kConflictPath[] = "*";

void MaxInto(std::map<std::string, std::vector<int64_t>>& into,
             const std::map<std::string, std::vector<int64_t>>& from) {
  for (const auto& [name, vec] : from) {
    std::vector<int64_t>& dst = into[name];
    if (dst.size() < vec.size()) dst.resize(vec.size(), 0);
    for (size_t b = 0; b < vec.size(); ++b) dst[b] = std::max(dst[b], vec[b]);
  }
}

// Joins states that each started from `entry`: surviving resources are the
// intersection, capabilities of written memories are dropped.
StepState Merge(const StepState& entry, const std::vector<StepState>& parts,
                bool keep_entry_caps) {
  StepState out;
  out.used = entry.used;
  out.view_used = entry.view_used;
  out.claimed = entry.claimed;
  out.written = entry.written;
  out.paths = entry.paths;
  for (const StepState& p : parts) {
    MaxInto(out.used, p.used);
    out.written.insert(p.written.begin(), p.written.end());
  }
  std::map<std::string, std::string> new_paths;
  for (const StepState& p : parts) {
    for (const auto& [root, path] : p.paths) {
      if (entry.paths.count(root)) continue;
      auto [it, inserted] = new_paths.emplace(root, path);
      if (!inserted && it->second != path) it->second = kConflictPath;
    }
  }
  out.paths.insert(new_paths.begin(), new_paths.end());
  if (keep_entry_caps) {
    for (const auto& [key, cap] : entry.caps) {
      if (!out.written.count(cap.root)) out.caps.emplace(key, cap);
    }
  }
  return out;
}

StepState Fresh(const StepState& entry) {
  StepState s;
  s.used = entry.used;
  return s;
}

struct ExprMode {
  bool allow_mem = true;
  bool allow_regs = false;
  bool* saw_reg = nullptr;
  const char* context = "";
};

bool Compatible(ScalarType to, ScalarType from) {
  return to.is_numeric() == from.is_numeric();
}

bool HasTimeStructure(const Cmd& c) {
  if (std::holds_alternative<Seq>(c.node) || std::holds_alternative<For>(c.node) ||
      std::holds_alternative<While>(c.node)) {
    return true;
  }
  if (const auto* p = std::get_if<Par>(&c.node)) {
    return std::any_of(p->cmds.begin(), p->cmds.end(),
                       [](const CmdPtr& x) { return HasTimeStructure(*x); });
  }
  if (const auto* b = std::get_if<Block>(&c.node)) return HasTimeStructure(*b->body);
  if (const auto* i = std::get_if<If>(&c.node)) {
    return HasTimeStructure(*i->then_branch) ||
           (i->else_branch && HasTimeStructure(*i->else_branch));
  }
  return false;
}

class Checker {
 public:
  CheckResult Run(const Program& program) {
    CheckResult result;
    try {
      scopes_.emplace_back();
      StepState st;
      CheckCmd(*program.body, st);
      RecordStep(program.body->span, st);
      result.ok = true;
    } catch (const DiagnosticError& e) {
      result.diagnostics.push_back(e.diagnostic());
    }
    result.report = std::move(report_);
    return result;
  }

 private:
  // ---- scopes and variables ----

  void PushScope() { scopes_.emplace_back(); }
  void PopScope() {
    for (const std::string& v : scopes_.back().views) env_.RemoveView(v);
    scopes_.pop_back();
  }

  VarInfo* Lookup(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->vars.find(name);
      if (found != it->vars.end()) return &found->second;
    }
    return nullptr;
  }

  void CheckFreshName(const std::string& name, Span span) {
    if (env_.Has(name)) {
      Fail(codes::kType, span, "'" + name + "' is already a memory");
    }
    if (scopes_.back().vars.count(name)) {
      Fail(codes::kType, span, "'" + name + "' is already defined in this scope");
    }
  }

  std::vector<int> CurrentCopyLoops() const {
    std::vector<int> out;
    for (const UnrollCtx& u : unroll_) out.push_back(u.loop_id);
    return out;
  }

  int64_t CopyOf(int loop_id) const {
    for (size_t i = 0; i < unroll_.size(); ++i) {
      if (unroll_[i].loop_id == loop_id) return copy_[i];
    }
    return 0;
  }

  // Runs `f` once per lockstep copy of the enclosing unrolled loops.
  template <typename F>
  void ForEachCopy(F f) {
    if (pinned_) {
      f();
      return;
    }
    std::vector<int64_t> cur(unroll_.size(), 0);
    while (true) {
      copy_ = cur;
      f();
      int d = static_cast<int>(cur.size()) - 1;
      while (d >= 0 && ++cur[d] == unroll_[d].copies) {
        cur[d] = 0;
        --d;
      }
      if (d < 0) break;
    }
  }

  // ---- time steps ----

  void RecordStep(Span span, const StepState& st) {
    StepReport step;
    step.span = span;
    for (const auto& [mem, vec] : st.used) {
      if (!env_.memories().count(mem)) continue;
      int64_t ports = env_.TypeOf(mem).ports;
      for (size_t b = 0; b < vec.size(); ++b) {
        if (vec[b] > 0) {
          step.uses.push_back({mem, static_cast<int64_t>(b), vec[b], ports});
        }
      }
    }
    report_.steps.push_back(std::move(step));
  }

  void Consume(std::map<std::string, std::vector<int64_t>>& used,
               const std::string& res, int64_t banks, int64_t capacity,
               int64_t bank, Span span, const std::string& via) {
    std::vector<int64_t>& vec = used[res];
    if (static_cast<int64_t>(vec.size()) < banks) vec.resize(banks, 0);
    if (vec[bank] >= capacity) {
      std::string where = banks > 1 ? "bank " + std::to_string(bank) + " of '" +
                                          res + "'"
                                    : "'" + res + "'";
      std::string how = via.empty() ? "" : " (accessed through '" + via + "')";
      Fail(codes::kConsumed, span,
           where + " was already consumed in this time step" + how);
    }
    ++vec[bank];
  }

  // ---- memory accesses ----

  struct DimAccess {
    std::set<int64_t> banks;
    std::string key;
  };

  DimAccess IndexAccess(const Expr& e, const BankSpec& dim, int64_t extent,
                        bool direct, bool physical) {
    bool inexact = false;
    if (std::optional<int64_t> c = FoldConstant(e, &inexact)) {
      if (*c < 0 || *c >= extent) {
        Fail(codes::kIndex, e.span,
             "index " + std::to_string(*c) + " is out of range for size " +
                 std::to_string(extent));
      }
      IndexForm f{IndexForm::kLiteral, *c, {}};
      return {physical ? std::set<int64_t>{} : BanksOfAccess(f, dim, e.span),
              std::to_string(*c)};
    }
    const auto* ref = std::get_if<VarRef>(&e.node);
    if (ref == nullptr) {
      Fail(codes::kIndex, e.span,
           "index must be a literal, a loop iterator or a variable; use a "
           "view for computed indices");
    }
    VarInfo* info = Lookup(ref->name);
    if (info == nullptr) UnknownName(ref->name, e.span);
    switch (info->kind) {
      case VarInfo::kIterator: {
        if (info->lo < 0 || info->hi > extent) {
          Fail(codes::kIndex, e.span,
               "iterator '" + ref->name + "' ranges over " +
                   std::to_string(info->lo) + ".." + std::to_string(info->hi) +
                   ", beyond size " + std::to_string(extent));
        }
        int64_t copy = CopyOf(info->loop_id);
        std::string key = ref->name;
        if (info->unroll > 1) key += "#" + std::to_string(copy);
        if (physical) return {{}, key};
        IndexForm f{IndexForm::kIterator, 0, IdxType{0, info->unroll}};
        std::set<int64_t> all = BanksOfAccess(f, dim, e.span);
        if (info->unroll > 1) return {{(info->lo + copy) % dim.banks}, key};
        return {all, key};
      }
      case VarInfo::kScalar: {
        if (!info->type.is_bit()) {
          Fail(codes::kType, e.span, "index '" + ref->name + "' must be an integer");
        }
        if (direct && !physical && dim.banks > 1) {
          Fail(codes::kIndex, e.span,
               "variable index '" + ref->name +
                   "' cannot select a bank statically; use a view");
        }
        std::string key = ref->name + "@" + std::to_string(info->version);
        for (int id : info->copy_loops) key += "#" + std::to_string(CopyOf(id));
        if (physical) return {{}, key};
        return {BanksOfAccess(IndexForm{IndexForm::kScalar, 0, {}}, dim, e.span),
                key};
      }
      default:
        BadVarUse(ref->name, *info, e.span);
    }
  }

  [[noreturn]] void UnknownName(const std::string& name, Span span) {
    if (env_.Has(name)) {
      Fail(codes::kType, span,
           "memory '" + name + "' cannot be copied or used as a value");
    }
    Fail(codes::kType, span, "unknown variable '" + name + "'");
  }

  [[noreturn]] void BadVarUse(const std::string& name, const VarInfo& info,
                              Span span) {
    if (info.kind == VarInfo::kCombineReg) {
      Fail(codes::kType, span,
           "combine register '" + name + "' may only be consumed by a reducer");
    }
    Fail(codes::kType, span,
         "iterator '" + name + "' is not available in its own combine block");
  }

  void CheckAccess(const Access& a, Span span, bool write, StepState& st) {
    if (!env_.Has(a.mem)) {
      if (Lookup(a.mem) != nullptr) {
        Fail(codes::kType, span, "'" + a.mem + "' is not a memory");
      }
      Fail(codes::kType, span, "unknown memory '" + a.mem + "'");
    }
    const MemType& type = env_.TypeOf(a.mem);
    const bool is_view = env_.IsView(a.mem);
    const size_t n = type.dims.size();
    BankSets banks(n);
    std::string key = a.mem;
    if (a.physical()) {
      if (is_view) {
        Fail(codes::kView, span, "physical bank access is only supported on memories");
      }
      if ((a.banks.size() != 1 && a.banks.size() != n) ||
          (a.indices.size() != 1 && a.indices.size() != n)) {
        Fail(codes::kType, span, "physical access to '" + a.mem +
                                     "' has the wrong number of banks or offsets");
      }
      std::vector<int64_t> bank = a.banks;
      if (bank.size() == 1 && n > 1) {
        if (bank[0] < 0 || bank[0] >= type.FlatBanks()) {
          Fail(codes::kIndex, span, "bank " + std::to_string(bank[0]) +
                                        " does not exist in '" + a.mem + "'");
        }
        bank = UnflattenBank(type, bank[0]);
      }
      key += "{";
      for (size_t d = 0; d < n; ++d) {
        if (bank[d] < 0 || bank[d] >= type.dims[d].banks) {
          Fail(codes::kIndex, span, "bank " + std::to_string(bank[d]) +
                                        " does not exist in '" + a.mem + "'");
        }
        banks[d] = {bank[d]};
        key += (d ? "," : "") + std::to_string(bank[d]);
      }
      key += "}";
      int64_t flat_extent = type.TotalSize() / type.FlatBanks();
      for (size_t d = 0; d < a.indices.size(); ++d) {
        int64_t extent = a.indices.size() == 1
                             ? flat_extent
                             : type.dims[d].size / type.dims[d].banks;
        DimAccess da = IndexAccess(*a.indices[d], type.dims[std::min(d, n - 1)],
                                   extent, true, true);
        key += "[" + da.key + "]";
      }
    } else {
      if (a.indices.size() != n) {
        Fail(codes::kType, span, "'" + a.mem + "' has " + std::to_string(n) +
                                     " dimensions, accessed with " +
                                     std::to_string(a.indices.size()));
      }
      for (size_t d = 0; d < n; ++d) {
        DimAccess da = IndexAccess(*a.indices[d], type.dims[d],
                                   type.dims[d].size, !is_view, false);
        banks[d] = std::move(da.banks);
        key += "[" + da.key + "]";
      }
    }
    Acquire(a.mem, key, banks, write, span, st);
  }

  void Acquire(const std::string& name, const std::string& key,
               const BankSets& banks, bool write, Span span, StepState& st) {
    const std::string& root = env_.RootOf(name);
    auto path = st.paths.find(root);
    if (path != st.paths.end() && path->second != name) {
      std::string other = path->second == kConflictPath
                              ? "another path"
                              : "'" + path->second + "'";
      Fail(codes::kConsumed, span,
           "'" + root + "' was already accessed through " + other +
               " in this time step");
    }
    auto cap = st.caps.find(key);
    if (cap != st.caps.end()) {
      if (!write && !cap->second.write) return;
      if (write && cap->second.write) {
        Fail(codes::kWriteCap, span,
             "insufficient write capabilities: '" + key +
                 "' is written twice in one time step");
      }
      Fail(codes::kConsumed, span,
           "'" + key + "' is both read and written in one time step");
    }
    const MemType& root_type = env_.TypeOf(root);
    const std::string via = name == root ? "" : name;
    std::string domain = env_.CreditDomain(name);
    if (domain != root) {
      if (!st.claimed.count(domain)) {
        for (int64_t b = 0; b < root_type.FlatBanks(); ++b) {
          Consume(st.used, root, root_type.FlatBanks(), root_type.ports, b,
                  span, domain);
        }
        st.claimed.insert(domain);
      }
      const MemType& dtype = env_.TypeOf(domain);
      BankSets db = MapBanksDown(env_, name, domain, banks);
      for (int64_t b : FlatBankSet(dtype, db)) {
        Consume(st.view_used, domain, dtype.FlatBanks(), 1, b, span, "");
      }
    } else {
      BankSets rb = MapBanksDown(env_, name, root, banks);
      for (int64_t b : FlatBankSet(root_type, rb)) {
        Consume(st.used, root, root_type.FlatBanks(), root_type.ports, b, span,
                via);
      }
    }
    st.paths[root] = name;
    st.caps[key] = CapInfo{write, root};
    if (write) st.written.insert(root);
  }

  // ---- expressions ----

  ScalarType CheckExpr(const Expr& e, StepState& st, const ExprMode& mode) {
    if (const auto* lit = std::get_if<NumLit>(&e.node)) {
      return lit->is_float ? ScalarType::Float() : ScalarType::Bit(32);
    }
    if (std::holds_alternative<BoolLit>(e.node)) return ScalarType::Bool();
    if (const auto* ref = std::get_if<VarRef>(&e.node)) {
      VarInfo* info = Lookup(ref->name);
      if (info == nullptr) UnknownName(ref->name, e.span);
      switch (info->kind) {
        case VarInfo::kScalar:
          return info->type;
        case VarInfo::kIterator:
          return ScalarType::Bit(32);
        case VarInfo::kCombineReg:
          if (!mode.allow_regs) BadVarUse(ref->name, *info, e.span);
          if (mode.saw_reg != nullptr) *mode.saw_reg = true;
          return info->type;
        case VarInfo::kHidden:
          BadVarUse(ref->name, *info, e.span);
      }
    }
    if (const auto* bin = std::get_if<Binary>(&e.node)) {
      ScalarType l = CheckExpr(*bin->lhs, st, mode);
      ScalarType r = CheckExpr(*bin->rhs, st, mode);
      std::optional<ScalarType> t = BinOpResultType(bin->op, l, r);
      if (!t) {
        Fail(codes::kType, e.span,
             "operator '" + std::string(BinOpSymbol(bin->op)) +
                 "' does not apply to " + l.ToString() + " and " + r.ToString());
      }
      return *t;
    }
    const auto& access = std::get<Access>(e.node);
    if (!mode.allow_mem) {
      Fail(codes::kType, e.span,
           std::string("memory reads are not allowed in ") + mode.context);
    }
    CheckAccess(access, e.span, false, st);
    return env_.TypeOf(access.mem).elem;
  }

  ScalarType CheckCondition(const Expr& cond, StepState& st) {
    ScalarType t = CheckExpr(cond, st, ExprMode{false, false, nullptr, "conditions"});
    if (t.kind != ScalarKind::kBool) {
      Fail(codes::kType, cond.span, "condition must be bool, found " + t.ToString());
    }
    return t;
  }

  void CheckAssignable(const std::string& name, Span span, VarInfo*& out) {
    VarInfo* info = Lookup(name);
    if (info == nullptr) UnknownName(name, span);
    if (info->kind != VarInfo::kScalar) {
      if (info->kind == VarInfo::kIterator) {
        Fail(codes::kType, span, "cannot assign to iterator '" + name + "'");
      }
      BadVarUse(name, *info, span);
    }
    if (info->copy_loops != CurrentCopyLoops()) {
      Fail(codes::kType, span,
           "cannot assign to '" + name +
               "' from inside an unrolled loop it was not declared in");
    }
    out = info;
  }

  // ---- commands ----

  void CheckCmd(const Cmd& c, StepState& st) {
    if (const auto* let = std::get_if<Let>(&c.node)) {
      CheckFreshName(let->name, c.span);
      ScalarType t;
      ForEachCopy([&] { t = CheckExpr(*let->init, st, ExprMode{}); });
      if (let->type) {
        if (!Compatible(*let->type, t)) {
          Fail(codes::kType, c.span, "cannot initialize " + let->type->ToString() +
                                         " '" + let->name + "' with " + t.ToString());
        }
        t = *let->type;
      }
      VarInfo info;
      info.type = t;
      info.copy_loops = CurrentCopyLoops();
      scopes_.back().vars[let->name] = info;
    } else if (const auto* mem = std::get_if<MemDecl>(&c.node)) {
      if (depth_ > 0) {
        Fail(codes::kType, c.span, "memories must be declared at the top level");
      }
      if (env_.Has(mem->name) || Lookup(mem->name) != nullptr) {
        Fail(codes::kType, c.span, "'" + mem->name + "' is already defined");
      }
      for (const BankSpec& d : mem->type.dims) {
        if (d.size % d.banks != 0) {
          Fail(codes::kDivides, c.span,
               "banking factor " + std::to_string(d.banks) +
                   " does not divide size " + std::to_string(d.size));
        }
      }
      env_.AddMemory(mem->name, mem->type);
      report_.memories.emplace_back(mem->name, mem->type);
    } else if (const auto* view = std::get_if<ViewDecl>(&c.node)) {
      if (!unroll_.empty()) {
        Fail(codes::kView, c.span,
             "views cannot be declared inside unrolled loops; use a split view");
      }
      if (env_.Has(view->name) || Lookup(view->name) != nullptr) {
        Fail(codes::kType, c.span, "'" + view->name + "' is already defined");
      }
      ViewInfo info = CheckViewDecl(*view, c.span, env_);
      for (const ExprPtr& off : info.offsets) {
        ScalarType t =
            CheckExpr(*off, st, ExprMode{false, false, nullptr, "view offsets"});
        if (!t.is_bit()) {
          Fail(codes::kType, off->span, "view offset must be an integer");
        }
      }
      env_.AddView(info);
      scopes_.back().views.push_back(view->name);
      report_.views.push_back(info);
    } else if (const auto* par = std::get_if<Par>(&c.node)) {
      for (const CmdPtr& item : par->cmds) CheckCmd(*item, st);
    } else if (const auto* seq = std::get_if<Seq>(&c.node)) {
      StepState entry = st;
      std::vector<StepState> parts;
      for (const CmdPtr& part : seq->cmds) {
        StepState s = Fresh(entry);
        CheckCmd(*part, s);
        RecordStep(part->span, s);
        parts.push_back(std::move(s));
      }
      st = Merge(entry, parts, true);
    } else if (const auto* block = std::get_if<Block>(&c.node)) {
      ++depth_;
      PushScope();
      CheckCmd(*block->body, st);
      PopScope();
      --depth_;
    } else if (const auto* loop = std::get_if<For>(&c.node)) {
      CheckFor(*loop, c.span, st);
    } else if (const auto* w = std::get_if<While>(&c.node)) {
      if (!unroll_.empty()) {
        Fail(codes::kType, c.span, "while loops cannot appear inside unrolled loops");
      }
      CheckCondition(*w->cond, st);
      ++depth_;
      StepState entry = st;
      StepState body = Fresh(entry);
      PushScope();
      CheckCmd(*w->body, body);
      PopScope();
      RecordStep(w->body->span, body);
      st = Merge(entry, {body}, true);
      --depth_;
    } else if (const auto* i = std::get_if<If>(&c.node)) {
      if (!unroll_.empty() && !pinned_) {
        if (HasTimeStructure(*i->then_branch) ||
            (i->else_branch && HasTimeStructure(*i->else_branch))) {
          Fail(codes::kType, c.span,
               "conditionals inside unrolled loops cannot contain '---' or loops");
        }
        ForEachCopy([&] {
          pinned_ = true;
          CheckIf(*i, st);
          pinned_ = false;
        });
      } else {
        CheckIf(*i, st);
      }
    } else if (const auto* a = std::get_if<Assign>(&c.node)) {
      VarInfo* info = nullptr;
      CheckAssignable(a->name, c.span, info);
      ForEachCopy([&] {
        ScalarType t = CheckExpr(*a->value, st, ExprMode{});
        if (!Compatible(info->type, t)) {
          Fail(codes::kType, c.span, "cannot assign " + t.ToString() + " to " +
                                         info->type.ToString() + " '" + a->name + "'");
        }
      });
      ++info->version;
    } else if (const auto* s = std::get_if<Store>(&c.node)) {
      const auto& target = std::get<Access>(s->target->node);
      ForEachCopy([&] {
        ScalarType t = CheckExpr(*s->value, st, ExprMode{});
        CheckAccess(target, s->target->span, true, st);
        ScalarType elem = env_.TypeOf(target.mem).elem;
        if (!Compatible(elem, t)) {
          Fail(codes::kType, c.span, "cannot store " + t.ToString() + " into " +
                                         elem.ToString() + " memory");
        }
      });
    } else if (const auto* r = std::get_if<Reduce>(&c.node)) {
      CheckCompound(*r, c.span, st);
    } else if (const auto* es = std::get_if<ExprStmt>(&c.node)) {
      ForEachCopy([&] { CheckExpr(*es->expr, st, ExprMode{}); });
    }
  }

  void CheckIf(const If& i, StepState& st) {
    CheckCondition(*i.cond, st);
    StepState entry = st;
    ++depth_;
    StepState then_state = entry;
    PushScope();
    CheckCmd(*i.then_branch, then_state);
    PopScope();
    StepState else_state = entry;
    if (i.else_branch) {
      PushScope();
      CheckCmd(*i.else_branch, else_state);
      PopScope();
    }
    --depth_;
    StepState out = Merge(entry, {then_state, else_state}, true);
    MaxInto(out.view_used, then_state.view_used);
    MaxInto(out.view_used, else_state.view_used);
    out.claimed.insert(then_state.claimed.begin(), then_state.claimed.end());
    out.claimed.insert(else_state.claimed.begin(), else_state.claimed.end());
    for (const StepState* b : {&then_state, &else_state}) {
      for (const auto& [root, path] : b->paths) {
        auto [it, inserted] = out.paths.emplace(root, path);
        if (!inserted && it->second != path) it->second = kConflictPath;
      }
    }
    st = std::move(out);
  }

  // `x op= e` or `A[i] op= e` outside combine blocks.
  void CheckCompound(const Reduce& r, Span span, StepState& st) {
    if (const auto* ref = std::get_if<VarRef>(&r.target->node)) {
      VarInfo* info = nullptr;
      CheckAssignable(ref->name, span, info);
      ForEachCopy([&] {
        ScalarType t = CheckExpr(*r.value, st, ExprMode{});
        if (!info->type.is_numeric() || !t.is_numeric()) {
          Fail(codes::kType, span, "reducers apply to numeric values only");
        }
      });
      ++info->version;
      return;
    }
    const auto& target = std::get<Access>(r.target->node);
    ForEachCopy([&] {
      CheckExpr(*r.value, st, ExprMode{});
      CheckAccess(target, r.target->span, false, st);
      CheckAccess(target, r.target->span, true, st);
    });
  }

  void CheckFor(const For& loop, Span span, StepState& st) {
    IteratorIndexType(loop.lo, loop.hi, loop.unroll, span);
    if (pinned_) {
      Fail(codes::kType, span,
           "conditionals inside unrolled loops cannot contain loops");
    }
    report_.loops.push_back({loop.iter, loop.lo, loop.hi, loop.unroll, span});
    int id = next_loop_id_++;
    ++depth_;
    PushScope();
    VarInfo iter;
    iter.kind = VarInfo::kIterator;
    iter.type = ScalarType::Bit(32);
    iter.copy_loops = CurrentCopyLoops();
    iter.loop_id = id;
    iter.lo = loop.lo;
    iter.hi = loop.hi;
    iter.unroll = loop.unroll;
    scopes_.back().vars[loop.iter] = iter;
    bool unrolled = loop.unroll > 1;
    if (unrolled) {
      unroll_.push_back({id, loop.unroll});
      copy_.push_back(0);
    }
    StepState entry = st;
    StepState body = Fresh(entry);
    PushScope();
    CheckCmd(*loop.body, body);
    RecordStep(loop.body->span, body);
    std::map<std::string, VarInfo> body_vars = scopes_.back().vars;
    PopScope();
    if (unrolled) {
      unroll_.pop_back();
      copy_.pop_back();
    }
    std::vector<StepState> parts{body};
    if (loop.combine) {
      PushScope();
      if (unrolled) {
        VarInfo hidden;
        hidden.kind = VarInfo::kHidden;
        scopes_.back().vars[loop.iter] = hidden;
      }
      for (auto& [name, info] : body_vars) {
        if (info.kind != VarInfo::kScalar) continue;
        VarInfo reg = info;
        reg.kind = VarInfo::kCombineReg;
        scopes_.back().vars[name] = reg;
      }
      StepState comb = Fresh(entry);
      CheckCombine(*loop.combine, comb);
      RecordStep(loop.combine->span, comb);
      parts.push_back(std::move(comb));
      PopScope();
    }
    PopScope();
    --depth_;
    st = Merge(entry, parts, true);
  }

  void CheckCombine(const Cmd& c, StepState& st) {
    if (const auto* par = std::get_if<Par>(&c.node)) {
      for (const CmdPtr& item : par->cmds) CheckCombine(*item, st);
      return;
    }
    if (const auto* block = std::get_if<Block>(&c.node)) {
      CheckCombine(*block->body, st);
      return;
    }
    if (std::holds_alternative<Skip>(c.node)) return;
    const auto* r = std::get_if<Reduce>(&c.node);
    if (r == nullptr) {
      Fail(codes::kType, c.span, "combine blocks may only contain reducers");
    }
    VarInfo* scalar_target = nullptr;
    if (const auto* ref = std::get_if<VarRef>(&r->target->node)) {
      scalar_target = Lookup(ref->name);
      if (scalar_target == nullptr) UnknownName(ref->name, r->target->span);
      if (scalar_target->kind != VarInfo::kScalar) {
        Fail(codes::kType, r->target->span,
             "reducer target '" + ref->name + "' must be a variable declared outside the loop");
      }
      if (!scalar_target->type.is_numeric()) {
        Fail(codes::kType, c.span, "reducers apply to numeric values only");
      }
    }
    ForEachCopy([&] {
      bool saw_reg = false;
      ScalarType t = CheckExpr(
          *r->value, st, ExprMode{false, true, &saw_reg, "reducer operands"});
      if (!saw_reg) {
        Fail(codes::kType, r->value->span,
             "a reducer in a combine block must consume a combine register");
      }
      if (!t.is_numeric()) {
        Fail(codes::kType, c.span, "reducers apply to numeric values only");
      }
      if (scalar_target == nullptr) {
        const auto& target = std::get<Access>(r->target->node);
        CheckAccess(target, r->target->span, true, st);
        if (!env_.TypeOf(target.mem).elem.is_numeric()) {
          Fail(codes::kType, c.span, "reducers apply to numeric values only");
        }
      }
    });
    if (scalar_target != nullptr) ++scalar_target->version;
  }

  MemoryEnv env_;
  std::vector<Scope> scopes_;
  std::vector<UnrollCtx> unroll_;
  std::vector<int64_t> copy_;
  bool pinned_ = false;
  int depth_ = 0;
  int next_loop_id_ = 0;
  AcceptReport report_;
};

nlohmann::json MemTypeJson(const MemType& t) {
  nlohmann::json dims = nlohmann::json::array();
  for (const BankSpec& d : t.dims) dims.push_back({{"size", d.size}, {"banks", d.banks}});
  return {{"element", t.elem.ToString()},
          {"dims", dims},
          {"ports", t.ports},
          {"flat_banks", t.FlatBanks()}};
}

}  // namespace

std::string AcceptReport::ToJson() const {
  nlohmann::json out;
  out["memories"] = nlohmann::json::array();
  for (const auto& [name, type] : memories) {
    nlohmann::json m = MemTypeJson(type);
    m["name"] = name;
    out["memories"].push_back(m);
  }
  out["views"] = nlohmann::json::array();
  for (const ViewInfo& v : views) {
    nlohmann::json j = MemTypeJson(v.type);
    j["name"] = v.name;
    j["kind"] = std::string(ViewKindName(v.kind));
    j["underlying"] = v.underlying;
    j["root"] = v.root;
    out["views"].push_back(j);
  }
  out["loops"] = nlohmann::json::array();
  for (const LoopReport& l : loops) {
    out["loops"].push_back({{"iterator", l.iter},
                            {"lo", l.lo},
                            {"hi", l.hi},
                            {"unroll", l.unroll},
                            {"line", l.span.line}});
  }
  out["time_steps"] = nlohmann::json::array();
  for (const StepReport& s : steps) {
    nlohmann::json uses = nlohmann::json::array();
    for (const BankUse& u : s.uses) {
      uses.push_back({{"memory", u.memory},
                      {"bank", u.bank},
                      {"used", u.used},
                      {"ports", u.ports}});
    }
    out["time_steps"].push_back(
        {{"line", s.span.line}, {"col", s.span.col}, {"banks", uses}});
  }
  return out.dump(2);
}

CheckResult CheckProgram(const Program& program) {
  return Checker().Run(program);
}

}  // namespace fuse
