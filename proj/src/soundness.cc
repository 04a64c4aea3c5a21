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

#include "fuse/soundness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <random>
#include <thread>

#include "json.hpp"

#include "fuse/core/check.h"
#include "fuse/core/printer.h"
#include "fuse/elaborate.h"
#include "fuse/surface_gen.h"

namespace fuse::soundness {

using core::CmdPtr;
using core::ExprPtr;
using core::Gamma;
using core::Delta;

namespace {

class Generator {
 public:
  explicit Generator(const GenConfig& config)
      : config_(config), rng_(config.seed) {}

  GeneratedProgram Run() {
    GeneratedProgram out;
    int memories = 1 + static_cast<int>(Below(config_.max_memories));
    for (int i = 0; i < memories; ++i) {
      core::MemDecl m;
      m.name = "m" + std::to_string(i);
      m.elem = NumericType();
      m.size = 1 + static_cast<int64_t>(Below(config_.max_memory_size));
      m.store = m.name;
      out.program.memories.push_back(m);
    }
    if (Chance(0.3)) {
      core::MemDecl alias = out.program.memories[Below(memories)];
      alias.name = alias.store + "_p1";
      out.program.memories.push_back(alias);
    }
    program_ = &out.program;
    Gamma gamma;
    Delta delta;
    for (const core::MemDecl& m : out.program.memories) delta.insert(m.name);
    out.program.body = GenCmd(gamma, delta, config_.max_depth);
    out.init = core::Store::ForProgram(out.program);
    for (const core::MemDecl& m : out.program.memories) {
      if (m.store != m.name) continue;
      for (Value& v : out.init.Memory(m.name)) v = RandomValue(m.elem);
    }
    return out;
  }

 private:
  uint64_t Below(uint64_t n) { return n == 0 ? 0 : rng_() % n; }
  bool Chance(double p) {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p;
  }
  std::string Fresh(const char* prefix) {
    return prefix + std::to_string(fresh_++);
  }

  ScalarType NumericType() {
    switch (Below(3)) {
      case 0: return ScalarType::Bit(8);
      case 1: return ScalarType::Float();
      default: return ScalarType::Bit(32);
    }
  }

  Value RandomValue(ScalarType t) {
    if (t.kind == ScalarKind::kFloat) {
      return Value::Float(static_cast<double>(Below(2001)) / 8.0 - 125.0);
    }
    if (t.kind == ScalarKind::kBool) return Value::Bool(Chance(0.5));
    return Value::Bit(static_cast<int64_t>(Below(201)) - 100, t.width);
  }

  ExprPtr Literal(ScalarType t) { return core::MakeVal(RandomValue(t)); }

  std::vector<std::string> VarsWhere(const Gamma& gamma, bool want_bool,
                                     bool assignable) const {
    std::vector<std::string> out;
    for (const auto& [name, type] : gamma) {
      if ((type.kind == ScalarKind::kBool) != want_bool) continue;
      if (assignable && protected_.count(name)) continue;
      out.push_back(name);
    }
    return out;
  }

  ExprPtr Index(const Gamma& gamma, int64_t size) {
    std::vector<std::string> live;
    for (const std::string& k : counters_) {
      if (gamma.count(k)) live.push_back(k);
    }
    if (!live.empty() && Chance(0.5)) {
      return core::MakeBop(BinOp::kMod, core::MakeVar(live[Below(live.size())]),
                           core::MakeInt(size));
    }
    return core::MakeInt(static_cast<int64_t>(Below(size)));
  }

  std::pair<ExprPtr, ScalarType> Numeric(const Gamma& gamma, Delta& delta,
                                         int depth) {
    uint64_t choice = Below(depth > 0 ? 5 : 3);
    if (choice == 1) {
      std::vector<std::string> vars = VarsWhere(gamma, false, false);
      if (!vars.empty()) {
        const std::string& v = vars[Below(vars.size())];
        return {core::MakeVar(v), gamma.at(v)};
      }
    }
    if (choice == 2 && !delta.empty()) {
      auto it = delta.begin();
      std::advance(it, Below(delta.size()));
      const core::MemDecl* m = program_->FindMemory(*it);
      ExprPtr index = Index(gamma, m->size);
      delta.erase(it);
      return {core::MakeRead(m->name, index), m->elem};
    }
    if (choice == 3) {
      auto [lhs, lt] = Numeric(gamma, delta, depth - 1);
      auto [rhs, rt] = Numeric(gamma, delta, depth - 1);
      static constexpr BinOp kOps[] = {BinOp::kAdd, BinOp::kSub, BinOp::kMul};
      BinOp op = kOps[Below(3)];
      return {core::MakeBop(op, lhs, rhs), *BinOpResultType(op, lt, rt)};
    }
    if (choice == 4) {
      auto [lhs, lt] = Numeric(gamma, delta, depth - 1);
      if (lt.is_bit()) {
        BinOp op = Chance(0.5) ? BinOp::kDiv : BinOp::kMod;
        ExprPtr rhs = core::MakeInt(1 + static_cast<int64_t>(Below(7)));
        return {core::MakeBop(op, lhs, rhs),
                *BinOpResultType(op, lt, ScalarType::Bit(32))};
      }
      ExprPtr rhs = core::MakeVal(Value::Float(0.5 * (1 + Below(4))));
      return {core::MakeBop(BinOp::kDiv, lhs, rhs), ScalarType::Float()};
    }
    ScalarType t = NumericType();
    return {Literal(t), t};
  }

  ExprPtr Boolean(const Gamma& gamma, Delta& delta, int depth) {
    uint64_t choice = Below(depth > 0 ? 4 : 2);
    if (choice == 1) {
      std::vector<std::string> vars = VarsWhere(gamma, true, false);
      if (!vars.empty()) return core::MakeVar(vars[Below(vars.size())]);
    }
    if (choice == 2) {
      static constexpr BinOp kOps[] = {BinOp::kEq, BinOp::kNe, BinOp::kLt,
                                       BinOp::kLe, BinOp::kGt, BinOp::kGe};
      ExprPtr lhs = Numeric(gamma, delta, depth - 1).first;
      ExprPtr rhs = Numeric(gamma, delta, depth - 1).first;
      return core::MakeBop(kOps[Below(6)], lhs, rhs);
    }
    if (choice == 3) {
      ExprPtr lhs = Boolean(gamma, delta, depth - 1);
      ExprPtr rhs = Boolean(gamma, delta, depth - 1);
      return core::MakeBop(Chance(0.5) ? BinOp::kAnd : BinOp::kOr, lhs, rhs);
    }
    return core::MakeBool(Chance(0.5));
  }

  std::pair<ExprPtr, ScalarType> AnyExpr(const Gamma& gamma, Delta& delta,
                                         int depth) {
    if (Chance(0.2)) {
      return {Boolean(gamma, delta, depth), ScalarType::Bool()};
    }
    return Numeric(gamma, delta, depth);
  }

  CmdPtr Simple(Gamma& gamma, Delta& delta) {
    switch (Below(6)) {
      case 0:
      case 1: {
        auto [e, t] = AnyExpr(gamma, delta, 2);
        std::string name = Fresh("v");
        gamma[name] = t;
        return core::MakeLet(name, e);
      }
      case 2: {
        bool want_bool = Chance(0.2);
        std::vector<std::string> vars = VarsWhere(gamma, want_bool, true);
        if (vars.empty()) break;
        const std::string& v = vars[Below(vars.size())];
        ExprPtr e = want_bool ? Boolean(gamma, delta, 2)
                              : Numeric(gamma, delta, 2).first;
        return core::MakeAssign(v, e);
      }
      case 3:
      case 4: {
        if (delta.empty()) break;
        auto it = delta.begin();
        std::advance(it, Below(delta.size()));
        const core::MemDecl* m = program_->FindMemory(*it);
        delta.erase(it);
        ExprPtr index = Index(gamma, m->size);
        ExprPtr value = Numeric(gamma, delta, 2).first;
        return core::MakeWrite(m->name, index, value);
      }
      default:
        break;
    }
    if (Chance(0.5)) return core::MakeSkip();
    return core::MakeExprCmd(AnyExpr(gamma, delta, 1).first);
  }

  CmdPtr GenIf(Gamma& gamma, Delta& delta, int depth) {
    std::string cond = Fresh("c");
    CmdPtr let = core::MakeLet(cond, Boolean(gamma, delta, 2));
    gamma[cond] = ScalarType::Bool();
    Gamma g1 = gamma, g2 = gamma;
    Delta d1 = delta, d2 = delta;
    CmdPtr then_branch = GenCmd(g1, d1, depth - 1);
    CmdPtr else_branch = Chance(0.3) ? core::MakeSkip()
                                     : GenCmd(g2, d2, depth - 1);
    gamma.clear();
    for (const auto& [name, type] : g1) {
      auto it = g2.find(name);
      if (it != g2.end() && it->second == type) gamma.emplace(name, type);
    }
    Delta both;
    for (const std::string& m : d1) {
      if (d2.count(m)) both.insert(m);
    }
    delta = both;
    return core::MakePar(let, core::MakeIf(cond, then_branch, else_branch));
  }

  CmdPtr GenWhile(Gamma& gamma, Delta& delta, int depth) {
    std::string k = Fresh("k");
    std::string w = Fresh("w");
    int64_t trips = 1 + static_cast<int64_t>(Below(config_.max_loop_trips));
    protected_.insert(k);
    protected_.insert(w);
    counters_.push_back(k);
    auto test = [&] {
      return core::MakeBop(BinOp::kLt, core::MakeVar(k), core::MakeInt(trips));
    };
    CmdPtr init = core::MakePar(core::MakeLet(k, core::MakeInt(0)),
                                core::MakeLet(w, test()));
    gamma[k] = ScalarType::Bit(32);
    gamma[w] = ScalarType::Bool();
    Gamma body_gamma = gamma;
    CmdPtr body = GenCmd(body_gamma, delta, depth - 1);
    CmdPtr step = core::MakePar(
        core::MakeAssign(k, core::MakeBop(BinOp::kAdd, core::MakeVar(k),
                                          core::MakeInt(1))),
        core::MakeAssign(w, test()));
    return core::MakePar(init,
                         core::MakeWhile(w, core::MakeSeq(body, step)));
  }

  CmdPtr GenCmd(Gamma& gamma, Delta& delta, int depth) {
    if (depth <= 0) return Simple(gamma, delta);
    if (Chance(config_.while_probability)) {
      return GenWhile(gamma, delta, depth);
    }
    switch (Below(6)) {
      case 0: {
        CmdPtr first = GenCmd(gamma, delta, depth - 1);
        CmdPtr second = GenCmd(gamma, delta, depth - 1);
        return core::MakePar(first, second);
      }
      case 1:
      case 2: {
        Delta d1 = delta, d2 = delta;
        CmdPtr first = GenCmd(gamma, d1, depth - 1);
        CmdPtr second = GenCmd(gamma, d2, depth - 1);
        delta.clear();
        for (const std::string& m : d1) {
          if (d2.count(m)) delta.insert(m);
        }
        return core::MakeSeq(first, second);
      }
      case 3:
        return GenIf(gamma, delta, depth);
      default:
        return Simple(gamma, delta);
    }
  }

  GenConfig config_;
  std::mt19937_64 rng_;
  const core::Program* program_ = nullptr;
  int fresh_ = 0;
  std::set<std::string> protected_;
  std::vector<std::string> counters_;
};

// Rebuilds `c` with the n-th node (preorder, among nodes matching `pred`)
// replaced by `fn(node)`. `n` is decremented per match and ends negative
// once a replacement happened.
template <typename Pred, typename Fn>
CmdPtr RewriteNth(const CmdPtr& c, const Pred& pred, int& n, const Fn& fn) {
  if (n < 0) return c;
  if (pred(*c) && n-- == 0) return fn(c);
  auto sub = [&](const CmdPtr& child) { return RewriteNth(child, pred, n, fn); };
  if (const auto* x = std::get_if<core::Seq>(&c->node)) {
    CmdPtr a = sub(x->first);
    CmdPtr b = sub(x->second);
    if (a == x->first && b == x->second) return c;
    return core::MakeSeq(a, b);
  }
  if (const auto* x = std::get_if<core::Par>(&c->node)) {
    CmdPtr a = sub(x->first);
    CmdPtr b = sub(x->second);
    if (a == x->first && b == x->second) return c;
    return core::MakePar(a, b);
  }
  if (const auto* x = std::get_if<core::InterSeq>(&c->node)) {
    CmdPtr a = sub(x->first);
    CmdPtr b = sub(x->second);
    if (a == x->first && b == x->second) return c;
    return core::MakeInterSeq(a, x->rho, b);
  }
  if (const auto* x = std::get_if<core::If>(&c->node)) {
    CmdPtr a = sub(x->then_branch);
    CmdPtr b = sub(x->else_branch);
    if (a == x->then_branch && b == x->else_branch) return c;
    return core::MakeIf(x->cond, a, b);
  }
  if (const auto* x = std::get_if<core::While>(&c->node)) {
    CmdPtr a = sub(x->body);
    if (a == x->body) return c;
    return core::MakeWhile(x->cond, a);
  }
  return c;
}

bool Agree(const core::RunResult& big, core::Outcome small,
           const core::Store& store, const core::AccessSet& rho) {
  switch (small) {
    case core::Outcome::kCompleted:
      return big.outcome == core::Outcome::kCompleted && big.store == store &&
             big.rho == rho;
    case core::Outcome::kFuelExhausted:
      // Big-step fuel counts loop iterations, small-step fuel counts steps.
      return big.outcome == core::Outcome::kCompleted ||
             big.outcome == core::Outcome::kFuelExhausted;
    default:
      return big.outcome == small;
  }
}

void Count(FuzzReport::Tally& t, const Verdict& v) {
  ++t.programs;
  t.steps += v.steps;
  switch (v.outcome) {
    case core::Outcome::kCompleted: ++t.completed; break;
    case core::Outcome::kStuck: ++t.stuck; break;
    case core::Outcome::kRuntimeError: ++t.runtime_errors; break;
    case core::Outcome::kFuelExhausted: ++t.fuel_exhausted; break;
  }
  if (!v.progress_ok) ++t.progress_violations;
  if (!v.preservation_ok) ++t.preservation_violations;
  if (!v.agree) ++t.disagreements;
}

bool Violates(const Verdict& v) {
  return !v.agree || !v.progress_ok || !v.preservation_ok ||
         v.outcome == core::Outcome::kStuck;
}

std::string ViolationKind(const Verdict& v) {
  if (!v.preservation_ok) return "preservation";
  if (!v.progress_ok) return "progress";
  if (v.outcome == core::Outcome::kStuck) return "stuck";
  return "disagreement";
}

nlohmann::json TallyJson(const FuzzReport::Tally& t) {
  return {{"programs", t.programs},
          {"completed", t.completed},
          {"stuck", t.stuck},
          {"runtime_errors", t.runtime_errors},
          {"fuel_exhausted", t.fuel_exhausted},
          {"progress_violations", t.progress_violations},
          {"preservation_violations", t.preservation_violations},
          {"disagreements", t.disagreements},
          {"steps", t.steps}};
}

uint64_t Mix(uint64_t seed, uint64_t i) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct ItemResult {
  Verdict verdict;
  NegativeControl negative;
  bool core_checked = true;
  std::optional<FuzzFailure> failure;
};

ItemResult FuzzCore(uint64_t seed, int64_t fuel) {
  ItemResult r;
  GenConfig config;
  config.seed = seed;
  config.fuel = fuel;
  GeneratedProgram g = GenerateWellTyped(config);
  if (std::optional<std::string> err = core::CheckProgram(g.program)) {
    r.core_checked = false;
    r.failure = FuzzFailure{seed, "generator", *err,
                            core::PrintProgram(g.program)};
    return r;
  }
  r.verdict = AssertProgressPreservation(g.program, g.init, fuel);
  r.negative = RunNegativeControl(g.program, g.init, fuel);
  if (Violates(r.verdict)) {
    core::Program small = Shrink(g.program, [&](const core::Program& p) {
      return Violates(AssertProgressPreservation(p, g.init, fuel));
    });
    r.failure = FuzzFailure{seed, ViolationKind(r.verdict), r.verdict.violation,
                            core::PrintProgram(small)};
  } else if (r.negative.unsound > 0) {
    r.failure = FuzzFailure{seed, "negative-control",
                            "an accepted mutant got stuck",
                            core::PrintProgram(g.program)};
  }
  return r;
}

ItemResult FuzzSurface(uint64_t seed, int64_t fuel) {
  ItemResult r;
  SurfaceGenConfig config;
  config.seed = seed;
  SurfaceProgram s = GenerateSurface(config);
  Elaboration e;
  try {
    e = Elaborate(s.program);
  } catch (const DiagnosticError& err) {
    r.failure = FuzzFailure{seed, "elaborate", err.what(), s.source};
    r.verdict.agree = false;
    return r;
  }
  core::Store init = core::Store::ForProgram(e.program);
  for (const auto& [mem, data] : s.init) LoadLogical(e, init, mem, data);
  r.core_checked = !core::CheckProgram(e.program).has_value();
  if (r.core_checked) {
    r.verdict = AssertProgressPreservation(e.program, init, fuel);
  } else {
    core::RunResult small = core::SmallStepRun(e.program, init, fuel);
    core::RunResult big = core::BigStep(e.program, init, fuel);
    r.verdict.digest = Digest(e.program);
    r.verdict.outcome = small.outcome;
    r.verdict.steps = small.steps;
    r.verdict.agree = Agree(big, small.outcome, small.store, small.rho);
    r.verdict.violation = small.message;
  }
  if (Violates(r.verdict)) {
    r.failure = FuzzFailure{seed, ViolationKind(r.verdict), r.verdict.violation,
                            s.source};
  }
  return r;
}

// Runs `fn(i)` for i in [0, n) on `jobs` threads.
template <typename Fn>
void ParallelFor(int n, int jobs, const Fn& fn) {
  jobs = std::max(1, std::min(jobs, n));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) fn(i);
  };
  std::vector<std::thread> threads;
  for (int t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
}

}  // namespace

GeneratedProgram GenerateWellTyped(const GenConfig& config) {
  return Generator(config).Run();
}

std::string Digest(const core::Program& program) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : core::PrintProgram(program)) {
    h = (h ^ ch) * 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Verdict AssertProgressPreservation(const core::Program& program,
                                   const core::Store& init, int64_t fuel) {
  Verdict v;
  v.digest = Digest(program);
  core::SmallStepper stepper(program);
  core::Store store = init;
  core::AccessSet rho;
  CmdPtr cmd = program.body;
  while (true) {
    if (std::optional<std::string> err =
            core::CheckResidual(program, store.vars, rho, *cmd)) {
      v.preservation_ok = false;
      v.violation = "after step " + std::to_string(v.steps) + ": " + *err;
      v.residual = cmd;
      break;
    }
    if (core::IsSkip(*cmd)) {
      v.outcome = core::Outcome::kCompleted;
      break;
    }
    if (v.steps >= fuel) {
      v.outcome = core::Outcome::kFuelExhausted;
      break;
    }
    std::string runtime_error, stuck_reason;
    if (!stepper.Step(store, rho, cmd, &runtime_error, &stuck_reason)) {
      if (!runtime_error.empty()) {
        v.outcome = core::Outcome::kRuntimeError;
        v.violation = runtime_error;
      } else {
        v.outcome = core::Outcome::kStuck;
        v.progress_ok = false;
        v.violation = "stuck after step " + std::to_string(v.steps) + ": " +
                      stuck_reason;
        v.residual = cmd;
      }
      break;
    }
    ++v.steps;
  }
  if (v.preservation_ok) {
    v.agree = Agree(core::BigStep(program, init, fuel), v.outcome, store, rho);
    if (!v.agree && v.violation.empty()) {
      v.violation = "big-step and small-step results differ";
    }
  }
  return v;
}

bool CompareSemantics(const core::Program& program, const core::Store& init,
                      int64_t fuel) {
  core::RunResult small = core::SmallStepRun(program, init, fuel);
  return Agree(core::BigStep(program, init, fuel), small.outcome, small.store,
               small.rho);
}

core::Program Shrink(const core::Program& program,
                     const std::function<bool(const core::Program&)>& fails) {
  core::Program current = program;
  auto any = [](const core::Cmd& c) { return !core::IsSkip(c); };
  int i = 0;
  while (i < core::Size(*current.body)) {
    int n = i;
    core::Program candidate = current;
    candidate.body = RewriteNth(current.body, any, n,
                                [](const CmdPtr&) { return core::MakeSkip(); });
    if (n < 0 && !core::CheckProgram(candidate).has_value() &&
        fails(candidate)) {
      current = candidate;
    } else {
      ++i;
    }
  }
  return current;
}

CmdPtr SwapSeqToPar(const CmdPtr& cmd, int n) {
  auto is_seq = [](const core::Cmd& c) {
    return std::holds_alternative<core::Seq>(c.node);
  };
  CmdPtr out = RewriteNth(cmd, is_seq, n, [](const CmdPtr& c) {
    const auto& s = std::get<core::Seq>(c->node);
    return core::MakePar(s.first, s.second);
  });
  return n < 0 ? out : nullptr;
}

NegativeControl RunNegativeControl(const core::Program& program,
                                   const core::Store& init, int64_t fuel,
                                   int max_mutants) {
  NegativeControl nc;
  for (int n = 0; n < max_mutants; ++n) {
    CmdPtr body = SwapSeqToPar(program.body, n);
    if (body == nullptr) break;
    core::Program mutant = program;
    mutant.body = body;
    ++nc.mutants;
    if (core::CheckProgram(mutant).has_value()) {
      ++nc.rejected;
      continue;
    }
    core::RunResult r = core::SmallStepRun(mutant, init, fuel);
    if (r.outcome == core::Outcome::kStuck) {
      ++nc.unsound;
    } else {
      ++nc.completed;
    }
  }
  return nc;
}

bool FuzzReport::ok() const {
  auto clean = [](const Tally& t) {
    return t.stuck == 0 && t.progress_violations == 0 &&
           t.preservation_violations == 0 && t.disagreements == 0;
  };
  return clean(core) && clean(elaborated) && negative.unsound == 0 &&
         failures.empty();
}

std::string FuzzReport::ToJson() const {
  nlohmann::json j;
  j["ok"] = ok();
  j["seconds"] = seconds;
  j["core"] = TallyJson(core);
  j["elaborated"] = TallyJson(elaborated);
  j["elaborated"]["core_checked"] = elaborated_core_checked;
  j["negative_control"] = {{"mutants", negative.mutants},
                           {"rejected", negative.rejected},
                           {"completed", negative.completed},
                           {"unsound", negative.unsound}};
  j["failures"] = nlohmann::json::array();
  for (const FuzzFailure& f : failures) {
    j["failures"].push_back({{"seed", f.seed},
                             {"kind", f.kind},
                             {"message", f.message},
                             {"program", f.program}});
  }
  return j.dump(2);
}

FuzzReport RunFuzz(const FuzzOptions& options) {
  auto start = std::chrono::steady_clock::now();
  int total = options.count + options.surface_count;
  std::vector<ItemResult> results(std::max(total, 0));
  ParallelFor(total, options.jobs, [&](int i) {
    if (i < options.count) {
      results[i] = FuzzCore(Mix(options.seed, i), options.fuel);
    } else {
      results[i] = FuzzSurface(Mix(options.seed ^ 0x5u, i - options.count),
                               options.fuel);
    }
  });
  FuzzReport report;
  constexpr size_t kMaxFailures = 20;
  for (int i = 0; i < total; ++i) {
    const ItemResult& r = results[i];
    bool surface = i >= options.count;
    Count(surface ? report.elaborated : report.core, r.verdict);
    if (surface && r.core_checked) ++report.elaborated_core_checked;
    report.negative.mutants += r.negative.mutants;
    report.negative.rejected += r.negative.rejected;
    report.negative.completed += r.negative.completed;
    report.negative.unsound += r.negative.unsound;
    if (r.failure && report.failures.size() < kMaxFailures) {
      report.failures.push_back(*r.failure);
    }
  }
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

}  // namespace fuse::soundness
