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

#include "support/criteria.h"

#include <chrono>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "fuse/core/eval.h"
#include "fuse/diagnostic.h"
#include "fuse/dse.h"
#include "fuse/elaborate.h"
#include "fuse/parser.h"
#include "fuse/soundness.h"
#include "fuse/typecheck.h"
#include "support/oracles.h"
#include "support/reference_eval.h"

namespace fuse::testing {

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(double seconds) {
  std::ostringstream s;
  s.precision(3);
  s << seconds << " s";
  return s.str();
}

uint64_t SeedFor(uint64_t seed, uint64_t i) {
  return seed * 0x9E3779B97F4A7C15ull + i * 0xBF58476D1CE4E5B9ull + 1;
}

std::optional<Program> ParseChecked(const std::string& source,
                                    std::string* error) {
  ParseResult parsed = ParseProgram(source);
  if (!parsed.ok()) {
    *error = "parse error";
    return std::nullopt;
  }
  CheckResult checked = CheckProgram(*parsed.program);
  if (!checked.ok) {
    *error = checked.diagnostics.empty() ? "rejected"
                                         : checked.diagnostics[0].code;
    return std::nullopt;
  }
  return *parsed.program;
}

std::vector<int64_t> Divisors(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t d = 1; d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

struct ViewCase {
  std::string prelude;  // lets and the view declaration
  std::string access;
  int64_t element = 0;
};

std::vector<ViewCase> ViewCases(int64_t n, int64_t b) {
  std::vector<ViewCase> out;
  auto s = [](int64_t v) { return std::to_string(v); };
  for (int64_t f : Divisors(b)) {
    for (int64_t k = 0; k < n; ++k) {
      out.push_back({"view v = shrink A[by " + s(f) + "];\n", "v[" + s(k) + "]", k});
    }
  }
  for (int64_t t = 0; b * t < n; ++t) {
    for (int64_t k = 0; b * t + k < n; ++k) {
      out.push_back({"let t = " + s(t) + ";\nview v = suffix A[by " + s(b) +
                         " * t];\n",
                     "v[" + s(k) + "]", b * t + k});
    }
  }
  for (int64_t off = 0; off < n; ++off) {
    for (int64_t k = 0; off + k < n; ++k) {
      out.push_back({"let s = " + s(off) + ";\nview v = shift A[by s];\n",
                     "v[" + s(k) + "]", off + k});
    }
  }
  for (int64_t w : Divisors(b)) {
    for (int64_t j = 0; j < w; ++j) {
      for (int64_t i = 0; i < n / w; ++i) {
        out.push_back({"view v = split A[by " + s(w) + "];\n",
                       "v[" + s(j) + "][" + s(i) + "]", w * i + j});
      }
    }
  }
  return out;
}

// Runs one view access with bank q holding 1000 * q + offset at each offset.
std::optional<std::string> RunViewCase(int64_t n, int64_t b,
                                       const ViewCase& c) {
  std::string source = "let A: bit<32>[" + std::to_string(n) + " bank " +
                       std::to_string(b) + "];\nlet R: bit<32>[1];\n" +
                       c.prelude + "R[0] := " + c.access + ";\n";
  std::string error;
  std::optional<Program> program = ParseChecked(source, &error);
  if (!program) return error + " for\n" + source;
  Elaboration e = Elaborate(*program);
  core::Store store = core::Store::ForProgram(e.program);
  const BankedMemory* a = e.Find("A");
  for (int64_t q = 0; q < b; ++q) {
    std::vector<Value>& bank = store.Memory(BankMemoryName("A", a->type, q));
    for (size_t o = 0; o < bank.size(); ++o) {
      bank[o] = Value::Bit(1000 * q + static_cast<int64_t>(o), 32);
    }
  }
  core::RunResult r = core::SmallStepRun(e.program, store, 100000);
  if (r.outcome != core::Outcome::kCompleted) {
    return std::string(core::OutcomeName(r.outcome)) + " for\n" + source;
  }
  int64_t got = LogicalContents(e, r.store).at("R")[0].i;
  int64_t want = 1000 * (c.element % b) + c.element / b;
  if (got != want) {
    return "got " + std::to_string(got) + " want " + std::to_string(want) +
           " for\n" + source;
  }
  return std::nullopt;
}

}  // namespace

std::string GemmSource(int64_t bank11, int64_t bank12, int64_t bank21,
                       int64_t bank22, int64_t unroll1, int64_t unroll2,
                       int64_t unroll3) {
  dse::Template tpl =
      dse::Template::Parse(ReadFile(SourcePath("tests/dse/gemm_blocked.fuse.tpl")));
  return dse::Instantiate(tpl, {{"BANK11", bank11},
                                {"BANK12", bank12},
                                {"BANK21", bank21},
                                {"BANK22", bank22},
                                {"UNROLL1", unroll1},
                                {"UNROLL2", unroll2},
                                {"UNROLL3", unroll3}});
}

CriterionResult GoldenVerdicts() {
  auto start = Clock::now();
  std::map<std::string, Golden> goldens;
  for (Golden& g : LoadGoldens()) goldens[g.name] = std::move(g);
  int matched = 0;
  std::string misses;
  for (const std::string& name : VerdictSuite()) {
    auto it = goldens.find(name);
    if (it == goldens.end()) {
      misses += " " + name + "(missing)";
      continue;
    }
    dse::SweepRow row = dse::CheckSource(it->second.source);
    bool ok = it->second.accept
                  ? row.verdict == "accepted"
                  : row.verdict == "rejected" && row.error_code == it->second.code;
    if (ok) {
      ++matched;
    } else {
      misses += " " + name + "(" + row.verdict + " " + row.error_code + ")";
    }
  }
  double seconds = SecondsSince(start);
  int total = static_cast<int>(VerdictSuite().size());
  CriterionResult r;
  r.pass = matched == total && total == 14 && seconds < 1.0;
  r.detail = std::to_string(matched) + "/" + std::to_string(total) +
             " verdicts in " + Fmt(seconds) + misses;
  return r;
}

CriterionResult DseReproduction(int jobs) {
  auto start = Clock::now();
  dse::Template tpl =
      dse::Template::Parse(ReadFile(SourcePath("tests/dse/gemm_blocked.fuse.tpl")));
  dse::Domains domains =
      dse::Domains::FromJson(ReadFile(SourcePath("tests/dse/gemm_domains.json")));
  std::vector<dse::SweepRow> rows = dse::Sweep(tpl, domains, jobs);
  double seconds = SecondsSince(start);
  int64_t mismatches = 0;
  for (const dse::SweepRow& row : rows) {
    std::map<std::string, int64_t> a = domains.Assignment(row.point);
    bool legal = GemmLegal(a["BANK11"], a["BANK12"], a["BANK21"], a["BANK22"],
                           a["UNROLL1"], a["UNROLL2"], a["UNROLL3"]);
    if (legal != (row.verdict == "accepted")) ++mismatches;
  }
  dse::Summary s = dse::Summarize(rows);
  int64_t attributed = 0;
  std::string histogram;
  for (const auto& [code, count] : s.by_code) {
    attributed += count;
    histogram += " " + code + "=" + std::to_string(count);
  }
  CriterionResult r;
  r.pass = s.total == 32000 && mismatches == 0 &&
           attributed == s.total - s.accepted && seconds < 300.0;
  r.detail = std::to_string(s.total) + " rows, " + std::to_string(mismatches) +
             " oracle mismatches, accepted " + std::to_string(s.accepted) +
             " vs 354 (difference " + std::to_string(s.accepted - 354) +
             "), rejections by code:" + histogram + ", " + Fmt(seconds) +
             " with " + std::to_string(jobs) + " job(s)";
  return r;
}

CriterionResult EmpiricalSoundness(int count, uint64_t seed, int jobs) {
  soundness::FuzzOptions options;
  options.count = count;
  options.seed = seed;
  options.fuel = 1'000'000;
  options.jobs = jobs;
  soundness::FuzzReport report = soundness::RunFuzz(options);
  const soundness::FuzzReport::Tally& t = report.core;
  CriterionResult r;
  r.pass = t.programs == count && t.completed == count && t.stuck == 0 &&
           t.runtime_errors == 0 && t.fuel_exhausted == 0 &&
           t.progress_violations == 0 && t.preservation_violations == 0 &&
           t.disagreements == 0 && report.seconds < 600.0;
  r.detail = std::to_string(t.completed) + "/" + std::to_string(t.programs) +
             " completed, stuck " + std::to_string(t.stuck) + ", progress " +
             std::to_string(t.progress_violations) + ", preservation " +
             std::to_string(t.preservation_violations) + ", " +
             std::to_string(t.steps) + " steps in " + Fmt(report.seconds);
  if (!report.failures.empty()) {
    r.detail += ", first failure: " + report.failures[0].kind + " " +
                report.failures[0].message;
  }
  return r;
}

CriterionResult SemanticsAgreement(int count, uint64_t seed) {
  constexpr int64_t kFuel = 1'000'000;
  int terminating = 0;
  int agreed = 0;
  uint64_t i = 0;
  for (; terminating < count && i < static_cast<uint64_t>(count) * 4; ++i) {
    soundness::GenConfig config;
    config.seed = SeedFor(seed, i);
    soundness::GeneratedProgram g = soundness::GenerateWellTyped(config);
    core::RunResult big = core::BigStep(g.program, g.init, kFuel);
    if (big.outcome != core::Outcome::kCompleted) continue;
    ++terminating;
    if (soundness::CompareSemantics(g.program, g.init, kFuel)) ++agreed;
  }
  int golden_total = 0;
  int golden_agreed = 0;
  for (const Golden& gold : LoadGoldens()) {
    ParseResult parsed = ParseProgram(gold.source);
    if (!parsed.ok()) continue;
    Elaboration e;
    try {
      e = Elaborate(*parsed.program);
    } catch (const DiagnosticError&) {
      continue;
    }
    ++golden_total;
    core::Store init = core::Store::ForProgram(e.program);
    if (soundness::CompareSemantics(e.program, init, kFuel)) ++golden_agreed;
  }
  int accepted_goldens = 0;
  for (const Golden& gold : LoadGoldens()) accepted_goldens += gold.accept;
  CriterionResult r;
  r.pass = terminating == count && agreed == count &&
           golden_agreed == golden_total && golden_total >= accepted_goldens;
  r.detail = std::to_string(agreed) + "/" + std::to_string(terminating) +
             " generated programs and " + std::to_string(golden_agreed) + "/" +
             std::to_string(golden_total) + " elaborated goldens agree";
  return r;
}

std::optional<std::string> CompareWithReference(const SurfaceProgram& p) {
  Elaboration e = Elaborate(p.program);
  core::Store store = core::Store::ForProgram(e.program);
  for (const auto& [name, data] : p.init) LoadLogical(e, store, name, data);
  core::RunResult run = core::SmallStepRun(e.program, store, 10'000'000);
  if (run.outcome != core::Outcome::kCompleted) {
    return std::string("elaborated run ") + core::OutcomeName(run.outcome) +
           ": " + run.message;
  }
  std::map<std::string, std::vector<Value>> want;
  try {
    want = ReferenceRun(p.program, p.init);
  } catch (const ReferenceError& err) {
    return std::string("reference: ") + err.what();
  }
  std::map<std::string, std::vector<Value>> got = LogicalContents(e, run.store);
  for (const auto& [name, values] : want) {
    auto it = got.find(name);
    if (it == got.end()) return "memory " + name + " missing after elaboration";
    if (it->second.size() != values.size()) return "size differs on " + name;
    for (size_t k = 0; k < values.size(); ++k) {
      if (!(it->second[k] == values[k])) {
        return name + "[" + std::to_string(k) + "]: got " +
               it->second[k].ToString() + " want " + values[k].ToString();
      }
    }
  }
  return std::nullopt;
}

CriterionResult ElaborationPreservation(int count, uint64_t seed) {
  int equal = 0;
  std::string first;
  for (int i = 0; i < count; ++i) {
    SurfaceGenConfig config;
    config.seed = SeedFor(seed, static_cast<uint64_t>(i));
    SurfaceProgram p = GenerateSurface(config);
    std::optional<std::string> diff = CompareWithReference(p);
    if (!diff) {
      ++equal;
    } else if (first.empty()) {
      first = ", first difference: " + *diff;
    }
  }
  CriterionResult r;
  r.pass = equal == count;
  r.detail = std::to_string(equal) + "/" + std::to_string(count) +
             " programs match the reference" + first;
  return r;
}

std::optional<std::string> CheckViewAccesses(int64_t* checked) {
  *checked = 0;
  for (int64_t n = 1; n <= 16; ++n) {
    for (int64_t b : {1, 2, 4}) {
      if (n % b != 0) continue;
      for (const ViewCase& c : ViewCases(n, b)) {
        if (std::optional<std::string> err = RunViewCase(n, b, c)) return err;
        ++*checked;
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> CheckSplitDot() {
  std::string error;
  std::optional<Program> program =
      ParseChecked(ReadFile(SourcePath("tests/golden/split_dot.fuse")), &error);
  if (!program) return "split_dot: " + error;
  Elaboration e = Elaborate(*program);
  const BankedMemory* a = e.Find("A");
  if (a == nullptr || a->banks.size() != 4) return "A is not split into 4 banks";
  std::map<std::string, int64_t> bank_of;
  for (int64_t q = 0; q < 4; ++q) bank_of[BankMemoryName("A", a->type, q)] = q;
  struct Read {
    int64_t bank;
    int64_t element;
    int64_t a_banks_in_step;
  };
  std::vector<Read> reads;
  auto hook = [&](const std::string& mem, int64_t index, bool write,
                  const core::AccessSet& rho) {
    auto it = bank_of.find(mem);
    if (it == bank_of.end() || write) return;
    int64_t in_step = 0;
    for (const auto& [name, q] : bank_of) in_step += rho.count(name);
    reads.push_back({it->second, 4 * index + it->second, in_step});
  };
  core::RunResult r = core::SmallStepRun(
      e.program, core::Store::ForProgram(e.program), 100000, hook);
  if (r.outcome != core::Outcome::kCompleted) {
    return std::string("split_dot ") + core::OutcomeName(r.outcome);
  }
  if (reads.size() != 12) {
    return "expected 12 reads of A, saw " + std::to_string(reads.size());
  }
  for (size_t t = 0; t < 3; ++t) {
    std::set<int64_t> banks;
    std::set<int64_t> elements;
    for (size_t p = 0; p < 4; ++p) {
      const Read& rd = reads[4 * t + p];
      banks.insert(rd.bank);
      elements.insert(rd.element);
      if (rd.a_banks_in_step != static_cast<int64_t>(p) + 1) {
        return "step " + std::to_string(t) + " read " + std::to_string(p) +
               " sees " + std::to_string(rd.a_banks_in_step) + " banks of A";
      }
    }
    std::set<int64_t> want;
    for (int64_t i = 2 * t; i < 2 * static_cast<int64_t>(t) + 2; ++i) {
      for (int64_t j = 0; j < 2; ++j) want.insert(2 * i + j);
    }
    if (banks.size() != 4) return "step " + std::to_string(t) + " repeats a bank";
    if (elements != want) {
      return "step " + std::to_string(t) + " touches the wrong elements";
    }
  }
  return std::nullopt;
}

CriterionResult ViewLowering() {
  int64_t checked = 0;
  std::optional<std::string> views = CheckViewAccesses(&checked);
  std::optional<std::string> dot = CheckSplitDot();
  CriterionResult r;
  r.pass = !views && !dot && checked > 0;
  r.detail = std::to_string(checked) + " view accesses checked";
  if (views) r.detail += ", mismatch: " + *views;
  r.detail += dot ? ", split dot: " + *dot
                  : ", split dot touches 2i+j on 4 distinct banks per step";
  return r;
}

EmitPlan PlanFromText(const std::string& cxx) {
  static const std::regex kResource(
      R"(^\s*#pragma HLS resource variable=(\w+) core=(\w+)\s*$)");
  static const std::regex kPartition(
      R"(^\s*#pragma HLS ARRAY_PARTITION variable=(\w+) cyclic factor=(\d+) dim=(\d+)\s*$)");
  static const std::regex kLoop(
      R"(^\s*for \(int (\w+) = -?\d+; \1 < -?\d+; \1\+\+\) \{\s*$)");
  static const std::regex kUnroll(
      R"(^\s*#pragma HLS UNROLL factor=(\d+) skip_exit_check\s*$)");
  EmitPlan plan;
  std::istringstream in(cxx);
  std::string line;
  std::smatch m;
  while (std::getline(in, line)) {
    if (std::regex_match(line, m, kResource)) {
      plan.memories.push_back({m[1], m[1], {}, m[2]});
    } else if (std::regex_match(line, m, kPartition)) {
      for (MemoryPlan& mem : plan.memories) {
        if (mem.emitted == m[1]) {
          mem.partitions.push_back({std::stoll(m[2]), std::stoi(m[3])});
        }
      }
    } else if (std::regex_match(line, m, kLoop)) {
      plan.loops.push_back({m[1], 1});
    } else if (std::regex_match(line, m, kUnroll) && !plan.loops.empty()) {
      plan.loops.back().unroll = std::stoll(m[1]);
    }
  }
  return plan;
}

CriterionResult BackendPragmas() {
  std::vector<std::string> problems;
  auto emit = [&](const std::string& source) -> std::optional<std::string> {
    std::string error;
    std::optional<Program> p = ParseChecked(source, &error);
    if (!p) {
      problems.push_back("rejected: " + error);
      return std::nullopt;
    }
    std::string text = EmitCxx(*p);
    EmitPlan from_text = PlanFromText(text);
    EmitPlan made = MakeEmitPlan(*p);
    if (from_text.memories != made.memories || from_text.loops != made.loops) {
      problems.push_back("emitted pragmas disagree with the plan");
    }
    return text;
  };
  auto lines = [](const std::string& text) {
    std::set<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      size_t start = line.find_first_not_of(' ');
      if (start != std::string::npos) out.insert(line.substr(start));
    }
    return out;
  };

  if (std::optional<std::string> text = emit(GemmSource(4, 4, 2, 2, 2, 2, 4))) {
    std::set<std::string> have = lines(*text);
    std::vector<std::string> want = {
        "#pragma HLS resource variable=m1 core=RAM_1P_BRAM",
        "#pragma HLS ARRAY_PARTITION variable=m1 cyclic factor=4 dim=1",
        "#pragma HLS ARRAY_PARTITION variable=m1 cyclic factor=4 dim=2",
        "#pragma HLS resource variable=m2 core=RAM_1P_BRAM",
        "#pragma HLS ARRAY_PARTITION variable=m2 cyclic factor=4 dim=1",
        "#pragma HLS ARRAY_PARTITION variable=m2 cyclic factor=4 dim=2",
        "#pragma HLS resource variable=prod core=RAM_1P_BRAM",
        "#pragma HLS ARRAY_PARTITION variable=prod cyclic factor=2 dim=1",
        "#pragma HLS ARRAY_PARTITION variable=prod cyclic factor=2 dim=2",
        "#pragma HLS UNROLL factor=2 skip_exit_check",
        "#pragma HLS UNROLL factor=4 skip_exit_check"};
    for (const std::string& w : want) {
      if (!have.count(w)) problems.push_back("missing '" + w + "'");
    }
    std::vector<LoopPlan> loops = PlanFromText(*text).loops;
    std::vector<LoopPlan> want_loops = {
        {"jj", 1}, {"kk", 1}, {"i", 2}, {"j", 2}, {"k", 4}};
    if (loops != want_loops) problems.push_back("gemm loop unrolls differ");
  }
  if (std::optional<std::string> text = emit(GemmSource(1, 1, 1, 1, 1, 1, 1))) {
    if (text->find("ARRAY_PARTITION") != std::string::npos ||
        text->find("UNROLL") != std::string::npos) {
      problems.push_back("factor-1 gemm carries partition or unroll pragmas");
    }
  }
  if (std::optional<std::string> text =
          emit(ReadFile(SourcePath("tests/golden/two_ports.fuse")))) {
    if (text->find("core=RAM_2P_BRAM") == std::string::npos) {
      problems.push_back("two-ported memory is not RAM_2P_BRAM");
    }
  }
  CriterionResult r;
  r.pass = problems.empty();
  r.detail = problems.empty()
                 ? "gemm partition, unroll and resource lines present; "
                   "factor-1 point emits none; RAM_2P_BRAM for 2 ports"
                 : problems[0];
  return r;
}

}  // namespace fuse::testing
