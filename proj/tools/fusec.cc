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

// fusec: command-line driver for checking, desugaring, interpreting and
// emitting fuse programs, and for the fuzz and design-space sweeps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fuse/backend.h"
#include "fuse/core/check.h"
#include "fuse/core/eval.h"
#include "fuse/core/printer.h"
#include "fuse/dse.h"
#include "fuse/elaborate.h"
#include "fuse/parser.h"
#include "fuse/soundness.h"
#include "fuse/typecheck.h"

namespace {

constexpr int kOk = 0;
constexpr int kTypeError = 1;
constexpr int kParseError = 2;
constexpr int kRuntime = 3;
constexpr int kUsage = 4;

class Exit {
 public:
  explicit Exit(int code) : code(code) {}
  int code;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "fusec: cannot read '" << path << "'\n";
    throw Exit(kUsage);
  }
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "fusec: cannot write '" << path << "'\n";
    throw Exit(kUsage);
  }
}

void Report(const std::string& file,
            const std::vector<fuse::Diagnostic>& diagnostics) {
  for (const fuse::Diagnostic& d : diagnostics) {
    std::cerr << fuse::FormatDiagnostic(file, d) << "\n";
  }
}

fuse::Program Parse(const std::string& file) {
  fuse::ParseResult parsed = fuse::ParseProgram(ReadFile(file));
  if (!parsed.ok()) {
    Report(file, parsed.diagnostics);
    throw Exit(kParseError);
  }
  return *parsed.program;
}

fuse::CheckResult CheckOrExit(const std::string& file,
                              const fuse::Program& program) {
  fuse::CheckResult r = fuse::CheckProgram(program);
  if (!r.ok) {
    Report(file, r.diagnostics);
    throw Exit(kTypeError);
  }
  return r;
}

fuse::Elaboration ElaborateOrExit(const std::string& file,
                                  const fuse::Program& program) {
  try {
    return fuse::Elaborate(program);
  } catch (const fuse::DiagnosticError& e) {
    Report(file, {e.diagnostic()});
    throw Exit(kTypeError);
  }
}

nlohmann::json ValueJson(const fuse::Value& v) {
  switch (v.type.kind) {
    case fuse::ScalarKind::kBool: return v.b;
    case fuse::ScalarKind::kFloat: return v.f;
    case fuse::ScalarKind::kBit: return v.i;
  }
  return nullptr;
}

void Flatten(const nlohmann::json& j, std::vector<nlohmann::json>& out) {
  if (j.is_array()) {
    for (const auto& x : j) Flatten(x, out);
  } else {
    out.push_back(j);
  }
}

fuse::Value FromJson(const nlohmann::json& j, fuse::ScalarType type) {
  if (j.is_boolean()) {
    if (type.kind != fuse::ScalarKind::kBool) throw std::invalid_argument("bool");
    return fuse::Value::Bool(j.get<bool>());
  }
  if (!j.is_number()) throw std::invalid_argument("not a number");
  fuse::Value v = j.is_number_integer() ? fuse::Value::Bit(j.get<int64_t>(), 64)
                                        : fuse::Value::Float(j.get<double>());
  return fuse::ConvertTo(v, type);
}

// Loads memory contents (nested or flat row-major arrays) and scalar
// variables from an init file.
void LoadInit(const std::string& path, const fuse::Elaboration& e,
              fuse::core::Store& store) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& err) {
    std::cerr << path << ": " << err.what() << "\n";
    throw Exit(kUsage);
  }
  if (!j.is_object()) {
    std::cerr << path << ": expected an object\n";
    throw Exit(kUsage);
  }
  try {
    for (const auto& [name, value] : j.items()) {
      if (const fuse::BankedMemory* m = e.Find(name)) {
        std::vector<nlohmann::json> flat;
        Flatten(value, flat);
        if (static_cast<int64_t>(flat.size()) != m->type.TotalSize()) {
          std::cerr << path << ": '" << name << "' needs "
                    << m->type.TotalSize() << " values\n";
          throw Exit(kUsage);
        }
        std::vector<fuse::Value> data;
        for (const auto& x : flat) data.push_back(FromJson(x, m->type.elem));
        fuse::LoadLogical(e, store, name, data);
      } else if (value.is_boolean()) {
        store.vars[name] = fuse::Value::Bool(value.get<bool>());
      } else if (value.is_number_integer()) {
        store.vars[name] = fuse::Value::Bit(value.get<int64_t>(), 32);
      } else if (value.is_number()) {
        store.vars[name] = fuse::Value::Float(value.get<double>());
      } else {
        std::cerr << path << ": unsupported value for '" << name << "'\n";
        throw Exit(kUsage);
      }
    }
  } catch (const std::invalid_argument&) {
    std::cerr << path << ": value of the wrong type\n";
    throw Exit(kUsage);
  }
}

int RunCheck(const std::string& file, bool json) {
  fuse::CheckResult r = CheckOrExit(file, Parse(file));
  if (json) std::cout << r.report.ToJson() << "\n";
  return kOk;
}

int RunDesugar(const std::string& file, bool force) {
  fuse::Program p = Parse(file);
  if (!force) CheckOrExit(file, p);
  std::cout << fuse::core::PrintProgram(ElaborateOrExit(file, p).program);
  return kOk;
}

int RunInterp(const std::string& file, const std::string& init, int64_t fuel,
              bool force, bool big_step) {
  fuse::Program p = Parse(file);
  if (!force) CheckOrExit(file, p);
  fuse::Elaboration e = ElaborateOrExit(file, p);
  fuse::core::Store store = fuse::core::Store::ForProgram(e.program);
  if (!init.empty()) LoadInit(init, e, store);
  fuse::core::RunResult r = big_step
                                ? fuse::core::BigStep(e.program, store, fuel)
                                : fuse::core::SmallStepRun(e.program, store, fuel);
  nlohmann::ordered_json out;
  out["outcome"] = fuse::core::OutcomeName(r.outcome);
  out["steps"] = r.steps;
  nlohmann::ordered_json mems = nlohmann::ordered_json::object();
  for (const auto& [name, values] : fuse::LogicalContents(e, r.store)) {
    nlohmann::json arr = nlohmann::json::array();
    for (const fuse::Value& v : values) arr.push_back(ValueJson(v));
    mems[name] = arr;
  }
  out["memories"] = mems;
  nlohmann::ordered_json vars = nlohmann::ordered_json::object();
  for (const auto& [name, v] : r.store.vars) vars[name] = ValueJson(v);
  out["vars"] = vars;
  out["rho"] = std::vector<std::string>(r.rho.begin(), r.rho.end());
  std::cout << out.dump(2) << "\n";
  if (r.outcome != fuse::core::Outcome::kCompleted) {
    std::cerr << file << ": " << fuse::core::OutcomeName(r.outcome);
    if (!r.message.empty()) std::cerr << ": " << r.message;
    std::cerr << "\n";
    return kRuntime;
  }
  return kOk;
}

int RunEmit(const std::string& file, const std::string& out_path,
            const std::string& plan) {
  fuse::Program p = Parse(file);
  CheckOrExit(file, p);
  std::string path = out_path;
  if (path.empty()) {
    path = std::filesystem::path(file).stem().string() + ".cpp";
  }
  WriteFile(path, fuse::EmitCxx(p));
  if (plan == "json") std::cout << fuse::MakeEmitPlan(p).ToJson() << "\n";
  return kOk;
}

int RunFuzz(const fuse::soundness::FuzzOptions& options,
            const std::string& report_path) {
  fuse::soundness::FuzzReport r = fuse::soundness::RunFuzz(options);
  std::string json = r.ToJson();
  if (report_path.empty()) {
    std::cout << json << "\n";
  } else {
    WriteFile(report_path, json + "\n");
    std::cout << "core " << r.core.programs << " programs, "
              << r.core.stuck << " stuck; elaborated "
              << r.elaborated.programs << " programs, " << r.elaborated.stuck
              << " stuck; " << (r.ok() ? "ok" : "VIOLATIONS") << "\n";
  }
  for (const auto& f : r.failures) {
    std::cerr << "seed " << f.seed << ": " << f.kind << ": " << f.message
              << "\n";
  }
  return r.ok() ? kOk : kRuntime;
}

int RunDse(const std::string& tpl_path, const std::string& domains_path,
           const std::string& out_path, int jobs) {
  fuse::dse::Template tpl;
  fuse::dse::Domains domains;
  try {
    tpl = fuse::dse::Template::Parse(ReadFile(tpl_path));
    domains = fuse::dse::Domains::FromJson(ReadFile(domains_path));
  } catch (const std::exception& e) {
    std::cerr << "fusec: " << e.what() << "\n";
    return kUsage;
  }
  std::vector<fuse::dse::SweepRow> rows;
  try {
    rows = fuse::dse::Sweep(tpl, domains, jobs);
  } catch (const std::invalid_argument& e) {
    std::cerr << "fusec: " << e.what() << "\n";
    return kUsage;
  }
  std::ostringstream csv;
  fuse::dse::WriteCsv(domains, rows, csv);
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    WriteFile(out_path, csv.str());
  }
  std::cerr << fuse::dse::Summarize(rows).ToJson() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuse compiler"};
  app.set_version_flag("--version", std::string("fusec ") + FUSE_VERSION);
  app.require_subcommand(1);

  std::string file;
  bool force = false;

  auto* check = app.add_subcommand("check", "Type-check a program");
  std::string report_format;
  check->add_option("file", file)->required();
  check->add_option("--report", report_format, "Print the acceptance report")
      ->check(CLI::IsMember({"json"}));

  auto* desugar = app.add_subcommand("desugar", "Print the core program");
  desugar->add_option("file", file)->required();
  desugar->add_flag("--force", force, "Skip the type check");

  auto* interp = app.add_subcommand("interp", "Run a program");
  std::string init;
  int64_t fuel = 1'000'000;
  bool big_step = false;
  interp->add_option("file", file)->required();
  interp->add_option("--init", init, "JSON file with initial memories and variables");
  interp->add_option("--fuel", fuel, "Step budget")->check(CLI::NonNegativeNumber);
  interp->add_flag("--force", force, "Skip the type check");
  interp->add_flag("--big-step", big_step, "Use the big-step evaluator");

  auto* emit = app.add_subcommand("emit", "Emit HLS C++");
  std::string emit_out, plan;
  emit->add_option("file", file)->required();
  emit->add_option("-o,--out", emit_out, "Output path (default <stem>.cpp)");
  emit->add_option("--plan", plan, "Print the pragma plan")
      ->check(CLI::IsMember({"json"}));

  auto* fuzz = app.add_subcommand("fuzz", "Randomized soundness testing");
  fuse::soundness::FuzzOptions fopts;
  fopts.surface_count = 100;
  std::string fuzz_report;
  fuzz->add_option("--count", fopts.count, "Core programs")->check(CLI::NonNegativeNumber);
  fuzz->add_option("--surface", fopts.surface_count, "Elaborated surface programs")
      ->check(CLI::NonNegativeNumber);
  fuzz->add_option("--seed", fopts.seed);
  fuzz->add_option("--fuel", fopts.fuel)->check(CLI::NonNegativeNumber);
  fuzz->add_option("--jobs", fopts.jobs)->check(CLI::PositiveNumber);
  fuzz->add_option("--report", fuzz_report, "Write the JSON report here");

  auto* dse = app.add_subcommand("dse", "Sweep a parameterized program");
  std::string tpl_path, domains_path, dse_out;
  int jobs = 1;
  dse->add_option("--template", tpl_path)->required();
  dse->add_option("--domains", domains_path)->required();
  dse->add_option("--out", dse_out, "CSV path (default stdout)");
  dse->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return RunCheck(file, report_format == "json");
    if (*desugar) return RunDesugar(file, force);
    if (*interp) return RunInterp(file, init, fuel, force, big_step);
    if (*emit) return RunEmit(file, emit_out, plan);
    if (*fuzz) return RunFuzz(fopts, fuzz_report);
    if (*dse) return RunDse(tpl_path, domains_path, dse_out, jobs);
  } catch (const Exit& e) {
    return e.code;
  }
  return kUsage;
}
