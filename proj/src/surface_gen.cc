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

#include "fuse/surface_gen.h"

#include <random>
#include <sstream>
#include <stdexcept>

#include "fuse/parser.h"
#include "fuse/typecheck.h"

namespace fuse {

namespace {

struct GenMem {
  std::string name;
  bool is_float = true;
  std::vector<BankSpec> dims;
  int64_t ports = 1;

  int64_t banks() const { return dims[0].banks; }
  int64_t size() const { return dims[0].size; }
};

class SurfaceGenerator {
 public:
  explicit SurfaceGenerator(uint64_t seed, const SurfaceGenConfig& config)
      : config_(config), rng_(seed) {}

  std::string Run() {
    int count = 2 + static_cast<int>(Below(config_.max_memories));
    for (int i = 0; i < count; ++i) Memory("M" + std::to_string(i));
    std::vector<std::string> stmts;
    int n = 1 + static_cast<int>(Below(config_.max_statements));
    for (int i = 0; i < n; ++i) stmts.push_back(Statement());
    std::string out = decls_.str();
    for (size_t i = 0; i < stmts.size(); ++i) {
      if (i > 0) out += "---\n";
      out += stmts[i];
    }
    return out;
  }

  const std::vector<GenMem>& memories() const { return mems_; }

 private:
  uint64_t Below(uint64_t n) { return n == 0 ? 0 : rng_() % n; }
  bool Chance(int percent) { return static_cast<int>(Below(100)) < percent; }
  int64_t Pick(std::initializer_list<int64_t> xs) {
    return *(xs.begin() + Below(xs.size()));
  }
  std::string Fresh(const char* prefix) {
    return prefix + std::to_string(fresh_++);
  }

  void Memory(const std::string& name) {
    GenMem m;
    m.name = name;
    m.is_float = Chance(60);
    int dims = Chance(25) ? 2 : 1;
    for (int d = 0; d < dims; ++d) {
      int64_t banks = Pick({1, 2, 4});
      m.dims.push_back({banks * (1 + static_cast<int64_t>(Below(3))), banks});
    }
    m.ports = Chance(15) ? 2 : 1;
    decls_ << "let " << name << ": " << (m.is_float ? "float" : "bit<32>");
    if (m.ports > 1) decls_ << "{" << m.ports << "}";
    for (const BankSpec& d : m.dims) {
      decls_ << "[" << d.size;
      if (d.banks > 1) decls_ << " bank " << d.banks;
      decls_ << "]";
    }
    decls_ << ";\n";
    mems_.push_back(m);
  }

  std::string Literal(bool is_float) {
    if (is_float) {
      std::ostringstream s;
      s << static_cast<double>(static_cast<int64_t>(Below(33)) - 16) / 4.0;
      std::string t = s.str();
      if (t.find('.') == std::string::npos) t += ".0";
      return t;
    }
    return std::to_string(Below(10));
  }

  // A scalar expression that reads no memory.
  std::string Pure(bool is_float) {
    std::vector<std::string> same;
    for (const auto& [name, f] : scalars_) {
      if (f == is_float) same.push_back(name);
    }
    std::string base = !same.empty() && Chance(50)
                           ? same[Below(same.size())]
                           : Literal(is_float);
    if (Chance(40)) {
      static const char* kOps[] = {" + ", " - ", " * "};
      return "(" + base + kOps[Below(3)] + Literal(is_float) + ")";
    }
    return base;
  }

  std::string Op() {
    static const char* kOps[] = {" + ", " - ", " * "};
    return kOps[Below(3)];
  }

  // Two distinct memories with matching rank, or the same one twice when
  // there is only one such memory.
  std::pair<const GenMem*, const GenMem*> ReadWritePair(size_t rank) {
    std::vector<const GenMem*> pool;
    for (const GenMem& m : mems_) {
      if (m.dims.size() == rank) pool.push_back(&m);
    }
    if (pool.size() < 2) return {nullptr, nullptr};
    size_t a = Below(pool.size());
    size_t b = Below(pool.size() - 1);
    if (b >= a) ++b;
    return {pool[a], pool[b]};
  }

  int64_t Unroll(int64_t banks_a, int64_t banks_b, int64_t trips) {
    std::vector<int64_t> options = {1};
    if (banks_a == banks_b && banks_a > 1 && trips % banks_a == 0) {
      options.push_back(banks_a);
    }
    return options[Below(options.size())];
  }

  std::string Statement() {
    switch (Below(10)) {
      case 0: return ScalarStmt();
      case 1:
      case 2: return MapLoop();
      case 3: return Map2D();
      case 4: return ShrinkLoop();
      case 5: return SuffixLoop();
      case 6: return ShiftLoop();
      case 7: return SplitLoop();
      case 8: return IfStmt();
      default: return Chance(50) ? WhileStmt() : PhysicalStmt();
    }
  }

  std::string ScalarStmt() {
    bool is_float = Chance(50);
    std::string name = Fresh("s");
    std::string out = "let " + name + " = " + Pure(is_float) + ";\n";
    scalars_.emplace_back(name, is_float);
    return out;
  }

  std::string Accumulator(bool is_float, std::string* decl) {
    std::string acc = Fresh("acc");
    *decl = "let " + acc + " = " + (is_float ? "0.0" : "0") + ";\n";
    scalars_.emplace_back(acc, is_float);
    return acc;
  }

  // for i: W[i] := f(R[i]), optionally with a combine reduction over R[i].
  std::string MapLoop() {
    auto [r, w] = ReadWritePair(1);
    if (r == nullptr) return ScalarStmt();
    int64_t trips = std::min(r->size(), w->size());
    int64_t u = Unroll(r->banks(), w->banks(), trips);
    std::string i = Fresh("i");
    std::string t = Fresh("t");
    std::string pre, body, combine;
    if (Chance(50)) {
      body = "  let " + t + " = " + r->name + "[" + i + "]" + Op() +
             Pure(r->is_float) + "\n  ---\n  " + w->name + "[" + i +
             "] := " + t + Op() + Pure(w->is_float) + ";\n";
    } else {
      body = "  let " + t + " = " + r->name + "[" + i + "];\n  " + w->name +
             "[" + i + "] := " + Pure(w->is_float) + ";\n";
    }
    if (Chance(50)) {
      std::string acc = Accumulator(r->is_float, &pre);
      combine = " combine {\n  " + acc + (Chance(70) ? " += " : " *= ") + t +
                ";\n}";
    }
    return pre + "for (let " + i + " = 0.." + std::to_string(trips) +
           ") unroll " + std::to_string(u) + " {\n" + body + "}" + combine +
           "\n";
  }

  std::string Map2D() {
    auto [r, w] = ReadWritePair(2);
    if (r == nullptr) return MapLoop();
    int64_t t0 = std::min(r->dims[0].size, w->dims[0].size);
    int64_t t1 = std::min(r->dims[1].size, w->dims[1].size);
    int64_t u0 = Unroll(r->dims[0].banks, w->dims[0].banks, t0);
    int64_t u1 = Unroll(r->dims[1].banks, w->dims[1].banks, t1);
    std::string i = Fresh("i"), j = Fresh("j");
    return "for (let " + i + " = 0.." + std::to_string(t0) + ") unroll " +
           std::to_string(u0) + " {\n  for (let " + j + " = 0.." +
           std::to_string(t1) + ") unroll " + std::to_string(u1) + " {\n    " +
           w->name + "[" + i + "][" + j + "] := " + r->name + "[" + i + "][" +
           j + "]" + Op() + Pure(r->is_float) + ";\n  }\n}\n";
  }

  const GenMem* OneDim(int64_t min_banks) {
    std::vector<const GenMem*> pool;
    for (const GenMem& m : mems_) {
      if (m.dims.size() == 1 && m.banks() >= min_banks) pool.push_back(&m);
    }
    if (pool.empty()) return nullptr;
    return pool[Below(pool.size())];
  }

  std::string ShrinkLoop() {
    const GenMem* a = OneDim(2);
    if (a == nullptr) return MapLoop();
    int64_t f = a->banks() == 4 ? Pick({2, 4}) : 2;
    int64_t u = a->banks() / f;
    std::string v = Fresh("sh"), i = Fresh("i"), t = Fresh("t"), pre;
    std::string acc = Accumulator(a->is_float, &pre);
    return pre + "view " + v + " = shrink " + a->name + "[by " +
           std::to_string(f) + "];\nfor (let " + i + " = 0.." +
           std::to_string(a->size()) + ") unroll " + std::to_string(u) +
           " {\n  let " + t + " = " + v + "[" + i + "];\n} combine {\n  " +
           acc + " += " + t + ";\n}\n";
  }

  std::string SuffixLoop() {
    const GenMem* a = OneDim(1);
    if (a == nullptr) return ScalarStmt();
    int64_t b = a->banks();
    int64_t trips = a->size() / b;
    std::string v = Fresh("sf"), i = Fresh("i"), t = Fresh("t");
    std::string pre;
    std::string acc = Accumulator(a->is_float, &pre);
    std::string index = std::to_string(Below(b));
    return pre + "for (let " + i + " = 0.." + std::to_string(trips) +
           ") {\n  view " + v + " = suffix " + a->name + "[by " +
           std::to_string(b) + " * " + i + "];\n  let " + t + " = " + v +
           "[" + index + "]\n  ---\n  " + acc + " := " + acc + " + " + t +
           ";\n}\n";
  }

  std::string ShiftLoop() {
    const GenMem* a = OneDim(1);
    if (a == nullptr) return ScalarStmt();
    int64_t b = a->banks();
    int64_t inner = Chance(50) ? b : 1;
    if (inner > a->size()) inner = 1;
    int64_t outer = a->size() - inner + 1;
    int64_t u = Chance(50) ? inner : 1;
    std::string v = Fresh("sr"), i = Fresh("i"), j = Fresh("j");
    std::string t = Fresh("t"), pre;
    std::string acc = Accumulator(a->is_float, &pre);
    return pre + "for (let " + i + " = 0.." + std::to_string(outer) +
           ") {\n  view " + v + " = shift " + a->name + "[by " + i +
           "];\n  for (let " + j + " = 0.." + std::to_string(inner) +
           ") unroll " + std::to_string(u) + " {\n    let " + t + " = " + v +
           "[" + j + "];\n  } combine {\n    " + acc + " += " + t +
           ";\n  }\n}\n";
  }

  std::string SplitLoop() {
    auto [a, c] = ReadWritePair(1);
    if (a == nullptr || a->banks() < 2 || a->banks() != c->banks() ||
        a->size() != c->size()) {
      return MapLoop();
    }
    int64_t b = a->banks();
    int64_t f = b == 4 ? Pick({2, 4}) : 2;
    std::string va = Fresh("spa"), vc = Fresh("spc");
    std::string i = Fresh("i"), j = Fresh("j"), t = Fresh("t"), pre;
    bool is_float = a->is_float || c->is_float;
    std::string acc = Accumulator(is_float, &pre);
    return pre + "view " + va + ", " + vc + " = split " + a->name + "[by " +
           std::to_string(f) + "], " + c->name + "[by " + std::to_string(f) +
           "];\nfor (let " + i + " = 0.." + std::to_string(a->size() / f) +
           ") unroll " + std::to_string(b / f) + " {\n  for (let " + j +
           " = 0.." + std::to_string(f) + ") unroll " + std::to_string(f) +
           " {\n    let " + t + " = " + va + "[" + j + "][" + i + "] * " + vc +
           "[" + j + "][" + i + "];\n  } combine {\n    " + acc + " += " + t +
           ";\n  }\n}\n";
  }

  std::string Cell(const GenMem& m) {
    std::string s = m.name;
    for (const BankSpec& d : m.dims) s += "[" + std::to_string(Below(d.size)) + "]";
    return s;
  }

  std::string IfStmt() {
    auto [r, w] = ReadWritePair(Chance(80) ? 1 : 2);
    if (r == nullptr) return ScalarStmt();
    std::string c = Fresh("c");
    std::string out = "let " + c + " = " + r->name;
    for (const BankSpec& d : r->dims) out += "[" + std::to_string(Below(d.size)) + "]";
    out += ";\nif (" + c + " < " + Literal(r->is_float) + ") {\n  " + Cell(*w) +
           " := " + Pure(w->is_float) + ";\n}";
    if (Chance(50)) {
      out += " else {\n  " + Cell(*w) + " := " + c + Op() +
             Pure(r->is_float) + ";\n}";
    }
    scalars_.emplace_back(c, r->is_float);
    return "{\n" + out + "\n}\n";
  }

  std::string WhileStmt() {
    auto [r, w] = ReadWritePair(1);
    if (r == nullptr) return ScalarStmt();
    std::string k = Fresh("w");
    std::string t = Fresh("t");
    int64_t trips = 1 + static_cast<int64_t>(Below(3));
    return "let " + k + " = 0;\nwhile (" + k + " < " + std::to_string(trips) +
           ") {\n  let " + t + " = " + Cell(*r) + "\n  ---\n  " + Cell(*w) +
           " := " + t + Op() + k + "\n  ---\n  " + k + " := " + k +
           " + 1;\n}\n";
  }

  std::string PhysicalStmt() {
    const GenMem* a = OneDim(2);
    if (a == nullptr) return ScalarStmt();
    std::string out;
    std::vector<int64_t> banks;
    for (int64_t b = 0; b < a->banks(); ++b) {
      if (Chance(60)) banks.push_back(b);
    }
    if (banks.empty()) banks.push_back(0);
    for (int64_t b : banks) {
      out += a->name + "{" + std::to_string(b) + "}[" +
             std::to_string(Below(a->size() / a->banks())) +
             "] := " + Pure(a->is_float) + ";\n";
    }
    return out;
  }

  SurfaceGenConfig config_;
  std::mt19937_64 rng_;
  std::ostringstream decls_;
  std::vector<GenMem> mems_;
  std::vector<std::pair<std::string, bool>> scalars_;
  int fresh_ = 0;
};

}  // namespace

SurfaceProgram GenerateSurface(const SurfaceGenConfig& config) {
  std::mt19937_64 seeds(config.seed);
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    uint64_t seed = seeds();
    SurfaceGenerator gen(seed, config);
    std::string source = gen.Run();
    ParseResult parsed = ParseProgram(source);
    if (!parsed.ok() || !CheckProgram(*parsed.program).ok) continue;
    SurfaceProgram out;
    out.source = source;
    out.program = *parsed.program;
    std::mt19937_64 values(seed ^ 0xa5a5a5a5u);
    for (const GenMem& m : gen.memories()) {
      int64_t total = 1;
      for (const BankSpec& d : m.dims) total *= d.size;
      std::vector<Value>& data = out.init[m.name];
      for (int64_t k = 0; k < total; ++k) {
        int64_t r = static_cast<int64_t>(values() % 33) - 16;
        data.push_back(m.is_float ? Value::Float(static_cast<double>(r) / 4.0)
                                  : Value::Bit(r, 32));
      }
    }
    return out;
  }
  throw std::runtime_error("no accepted program after " +
                           std::to_string(config.max_attempts) + " attempts");
}

}  // namespace fuse
