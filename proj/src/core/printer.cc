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

#include "fuse/core/printer.h"

#include <sstream>
#include <vector>

namespace fuse::core {

namespace {

std::string ExprAt(const Expr& e, int parent, bool rhs) {
  const auto* o = std::get_if<Bop>(&e.node);
  if (o == nullptr) return PrintExpr(e);
  int prec = BinOpPrecedence(o->op);
  std::string s = ExprAt(*o->lhs, prec, false) + " " +
                  std::string(BinOpSymbol(o->op)) + " " +
                  ExprAt(*o->rhs, prec, true);
  if (prec < parent || (rhs && prec == parent)) return "(" + s + ")";
  return s;
}

void Flatten(const CmdPtr& c, bool seq, std::vector<const Cmd*>& out) {
  if (seq) {
    if (const auto* x = std::get_if<Seq>(&c->node)) {
      Flatten(x->first, true, out);
      Flatten(x->second, true, out);
      return;
    }
  } else if (const auto* x = std::get_if<Par>(&c->node)) {
    Flatten(x->first, false, out);
    Flatten(x->second, false, out);
    return;
  }
  out.push_back(c.get());
}

std::string Pad(int indent) { return std::string(2 * indent, ' '); }

std::string RhoText(const AccessSet& rho) {
  std::string s = "{";
  bool first = true;
  for (const std::string& m : rho) {
    if (!first) s += ", ";
    s += m;
    first = false;
  }
  return s + "}";
}

class Printer {
 public:
  void Lines(const Cmd& c, int indent) {
    std::vector<const Cmd*> parts;
    if (std::holds_alternative<Seq>(c.node)) {
      Flatten(std::get<Seq>(c.node).first, true, parts);
      Flatten(std::get<Seq>(c.node).second, true, parts);
      for (size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out_ << Pad(indent) << "---\n";
        Lines(*parts[i], indent);
      }
      return;
    }
    if (std::holds_alternative<Par>(c.node)) {
      Flatten(std::get<Par>(c.node).first, false, parts);
      Flatten(std::get<Par>(c.node).second, false, parts);
      for (const Cmd* p : parts) Stmt(*p, indent);
      return;
    }
    Stmt(c, indent);
  }

  std::string str() const { return out_.str(); }

 private:
  void Block(const Cmd& c, int indent) {
    out_ << "{\n";
    Lines(c, indent + 1);
    out_ << Pad(indent) << "}";
  }

  void Stmt(const Cmd& c, int indent) {
    out_ << Pad(indent);
    if (std::holds_alternative<Seq>(c.node) ||
        std::holds_alternative<Par>(c.node)) {
      Block(c, indent);
      out_ << "\n";
      return;
    }
    if (const auto* x = std::get_if<InterSeq>(&c.node)) {
      Block(*x->first, indent);
      out_ << " ~" << RhoText(x->rho) << "~ ";
      Block(*x->second, indent);
      out_ << "\n";
      return;
    }
    if (const auto* x = std::get_if<If>(&c.node)) {
      out_ << "if " << x->cond << " ";
      Block(*x->then_branch, indent);
      if (!IsSkip(*x->else_branch)) {
        out_ << " else ";
        Block(*x->else_branch, indent);
      }
      out_ << "\n";
      return;
    }
    if (const auto* x = std::get_if<While>(&c.node)) {
      out_ << "while " << x->cond << " ";
      Block(*x->body, indent);
      out_ << "\n";
      return;
    }
    if (const auto* x = std::get_if<ExprCmd>(&c.node)) {
      out_ << PrintExpr(*x->expr);
    } else if (const auto* x = std::get_if<Let>(&c.node)) {
      out_ << "let " << x->name << " = " << PrintExpr(*x->init);
    } else if (const auto* x = std::get_if<Assign>(&c.node)) {
      out_ << x->name << " := " << PrintExpr(*x->value);
    } else if (const auto* x = std::get_if<Write>(&c.node)) {
      out_ << x->mem << "[" << PrintExpr(*x->index)
           << "] := " << PrintExpr(*x->value);
    } else {
      out_ << "skip";
    }
    out_ << ";\n";
  }

  std::ostringstream out_;
};

}  // namespace

std::string PrintExpr(const Expr& e) {
  if (const auto* v = std::get_if<Val>(&e.node)) return v->value.ToString();
  if (const auto* v = std::get_if<Var>(&e.node)) return v->name;
  if (std::holds_alternative<Bop>(e.node)) return ExprAt(e, 0, false);
  const auto& rd = std::get<Read>(e.node);
  return rd.mem + "[" + PrintExpr(*rd.index) + "]";
}

std::string PrintCmd(const Cmd& c, int indent) {
  Printer p;
  p.Lines(c, indent);
  return p.str();
}

std::string PrintProgram(const Program& p) {
  std::string out;
  for (const MemDecl& m : p.memories) {
    out += "decl " + m.name + ": " + m.elem.ToString() + "[" +
           std::to_string(m.size) + "]";
    if (!m.store.empty() && m.store != m.name) out += " aliases " + m.store;
    out += ";\n";
  }
  if (!p.memories.empty()) out += "\n";
  return out + PrintCmd(*p.body);
}

}  // namespace fuse::core
