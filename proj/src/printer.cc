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

#include "fuse/printer.h"

#include <sstream>

namespace fuse {
namespace {

std::string Pad(int indent) { return std::string(2 * indent, ' '); }

void PrintExprTo(const Expr& e, int parent_prec, bool is_rhs,
                 std::ostringstream& os);

void PrintAccess(const Access& a, std::ostringstream& os) {
  os << a.mem;
  if (a.physical()) {
    os << "{";
    for (size_t i = 0; i < a.banks.size(); ++i) {
      if (i > 0) os << ", ";
      os << a.banks[i];
    }
    os << "}";
  }
  for (const ExprPtr& idx : a.indices) {
    os << "[";
    PrintExprTo(*idx, 0, false, os);
    os << "]";
  }
}

void PrintExprTo(const Expr& e, int parent_prec, bool is_rhs,
                 std::ostringstream& os) {
  if (const auto* lit = std::get_if<NumLit>(&e.node)) {
    os << lit->text;
  } else if (const auto* b = std::get_if<BoolLit>(&e.node)) {
    os << (b->value ? "true" : "false");
  } else if (const auto* v = std::get_if<VarRef>(&e.node)) {
    os << v->name;
  } else if (const auto* a = std::get_if<Access>(&e.node)) {
    PrintAccess(*a, os);
  } else {
    const auto& bin = std::get<Binary>(e.node);
    int prec = BinOpPrecedence(bin.op);
    bool parens = prec < parent_prec || (is_rhs && prec == parent_prec);
    if (parens) os << "(";
    PrintExprTo(*bin.lhs, prec, false, os);
    os << " " << BinOpSymbol(bin.op) << " ";
    PrintExprTo(*bin.rhs, prec, true, os);
    if (parens) os << ")";
  }
}

bool EndsWithBrace(const Cmd& c) {
  return std::holds_alternative<Block>(c.node) ||
         std::holds_alternative<For>(c.node) ||
         std::holds_alternative<While>(c.node) ||
         std::holds_alternative<If>(c.node);
}

void PrintStmts(const Cmd& c, int indent, std::ostringstream& os);

void PrintBraced(const Cmd& body, int indent, std::ostringstream& os) {
  os << "{\n";
  PrintStmts(body, indent + 1, os);
  os << Pad(indent) << "}";
}

// Prints one statement without terminator.
void PrintStmt(const Cmd& c, int indent, std::ostringstream& os) {
  if (const auto* let = std::get_if<Let>(&c.node)) {
    os << "let " << let->name;
    if (let->type) os << ": " << let->type->ToString();
    os << " = " << PrintExpr(*let->init);
  } else if (const auto* mem = std::get_if<MemDecl>(&c.node)) {
    os << "let " << mem->name << ": " << mem->type.ToString();
  } else if (const auto* view = std::get_if<ViewDecl>(&c.node)) {
    os << "view " << view->name << " = " << ViewKindName(view->kind) << " "
       << view->underlying;
    for (const ExprPtr& arg : view->args) os << "[by " << PrintExpr(*arg) << "]";
  } else if (const auto* block = std::get_if<Block>(&c.node)) {
    PrintBraced(*block->body, indent, os);
  } else if (const auto* loop = std::get_if<For>(&c.node)) {
    os << "for (let " << loop->iter << " = " << loop->lo << ".." << loop->hi
       << ")";
    if (loop->unroll != 1) os << " unroll " << loop->unroll;
    os << " ";
    PrintBraced(*loop->body, indent, os);
    if (loop->combine) {
      os << " combine ";
      PrintBraced(*loop->combine, indent, os);
    }
  } else if (const auto* w = std::get_if<While>(&c.node)) {
    os << "while (" << PrintExpr(*w->cond) << ") ";
    PrintBraced(*w->body, indent, os);
  } else if (const auto* i = std::get_if<If>(&c.node)) {
    os << "if (" << PrintExpr(*i->cond) << ") ";
    PrintBraced(*i->then_branch, indent, os);
    if (i->else_branch) {
      os << " else ";
      PrintBraced(*i->else_branch, indent, os);
    }
  } else if (const auto* a = std::get_if<Assign>(&c.node)) {
    os << a->name << " := " << PrintExpr(*a->value);
  } else if (const auto* s = std::get_if<Store>(&c.node)) {
    os << PrintExpr(*s->target) << " := " << PrintExpr(*s->value);
  } else if (const auto* r = std::get_if<Reduce>(&c.node)) {
    os << PrintExpr(*r->target) << " " << ReduceOpSymbol(r->op) << " "
       << PrintExpr(*r->value);
  } else if (const auto* es = std::get_if<ExprStmt>(&c.node)) {
    os << PrintExpr(*es->expr);
  } else if (std::holds_alternative<Skip>(c.node)) {
    os << "skip";
  } else {
    // Par or Seq in statement position: group it.
    os << "{\n";
    PrintStmts(c, indent + 1, os);
    os << Pad(indent) << "}";
  }
}

void PrintParItem(const Cmd& c, int indent, std::ostringstream& os) {
  os << Pad(indent);
  PrintStmt(c, indent, os);
  os << (EndsWithBrace(c) ? "\n" : ";\n");
}

void PrintPar(const Cmd& c, int indent, std::ostringstream& os) {
  if (const auto* par = std::get_if<Par>(&c.node)) {
    for (const CmdPtr& item : par->cmds) PrintParItem(*item, indent, os);
  } else {
    PrintParItem(c, indent, os);
  }
}

void PrintStmts(const Cmd& c, int indent, std::ostringstream& os) {
  if (const auto* seq = std::get_if<Seq>(&c.node)) {
    for (size_t i = 0; i < seq->cmds.size(); ++i) {
      if (i > 0) os << Pad(indent) << "---\n";
      PrintPar(*seq->cmds[i], indent, os);
    }
    return;
  }
  PrintPar(c, indent, os);
}

}  // namespace

std::string PrintExpr(const Expr& e) {
  std::ostringstream os;
  PrintExprTo(e, 0, false, os);
  return os.str();
}

std::string PrintCmd(const Cmd& c, int indent) {
  std::ostringstream os;
  PrintStmts(c, indent, os);
  return os.str();
}

std::string PrintProgram(const Program& p) { return PrintCmd(*p.body); }

}  // namespace fuse
