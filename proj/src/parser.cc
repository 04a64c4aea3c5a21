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

#include "fuse/parser.h"

#include <charconv>
#include <cstdlib>
#include <utility>

#include "fuse/lexer.h"

namespace fuse {
namespace {

Span Join(Span a, Span b) { return Span{a.begin, b.end, a.line, a.col}; }

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program Run() {
    CmdPtr body = ParseSeqList();
    Expect(Tok::kEof);
    return Program{body};
  }

 private:
  const Token& Cur() const { return toks_[pos_]; }
  const Token& PeekTok(size_t ahead) const {
    size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool At(Tok kind) const { return Cur().kind == kind; }
  const Token& Take() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::kEof) ++pos_;
    last_ = t.kind;
    last_span_ = t.span;
    return t;
  }
  bool Accept(Tok kind) {
    if (!At(kind)) return false;
    Take();
    return true;
  }
  const Token& Expect(Tok kind) {
    if (!At(kind)) {
      Fail(codes::kParse, Cur().span,
           "expected " + std::string(TokName(kind)) + ", found " +
               std::string(TokName(Cur().kind)));
    }
    return Take();
  }
  [[noreturn]] void Error(const std::string& message) {
    Fail(codes::kParse, Cur().span, message);
  }

  int64_t ParseIntToken(const Token& t) {
    int64_t v = 0;
    auto [ptr, ec] =
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      Fail(codes::kParse, t.span, "integer literal out of range");
    }
    return v;
  }
  int64_t ExpectPositive(const char* what) {
    const Token& t = Expect(Tok::kInt);
    int64_t v = ParseIntToken(t);
    if (v < 1) Fail(codes::kParse, t.span, std::string(what) + " must be positive");
    return v;
  }

  bool AtListEnd() const {
    return At(Tok::kSeqBar) || At(Tok::kRBrace) || At(Tok::kEof);
  }

  // c1 --- c2 --- ...
  CmdPtr ParseSeqList() {
    Span start = Cur().span;
    std::vector<CmdPtr> parts{ParseParList()};
    while (Accept(Tok::kSeqBar)) parts.push_back(ParseParList());
    if (parts.size() == 1) return parts[0];
    return MakeCmd(Seq{parts}, Join(start, last_span_));
  }

  // c1; c2; ...
  CmdPtr ParseParList() {
    Span start = Cur().span;
    std::vector<CmdPtr> items;
    while (!AtListEnd()) {
      if (Accept(Tok::kSemi)) continue;
      for (CmdPtr& c : ParseStmt()) items.push_back(std::move(c));
      if (Accept(Tok::kSemi)) continue;
      if (last_ == Tok::kRBrace || AtListEnd()) continue;
      Error("expected ';' after statement, found " +
            std::string(TokName(Cur().kind)));
    }
    if (items.empty()) {
      return MakeCmd(Skip{}, Span{start.begin, start.begin, start.line, start.col});
    }
    if (items.size() == 1) return items[0];
    return MakeCmd(Par{items}, Join(items.front()->span, items.back()->span));
  }

  // `{ ... }` or a single statement.
  CmdPtr ParseBody() {
    if (Accept(Tok::kLBrace)) {
      CmdPtr body = ParseSeqList();
      Expect(Tok::kRBrace);
      return body;
    }
    std::vector<CmdPtr> cmds = ParseStmt();
    if (cmds.size() == 1) return cmds[0];
    return MakeCmd(Par{cmds}, Join(cmds.front()->span, cmds.back()->span));
  }

  std::vector<CmdPtr> ParseStmt() {
    Span start = Cur().span;
    switch (Cur().kind) {
      case Tok::kLet:
        return ParseLet();
      case Tok::kView:
        return ParseView();
      case Tok::kLBrace: {
        Take();
        CmdPtr body = ParseSeqList();
        Expect(Tok::kRBrace);
        return {MakeCmd(Block{body}, Join(start, last_span_))};
      }
      case Tok::kSkip:
        Take();
        return {MakeCmd(Skip{}, start)};
      case Tok::kFor:
        return {ParseFor()};
      case Tok::kWhile: {
        Take();
        Expect(Tok::kLParen);
        ExprPtr cond = ParseExpr();
        Expect(Tok::kRParen);
        CmdPtr body = ParseBody();
        return {MakeCmd(While{cond, body}, Join(start, last_span_))};
      }
      case Tok::kIf: {
        Take();
        Expect(Tok::kLParen);
        ExprPtr cond = ParseExpr();
        Expect(Tok::kRParen);
        CmdPtr then_branch = ParseBody();
        CmdPtr else_branch;
        if (Accept(Tok::kElse)) else_branch = ParseBody();
        return {MakeCmd(If{cond, then_branch, else_branch},
                        Join(start, last_span_))};
      }
      default:
        return {ParseSimple()};
    }
  }

  CmdPtr ParseSimple() {
    Span start = Cur().span;
    ExprPtr lhs = ParseExpr();
    auto check_target = [&](bool allow_var) {
      bool ok = std::holds_alternative<Access>(lhs->node) ||
                (allow_var && std::holds_alternative<VarRef>(lhs->node));
      if (!ok) Fail(codes::kParse, lhs->span, "invalid assignment target");
    };
    if (Accept(Tok::kColonAssign)) {
      check_target(true);
      ExprPtr rhs = ParseExpr();
      Span span = Join(start, last_span_);
      if (const auto* v = std::get_if<VarRef>(&lhs->node)) {
        return MakeCmd(Assign{v->name, rhs}, span);
      }
      return MakeCmd(Store{lhs, rhs}, span);
    }
    std::optional<ReduceOp> op;
    if (At(Tok::kPlusEq)) op = ReduceOp::kAdd;
    if (At(Tok::kMinusEq)) op = ReduceOp::kSub;
    if (At(Tok::kStarEq)) op = ReduceOp::kMul;
    if (At(Tok::kSlashEq)) op = ReduceOp::kDiv;
    if (op) {
      Take();
      check_target(true);
      ExprPtr rhs = ParseExpr();
      return MakeCmd(Reduce{*op, lhs, rhs}, Join(start, last_span_));
    }
    if (At(Tok::kAssign)) Error("use ':=' for assignment");
    return MakeCmd(ExprStmt{lhs}, Join(start, last_span_));
  }

  ScalarType ParseScalarType() {
    if (Accept(Tok::kFloatKw)) return ScalarType::Float();
    if (Accept(Tok::kBool)) return ScalarType::Bool();
    if (Accept(Tok::kBit)) {
      Expect(Tok::kLt);
      const Token& t = Expect(Tok::kInt);
      int64_t w = ParseIntToken(t);
      if (w < 1 || w > 64) Fail(codes::kParse, t.span, "bit width must be in 1..64");
      Expect(Tok::kGt);
      return ScalarType::Bit(static_cast<int>(w));
    }
    Error("expected a type, found " + std::string(TokName(Cur().kind)));
  }

  std::vector<CmdPtr> ParseLet() {
    Span start = Expect(Tok::kLet).span;
    std::vector<std::pair<std::string, Span>> names;
    do {
      const Token& t = Expect(Tok::kIdent);
      names.emplace_back(t.text, t.span);
    } while (Accept(Tok::kComma));
    std::optional<ScalarType> scalar;
    MemType mem;
    bool is_mem = false;
    if (Accept(Tok::kColon)) {
      scalar = ParseScalarType();
      if (At(Tok::kLBrace) || At(Tok::kLBracket)) {
        is_mem = true;
        mem.elem = *scalar;
        if (Accept(Tok::kLBrace)) {
          mem.ports = ExpectPositive("port count");
          Expect(Tok::kRBrace);
        }
        while (Accept(Tok::kLBracket)) {
          BankSpec d;
          d.size = ExpectPositive("memory size");
          if (Accept(Tok::kBank)) d.banks = ExpectPositive("banking factor");
          Expect(Tok::kRBracket);
          mem.dims.push_back(d);
        }
        if (mem.dims.empty()) Error("memory type needs at least one dimension");
      }
    }
    if (is_mem) {
      if (At(Tok::kAssign)) Error("memories cannot be initialized");
      std::vector<CmdPtr> out;
      for (auto& [name, span] : names) {
        out.push_back(MakeCmd(MemDecl{name, mem}, Join(start, last_span_)));
      }
      return out;
    }
    if (names.size() != 1) {
      Fail(codes::kParse, names[1].second,
           "only memory declarations may bind several names");
    }
    Expect(Tok::kAssign);
    ExprPtr init = ParseExpr();
    return {MakeCmd(Let{names[0].first, scalar, init}, Join(start, last_span_))};
  }

  std::optional<ViewKind> AcceptViewKind() {
    if (Accept(Tok::kShrink)) return ViewKind::kShrink;
    if (Accept(Tok::kSuffix)) return ViewKind::kSuffix;
    if (Accept(Tok::kShift)) return ViewKind::kShift;
    if (Accept(Tok::kSplit)) return ViewKind::kSplit;
    return std::nullopt;
  }

  std::vector<CmdPtr> ParseView() {
    Span start = Expect(Tok::kView).span;
    std::vector<std::pair<std::string, Span>> names;
    do {
      const Token& t = Expect(Tok::kIdent);
      names.emplace_back(t.text, t.span);
    } while (Accept(Tok::kComma));
    Expect(Tok::kAssign);
    std::optional<ViewKind> kind = AcceptViewKind();
    if (!kind) Error("expected a view kind (shrink, suffix, shift, split)");
    std::vector<CmdPtr> out;
    for (size_t n = 0; n < names.size(); ++n) {
      if (n > 0) {
        Expect(Tok::kComma);
        if (std::optional<ViewKind> k = AcceptViewKind()) kind = k;
      }
      ViewDecl decl;
      decl.name = names[n].first;
      decl.kind = *kind;
      decl.underlying = Expect(Tok::kIdent).text;
      do {
        Expect(Tok::kLBracket);
        Expect(Tok::kBy);
        decl.args.push_back(ParseExpr());
        Expect(Tok::kRBracket);
      } while (At(Tok::kLBracket));
      out.push_back(MakeCmd(std::move(decl), Join(start, last_span_)));
    }
    return out;
  }

  CmdPtr ParseFor() {
    Span start = Expect(Tok::kFor).span;
    Expect(Tok::kLParen);
    Expect(Tok::kLet);
    For loop;
    loop.iter = Expect(Tok::kIdent).text;
    Expect(Tok::kAssign);
    loop.lo = ParseIntToken(Expect(Tok::kInt));
    Expect(Tok::kDotDot);
    const Token& hi = Expect(Tok::kInt);
    loop.hi = ParseIntToken(hi);
    if (loop.hi < loop.lo) Fail(codes::kParse, hi.span, "empty loop range");
    Expect(Tok::kRParen);
    if (Accept(Tok::kUnroll)) loop.unroll = ExpectPositive("unroll factor");
    loop.body = ParseBody();
    if (Accept(Tok::kCombine)) loop.combine = ParseBody();
    return MakeCmd(std::move(loop), Join(start, last_span_));
  }

  // Precedence climbing over C-like binary operators.
  std::optional<BinOp> CurBinOp() const {
    switch (Cur().kind) {
      case Tok::kPlus: return BinOp::kAdd;
      case Tok::kMinus: return BinOp::kSub;
      case Tok::kStar: return BinOp::kMul;
      case Tok::kSlash: return BinOp::kDiv;
      case Tok::kPercent: return BinOp::kMod;
      case Tok::kEqEq: return BinOp::kEq;
      case Tok::kNe: return BinOp::kNe;
      case Tok::kLt: return BinOp::kLt;
      case Tok::kLe: return BinOp::kLe;
      case Tok::kGt: return BinOp::kGt;
      case Tok::kGe: return BinOp::kGe;
      case Tok::kAndAnd: return BinOp::kAnd;
      case Tok::kOrOr: return BinOp::kOr;
      default: return std::nullopt;
    }
  }

  ExprPtr ParseExpr(int min_prec = 1) {
    ExprPtr lhs = ParseUnary();
    while (true) {
      std::optional<BinOp> op = CurBinOp();
      if (!op || BinOpPrecedence(*op) < min_prec) return lhs;
      Take();
      ExprPtr rhs = ParseExpr(BinOpPrecedence(*op) + 1);
      lhs = MakeBinary(*op, lhs, rhs, Join(lhs->span, rhs->span));
    }
  }

  ExprPtr ParseUnary() {
    if (At(Tok::kMinus)) {
      Span start = Take().span;
      if (At(Tok::kInt) || At(Tok::kFloat)) {
        ExprPtr lit = ParseLiteral("-");
        return MakeExpr(lit->node, Join(start, lit->span));
      }
      ExprPtr operand = ParseUnary();
      return MakeBinary(BinOp::kSub, MakeInt(0, start), operand,
                        Join(start, operand->span));
    }
    return ParsePrimary();
  }

  ExprPtr ParseLiteral(const std::string& sign) {
    const Token& t = Take();
    NumLit lit;
    lit.text = sign + t.text;
    if (t.kind == Tok::kFloat) {
      lit.is_float = true;
      lit.float_value = std::strtod(lit.text.c_str(), nullptr);
    } else {
      Token signed_tok = t;
      signed_tok.text = lit.text;
      lit.int_value = ParseIntToken(signed_tok);
    }
    return MakeExpr(std::move(lit), t.span);
  }

  bool AtPhysicalBanks() const {
    if (!At(Tok::kLBrace) || PeekTok(1).kind != Tok::kInt) return false;
    Tok after = PeekTok(2).kind;
    return after == Tok::kRBrace || after == Tok::kComma;
  }

  ExprPtr ParsePrimary() {
    Span start = Cur().span;
    switch (Cur().kind) {
      case Tok::kInt:
      case Tok::kFloat:
        return ParseLiteral("");
      case Tok::kTrue:
        Take();
        return MakeExpr(BoolLit{true}, start);
      case Tok::kFalse:
        Take();
        return MakeExpr(BoolLit{false}, start);
      case Tok::kLParen: {
        Take();
        ExprPtr inner = ParseExpr();
        Expect(Tok::kRParen);
        return inner;
      }
      case Tok::kIdent: {
        std::string name = Take().text;
        Access access;
        access.mem = name;
        if (AtPhysicalBanks()) {
          Take();
          do {
            const Token& t = Expect(Tok::kInt);
            access.banks.push_back(ParseIntToken(t));
          } while (Accept(Tok::kComma));
          Expect(Tok::kRBrace);
          if (!At(Tok::kLBracket)) Error("physical access needs an offset");
        }
        if (!At(Tok::kLBracket)) return MakeExpr(VarRef{name}, start);
        while (Accept(Tok::kLBracket)) {
          access.indices.push_back(ParseExpr());
          Expect(Tok::kRBracket);
        }
        return MakeExpr(std::move(access), Join(start, last_span_));
      }
      default:
        Error("expected an expression, found " +
              std::string(TokName(Cur().kind)));
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  Tok last_ = Tok::kEof;
  Span last_span_;
};

}  // namespace

Program ParseOrThrow(std::string_view source) {
  return Parser(Lex(source)).Run();
}

ParseResult ParseProgram(std::string_view source) {
  ParseResult result;
  try {
    result.program = ParseOrThrow(source);
  } catch (const DiagnosticError& e) {
    result.diagnostics.push_back(e.diagnostic());
  }
  return result;
}

}  // namespace fuse
