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

#include "fuse/lexer.h"

#include <cctype>
#include <unordered_map>

namespace fuse {

std::string_view TokName(Tok tok) {
  switch (tok) {
    case Tok::kIdent: return "identifier";
    case Tok::kInt: return "integer literal";
    case Tok::kFloat: return "float literal";
    case Tok::kLet: return "'let'";
    case Tok::kView: return "'view'";
    case Tok::kFor: return "'for'";
    case Tok::kWhile: return "'while'";
    case Tok::kIf: return "'if'";
    case Tok::kElse: return "'else'";
    case Tok::kUnroll: return "'unroll'";
    case Tok::kCombine: return "'combine'";
    case Tok::kBank: return "'bank'";
    case Tok::kBy: return "'by'";
    case Tok::kTrue: return "'true'";
    case Tok::kFalse: return "'false'";
    case Tok::kSkip: return "'skip'";
    case Tok::kBit: return "'bit'";
    case Tok::kFloatKw: return "'float'";
    case Tok::kBool: return "'bool'";
    case Tok::kShrink: return "'shrink'";
    case Tok::kSuffix: return "'suffix'";
    case Tok::kShift: return "'shift'";
    case Tok::kSplit: return "'split'";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kLBrace: return "'{'";
    case Tok::kRBrace: return "'}'";
    case Tok::kLBracket: return "'['";
    case Tok::kRBracket: return "']'";
    case Tok::kSemi: return "';'";
    case Tok::kColon: return "':'";
    case Tok::kComma: return "','";
    case Tok::kDotDot: return "'..'";
    case Tok::kSeqBar: return "'---'";
    case Tok::kAssign: return "'='";
    case Tok::kColonAssign: return "':='";
    case Tok::kPlusEq: return "'+='";
    case Tok::kMinusEq: return "'-='";
    case Tok::kStarEq: return "'*='";
    case Tok::kSlashEq: return "'/='";
    case Tok::kPlus: return "'+'";
    case Tok::kMinus: return "'-'";
    case Tok::kStar: return "'*'";
    case Tok::kSlash: return "'/'";
    case Tok::kPercent: return "'%'";
    case Tok::kEqEq: return "'=='";
    case Tok::kNe: return "'!='";
    case Tok::kLt: return "'<'";
    case Tok::kLe: return "'<='";
    case Tok::kGt: return "'>'";
    case Tok::kGe: return "'>='";
    case Tok::kAndAnd: return "'&&'";
    case Tok::kOrOr: return "'||'";
    case Tok::kEof: return "end of input";
  }
  return "?";
}

namespace {

const std::unordered_map<std::string_view, Tok>& Keywords() {
  static const auto* map = new std::unordered_map<std::string_view, Tok>{
      {"let", Tok::kLet},         {"view", Tok::kView},
      {"for", Tok::kFor},         {"while", Tok::kWhile},
      {"if", Tok::kIf},           {"else", Tok::kElse},
      {"unroll", Tok::kUnroll},   {"combine", Tok::kCombine},
      {"bank", Tok::kBank},       {"by", Tok::kBy},
      {"true", Tok::kTrue},       {"false", Tok::kFalse},
      {"skip", Tok::kSkip},       {"bit", Tok::kBit},
      {"float", Tok::kFloatKw},   {"bool", Tok::kBool},
      {"shrink", Tok::kShrink},   {"suffix", Tok::kSuffix},
      {"shift", Tok::kShift},     {"split", Tok::kSplit},
  };
  return *map;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    while (true) {
      SkipTrivia();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::kEof, "", SpanFrom(pos_, line_, col_)});
        return out;
      }
      out.push_back(Next());
    }
  }

 private:
  char Peek(size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void Advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void SkipTrivia() {
    while (pos_ < src_.size()) {
      char c = Peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        Advance();
      } else if (c == '/' && Peek(1) == '/') {
        while (pos_ < src_.size() && Peek() != '\n') Advance();
      } else {
        return;
      }
    }
  }

  Span SpanFrom(size_t begin, uint32_t line, uint32_t col) const {
    return Span{static_cast<uint32_t>(begin), static_cast<uint32_t>(pos_),
                line, col};
  }

  Token Next() {
    size_t begin = pos_;
    uint32_t line = line_;
    uint32_t col = col_;
    auto make = [&](Tok kind) {
      return Token{kind, std::string(src_.substr(begin, pos_ - begin)),
                   SpanFrom(begin, line, col)};
    };
    char c = Peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (std::isalnum(static_cast<unsigned char>(Peek())) || Peek() == '_') {
        Advance();
      }
      auto it = Keywords().find(src_.substr(begin, pos_ - begin));
      return make(it == Keywords().end() ? Tok::kIdent : it->second);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (std::isdigit(static_cast<unsigned char>(Peek()))) Advance();
      bool is_float = false;
      if (Peek() == '.' && std::isdigit(static_cast<unsigned char>(Peek(1)))) {
        is_float = true;
        Advance();
        while (std::isdigit(static_cast<unsigned char>(Peek()))) Advance();
      }
      if (std::isalpha(static_cast<unsigned char>(Peek())) || Peek() == '_') {
        Advance();
        Fail(codes::kLex, SpanFrom(begin, line, col),
             "malformed numeric literal");
      }
      return make(is_float ? Tok::kFloat : Tok::kInt);
    }
    auto two = [&](char second) { return Peek(1) == second; };
    auto take = [&](int n, Tok kind) {
      for (int i = 0; i < n; ++i) Advance();
      return make(kind);
    };
    switch (c) {
      case '(': return take(1, Tok::kLParen);
      case ')': return take(1, Tok::kRParen);
      case '{': return take(1, Tok::kLBrace);
      case '}': return take(1, Tok::kRBrace);
      case '[': return take(1, Tok::kLBracket);
      case ']': return take(1, Tok::kRBracket);
      case ';': return take(1, Tok::kSemi);
      case ',': return take(1, Tok::kComma);
      case '%': return take(1, Tok::kPercent);
      case '.':
        if (two('.')) return take(2, Tok::kDotDot);
        break;
      case ':':
        return two('=') ? take(2, Tok::kColonAssign) : take(1, Tok::kColon);
      case '=':
        return two('=') ? take(2, Tok::kEqEq) : take(1, Tok::kAssign);
      case '!':
        if (two('=')) return take(2, Tok::kNe);
        break;
      case '<':
        return two('=') ? take(2, Tok::kLe) : take(1, Tok::kLt);
      case '>':
        return two('=') ? take(2, Tok::kGe) : take(1, Tok::kGt);
      case '&':
        if (two('&')) return take(2, Tok::kAndAnd);
        break;
      case '|':
        if (two('|')) return take(2, Tok::kOrOr);
        break;
      case '+':
        return two('=') ? take(2, Tok::kPlusEq) : take(1, Tok::kPlus);
      case '*':
        return two('=') ? take(2, Tok::kStarEq) : take(1, Tok::kStar);
      case '/':
        return two('=') ? take(2, Tok::kSlashEq) : take(1, Tok::kSlash);
      case '-':
        if (two('-')) {
          if (Peek(2) != '-') {
            Advance();
            Advance();
            Fail(codes::kLex, SpanFrom(begin, line, col),
                 "'--' is not an operator; ordered composition is '---'");
          }
          size_t n = 3;
          while (Peek(n) == '-') ++n;
          return take(static_cast<int>(n), Tok::kSeqBar);
        }
        return two('=') ? take(2, Tok::kMinusEq) : take(1, Tok::kMinus);
      default:
        break;
    }
    Advance();
    Fail(codes::kLex, SpanFrom(begin, line, col),
         "unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view src_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  uint32_t col_ = 1;
};

}  // namespace

std::vector<Token> Lex(std::string_view source) {
  return Lexer(source).Run();
}

}  // namespace fuse
