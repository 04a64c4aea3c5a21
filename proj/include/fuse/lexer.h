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

#ifndef FUSE_LEXER_H_
#define FUSE_LEXER_H_

#include <string>
#include <string_view>
#include <vector>

#include "fuse/diagnostic.h"

namespace fuse {

enum class Tok {
  kIdent,
  kInt,
  kFloat,
  // Keywords.
  kLet, kView, kFor, kWhile, kIf, kElse, kUnroll, kCombine, kBank, kBy,
  kTrue, kFalse, kSkip, kBit, kFloatKw, kBool,
  kShrink, kSuffix, kShift, kSplit,
  // Punctuation.
  kLParen, kRParen, kLBrace, kRBrace, kLBracket, kRBracket,
  kSemi, kColon, kComma, kDotDot, kSeqBar,  // ---
  kAssign,       // =
  kColonAssign,  // :=
  kPlusEq, kMinusEq, kStarEq, kSlashEq,
  kPlus, kMinus, kStar, kSlash, kPercent,
  kEqEq, kNe, kLt, kLe, kGt, kGe, kAndAnd, kOrOr,
  kEof,
};

std::string_view TokName(Tok tok);

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

// Throws DiagnosticError with code E-LEX on invalid input.
std::vector<Token> Lex(std::string_view source);

}  // namespace fuse

#endif  // FUSE_LEXER_H_
