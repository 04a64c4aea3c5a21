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

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "fuse/diagnostic.h"
#include "fuse/lexer.h"
#include "fuse/parser.h"
#include "fuse/printer.h"
#include "fuse/scalar.h"
#include "fuse/surface_gen.h"
#include "support/oracles.h"

namespace fuse {
namespace {

std::vector<Tok> Kinds(std::string_view source) {
  std::vector<Tok> out;
  for (const Token& t : Lex(source)) out.push_back(t.kind);
  return out;
}

TEST(LexerTest, DistinguishesSeqBarFromMinus) {
  EXPECT_EQ(Kinds("a --- b - c"),
            (std::vector<Tok>{Tok::kIdent, Tok::kSeqBar, Tok::kIdent,
                              Tok::kMinus, Tok::kIdent, Tok::kEof}));
}

TEST(LexerTest, RangesAndFloats) {
  EXPECT_EQ(Kinds("0..8 1.5"),
            (std::vector<Tok>{Tok::kInt, Tok::kDotDot, Tok::kInt, Tok::kFloat,
                              Tok::kEof}));
}

TEST(LexerTest, CompoundAssignments) {
  EXPECT_EQ(Kinds(":= += -= *= /= = =="),
            (std::vector<Tok>{Tok::kColonAssign, Tok::kPlusEq, Tok::kMinusEq,
                              Tok::kStarEq, Tok::kSlashEq, Tok::kAssign,
                              Tok::kEqEq, Tok::kEof}));
}

TEST(LexerTest, SkipsLineComments) {
  EXPECT_EQ(Kinds("// all of this\nskip"),
            (std::vector<Tok>{Tok::kSkip, Tok::kEof}));
}

TEST(LexerTest, TracksLineAndColumn) {
  std::vector<Token> toks = Lex("let\n  x");
  ASSERT_GE(toks.size(), 2u);
  EXPECT_EQ(toks[1].span.line, 2u);
  EXPECT_EQ(toks[1].span.col, 3u);
}

TEST(LexerTest, RejectsStrayCharacter) {
  try {
    Lex("let x = 1 $ 2;");
    FAIL() << "no error";
  } catch (const DiagnosticError& e) {
    EXPECT_EQ(e.diagnostic().code, codes::kLex);
    EXPECT_EQ(e.diagnostic().span.col, 11u);
  }
}

TEST(ParserTest, EmptyProgramIsSkip) {
  ParseResult r = ParseProgram("");
  ASSERT_TRUE(r.ok());
}

TEST(ParserTest, ReportsParseErrorWithPosition) {
  ParseResult r = ParseProgram("let A: float[8 bank 2];\nfor (let i = 0..) { skip }");
  ASSERT_FALSE(r.ok());
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].code, codes::kParse);
  EXPECT_EQ(r.diagnostics[0].span.line, 2u);
}

TEST(ParserTest, LexErrorsSurfaceAsDiagnostics) {
  ParseResult r = ParseProgram("let x = #;");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics[0].code, codes::kLex);
}

TEST(ParserTest, ParseOrThrowThrows) {
  EXPECT_THROW(ParseOrThrow("for"), DiagnosticError);
}

TEST(ParserTest, PrecedenceFollowsC) {
  Program p = ParseOrThrow("let x = 1 + 2 * 3 < 4 && true;");
  Program q = ParseOrThrow("let x = ((1 + (2 * 3)) < 4) && true;");
  EXPECT_TRUE(Equal(p.body, q.body));
}

TEST(ParserTest, AllGoldensParse) {
  for (const testing::Golden& g : testing::LoadGoldens()) {
    EXPECT_TRUE(ParseProgram(g.source).ok()) << g.name;
  }
}

TEST(PrinterTest, RoundTripsGoldens) {
  for (const testing::Golden& g : testing::LoadGoldens()) {
    Program p = ParseOrThrow(g.source);
    std::string printed = PrintProgram(p);
    ParseResult again = ParseProgram(printed);
    ASSERT_TRUE(again.ok()) << g.name << "\n" << printed;
    EXPECT_TRUE(Equal(p.body, again.program->body)) << g.name;
    EXPECT_EQ(PrintProgram(*again.program), printed) << g.name;
  }
}

TEST(PrinterTest, RoundTripsGeneratedPrograms) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    SurfaceProgram s = GenerateSurface({.seed = seed});
    std::string printed = PrintProgram(s.program);
    ParseResult again = ParseProgram(printed);
    ASSERT_TRUE(again.ok()) << printed;
    EXPECT_TRUE(Equal(s.program.body, again.program->body)) << printed;
  }
}

TEST(PrinterTest, KeepsNeededParentheses) {
  Program p = ParseOrThrow("let x = (1 - 2) - (3 - 4);");
  Program q = ParseOrThrow(PrintProgram(p));
  EXPECT_TRUE(Equal(p.body, q.body));
  EXPECT_NE(PrintProgram(p).find("(3 - 4)"), std::string::npos);
}

TEST(DiagnosticTest, Format) {
  Diagnostic d{Severity::kError, "E-BANKS", "too few banks", {0, 1, 3, 7}};
  EXPECT_EQ(FormatDiagnostic("a.fuse", d), "a.fuse:3:7: error[E-BANKS]: too few banks");
}

TEST(ScalarTest, BitArithmeticWraps) {
  // 8-bit two's complement: 127 + 1 wraps to -128.
  Value v = ApplyBinOp(BinOp::kAdd, Value::Bit(127, 8), Value::Bit(1, 8));
  EXPECT_EQ(v.i, -128);
  EXPECT_EQ(v.type, ScalarType::Bit(8));
}

TEST(ScalarTest, MixedWidthsJoin) {
  Value v = ApplyBinOp(BinOp::kMul, Value::Bit(3, 8), Value::Bit(100, 16));
  EXPECT_EQ(v.type, ScalarType::Bit(16));
  EXPECT_EQ(v.i, 300);
  Value f = ApplyBinOp(BinOp::kAdd, Value::Bit(1, 32), Value::Float(0.5));
  EXPECT_EQ(f.type, ScalarType::Float());
  EXPECT_DOUBLE_EQ(f.f, 1.5);
}

TEST(ScalarTest, DivisionByZeroThrows) {
  EXPECT_THROW(ApplyBinOp(BinOp::kDiv, Value::Bit(1), Value::Bit(0)), ArithError);
  EXPECT_THROW(ApplyBinOp(BinOp::kMod, Value::Bit(1), Value::Bit(0)), ArithError);
}

TEST(ScalarTest, ComparisonsYieldBool) {
  Value v = ApplyBinOp(BinOp::kLt, Value::Bit(-1), Value::Float(0.0));
  EXPECT_EQ(v.type, ScalarType::Bool());
  EXPECT_TRUE(v.b);
}

TEST(ScalarTest, ConvertWrapsIntoWidth) {
  EXPECT_EQ(ConvertTo(Value::Bit(300, 32), ScalarType::Bit(8)).i, 44);
  EXPECT_EQ(ConvertTo(Value::Float(-2.75), ScalarType::Bit(32)).i, -2);
}

}  // namespace
}  // namespace fuse
