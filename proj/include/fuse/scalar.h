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

#ifndef FUSE_SCALAR_H_
#define FUSE_SCALAR_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fuse {

enum class ScalarKind { kBit, kFloat, kBool };

// A scalar value type. `width` is meaningful only for kBit.
struct ScalarType {
  ScalarKind kind = ScalarKind::kBit;
  int width = 32;

  static ScalarType Bit(int width) { return {ScalarKind::kBit, width}; }
  static ScalarType Float() { return {ScalarKind::kFloat, 0}; }
  static ScalarType Bool() { return {ScalarKind::kBool, 0}; }

  bool is_numeric() const { return kind != ScalarKind::kBool; }
  bool is_bit() const { return kind == ScalarKind::kBit; }
  std::string ToString() const;

  bool operator==(const ScalarType&) const = default;
};

// bit<n> values are n-bit two's-complement integers; float is binary64.
struct Value {
  ScalarType type;
  int64_t i = 0;
  double f = 0.0;
  bool b = false;

  static Value Bit(int64_t v, int width = 32);
  static Value Float(double v);
  static Value Bool(bool v);
  static Value Zero(ScalarType type);

  int64_t AsInt() const;
  double AsDouble() const;
  std::string ToString() const;

  // Floats compare bitwise.
  bool operator==(const Value& other) const;
};

enum class BinOp {
  kAdd, kSub, kMul, kDiv, kMod,
  kEq, kNe, kLt, kLe, kGt, kGe,
  kAnd, kOr,
};

std::string_view BinOpSymbol(BinOp op);
// C precedence levels; larger binds tighter.
int BinOpPrecedence(BinOp op);
bool IsComparison(BinOp op);
bool IsLogical(BinOp op);

// Numeric join: bit<n> with bit<m> is bit<max(n, m)>, anything with float is
// float.
std::optional<ScalarType> BinOpResultType(BinOp op, ScalarType lhs,
                                          ScalarType rhs);

// Raised for integer division or remainder by zero.
class ArithError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int64_t WrapToWidth(int64_t v, int width);
Value ApplyBinOp(BinOp op, const Value& lhs, const Value& rhs);
// Converts between numeric types (wrapping into bit widths). Bool converts
// only to bool.
Value ConvertTo(const Value& v, ScalarType type);

}  // namespace fuse

#endif  // FUSE_SCALAR_H_
