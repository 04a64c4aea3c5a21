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

#include "fuse/scalar.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace fuse {

std::string ScalarType::ToString() const {
  switch (kind) {
    case ScalarKind::kBit:
      return "bit<" + std::to_string(width) + ">";
    case ScalarKind::kFloat:
      return "float";
    case ScalarKind::kBool:
      return "bool";
  }
  return "?";
}

int64_t WrapToWidth(int64_t v, int width) {
  if (width >= 64) return v;
  uint64_t mask = (uint64_t{1} << width) - 1;
  uint64_t u = static_cast<uint64_t>(v) & mask;
  if (u & (uint64_t{1} << (width - 1))) u |= ~mask;
  return static_cast<int64_t>(u);
}

Value Value::Bit(int64_t v, int width) {
  Value out;
  out.type = ScalarType::Bit(width);
  out.i = WrapToWidth(v, width);
  return out;
}

Value Value::Float(double v) {
  Value out;
  out.type = ScalarType::Float();
  out.f = v;
  return out;
}

Value Value::Bool(bool v) {
  Value out;
  out.type = ScalarType::Bool();
  out.b = v;
  return out;
}

Value Value::Zero(ScalarType type) {
  switch (type.kind) {
    case ScalarKind::kBit:
      return Bit(0, type.width);
    case ScalarKind::kFloat:
      return Float(0.0);
    case ScalarKind::kBool:
      return Bool(false);
  }
  return Bit(0);
}

int64_t Value::AsInt() const {
  switch (type.kind) {
    case ScalarKind::kBit:
      return i;
    case ScalarKind::kFloat: {
      if (std::isnan(f)) return 0;
      if (f >= 9.2e18) return std::numeric_limits<int64_t>::max();
      if (f <= -9.2e18) return std::numeric_limits<int64_t>::min();
      return static_cast<int64_t>(f);
    }
    case ScalarKind::kBool:
      return b ? 1 : 0;
  }
  return 0;
}

double Value::AsDouble() const {
  switch (type.kind) {
    case ScalarKind::kBit:
      return static_cast<double>(i);
    case ScalarKind::kFloat:
      return f;
    case ScalarKind::kBool:
      return b ? 1.0 : 0.0;
  }
  return 0.0;
}

std::string Value::ToString() const {
  switch (type.kind) {
    case ScalarKind::kBit:
      return std::to_string(i);
    case ScalarKind::kFloat: {
      if (std::isnan(f)) return "nan";
      if (std::isinf(f)) return f > 0 ? "inf" : "-inf";
      std::ostringstream os;
      os.precision(17);
      os << f;
      std::string s = os.str();
      if (s.find_first_of(".e") == std::string::npos) s += ".0";
      return s;
    }
    case ScalarKind::kBool:
      return b ? "true" : "false";
  }
  return "?";
}

bool Value::operator==(const Value& other) const {
  if (!(type == other.type)) return false;
  switch (type.kind) {
    case ScalarKind::kBit:
      return i == other.i;
    case ScalarKind::kFloat:
      return std::memcmp(&f, &other.f, sizeof(double)) == 0;
    case ScalarKind::kBool:
      return b == other.b;
  }
  return false;
}

std::string_view BinOpSymbol(BinOp op) {
  switch (op) {
    case BinOp::kAdd: return "+";
    case BinOp::kSub: return "-";
    case BinOp::kMul: return "*";
    case BinOp::kDiv: return "/";
    case BinOp::kMod: return "%";
    case BinOp::kEq: return "==";
    case BinOp::kNe: return "!=";
    case BinOp::kLt: return "<";
    case BinOp::kLe: return "<=";
    case BinOp::kGt: return ">";
    case BinOp::kGe: return ">=";
    case BinOp::kAnd: return "&&";
    case BinOp::kOr: return "||";
  }
  return "?";
}

int BinOpPrecedence(BinOp op) {
  switch (op) {
    case BinOp::kOr: return 1;
    case BinOp::kAnd: return 2;
    case BinOp::kEq:
    case BinOp::kNe: return 3;
    case BinOp::kLt:
    case BinOp::kLe:
    case BinOp::kGt:
    case BinOp::kGe: return 4;
    case BinOp::kAdd:
    case BinOp::kSub: return 5;
    case BinOp::kMul:
    case BinOp::kDiv:
    case BinOp::kMod: return 6;
  }
  return 0;
}

bool IsComparison(BinOp op) {
  return op == BinOp::kEq || op == BinOp::kNe || op == BinOp::kLt ||
         op == BinOp::kLe || op == BinOp::kGt || op == BinOp::kGe;
}

bool IsLogical(BinOp op) { return op == BinOp::kAnd || op == BinOp::kOr; }

namespace {

ScalarType NumericJoin(ScalarType a, ScalarType b) {
  if (a.kind == ScalarKind::kFloat || b.kind == ScalarKind::kFloat) {
    return ScalarType::Float();
  }
  return ScalarType::Bit(std::max(a.width, b.width));
}

int64_t WrappingAdd(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) +
                              static_cast<uint64_t>(b));
}
int64_t WrappingSub(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) -
                              static_cast<uint64_t>(b));
}
int64_t WrappingMul(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) *
                              static_cast<uint64_t>(b));
}

}  // namespace

std::optional<ScalarType> BinOpResultType(BinOp op, ScalarType lhs,
                                          ScalarType rhs) {
  if (IsLogical(op)) {
    if (lhs.kind == ScalarKind::kBool && rhs.kind == ScalarKind::kBool) {
      return ScalarType::Bool();
    }
    return std::nullopt;
  }
  if (op == BinOp::kEq || op == BinOp::kNe) {
    if (lhs.is_numeric() == rhs.is_numeric()) return ScalarType::Bool();
    return std::nullopt;
  }
  if (!lhs.is_numeric() || !rhs.is_numeric()) return std::nullopt;
  if (IsComparison(op)) return ScalarType::Bool();
  return NumericJoin(lhs, rhs);
}

Value ConvertTo(const Value& v, ScalarType type) {
  switch (type.kind) {
    case ScalarKind::kBit:
      return Value::Bit(v.AsInt(), type.width);
    case ScalarKind::kFloat:
      return Value::Float(v.AsDouble());
    case ScalarKind::kBool:
      return Value::Bool(v.type.kind == ScalarKind::kBool ? v.b
                                                          : v.AsInt() != 0);
  }
  return v;
}

Value ApplyBinOp(BinOp op, const Value& lhs, const Value& rhs) {
  std::optional<ScalarType> result = BinOpResultType(op, lhs.type, rhs.type);
  if (!result) {
    throw ArithError("operand types " + lhs.type.ToString() + " and " +
                     rhs.type.ToString() + " do not support '" +
                     std::string(BinOpSymbol(op)) + "'");
  }
  if (IsLogical(op)) {
    return Value::Bool(op == BinOp::kAnd ? (lhs.b && rhs.b)
                                         : (lhs.b || rhs.b));
  }
  if (!lhs.type.is_numeric()) {
    // Equality on bools.
    bool eq = lhs.b == rhs.b;
    return Value::Bool(op == BinOp::kEq ? eq : !eq);
  }
  ScalarType operand = NumericJoin(lhs.type, rhs.type);
  if (operand.kind == ScalarKind::kFloat) {
    double a = lhs.AsDouble();
    double b = rhs.AsDouble();
    switch (op) {
      case BinOp::kAdd: return Value::Float(a + b);
      case BinOp::kSub: return Value::Float(a - b);
      case BinOp::kMul: return Value::Float(a * b);
      case BinOp::kDiv: return Value::Float(a / b);
      case BinOp::kMod: return Value::Float(std::fmod(a, b));
      case BinOp::kEq: return Value::Bool(a == b);
      case BinOp::kNe: return Value::Bool(a != b);
      case BinOp::kLt: return Value::Bool(a < b);
      case BinOp::kLe: return Value::Bool(a <= b);
      case BinOp::kGt: return Value::Bool(a > b);
      case BinOp::kGe: return Value::Bool(a >= b);
      default: break;
    }
  }
  int64_t a = lhs.AsInt();
  int64_t b = rhs.AsInt();
  int w = operand.width;
  switch (op) {
    case BinOp::kAdd: return Value::Bit(WrappingAdd(a, b), w);
    case BinOp::kSub: return Value::Bit(WrappingSub(a, b), w);
    case BinOp::kMul: return Value::Bit(WrappingMul(a, b), w);
    case BinOp::kDiv:
      if (b == 0) throw ArithError("division by zero");
      if (a == std::numeric_limits<int64_t>::min() && b == -1) {
        return Value::Bit(a, w);
      }
      return Value::Bit(a / b, w);
    case BinOp::kMod:
      if (b == 0) throw ArithError("remainder by zero");
      if (b == -1) return Value::Bit(0, w);
      return Value::Bit(a % b, w);
    case BinOp::kEq: return Value::Bool(a == b);
    case BinOp::kNe: return Value::Bool(a != b);
    case BinOp::kLt: return Value::Bool(a < b);
    case BinOp::kLe: return Value::Bool(a <= b);
    case BinOp::kGt: return Value::Bool(a > b);
    case BinOp::kGe: return Value::Bool(a >= b);
    default: break;
  }
  throw ArithError("unsupported operator");
}

}  // namespace fuse
