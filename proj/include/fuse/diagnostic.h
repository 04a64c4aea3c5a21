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

#ifndef FUSE_DIAGNOSTIC_H_
#define FUSE_DIAGNOSTIC_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fuse {

// Byte range [begin, end) into the source plus the 1-based position of
// `begin`.
struct Span {
  uint32_t begin = 0;
  uint32_t end = 0;
  uint32_t line = 1;
  uint32_t col = 1;
};

// Stable error codes. Parse errors are E-LEX / E-PARSE; the rest come from
// the checker.
namespace codes {
inline constexpr std::string_view kLex = "E-LEX";
inline constexpr std::string_view kParse = "E-PARSE";
inline constexpr std::string_view kConsumed = "E-CONSUMED";
inline constexpr std::string_view kBanks = "E-BANKS";
inline constexpr std::string_view kWriteCap = "E-WRITECAP";
inline constexpr std::string_view kDivides = "E-DIVIDES";
inline constexpr std::string_view kIndex = "E-INDEX";
inline constexpr std::string_view kView = "E-VIEW";
inline constexpr std::string_view kType = "E-TYPE";
}  // namespace codes

enum class Severity { kError, kWarning, kNote };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string code;
  std::string message;
  Span span;
};

// "file:line:col: error[CODE]: message"
std::string FormatDiagnostic(std::string_view file, const Diagnostic& diag);

// Thrown internally by the parser and checker; carries one diagnostic.
class DiagnosticError : public std::runtime_error {
 public:
  explicit DiagnosticError(Diagnostic diag)
      : std::runtime_error(diag.message), diag_(std::move(diag)) {}
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

[[noreturn]] inline void Fail(std::string_view code, Span span,
                              std::string message) {
  throw DiagnosticError(
      Diagnostic{Severity::kError, std::string(code), std::move(message), span});
}

}  // namespace fuse

#endif  // FUSE_DIAGNOSTIC_H_
