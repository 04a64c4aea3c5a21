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

#ifndef FUSE_CORE_PRINTER_H_
#define FUSE_CORE_PRINTER_H_

#include <string>

#include "fuse/core/ast.h"

namespace fuse::core {

std::string PrintExpr(const Expr& e);
std::string PrintCmd(const Cmd& c, int indent = 0);
// Memory declarations followed by the body.
std::string PrintProgram(const Program& p);

}  // namespace fuse::core

#endif  // FUSE_CORE_PRINTER_H_
