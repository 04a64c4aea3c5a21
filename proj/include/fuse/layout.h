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

#ifndef FUSE_LAYOUT_H_
#define FUSE_LAYOUT_H_

#include <cstdint>
#include <vector>

#include "fuse/ast.h"

namespace fuse {

// Cyclic banking: in each dimension, element e lives in bank e mod B at
// offset e div B. Flat bank and flat offset numbering are row-major over the
// per-dimension values.
struct PhysLoc {
  std::vector<int64_t> bank;
  std::vector<int64_t> offset;
  int64_t flat_bank = 0;
  int64_t flat_offset = 0;
};

// Elements held by each bank.
int64_t BankSize(const MemType& type);

bool InBounds(const MemType& type, const std::vector<int64_t>& index);
int64_t FlattenIndex(const MemType& type, const std::vector<int64_t>& index);
std::vector<int64_t> UnflattenIndex(const MemType& type, int64_t flat);

int64_t FlattenBank(const MemType& type, const std::vector<int64_t>& bank);
std::vector<int64_t> UnflattenBank(const MemType& type, int64_t flat);

int64_t FlattenOffset(const MemType& type, const std::vector<int64_t>& offset);
std::vector<int64_t> UnflattenOffset(const MemType& type, int64_t flat);

PhysLoc LogicalToPhysical(const MemType& type,
                          const std::vector<int64_t>& index);

// `banks` is either one flat bank or one bank per dimension; `offsets` is
// either one flat offset or one offset per dimension. Returns nothing when
// out of range.
std::optional<std::vector<int64_t>> PhysicalToLogical(
    const MemType& type, const std::vector<int64_t>& banks,
    const std::vector<int64_t>& offsets);

}  // namespace fuse

#endif  // FUSE_LAYOUT_H_
