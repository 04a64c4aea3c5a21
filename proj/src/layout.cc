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

#include "fuse/layout.h"

namespace fuse {
namespace {

int64_t RowMajor(const std::vector<int64_t>& extents,
                 const std::vector<int64_t>& coords) {
  int64_t flat = 0;
  for (size_t d = 0; d < extents.size(); ++d) flat = flat * extents[d] + coords[d];
  return flat;
}

std::vector<int64_t> FromRowMajor(const std::vector<int64_t>& extents,
                                  int64_t flat) {
  std::vector<int64_t> coords(extents.size());
  for (size_t d = extents.size(); d-- > 0;) {
    coords[d] = flat % extents[d];
    flat /= extents[d];
  }
  return coords;
}

std::vector<int64_t> Sizes(const MemType& t) {
  std::vector<int64_t> out;
  for (const BankSpec& d : t.dims) out.push_back(d.size);
  return out;
}
std::vector<int64_t> Banks(const MemType& t) {
  std::vector<int64_t> out;
  for (const BankSpec& d : t.dims) out.push_back(d.banks);
  return out;
}
std::vector<int64_t> BankExtents(const MemType& t) {
  std::vector<int64_t> out;
  for (const BankSpec& d : t.dims) out.push_back(d.size / d.banks);
  return out;
}

bool AllBelow(const std::vector<int64_t>& v, const std::vector<int64_t>& hi) {
  if (v.size() != hi.size()) return false;
  for (size_t d = 0; d < v.size(); ++d) {
    if (v[d] < 0 || v[d] >= hi[d]) return false;
  }
  return true;
}

}  // namespace

int64_t BankSize(const MemType& type) {
  return type.TotalSize() / type.FlatBanks();
}

bool InBounds(const MemType& type, const std::vector<int64_t>& index) {
  return AllBelow(index, Sizes(type));
}

int64_t FlattenIndex(const MemType& type, const std::vector<int64_t>& index) {
  return RowMajor(Sizes(type), index);
}

std::vector<int64_t> UnflattenIndex(const MemType& type, int64_t flat) {
  return FromRowMajor(Sizes(type), flat);
}

int64_t FlattenBank(const MemType& type, const std::vector<int64_t>& bank) {
  return RowMajor(Banks(type), bank);
}

std::vector<int64_t> UnflattenBank(const MemType& type, int64_t flat) {
  return FromRowMajor(Banks(type), flat);
}

int64_t FlattenOffset(const MemType& type, const std::vector<int64_t>& offset) {
  return RowMajor(BankExtents(type), offset);
}

std::vector<int64_t> UnflattenOffset(const MemType& type, int64_t flat) {
  return FromRowMajor(BankExtents(type), flat);
}

PhysLoc LogicalToPhysical(const MemType& type,
                          const std::vector<int64_t>& index) {
  PhysLoc loc;
  for (size_t d = 0; d < type.dims.size(); ++d) {
    loc.bank.push_back(index[d] % type.dims[d].banks);
    loc.offset.push_back(index[d] / type.dims[d].banks);
  }
  loc.flat_bank = FlattenBank(type, loc.bank);
  loc.flat_offset = FlattenOffset(type, loc.offset);
  return loc;
}

std::optional<std::vector<int64_t>> PhysicalToLogical(
    const MemType& type, const std::vector<int64_t>& banks,
    const std::vector<int64_t>& offsets) {
  size_t n = type.dims.size();
  std::vector<int64_t> bank = banks;
  if (banks.size() == 1 && n != 1) {
    if (banks[0] < 0 || banks[0] >= type.FlatBanks()) return std::nullopt;
    bank = UnflattenBank(type, banks[0]);
  }
  std::vector<int64_t> offset = offsets;
  if (offsets.size() == 1 && n != 1) {
    if (offsets[0] < 0 || offsets[0] >= BankSize(type)) return std::nullopt;
    offset = UnflattenOffset(type, offsets[0]);
  }
  if (!AllBelow(bank, Banks(type)) || !AllBelow(offset, BankExtents(type))) {
    return std::nullopt;
  }
  std::vector<int64_t> index(n);
  for (size_t d = 0; d < n; ++d) {
    index[d] = offset[d] * type.dims[d].banks + bank[d];
  }
  return index;
}

}  // namespace fuse
