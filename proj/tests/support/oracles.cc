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

#include "support/oracles.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fuse::testing {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string SourcePath(const std::string& relative) {
  return std::string(FUSE_SOURCE_DIR) + "/" + relative;
}

std::vector<Golden> LoadGoldens() {
  std::vector<Golden> out;
  for (const auto& entry :
       std::filesystem::directory_iterator(SourcePath("tests/golden"))) {
    if (entry.path().extension() != ".fuse") continue;
    Golden g;
    g.name = entry.path().stem().string();
    g.source = ReadFile(entry.path().string());
    std::istringstream first(g.source.substr(0, g.source.find('\n')));
    std::string slashes, expect, verdict;
    first >> slashes >> expect >> verdict >> g.code;
    if (expect != "expect:" || (verdict != "accept" && verdict != "reject")) {
      throw std::runtime_error(g.name + ": missing expectation line");
    }
    g.accept = verdict == "accept";
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(),
            [](const Golden& a, const Golden& b) { return a.name < b.name; });
  return out;
}

const std::vector<std::string>& VerdictSuite() {
  static const std::vector<std::string> kNames = {
      "consumed_read",      "same_address",       "ordered_restore",
      "ordered_block_consumed", "physical_banks", "two_ports",
      "insufficient_banks", "lockstep",           "nested_write_capability",
      "combine_dot",        "shrink",             "suffix",
      "shift_inner_unroll", "compound_index"};
  return kNames;
}

bool GemmLegal(int64_t bank11, int64_t bank12, int64_t bank21, int64_t bank22,
               int64_t unroll1, int64_t unroll2, int64_t unroll3) {
  auto divides = [](int64_t d, int64_t n) { return d > 0 && n % d == 0; };
  for (int64_t b : {bank11, bank12, bank21, bank22}) {
    if (!divides(b, 128)) return false;
  }
  // i spans 128; j and k span one 8-wide block.
  if (!divides(unroll1, 128) || !divides(unroll2, 8) || !divides(unroll3, 8)) {
    return false;
  }
  // m1[i][k], m2[k][j], prod[i][j].
  return divides(unroll1, bank11) && divides(unroll3, bank12) &&
         divides(unroll3, bank11) && divides(unroll2, bank12) &&
         divides(unroll1, bank21) && divides(unroll2, bank22);
}

}  // namespace fuse::testing
