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

#ifndef FUSE_DSE_H_
#define FUSE_DSE_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace fuse::dse {

// Source text with holes written @{NAME}.
struct Template {
  std::string text;
  std::vector<std::string> holes;  // first-appearance order, no duplicates

  static Template Parse(std::string text);
};

// Substitutes every hole. Throws std::invalid_argument when a hole has no
// value.
std::string Instantiate(const Template& tpl,
                        const std::map<std::string, int64_t>& values);

// Parameter name to candidate values, in file order.
struct Domains {
  std::vector<std::string> names;
  std::vector<std::vector<int64_t>> values;

  // A JSON object mapping names to nonempty arrays of naturals.
  static Domains FromJson(const std::string& text);
  int64_t Size() const;
  // The k-th point in lexicographic order (first name varies slowest).
  std::vector<int64_t> Point(int64_t k) const;
  std::map<std::string, int64_t> Assignment(const std::vector<int64_t>& point) const;
};

struct SweepRow {
  std::vector<int64_t> point;
  std::string verdict;     // accepted, rejected or parse-error
  std::string error_code;  // empty when accepted
  int64_t micros = 0;
};

// Checks every point. Rows come back in lexicographic order whatever `jobs`.
std::vector<SweepRow> Sweep(const Template& tpl, const Domains& domains,
                            int jobs = 1);

// Verdict and first error code for one instantiated source.
SweepRow CheckSource(const std::string& source);

struct Summary {
  int64_t total = 0;
  int64_t accepted = 0;
  std::map<std::string, int64_t> by_verdict;
  std::map<std::string, int64_t> by_code;
  double ratio() const;
  std::string ToJson() const;
};

Summary Summarize(const std::vector<SweepRow>& rows);

// Header: one column per parameter, then verdict,error_code,micros.
void WriteCsv(const Domains& domains, const std::vector<SweepRow>& rows,
              std::ostream& out);

}  // namespace fuse::dse

#endif  // FUSE_DSE_H_
