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

#include "fuse/dse.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "fuse/parser.h"
#include "fuse/typecheck.h"

namespace fuse::dse {

Template Template::Parse(std::string text) {
  Template t;
  t.text = std::move(text);
  size_t pos = 0;
  while ((pos = t.text.find("@{", pos)) != std::string::npos) {
    size_t end = t.text.find('}', pos);
    if (end == std::string::npos) {
      throw std::invalid_argument("unterminated hole at offset " +
                                  std::to_string(pos));
    }
    std::string name = t.text.substr(pos + 2, end - pos - 2);
    if (std::find(t.holes.begin(), t.holes.end(), name) == t.holes.end()) {
      t.holes.push_back(name);
    }
    pos = end + 1;
  }
  return t;
}

std::string Instantiate(const Template& tpl,
                        const std::map<std::string, int64_t>& values) {
  std::string out;
  size_t pos = 0;
  while (true) {
    size_t start = tpl.text.find("@{", pos);
    if (start == std::string::npos) break;
    size_t end = tpl.text.find('}', start);
    std::string name = tpl.text.substr(start + 2, end - start - 2);
    auto it = values.find(name);
    if (it == values.end()) {
      throw std::invalid_argument("no value for hole '" + name + "'");
    }
    out.append(tpl.text, pos, start - pos);
    out += std::to_string(it->second);
    pos = end + 1;
  }
  out.append(tpl.text, pos, std::string::npos);
  return out;
}

Domains Domains::FromJson(const std::string& text) {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("domains must be an object");
  Domains d;
  for (const auto& [name, list] : j.items()) {
    if (!list.is_array() || list.empty()) {
      throw std::invalid_argument("domain '" + name + "' must be a nonempty array");
    }
    std::vector<int64_t> values;
    for (const auto& v : list) {
      if (!v.is_number_integer() || v.get<int64_t>() < 0) {
        throw std::invalid_argument("domain '" + name + "' holds a non-natural");
      }
      values.push_back(v.get<int64_t>());
    }
    d.names.push_back(name);
    d.values.push_back(std::move(values));
  }
  return d;
}

int64_t Domains::Size() const {
  int64_t n = 1;
  for (const auto& v : values) n *= static_cast<int64_t>(v.size());
  return n;
}

std::vector<int64_t> Domains::Point(int64_t k) const {
  std::vector<int64_t> point(values.size());
  for (size_t d = values.size(); d-- > 0;) {
    int64_t n = static_cast<int64_t>(values[d].size());
    point[d] = values[d][k % n];
    k /= n;
  }
  return point;
}

std::map<std::string, int64_t> Domains::Assignment(
    const std::vector<int64_t>& point) const {
  std::map<std::string, int64_t> out;
  for (size_t d = 0; d < names.size(); ++d) out[names[d]] = point[d];
  return out;
}

SweepRow CheckSource(const std::string& source) {
  SweepRow row;
  auto start = std::chrono::steady_clock::now();
  ParseResult parsed = ParseProgram(source);
  if (!parsed.ok()) {
    row.verdict = "parse-error";
    row.error_code = parsed.diagnostics.empty() ? std::string(codes::kParse)
                                                : parsed.diagnostics[0].code;
  } else {
    CheckResult checked = CheckProgram(*parsed.program);
    if (checked.ok) {
      row.verdict = "accepted";
    } else {
      row.verdict = "rejected";
      row.error_code = checked.diagnostics.empty() ? std::string(codes::kType)
                                                   : checked.diagnostics[0].code;
    }
  }
  row.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now() - start)
                   .count();
  return row;
}

std::vector<SweepRow> Sweep(const Template& tpl, const Domains& domains,
                            int jobs) {
  for (const std::string& hole : tpl.holes) {
    if (std::find(domains.names.begin(), domains.names.end(), hole) ==
        domains.names.end()) {
      throw std::invalid_argument("hole '" + hole + "' has no domain");
    }
  }
  int64_t n = domains.Size();
  std::vector<SweepRow> rows(n);
  std::atomic<int64_t> next{0};
  auto worker = [&] {
    for (int64_t k = next++; k < n; k = next++) {
      std::vector<int64_t> point = domains.Point(k);
      rows[k] = CheckSource(Instantiate(tpl, domains.Assignment(point)));
      rows[k].point = std::move(point);
    }
  };
  int threads = static_cast<int>(std::clamp<int64_t>(jobs, 1, std::max<int64_t>(n, 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return rows;
}

double Summary::ratio() const {
  return total == 0 ? 0.0 : static_cast<double>(accepted) / total;
}

std::string Summary::ToJson() const {
  nlohmann::json j;
  j["total"] = total;
  j["accepted"] = accepted;
  j["ratio"] = ratio();
  j["by_verdict"] = by_verdict;
  j["by_code"] = by_code;
  return j.dump(2);
}

Summary Summarize(const std::vector<SweepRow>& rows) {
  Summary s;
  for (const SweepRow& r : rows) {
    ++s.total;
    ++s.by_verdict[r.verdict];
    if (r.verdict == "accepted") {
      ++s.accepted;
    } else {
      ++s.by_code[r.error_code];
    }
  }
  return s;
}

void WriteCsv(const Domains& domains, const std::vector<SweepRow>& rows,
              std::ostream& out) {
  for (const std::string& name : domains.names) out << name << ",";
  out << "verdict,error_code,micros\n";
  for (const SweepRow& r : rows) {
    for (int64_t v : r.point) out << v << ",";
    out << r.verdict << "," << r.error_code << "," << r.micros << "\n";
  }
}

}  // namespace fuse::dse
