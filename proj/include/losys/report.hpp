// Copyright 2026 The losys Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace losys {

/// Deterministic float rendering for report bodies.
inline std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return std::string(buf);
}

struct ReportItem {
  std::string key;
  enum class Status { pass, fail, info } status{Status::info};
  std::string detail;
};

/// Line-oriented check report; items keep insertion order and render
/// deterministically.
struct Report {
  std::string title;
  std::vector<ReportItem> items;

  void pass(std::string key, std::string detail = {}) {
    items.push_back({std::move(key), ReportItem::Status::pass, std::move(detail)});
  }
  void fail(std::string key, std::string detail = {}) {
    items.push_back({std::move(key), ReportItem::Status::fail, std::move(detail)});
  }
  void info(std::string key, std::string detail = {}) {
    items.push_back({std::move(key), ReportItem::Status::info, std::move(detail)});
  }
  void check(bool ok, std::string key, std::string detail = {}) {
    if (ok)
      pass(std::move(key), std::move(detail));
    else
      fail(std::move(key), std::move(detail));
  }

  void merge(const Report& other, const std::string& prefix = {}) {
    for (const auto& it : other.items)
      items.push_back({prefix.empty() ? it.key : prefix + "." + it.key,
                       it.status, it.detail});
  }

  bool passed() const {
    return std::none_of(items.begin(), items.end(), [](const ReportItem& it) {
      return it.status == ReportItem::Status::fail;
    });
  }

  std::size_t fail_count() const {
    std::size_t n = 0;
    for (const auto& it : items)
      if (it.status == ReportItem::Status::fail) ++n;
    return n;
  }

  std::string render() const {
    std::ostringstream os;
    os << "suite: " << title << "\n";
    for (const auto& it : items) {
      const char* s = it.status == ReportItem::Status::pass   ? "pass"
                      : it.status == ReportItem::Status::fail ? "FAIL"
                                                              : "info";
      os << s << "  " << it.key;
      if (!it.detail.empty()) os << "  " << it.detail;
      os << "\n";
    }
    os << "result: " << (passed() ? "pass" : "FAIL") << " ("
       << items.size() - fail_count() << "/" << items.size() << ")\n";
    return os.str();
  }
};

}  // namespace losys
