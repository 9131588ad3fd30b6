// Copyright 2026 The symdirec Authors
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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "symdirec/metrics/metrics.h"

namespace symdirec::metrics {

std::vector<std::string> RougeTokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::size_t LcsLength(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  // Two rows over the shorter sequence.
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore RougeL(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty() && reference.empty()) return {1.0, 1.0, 1.0};
  if (candidate.empty() || reference.empty()) return {};
  double l = static_cast<double>(LcsLength(candidate, reference));
  RougeScore s;
  s.precision = l / static_cast<double>(candidate.size());
  s.recall = l / static_cast<double>(reference.size());
  s.f = s.precision + s.recall == 0.0 ? 0.0
                                      : 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

RougeScore RougeL(std::string_view candidate, std::string_view reference) {
  std::vector<std::string> c = RougeTokens(candidate), r = RougeTokens(reference);
  return RougeL(std::span<const std::string>(c), std::span<const std::string>(r));
}

double NdcgAtK(std::span<const std::string> ranked, const Judgments& judgments, int k) {
  if (k < 1) throw ConfigError("NDCG cutoff must be at least 1");
  auto gain = [](int rel) { return std::exp2(static_cast<double>(rel)) - 1.0; };
  double dcg = 0.0;
  for (std::size_t r = 0; r < ranked.size() && r < static_cast<std::size_t>(k); ++r) {
    auto it = judgments.find(ranked[r]);
    int rel = it == judgments.end() ? 0 : it->second;
    dcg += gain(rel) / std::log2(static_cast<double>(r) + 2.0);
  }
  std::vector<int> ideal;
  for (const auto& [id, rel] : judgments) {
    if (rel < 0) throw ConfigError("negative relevance grade for '" + id + "'");
    ideal.push_back(rel);
  }
  std::sort(ideal.rbegin(), ideal.rend());
  double idcg = 0.0;
  for (std::size_t r = 0; r < ideal.size() && r < static_cast<std::size_t>(k); ++r) {
    idcg += gain(ideal[r]) / std::log2(static_cast<double>(r) + 2.0);
  }
  return idcg == 0.0 ? 0.0 : dcg / idcg;
}

namespace {

int Grade(const nlohmann::json& g, const std::string& path, const std::string& id) {
  if (!g.is_number_integer() || g.get<int>() < 0) {
    throw ConfigError(path + ": grade of '" + id + "' must be a non-negative integer");
  }
  return g.get<int>();
}

}  // namespace

std::map<std::string, Judgments> LoadJudgments(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  std::map<std::string, Judgments> out;
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (!j.is_discarded()) {
    if (!j.is_object()) throw ConfigError(path + ": judgments must be an object");
    // a single JSONL line parses as an object too
    if (!(j.contains("qid") && j.contains("id"))) {
      for (const auto& [query, grades] : j.items()) {
        if (!grades.is_object()) throw ConfigError(path + ": grades of '" + query + "' must be an object");
        Judgments& judged = out[query];
        for (const auto& [id, g] : grades.items()) judged[id] = Grade(g, path, id);
      }
      return out;
    }
  }
  // qrels lines: {"qid": ..., "id": ..., "grade": ...}
  std::istringstream lines(text);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object() || !row.contains("qid") || !row.contains("id") ||
        !row["qid"].is_string() || !row["id"].is_string()) {
      throw ConfigError(path + ":" + std::to_string(n) + ": expected {\"qid\", \"id\", \"grade\"}");
    }
    const std::string id = row["id"].get<std::string>();
    out[row["qid"].get<std::string>()][id] = Grade(row.value("grade", nlohmann::json(1)), path, id);
  }
  return out;
}

}  // namespace symdirec::metrics
