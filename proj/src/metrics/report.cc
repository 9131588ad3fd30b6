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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "symdirec/metrics/metrics.h"

namespace symdirec::metrics {

using nlohmann::ordered_json;

Report Aggregate(std::vector<TaskResult> results) {
  Report r;
  double rouge_sum = 0.0;
  int rouge_n = 0, equiv_ok = 0;
  std::map<std::string, std::pair<double, int>> ndcg;
  for (const TaskResult& t : results) {
    if (t.sim) {
      switch (*t.sim) {
        case SimStatus::kPassed: ++r.sim_passed; break;
        case SimStatus::kUnavailable: ++r.sim_skipped; break;
        default: ++r.sim_failed; break;
      }
    }
    if (t.equivalent) {
      ++r.equiv_checked;
      if (*t.equivalent) ++equiv_ok;
    }
    if (t.rouge_l) {
      rouge_sum += *t.rouge_l;
      ++rouge_n;
    }
    for (const auto& [name, v] : t.ndcg) {
      ndcg[name].first += v;
      ++ndcg[name].second;
    }
  }
  if (r.sim_passed + r.sim_failed > 0) {
    r.pass_at_1 = static_cast<double>(r.sim_passed) / (r.sim_passed + r.sim_failed);
  }
  if (r.equiv_checked > 0) r.equiv_rate = static_cast<double>(equiv_ok) / r.equiv_checked;
  if (rouge_n > 0) r.mean_rouge_l = rouge_sum / rouge_n;
  for (const auto& [name, acc] : ndcg) r.mean_ndcg[name] = acc.first / acc.second;
  r.metadata = {{"rouge_l.tokenization", "lowercase, whitespace split"},
                {"rouge_l.level", "summary (single sequence)"},
                {"ndcg.gain", "2^rel - 1"},
                {"ndcg.discount", "log2(rank + 1)"},
                {"pass_at_1.denominator", "passed + failed; skipped cases excluded"}};
  r.tasks = std::move(results);
  return r;
}

std::string ReportJson(const Report& r) {
  ordered_json j;
  auto opt = [](const std::optional<double>& v) -> ordered_json {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  j["summary"] = {{"tasks", r.tasks.size()},
                  {"pass_at_1", opt(r.pass_at_1)},
                  {"sim_passed", r.sim_passed},
                  {"sim_failed", r.sim_failed},
                  {"sim_skipped", r.sim_skipped},
                  {"equiv_checked", r.equiv_checked},
                  {"equiv_rate", opt(r.equiv_rate)},
                  {"rouge_l", opt(r.mean_rouge_l)},
                  {"ndcg", r.mean_ndcg}};
  ordered_json tasks = ordered_json::array();
  for (const TaskResult& t : r.tasks) {
    ordered_json e = {{"task", t.task}};
    if (t.sim) e["sim"] = SimStatusName(*t.sim);
    if (t.equivalent) e["equivalent"] = *t.equivalent;
    if (t.rouge_l) e["rouge_l"] = *t.rouge_l;
    if (!t.ndcg.empty()) e["ndcg"] = t.ndcg;
    if (!t.note.empty()) e["note"] = t.note;
    tasks.push_back(std::move(e));
  }
  j["tasks"] = std::move(tasks);
  j["metadata"] = r.metadata;
  return j.dump(2) + "\n";
}

namespace {
std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}
}  // namespace

std::string ReportText(const Report& r) {
  std::ostringstream out;
  out << "tasks: " << r.tasks.size() << "\n";
  if (r.sim_passed + r.sim_failed + r.sim_skipped > 0) {
    out << "pass@1: " << (r.pass_at_1 ? Fixed(*r.pass_at_1) : "n/a") << "  (passed "
        << r.sim_passed << ", failed " << r.sim_failed << ", skipped " << r.sim_skipped
        << ")\n";
  }
  if (r.equiv_rate) {
    out << "reference equivalence: " << Fixed(*r.equiv_rate) << "  (" << r.equiv_checked
        << " checked)\n";
  }
  if (r.mean_rouge_l) out << "rouge-l f: " << Fixed(*r.mean_rouge_l) << "\n";
  for (const auto& [name, v] : r.mean_ndcg) out << name << ": " << Fixed(v) << "\n";
  out << "\n";
  std::size_t width = 4;
  for (const TaskResult& t : r.tasks) width = std::max(width, t.task.size());
  for (const TaskResult& t : r.tasks) {
    out << t.task << std::string(width - t.task.size() + 2, ' ');
    if (t.sim) out << " sim=" << SimStatusName(*t.sim);
    if (t.equivalent) out << " equiv=" << (*t.equivalent ? "yes" : "no");
    if (t.rouge_l) out << " rouge_l=" << Fixed(*t.rouge_l);
    for (const auto& [name, v] : t.ndcg) out << " " << name << "=" << Fixed(v);
    if (!t.note.empty()) out << "  # " << t.note;
    out << "\n";
  }
  return out.str();
}

void WriteReport(const Report& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream json_out(std::filesystem::path(dir) / "report.json", std::ios::trunc);
  std::ofstream text_out(std::filesystem::path(dir) / "report.txt", std::ios::trunc);
  if (!json_out || !text_out) throw IoError("cannot write report in " + dir);
  json_out << ReportJson(report);
  text_out << ReportText(report);
}

}  // namespace symdirec::metrics
