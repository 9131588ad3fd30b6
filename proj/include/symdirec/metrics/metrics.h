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

#ifndef SYMDIREC_METRICS_METRICS_H_
#define SYMDIREC_METRICS_METRICS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symdirec/error.h"

namespace symdirec::metrics {

// --- ROUGE-L -----------------------------------------------------------------

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

// Lower-cased whitespace tokens.
std::vector<std::string> RougeTokens(std::string_view text);

std::size_t LcsLength(std::span<const std::string> a, std::span<const std::string> b);

// Summary-level ROUGE-L. Two empty texts score F = 1.
RougeScore RougeL(std::string_view candidate, std::string_view reference);
RougeScore RougeL(std::span<const std::string> candidate, std::span<const std::string> reference);

// --- NDCG --------------------------------------------------------------------

using Judgments = std::map<std::string, int>;  // entry id -> grade >= 0

// Exponential gain (2^rel - 1), log2(rank + 1) discount. Unjudged ids count
// as grade 0; 0 when no judged item has positive grade.
double NdcgAtK(std::span<const std::string> ranked, const Judgments& judgments, int k);

// {"query id": {"entry id": grade, ...}, ...}, or JSONL qrels lines
// {"qid", "id", "grade"} (grade defaults to 1).
std::map<std::string, Judgments> LoadJudgments(const std::string& path);

// --- Pass@1 ------------------------------------------------------------------

struct SimConfig {
  // Shell command with {design}, {testbench} and {out}; run in a fresh
  // temporary directory with paths substituted (quoted).
  std::string command;
  std::string success_pattern = "PASS";
  double timeout_seconds = 30.0;
  std::string design_file = "design.v";
  std::string testbench_file = "tb.v";
};

void Validate(const SimConfig& cfg);

enum class SimStatus { kPassed, kFailed, kTimeout, kUnavailable };

const char* SimStatusName(SimStatus status);

struct SimResult {
  SimStatus status = SimStatus::kFailed;
  bool passed = false;
  int exit_code = -1;
  std::string log;
};

// Whether the command's program (its first word) resolves to an executable.
bool SimulatorAvailable(const SimConfig& cfg);

// Passed iff the command exits 0 and prints the success pattern in time.
// An absent simulator yields kUnavailable (a skip, never a pass).
SimResult PassAt1(std::string_view design, std::string_view testbench, const SimConfig& cfg);

struct SimJob {
  std::string design;
  std::string testbench;
};

// Runs jobs with at most `parallel` simulator processes at a time; results
// are in job order.
std::vector<SimResult> PassAt1Batch(std::span<const SimJob> jobs, const SimConfig& cfg,
                                    int parallel);

// --- reports -----------------------------------------------------------------

struct TaskResult {
  std::string task;
  std::optional<SimStatus> sim;            // synthesis tasks
  std::optional<bool> equivalent;          // reference-model check, when run
  std::optional<double> rouge_l;           // summarization tasks
  std::map<std::string, double> ndcg;      // retrieval tasks, e.g. "ndcg@1"
  std::string note;
};

struct Report {
  std::vector<TaskResult> tasks;
  int sim_passed = 0;
  int sim_failed = 0;  // includes timeouts
  int sim_skipped = 0;
  std::optional<double> pass_at_1;  // over non-skipped cases
  int equiv_checked = 0;
  std::optional<double> equiv_rate;
  std::optional<double> mean_rouge_l;
  std::map<std::string, double> mean_ndcg;
  std::map<std::string, std::string> metadata;
};

Report Aggregate(std::vector<TaskResult> results);

std::string ReportJson(const Report& report);
std::string ReportText(const Report& report);

// Writes report.json and report.txt into `dir` (created if needed).
void WriteReport(const Report& report, const std::string& dir);

}  // namespace symdirec::metrics

#endif  // SYMDIREC_METRICS_METRICS_H_
