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

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "symdirec/metrics/metrics.h"
#include "symdirec/util/process.h"

namespace symdirec::metrics {

namespace fs = std::filesystem;

const char* SimStatusName(SimStatus status) {
  switch (status) {
    case SimStatus::kPassed: return "passed";
    case SimStatus::kFailed: return "failed";
    case SimStatus::kTimeout: return "timeout";
    case SimStatus::kUnavailable: return "skipped";
  }
  return "?";
}

void Validate(const SimConfig& cfg) {
  for (const char* p : {"{design}", "{testbench}", "{out}"}) {
    if (cfg.command.find(p) == std::string::npos) {
      throw ConfigError(std::string("simulator command lacks ") + p);
    }
  }
  if (!(cfg.timeout_seconds > 0.0)) throw ConfigError("simulator timeout must be positive");
}

namespace {

std::string Substitute(std::string cmd, const std::string& key, const std::string& value) {
  for (std::size_t pos = cmd.find(key); pos != std::string::npos;
       pos = cmd.find(key, pos + value.size())) {
    cmd.replace(pos, key.size(), value);
  }
  return cmd;
}

}  // namespace

bool SimulatorAvailable(const SimConfig& cfg) { return CommandAvailable(cfg.command); }

SimResult PassAt1(std::string_view design, std::string_view testbench, const SimConfig& cfg) {
  Validate(cfg);
  SimResult result;
  if (!SimulatorAvailable(cfg)) {
    result.status = SimStatus::kUnavailable;
    result.log = "simulator for '" + cfg.command + "' not found";
    return result;
  }
  fs::path dir = MakeTempDir("symdirec-sim");
  fs::path design_path = dir / cfg.design_file;
  fs::path tb_path = dir / cfg.testbench_file;
  std::ofstream(design_path) << design;
  std::ofstream(tb_path) << testbench;
  std::string cmd = Substitute(cfg.command, "{design}", ShellQuote(design_path.string()));
  cmd = Substitute(cmd, "{testbench}", ShellQuote(tb_path.string()));
  cmd = Substitute(cmd, "{out}", ShellQuote((dir / "sim.out").string()));
  ProcessResult run = RunShell(cmd, dir.string(), cfg.timeout_seconds);
  std::error_code ec;
  fs::remove_all(dir, ec);

  result.log = std::move(run.output);
  result.exit_code = run.exit_code;
  if (run.timed_out) {
    result.status = SimStatus::kTimeout;
    result.log += "\n[timed out after " + std::to_string(cfg.timeout_seconds) + " s]";
    return result;
  }
  result.passed = result.exit_code == 0 && result.log.find(cfg.success_pattern) != std::string::npos;
  result.status = result.passed ? SimStatus::kPassed : SimStatus::kFailed;
  return result;
}

std::vector<SimResult> PassAt1Batch(std::span<const SimJob> jobs, const SimConfig& cfg,
                                    int parallel) {
  std::vector<SimResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  int n = std::max(1, std::min<int>(parallel, static_cast<int>(jobs.size())));
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (int w = 0; w < n; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        try {
          results[i] = PassAt1(jobs[i].design, jobs[i].testbench, cfg);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace symdirec::metrics
