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

#ifndef SYMDIREC_UTIL_PROCESS_H_
#define SYMDIREC_UTIL_PROCESS_H_

#include <string>

namespace symdirec {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed or not exited normally
  bool timed_out = false;
  std::string output;  // stdout and stderr interleaved, capped at 1 MiB
};

// Runs `command` with /bin/sh -c in `workdir`, in its own process group.
// The whole group is killed when `timeout_seconds` elapses.
ProcessResult RunShell(const std::string& command, const std::string& workdir,
                       double timeout_seconds);

// Whether the first word of `command` names an executable (directly or on
// PATH).
bool CommandAvailable(const std::string& command);

// Single-quoted for /bin/sh.
std::string ShellQuote(const std::string& s);

// Fresh empty directory under the system temp dir.
std::string MakeTempDir(const std::string& prefix);

}  // namespace symdirec

#endif  // SYMDIREC_UTIL_PROCESS_H_
