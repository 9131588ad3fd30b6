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

#ifndef SYMDIREC_TOOLS_CONFIG_H_
#define SYMDIREC_TOOLS_CONFIG_H_

#include <string>

#include "symdirec/metrics/metrics.h"
#include "symdirec/providers/provider.h"

namespace symdirec::cli {

// Settings read from an INI file. Relative paths are resolved against the
// directory of the file.
struct Config {
  std::string path;  // the file itself
  providers::ProviderConfig provider;
  std::string kb_path;          // kb.jsonl, or a directory of snippet files
  std::string projection_path;  // empty: [I | I] / 2
  std::string prompts_dir;
  std::string run_dir;
  std::string tasks_dir;  // default suite for eval synth and ablate
  metrics::SimConfig sim;
  int n = 4;
  int k = 5;
  int jobs = 0;  // 0: one per logical core
  double low_confidence_below = 0.5;
};

// ConfigError for a missing file, a malformed line or a bad value.
Config LoadConfig(const std::string& path);

// ConfigError naming `field` unless `path` exists.
void RequirePath(const std::string& field, const std::string& path);

}  // namespace symdirec::cli

#endif  // SYMDIREC_TOOLS_CONFIG_H_
