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

#include "config.h"

#include <filesystem>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace symdirec::cli {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

template <typename T>
T Get(const pt::ptree& tree, const std::string& key, T fallback) {
  try {
    return tree.get<T>(key, fallback);
  } catch (const pt::ptree_bad_data&) {
    throw ConfigError(key + ": bad value '" + tree.get<std::string>(key) + "'");
  }
}

std::string Trim(std::string s) {
  const char* ws = " \t\r";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

}  // namespace

void RequirePath(const std::string& field, const std::string& path) {
  if (path.empty()) throw ConfigError(field + " is not set");
  if (!fs::exists(path)) throw ConfigError(field + ": no such file or directory: " + path);
}

Config LoadConfig(const std::string& path) {
  if (!fs::is_regular_file(path)) throw ConfigError("config: no such file: " + path);
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  const fs::path base = fs::absolute(path).parent_path();
  auto resolve = [&](const std::string& key) -> std::string {
    std::string v = Trim(Get<std::string>(tree, key, ""));
    if (v.empty()) return v;
    fs::path p(v);
    return (p.is_absolute() ? p : base / p).lexically_normal().string();
  };

  Config c;
  c.path = path;
  providers::ProviderConfig& p = c.provider;
  std::string kind = Get<std::string>(tree, "provider.kind", "mock");
  if (kind == "mock") {
    p.kind = providers::ProviderKind::kMock;
  } else if (kind == "remote") {
    p.kind = providers::ProviderKind::kRemote;
  } else {
    throw ConfigError("provider.kind: expected mock or remote, got '" + kind + "'");
  }
  std::stringstream fixtures(Get<std::string>(tree, "provider.fixtures", ""));
  for (std::string item; std::getline(fixtures, item, ',');) {
    item = Trim(item);
    if (item.empty()) continue;
    fs::path f(item);
    p.fixture_paths.push_back((f.is_absolute() ? f : base / f).lexically_normal().string());
  }
  p.record_misses_path = resolve("provider.record_misses");
  p.endpoint = Get<std::string>(tree, "provider.endpoint", "");
  p.model = Get<std::string>(tree, "provider.model", "");
  p.token_env = Get<std::string>(tree, "provider.token_env", "");
  p.timeout_seconds = Get(tree, "provider.timeout", p.timeout_seconds);
  p.max_retries = Get(tree, "provider.max_retries", p.max_retries);
  p.max_in_flight = Get(tree, "provider.max_in_flight", p.max_in_flight);
  p.temperature = Get(tree, "provider.temperature", p.temperature);
  p.embedding_dim = Get(tree, "embedding.dim", p.embedding_dim);

  c.kb_path = resolve("kb.path");
  c.projection_path = resolve("projection.path");
  c.prompts_dir = resolve("prompts.dir");
  c.run_dir = resolve("pipeline.run_dir");
  c.tasks_dir = resolve("pipeline.tasks");
  c.n = Get(tree, "pipeline.n", c.n);
  c.k = Get(tree, "pipeline.k", c.k);
  c.jobs = Get(tree, "pipeline.jobs", c.jobs);
  c.low_confidence_below = Get(tree, "pipeline.low_confidence_below", c.low_confidence_below);

  c.sim.command = Get<std::string>(tree, "sim.command", c.sim.command);
  c.sim.success_pattern = Get<std::string>(tree, "sim.success", c.sim.success_pattern);
  c.sim.timeout_seconds = Get(tree, "sim.timeout", c.sim.timeout_seconds);

  if (c.n < 1) throw ConfigError("pipeline.n must be at least 1");
  if (c.k < 1) throw ConfigError("pipeline.k must be at least 1");
  if (c.jobs < 0) throw ConfigError("pipeline.jobs must not be negative");
  if (p.embedding_dim < 1) throw ConfigError("embedding.dim must be at least 1");
  return c;
}

}  // namespace symdirec::cli
