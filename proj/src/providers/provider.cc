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

#include "symdirec/providers/provider.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "symdirec/util/hash.h"

namespace symdirec::providers {

using nlohmann::json;

const char* ProviderKindName(ProviderKind kind) {
  return kind == ProviderKind::kMock ? "mock" : "remote";
}

void Validate(const ProviderConfig& cfg) {
  if (cfg.kind == ProviderKind::kRemote && cfg.endpoint.empty()) {
    throw ConfigError("remote provider needs an endpoint");
  }
  if (!(cfg.timeout_seconds > 0.0)) throw ConfigError("provider timeout must be positive");
  if (cfg.max_retries < 0) throw ConfigError("max_retries must be non-negative");
  if (cfg.max_in_flight < 1) throw ConfigError("max_in_flight must be at least 1");
  if (cfg.embedding_dim < 8) throw ConfigError("embedding dimension must be at least 8");
}

std::string RequestFingerprint(std::string_view system, std::string_view prompt) {
  std::string key(system);
  key += '\x1f';
  key += prompt;
  return Fingerprint(key);
}

std::string RequestFingerprint(const GenRequest& req) {
  return RequestFingerprint(req.system, req.prompt);
}

namespace {

int CountTokens(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tok;
  int n = 0;
  while (in >> tok) ++n;
  return n;
}

// Cuts `text` at the earliest stop sequence; returns whether it did.
bool ApplyStop(std::string& text, const std::vector<std::string>& stop) {
  std::size_t cut = std::string::npos;
  for (const std::string& s : stop) {
    if (s.empty()) continue;
    cut = std::min(cut, text.find(s));
  }
  if (cut == std::string::npos) return false;
  text.resize(cut);
  return true;
}

}  // namespace

// --- mock ------------------------------------------------------------------

MockProvider::MockProvider(const ProviderConfig& cfg)
    : dim_(cfg.embedding_dim), record_misses_path_(cfg.record_misses_path) {
  Validate(cfg);
  for (const std::string& path : cfg.fixture_paths) LoadFixtures(path);
}

void MockProvider::LoadFixtures(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read fixtures " + path);
  std::string text;
  std::size_t line = 0;
  std::lock_guard<std::mutex> lock(mu_);
  while (std::getline(f, text)) {
    ++line;
    if (text.empty() || text[0] == '#') continue;
    json j = json::parse(text, nullptr, false);
    auto where = path + ":" + std::to_string(line);
    if (j.is_discarded() || !j.is_object() || !j.contains("response") ||
        !j["response"].is_string()) {
      throw ConfigError(where + ": fixture needs a string \"response\"");
    }
    std::string fp;
    if (j.contains("fingerprint")) {
      fp = j["fingerprint"].get<std::string>();
    } else if (j.contains("prompt")) {
      fp = RequestFingerprint(j.value("system", ""), j["prompt"].get<std::string>());
    } else {
      throw ConfigError(where + ": fixture needs \"fingerprint\" or \"prompt\"");
    }
    table_[fp] = j["response"].get<std::string>();
  }
}

void MockProvider::AddFixture(std::string_view system, std::string_view prompt,
                              std::string response) {
  std::lock_guard<std::mutex> lock(mu_);
  table_[RequestFingerprint(system, prompt)] = std::move(response);
}

std::size_t MockProvider::fixture_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return table_.size();
}

GenResponse MockProvider::Generate(const GenRequest& req) {
  const std::string fp = RequestFingerprint(req);
  std::string text;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(fp);
    if (it == table_.end()) {
      if (!record_misses_path_.empty()) {
        std::ofstream out(record_misses_path_, std::ios::app);
        out << json{{"fingerprint", fp}, {"system", req.system}, {"prompt", req.prompt},
                    {"response", ""}}
                   .dump()
            << "\n";
      }
      throw FixtureMiss(ProviderKind::kMock, fp, "no fixture for this prompt");
    }
    text = it->second;
  }
  GenResponse resp;
  resp.finish_reason = "stop";
  ApplyStop(text, req.stop);
  resp.text = std::move(text);
  resp.prompt_tokens = CountTokens(req.system) + CountTokens(req.prompt);
  resp.completion_tokens = CountTokens(resp.text);
  return resp;
}

embeddings::Vector MockProvider::Embed(std::string_view text) {
  if (text.empty()) {
    throw ProviderError("EmbedFailure", ProviderKind::kMock, Fingerprint(text),
                        "cannot embed empty text");
  }
  return embeddings::HashEmbed(text, dim_);
}

std::string MockProvider::EmbedderFingerprint() const {
  return "hash3-fnv1a-d" + std::to_string(dim_);
}

}  // namespace symdirec::providers
