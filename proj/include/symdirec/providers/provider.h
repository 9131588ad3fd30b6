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

#ifndef SYMDIREC_PROVIDERS_PROVIDER_H_
#define SYMDIREC_PROVIDERS_PROVIDER_H_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "symdirec/embeddings/embeddings.h"
#include "symdirec/error.h"

namespace symdirec::providers {

enum class ProviderKind { kMock, kRemote };

const char* ProviderKindName(ProviderKind kind);

struct ProviderConfig {
  ProviderKind kind = ProviderKind::kMock;
  // Remote: full URL, e.g. http://127.0.0.1:8080/v1/complete. Generation
  // requests carry "prompt", embedding requests carry "input".
  std::string endpoint;
  std::string model;
  std::string token_env;  // variable holding the bearer token; empty for none
  double timeout_seconds = 60.0;
  int max_retries = 3;
  int retry_backoff_ms = 250;  // doubled after every failed attempt
  int max_in_flight = 4;
  double temperature = 0.0;
  int embedding_dim = embeddings::kDefaultDim;
  // Mock: JSONL fixture files, and an optional file where unmatched prompts
  // are appended (to author new fixtures).
  std::vector<std::string> fixture_paths;
  std::string record_misses_path;
};

// Throws ConfigError when the configuration cannot work.
void Validate(const ProviderConfig& cfg);

struct GenRequest {
  std::string prompt;
  std::string system;
  std::vector<std::string> stop;
};

struct GenResponse {
  std::string text;
  std::string finish_reason;  // "stop", "length", ...
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

// Content hash of the parts of a request that determine the reply.
std::string RequestFingerprint(std::string_view system, std::string_view prompt);
std::string RequestFingerprint(const GenRequest& req);

class ProviderError : public Error {
 public:
  ProviderError(const std::string& code, ProviderKind kind, std::string fingerprint,
                const std::string& message)
      : Error(code, std::string(ProviderKindName(kind)) + " provider, request " + fingerprint +
                        ": " + message),
        kind_(kind),
        fingerprint_(std::move(fingerprint)) {}
  ProviderKind kind() const noexcept { return kind_; }
  const std::string& fingerprint() const noexcept { return fingerprint_; }

 private:
  ProviderKind kind_;
  std::string fingerprint_;
};

#define SYMDIREC_DEFINE_PROVIDER_ERROR(Name)                                          \
  class Name : public ProviderError {                                                 \
   public:                                                                            \
    Name(ProviderKind kind, std::string fingerprint, const std::string& message)      \
        : ProviderError(#Name, kind, std::move(fingerprint), message) {}              \
  }

SYMDIREC_DEFINE_PROVIDER_ERROR(FixtureMiss);
SYMDIREC_DEFINE_PROVIDER_ERROR(TransportError);
SYMDIREC_DEFINE_PROVIDER_ERROR(AuthError);
SYMDIREC_DEFINE_PROVIDER_ERROR(TimeoutError);

#undef SYMDIREC_DEFINE_PROVIDER_ERROR

// Text generation and embedding backend. Implementations are safe to share
// across threads.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderKind kind() const = 0;
  virtual GenResponse Generate(const GenRequest& req) = 0;
  virtual embeddings::Vector Embed(std::string_view text) = 0;
  virtual int embedding_dim() const = 0;
  // Names the embedding function (model and dimension).
  virtual std::string EmbedderFingerprint() const = 0;
};

// Replays recorded replies. Embeddings come from the local hash embedder.
class MockProvider : public Provider {
 public:
  explicit MockProvider(const ProviderConfig& cfg);

  // Fixture lines are {"fingerprint", "response"} or {"prompt", "system"?,
  // "response"}; later files override earlier ones.
  void LoadFixtures(const std::string& path);
  void AddFixture(std::string_view system, std::string_view prompt, std::string response);

  ProviderKind kind() const override { return ProviderKind::kMock; }
  GenResponse Generate(const GenRequest& req) override;
  embeddings::Vector Embed(std::string_view text) override;
  int embedding_dim() const override { return dim_; }
  std::string EmbedderFingerprint() const override;

  std::size_t fixture_count() const;

 private:
  int dim_;
  std::string record_misses_path_;
  mutable std::mutex mu_;
  std::map<std::string, std::string> table_;
};

std::unique_ptr<Provider> MakeProvider(const ProviderConfig& cfg);

}  // namespace symdirec::providers

#endif  // SYMDIREC_PROVIDERS_PROVIDER_H_
