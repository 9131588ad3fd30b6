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

// HTTP client for remote generation and embedding endpoints.

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <semaphore>
#include <thread>

#include "json.hpp"
#include "symdirec/providers/provider.h"
#include "symdirec/util/hash.h"

namespace symdirec::providers {
namespace {

using nlohmann::json;

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url SplitUrl(const std::string& endpoint) {
  std::size_t scheme = endpoint.find("://");
  if (scheme == std::string::npos) throw ConfigError("endpoint '" + endpoint + "' has no scheme");
  std::size_t slash = endpoint.find('/', scheme + 3);
  if (slash == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

class RemoteProvider : public Provider {
 public:
  explicit RemoteProvider(const ProviderConfig& cfg)
      : cfg_(cfg), url_(SplitUrl(cfg.endpoint)), slots_(cfg.max_in_flight) {}

  ProviderKind kind() const override { return ProviderKind::kRemote; }
  int embedding_dim() const override { return cfg_.embedding_dim; }
  std::string EmbedderFingerprint() const override {
    return "remote:" + cfg_.model + "-d" + std::to_string(cfg_.embedding_dim);
  }

  GenResponse Generate(const GenRequest& req) override {
    const std::string fp = RequestFingerprint(req);
    json body = {{"model", cfg_.model},
                 {"prompt", req.prompt},
                 {"params", {{"temperature", cfg_.temperature}, {"stop", req.stop}}}};
    if (!req.system.empty()) body["system"] = req.system;
    json reply = Exchange(body, fp);
    if (!reply.contains("text") || !reply["text"].is_string()) {
      throw TransportError(kind(), fp, "reply has no \"text\" field");
    }
    GenResponse resp;
    resp.text = reply["text"].get<std::string>();
    resp.finish_reason = reply.value("finish_reason", "stop");
    if (reply.contains("usage") && reply["usage"].is_object()) {
      resp.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
      resp.completion_tokens = reply["usage"].value("completion_tokens", 0);
    }
    return resp;
  }

  embeddings::Vector Embed(std::string_view text) override {
    const std::string fp = Fingerprint(text);
    json body = {{"model", cfg_.model},
                 {"input", std::string(text)},
                 {"params", {{"dim", cfg_.embedding_dim}}}};
    json reply = Exchange(body, fp);
    if (!reply.contains("embedding") || !reply["embedding"].is_array()) {
      throw TransportError(kind(), fp, "reply has no \"embedding\" array");
    }
    embeddings::Vector v;
    for (const json& x : reply["embedding"]) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) {
        throw TransportError(kind(), fp, "non-finite embedding component");
      }
      v.push_back(x.get<double>());
    }
    if (v.size() != static_cast<std::size_t>(cfg_.embedding_dim)) {
      throw DimensionMismatch("remote embedding has " + std::to_string(v.size()) +
                              " components, expected " + std::to_string(cfg_.embedding_dim) +
                              " (request " + fp + ")");
    }
    return v;
  }

 private:
  json Exchange(const json& body, const std::string& fp) {
    std::string token;
    if (!cfg_.token_env.empty()) {
      const char* value = std::getenv(cfg_.token_env.c_str());
      if (value == nullptr || *value == '\0') {
        throw AuthError(kind(), fp, "environment variable " + cfg_.token_env + " is not set");
      }
      token = value;
    }
    const std::string payload = body.dump();
    std::string last_problem;
    bool last_was_timeout = false;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(static_cast<long long>(cfg_.retry_backoff_ms) << (attempt - 1)));
      }
      httplib::Result res = Post(payload, token);
      if (!res) {
        httplib::Error err = res.error();
        last_was_timeout = err == httplib::Error::ConnectionTimeout ||
                           err == httplib::Error::Read || err == httplib::Error::Write;
        last_problem = httplib::to_string(err);
        continue;
      }
      const int status = res->status;
      if (status == 401 || status == 403) {
        throw AuthError(kind(), fp, "endpoint refused credentials (HTTP " + std::to_string(status) + ")");
      }
      if (status == 429 || status >= 500) {
        last_was_timeout = false;
        last_problem = "HTTP " + std::to_string(status);
        continue;
      }
      if (status != 200) {
        throw TransportError(kind(), fp, "HTTP " + std::to_string(status) + ": " + res->body);
      }
      json reply = json::parse(res->body, nullptr, false);
      if (reply.is_discarded() || !reply.is_object()) {
        throw TransportError(kind(), fp, "reply is not a JSON object");
      }
      return reply;
    }
    std::string message = "giving up after " + std::to_string(cfg_.max_retries + 1) +
                          " attempts: " + last_problem;
    if (last_was_timeout) throw TimeoutError(kind(), fp, message);
    throw TransportError(kind(), fp, message);
  }

  httplib::Result Post(const std::string& payload, const std::string& token) {
    slots_.acquire();
    struct Release {
      std::counting_semaphore<1024>& s;
      ~Release() { s.release(); }
    } release{slots_};
    httplib::Client client(url_.origin);
    const auto timeout = std::chrono::duration<double>(cfg_.timeout_seconds);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    httplib::Headers headers;
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
    return client.Post(url_.path, headers, payload, "application/json");
  }

  ProviderConfig cfg_;
  Url url_;
  std::counting_semaphore<1024> slots_;
};

}  // namespace

std::unique_ptr<Provider> MakeProvider(const ProviderConfig& cfg) {
  Validate(cfg);
  if (cfg.kind == ProviderKind::kMock) return std::make_unique<MockProvider>(cfg);
  if (cfg.max_in_flight > 1024) throw ConfigError("max_in_flight above 1024");
  return std::make_unique<RemoteProvider>(cfg);
}

}  // namespace symdirec::providers
