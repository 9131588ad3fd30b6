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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "gtest/gtest.h"
#include "json.hpp"
#include "symdirec/providers/provider.h"

namespace symdirec::providers {
namespace {

using nlohmann::json;

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

TEST(MockProviderTest, ReturnsFixture) {
  std::string path = TempPath("mock_fixtures.jsonl");
  std::ofstream(path) << json{{"prompt", "P"}, {"response", "module m; endmodule"}}.dump() << "\n"
                      << "# comment\n"
                      << json{{"fingerprint", RequestFingerprint("sys", "Q")}, {"response", "q"}}.dump()
                      << "\n";
  ProviderConfig cfg;
  cfg.fixture_paths = {path};
  MockProvider mock(cfg);
  EXPECT_EQ(mock.fixture_count(), 2u);
  EXPECT_EQ(mock.Generate({"P", "", {}}).text, "module m; endmodule");
  EXPECT_EQ(mock.Generate({"Q", "sys", {}}).text, "q");
  EXPECT_EQ(mock.Generate({"P", "", {"m;"}}).text, "module ");
  std::filesystem::remove(path);
}

TEST(MockProviderTest, MissCarriesFingerprint) {
  std::string misses = TempPath("mock_misses.jsonl");
  std::filesystem::remove(misses);
  ProviderConfig cfg;
  cfg.record_misses_path = misses;
  MockProvider mock(cfg);
  try {
    mock.Generate({"unknown", "", {}});
    FAIL();
  } catch (const FixtureMiss& e) {
    EXPECT_EQ(e.kind(), ProviderKind::kMock);
    EXPECT_EQ(e.fingerprint(), RequestFingerprint("", "unknown"));
  }
  std::ifstream in(misses);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(json::parse(line)["prompt"], "unknown");
  std::filesystem::remove(misses);
}

TEST(MockProviderTest, EmbeddingsAreDeterministicUnitVectors) {
  ProviderConfig cfg;
  auto p = MakeProvider(cfg);
  auto a = p->Embed("half adder"), b = p->Embed("half adder");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 256u);
  EXPECT_NEAR(embeddings::Norm(a), 1.0, 1e-9);
}

TEST(ProviderConfigTest, Validation) {
  ProviderConfig cfg;
  cfg.kind = ProviderKind::kRemote;
  EXPECT_THROW(Validate(cfg), ConfigError);
  cfg.endpoint = "http://localhost:1/x";
  cfg.timeout_seconds = 0;
  EXPECT_THROW(Validate(cfg), ConfigError);
}

// Local HTTP server on an ephemeral port.
class FakeEndpoint {
 public:
  explicit FakeEndpoint(httplib::Server::Handler handler) {
    server_.Post("/v1/run", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/run"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

ProviderConfig RemoteConfig(const std::string& url) {
  ProviderConfig cfg;
  cfg.kind = ProviderKind::kRemote;
  cfg.endpoint = url;
  cfg.model = "test-model";
  cfg.retry_backoff_ms = 1;
  cfg.timeout_seconds = 5;
  cfg.embedding_dim = 8;
  return cfg;
}

TEST(RemoteProviderTest, RetriesTransientFailures) {
  std::atomic<int> calls{0};
  FakeEndpoint ep([&](const httplib::Request& req, httplib::Response& res) {
    if (calls++ < 2) {
      res.status = 503;
      return;
    }
    json body = json::parse(req.body);
    res.set_content(json{{"text", "echo " + body["prompt"].get<std::string>()}}.dump(),
                    "application/json");
  });
  auto p = MakeProvider(RemoteConfig(ep.url()));
  EXPECT_EQ(p->Generate({"hi", "", {}}).text, "echo hi");
  EXPECT_EQ(calls.load(), 3);
}

TEST(RemoteProviderTest, GivesUpAfterMaxRetries) {
  std::atomic<int> calls{0};
  FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 500;
  });
  ProviderConfig cfg = RemoteConfig(ep.url());
  cfg.max_retries = 2;
  auto p = MakeProvider(cfg);
  EXPECT_THROW(p->Generate({"hi", "", {}}), TransportError);
  EXPECT_EQ(calls.load(), 3);
}

TEST(RemoteProviderTest, AuthFailureIsNotRetried) {
  std::atomic<int> calls{0};
  FakeEndpoint ep([&](const httplib::Request& req, httplib::Response& res) {
    ++calls;
    res.status = req.get_header_value("Authorization") == "Bearer sekrit" ? 200 : 401;
    res.set_content(R"({"text":"ok"})", "application/json");
  });
  ProviderConfig cfg = RemoteConfig(ep.url());
  cfg.token_env = "SYMDIREC_TEST_TOKEN";
  ::unsetenv("SYMDIREC_TEST_TOKEN");
  auto p = MakeProvider(cfg);
  EXPECT_THROW(p->Generate({"hi", "", {}}), AuthError);
  EXPECT_EQ(calls.load(), 0);
  ::setenv("SYMDIREC_TEST_TOKEN", "wrong", 1);
  EXPECT_THROW(p->Generate({"hi", "", {}}), AuthError);
  EXPECT_EQ(calls.load(), 1);
  ::setenv("SYMDIREC_TEST_TOKEN", "sekrit", 1);
  EXPECT_EQ(p->Generate({"hi", "", {}}).text, "ok");
  ::unsetenv("SYMDIREC_TEST_TOKEN");
}

TEST(RemoteProviderTest, EmbeddingLengthChecked) {
  FakeEndpoint ep([&](const httplib::Request& req, httplib::Response& res) {
    json body = json::parse(req.body);
    int dim = body["params"]["dim"].get<int>();
    std::vector<double> v(static_cast<std::size_t>(dim - 1), 0.5);
    res.set_content(json{{"embedding", v}}.dump(), "application/json");
  });
  auto p = MakeProvider(RemoteConfig(ep.url()));
  EXPECT_THROW(p->Embed("x"), DimensionMismatch);
}

TEST(RemoteProviderTest, UnreachableEndpoint) {
  // Nothing listens on port 1.
  ProviderConfig cfg = RemoteConfig("http://127.0.0.1:1/v1/run");
  cfg.max_retries = 1;
  cfg.timeout_seconds = 1;
  auto p = MakeProvider(cfg);
  try {
    p->Generate({"hi", "", {}});
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.kind(), ProviderKind::kRemote);
    EXPECT_EQ(e.fingerprint(), RequestFingerprint("", "hi"));
  }
}

TEST(RemoteProviderTest, InFlightLimit) {
  std::atomic<int> active{0}, peak{0};
  FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) {
    int now = ++active;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    --active;
    res.set_content(R"({"text":"ok"})", "application/json");
  });
  ProviderConfig cfg = RemoteConfig(ep.url());
  cfg.max_in_flight = 2;
  auto p = MakeProvider(cfg);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] { EXPECT_EQ(p->Generate({"x", "", {}}).text, "ok"); });
  }
  for (auto& t : threads) t.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_GE(peak.load(), 1);
}

}  // namespace
}  // namespace symdirec::providers
