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

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"
#include "symdirec/kb/knowledge_base.h"
#include "symdirec/util/hash.h"
#include "support/synthetic.h"

namespace symdirec::kb {
namespace {

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<KbEntry> ThreeEntries() {
  return {
      {"ha", "assign sum = a ^ b;\nassign carry = a & b;", "verilog", "half adder",
       "sum = a ^ b; carry = a & b", {}},
      {"fa", "assign s = a ^ b ^ cin;", "verilog", "full adder sum", "s = a ^ b ^ cin", {}},
      {"mux", "assign y = s ? b : a;", "verilog", "two input multiplexer", "y = s ? b : a", {}},
  };
}

// Index whose entries carry arbitrary random vectors.
KbIndex RandomIndex(Rng& rng, int s, int dim) {
  KbIndex index;
  index.dim = dim;
  index.embedder = "random";
  for (int i = 0; i < s; ++i) {
    KbEntry e;
    e.id = "e" + std::to_string(rng.Below(100000)) + "_" + std::to_string(i);
    e.y = "x";
    e.language = "verilog";
    e.e_y = testing::RandomVector(rng, dim);
    // Occasional exact duplicates exercise the id tie-break.
    if (i > 0 && rng.Below(10) == 0) e.e_y = index.entries[rng.Below(i)].e_y;
    index.entries.push_back(e);
  }
  return index;
}

std::vector<std::string> OracleIds(const KbIndex& index, const Vector& q, int k) {
  std::vector<std::pair<double, std::string>> all;
  for (const KbEntry& e : index.entries) {
    double dot = 0, nq = 0, ne = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      dot += q[i] * e.e_y[i];
      nq += q[i] * q[i];
      ne += e.e_y[i] * e.e_y[i];
    }
    all.push_back({dot / std::sqrt(nq * ne), e.id});
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::string> ids;
  for (int i = 0; i < k && i < static_cast<int>(all.size()); ++i) ids.push_back(all[i].second);
  return ids;
}

std::vector<std::string> Ids(const std::vector<RetrievalResult>& r) {
  std::vector<std::string> ids;
  for (const auto& x : r) ids.push_back(x.id);
  return ids;
}

TEST(BuildIndexTest, EmbedsEveryEntry) {
  KbIndex index = BuildIndex(ThreeEntries(), HashEmbedder(64));
  EXPECT_EQ(index.size(), 3u);
  for (const KbEntry& e : index.entries) {
    EXPECT_EQ(e.e_y.size(), 64u);
    EXPECT_EQ(e.e_y, embeddings::HashEmbed(e.y + "\n" + e.d, 64));
  }
}

TEST(BuildIndexTest, DuplicateIdNamed) {
  auto entries = ThreeEntries();
  entries[2].id = "ha";
  try {
    BuildIndex(entries, HashEmbedder(64));
    FAIL();
  } catch (const DuplicateId& e) {
    EXPECT_EQ(e.id(), "ha");
  }
}

TEST(BuildIndexTest, EmptyIsValid) {
  KbIndex index = BuildIndex({}, HashEmbedder(32));
  EXPECT_EQ(index.size(), 0u);
  EXPECT_TRUE(TopK(index, embeddings::HashEmbed("q", 32), 3).empty());
}

TEST(BuildIndexTest, EmbedderFailurePropagates) {
  Embedder broken{"broken", 8, [](std::string_view) -> Vector { throw IoError("offline"); }};
  EXPECT_THROW(BuildIndex(ThreeEntries(), broken), EmbedFailure);
}

TEST(TopKTest, ExactMatchRanksFirst) {
  KbIndex index;
  index.dim = 4;
  for (int i = 0; i < 4; ++i) {
    KbEntry e{"id" + std::to_string(i), "y", "verilog", "", "", Vector(4, 0.0)};
    e.e_y[i] = 1.0;
    index.entries.push_back(e);
  }
  auto r = TopK(index, index.entries[2].e_y, 2);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].id, "id2");
  EXPECT_NEAR(r[0].score, 1.0, 1e-9);
  EXPECT_EQ(r[0].rank, 1);
  EXPECT_EQ(r[1].rank, 2);
  EXPECT_EQ(r[1].id, "id0");  // tie at 0 broken by id
  EXPECT_EQ(TopK(index, index.entries[0].e_y, 10).size(), 4u);
  EXPECT_THROW(TopK(index, Vector(4, 0.0), 1), ZeroVector);
  EXPECT_THROW(TopK(index, Vector(3, 1.0), 1), DimensionMismatch);
}

TEST(TopKTest, MatchesFullSortOracle) {
  Rng rng(42);
  for (int t = 0; t < 40; ++t) {
    KbIndex index = RandomIndex(rng, 1 + static_cast<int>(rng.Below(100)), 8);
    Vector q = testing::RandomVector(rng, 8);
    int k = 1 + static_cast<int>(rng.Below(12));
    EXPECT_EQ(Ids(TopK(index, q, k)), OracleIds(index, q, k));
  }
}

TEST(TopKTest, NestedInK) {
  Rng rng(43);
  KbIndex index = RandomIndex(rng, 60, 6);
  Vector q = testing::RandomVector(rng, 6);
  for (int k = 1; k < 20; ++k) {
    auto a = Ids(TopK(index, q, k)), b = Ids(TopK(index, q, k + 1));
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST(TopKTest, LanguageFilter) {
  auto entries = ThreeEntries();
  entries.push_back({"ha_nl", "Adds two bits.", "nl", "half adder summary", "", {}});
  KbIndex index = BuildIndex(entries, HashEmbedder(64));
  auto r = TopK(index, embeddings::HashEmbed("half adder", 64), 5, "nl");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].id, "ha_nl");
}

TEST(SaveLoadTest, RoundTripIsExact) {
  KbIndex index = BuildIndex(ThreeEntries(), HashEmbedder(64));
  index.entries[0].e_y[3] = 0.1 + 0.2;  // not representable in short decimal
  std::string path = TempPath("kb_roundtrip.jsonl");
  SaveKb(index, path);
  EXPECT_EQ(LoadKb(path), index);
  std::filesystem::remove(path);
}

TEST(SaveLoadTest, TruncatedLineReportsLineNumber) {
  KbIndex index = BuildIndex(ThreeEntries(), HashEmbedder(16));
  std::string path = TempPath("kb_truncated.jsonl");
  SaveKb(index, path);
  std::ifstream in(path);
  std::string header, line2, rest;
  std::getline(in, header);
  std::getline(in, line2);
  in.close();
  std::ofstream(path, std::ios::trunc) << header << "\n" << line2.substr(0, line2.size() / 2) << "\n";
  try {
    LoadKb(path);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::filesystem::remove(path);
  EXPECT_THROW(LoadKb(TempPath("does_not_exist.jsonl")), IoError);
}

TEST(SaveLoadTest, EmbedderMismatch) {
  KbIndex index = BuildIndex(ThreeEntries(), HashEmbedder(64));
  EXPECT_NO_THROW(CheckEmbedder(index, HashEmbedder(64)));
  EXPECT_THROW(CheckEmbedder(index, HashEmbedder(128)), FingerprintMismatch);
}

}  // namespace
}  // namespace symdirec::kb
