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

#include "symdirec/kb/knowledge_base.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"

namespace symdirec::kb {

using nlohmann::json;

namespace {
constexpr const char* kFormat = "symdirec-kb";
constexpr int kFormatVersion = 1;
const std::set<std::string> kLanguages = {"verilog", "vhdl", "nl"};
}  // namespace

Embedder HashEmbedder(int dim) {
  return Embedder{"hash3-fnv1a-d" + std::to_string(dim), dim,
                  [dim](std::string_view text) { return embeddings::HashEmbed(text, dim); }};
}

const KbEntry* KbIndex::Find(std::string_view id) const {
  for (const KbEntry& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::string EntryText(const KbEntry& entry) { return entry.y + "\n" + entry.d; }

std::string IndexFingerprint(const Embedder& embedder) {
  return embedder.fingerprint + "/entry=y+d";
}

KbIndex BuildIndex(std::vector<KbEntry> entries, const Embedder& embedder) {
  std::set<std::string> seen;
  for (const KbEntry& e : entries) {
    if (!seen.insert(e.id).second) throw DuplicateId(e.id);
    if (e.y.empty()) throw EmbedFailure("entry '" + e.id + "' has an empty artifact");
    if (kLanguages.count(e.language) == 0) {
      throw EmbedFailure("entry '" + e.id + "' has unknown language '" + e.language + "'");
    }
  }
  KbIndex index;
  index.dim = embedder.dim;
  index.embedder = IndexFingerprint(embedder);
  for (KbEntry& e : entries) {
    try {
      e.e_y = embedder.embed(EntryText(e));
    } catch (const Error& err) {
      throw EmbedFailure("entry '" + e.id + "': " + err.what());
    }
    if (e.e_y.size() != static_cast<std::size_t>(embedder.dim)) {
      throw DimensionMismatch("entry '" + e.id + "' embedded to " +
                              std::to_string(e.e_y.size()) + " values, expected " +
                              std::to_string(embedder.dim));
    }
    if (embeddings::Norm(e.e_y) == 0.0) {
      throw EmbedFailure("entry '" + e.id + "' embeds to the zero vector");
    }
  }
  index.entries = std::move(entries);
  return index;
}

std::vector<RetrievalResult> TopK(const KbIndex& index, std::span<const double> q, int k,
                                  std::optional<std::string_view> language) {
  if (k <= 0) throw ConfigError("k must be positive");
  if (q.size() != static_cast<std::size_t>(index.dim)) {
    throw DimensionMismatch("query of size " + std::to_string(q.size()) +
                            " against an index of dimension " + std::to_string(index.dim));
  }
  if (embeddings::Norm(q) == 0.0) throw ZeroVector("query is the zero vector");

  struct Scored {
    double score;
    const KbEntry* entry;
  };
  std::vector<Scored> scored;
  scored.reserve(index.entries.size());
  for (const KbEntry& e : index.entries) {
    if (language && e.language != *language) continue;
    scored.push_back({embeddings::Cosine(q, e.e_y), &e});
  }
  auto better = [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entry->id < b.entry->id;
  };
  std::size_t n = std::min(scored.size(), static_cast<std::size_t>(k));
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n),
                    scored.end(), better);
  std::vector<RetrievalResult> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({scored[i].entry->id, scored[i].score, static_cast<int>(i) + 1});
  }
  return out;
}

void SaveKb(const KbIndex& index, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot write " + path);
  json header = {{"format", kFormat},
                 {"version", kFormatVersion},
                 {"dim", index.dim},
                 {"embedder", index.embedder}};
  f << header.dump() << "\n";
  for (const KbEntry& e : index.entries) {
    json line = {{"id", e.id}, {"y", e.y},     {"language", e.language},
                 {"d", e.d},   {"phi", e.phi}, {"e_y", e.e_y}};
    f << line.dump() << "\n";
  }
  if (!f) throw IoError("short write to " + path);
}

namespace {

std::string RequireString(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw FormatError(std::string("missing string field '") + key + "'", line);
  }
  return it->get<std::string>();
}

}  // namespace

KbIndex LoadKb(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path);
  KbIndex index;
  std::set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(f, text)) {
    ++line;
    if (text.empty()) continue;
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw FormatError("not a JSON object", line);
    if (!have_header) {
      if (j.value("format", "") != kFormat) throw FormatError("missing knowledge-base header", line);
      if (j.value("version", 0) != kFormatVersion) throw FormatError("unsupported version", line);
      if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() <= 0) {
        throw FormatError("bad dimension", line);
      }
      index.dim = j["dim"].get<int>();
      index.embedder = RequireString(j, "embedder", line);
      have_header = true;
      continue;
    }
    KbEntry e;
    e.id = RequireString(j, "id", line);
    e.y = RequireString(j, "y", line);
    e.language = RequireString(j, "language", line);
    e.d = RequireString(j, "d", line);
    e.phi = RequireString(j, "phi", line);
    if (kLanguages.count(e.language) == 0) throw FormatError("unknown language", line);
    auto ey = j.find("e_y");
    if (ey == j.end() || !ey->is_array()) throw FormatError("missing field 'e_y'", line);
    for (const json& x : *ey) {
      if (!x.is_number()) throw FormatError("non-numeric embedding component", line);
      e.e_y.push_back(x.get<double>());
    }
    if (e.e_y.size() != static_cast<std::size_t>(index.dim)) {
      throw FormatError("embedding has " + std::to_string(e.e_y.size()) +
                            " components, header says " + std::to_string(index.dim),
                        line);
    }
    if (!seen.insert(e.id).second) throw DuplicateId(e.id);
    index.entries.push_back(std::move(e));
  }
  if (!have_header) throw FormatError("empty knowledge-base file", line + 1);
  return index;
}

void CheckEmbedder(const KbIndex& index, const Embedder& embedder) {
  std::string fp = IndexFingerprint(embedder);
  if (fp != index.embedder) {
    throw FingerprintMismatch("index was built with '" + index.embedder +
                              "' but the query embedder is '" + fp + "'");
  }
}

}  // namespace symdirec::kb
