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

#ifndef SYMDIREC_KB_KNOWLEDGE_BASE_H_
#define SYMDIREC_KB_KNOWLEDGE_BASE_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symdirec/embeddings/embeddings.h"
#include "symdirec/error.h"

namespace symdirec::kb {

using embeddings::Vector;

class DuplicateId : public Error {
 public:
  explicit DuplicateId(std::string id)
      : Error("DuplicateId", "duplicate knowledge-base id '" + id + "'"), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

SYMDIREC_DEFINE_ERROR(EmbedFailure);
SYMDIREC_DEFINE_ERROR(FingerprintMismatch);

class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t line)
      : Error("FormatError", "line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A text embedder and a fingerprint naming it; indexes remember the
// fingerprint so queries from a different embedder can be refused.
struct Embedder {
  std::string fingerprint;
  int dim = 0;
  std::function<Vector(std::string_view)> embed;
};

Embedder HashEmbedder(int dim = embeddings::kDefaultDim);

struct KbEntry {
  std::string id;
  std::string y;         // RTL snippet or NL summary
  std::string language;  // "verilog", "vhdl" or "nl"
  std::string d;         // short explanation
  std::string phi;       // SymBundle text or a free-text sketch
  Vector e_y;

  bool operator==(const KbEntry&) const = default;
};

struct KbIndex {
  std::vector<KbEntry> entries;
  int dim = 0;
  std::string embedder;  // fingerprint

  std::size_t size() const { return entries.size(); }
  const KbEntry* Find(std::string_view id) const;
  bool operator==(const KbIndex&) const = default;
};

struct RetrievalResult {
  std::string id;
  double score = 0.0;
  int rank = 0;  // 1-based

  bool operator==(const RetrievalResult&) const = default;
};

// Text fed to the embedder for an entry: y, a newline, then d.
std::string EntryText(const KbEntry& entry);

// Fingerprint stored in an index built with `embedder`.
std::string IndexFingerprint(const Embedder& embedder);

// Embeds every entry (any existing e_y is replaced).
KbIndex BuildIndex(std::vector<KbEntry> entries, const Embedder& embedder);

// Exact scan: min(k, S) results by descending cosine, ties by ascending id.
// When `language` is given only entries in that language are ranked.
std::vector<RetrievalResult> TopK(const KbIndex& index, std::span<const double> q, int k,
                                  std::optional<std::string_view> language = std::nullopt);

// JSONL with a header line {"format","version","dim","embedder"}.
void SaveKb(const KbIndex& index, const std::string& path);
KbIndex LoadKb(const std::string& path);

// Throws FingerprintMismatch when `embedder` did not build `index`.
void CheckEmbedder(const KbIndex& index, const Embedder& embedder);

}  // namespace symdirec::kb

#endif  // SYMDIREC_KB_KNOWLEDGE_BASE_H_
