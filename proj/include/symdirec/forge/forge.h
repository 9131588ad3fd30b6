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

#ifndef SYMDIREC_FORGE_FORGE_H_
#define SYMDIREC_FORGE_FORGE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symdirec/error.h"
#include "symdirec/hdl/segment.h"

namespace symdirec::providers {
class Provider;
}

namespace symdirec::forge {

SYMDIREC_DEFINE_ERROR(TooLarge);
SYMDIREC_DEFINE_ERROR(TooSmall);
SYMDIREC_DEFINE_ERROR(TooManyInputs);
SYMDIREC_DEFINE_ERROR(ToolUnavailable);

enum class PairType { kTC, kCS, kFEC, kPC };

const char* PairTypeName(PairType type);  // "TC", "CS", "FEC", "PC"
PairType ParsePairType(std::string_view name);

struct PairRecord {
  PairType type = PairType::kFEC;
  std::string source;
  std::string target;
  // Free-form notes: "transform", "seed", "equivalent", "token_rule", ...
  std::map<std::string, std::string> provenance;
};

// Throws ConfigError when a text is empty or an FEC record has no
// "equivalent" note.
void Validate(const PairRecord& record);

std::string ToJsonLine(const PairRecord& record);
PairRecord FromJsonLine(std::string_view line);
void WritePairs(const std::string& path, std::span<const PairRecord> records);
std::vector<PairRecord> ReadPairs(const std::string& path);

// ---- Type-2: identifier renaming --------------------------------------

struct RenameResult {
  std::string text;
  std::map<std::string, std::string> renames;  // old -> new
};

// Optional external name source, e.g. an LLM. Receives every user identifier
// and returns proposals; invalid, duplicate or keyword proposals are replaced
// by generated names.
using NameSuggester = std::function<std::map<std::string, std::string>(
    const std::vector<hdl::IdentifierEntry>& identifiers, std::string_view source)>;

// Renames every user identifier of every module in a Verilog source. Only
// identifier tokens change, so layout and comments survive. Formal port names
// of modules defined elsewhere are left alone.
RenameResult Type2Rename(std::string_view source, std::uint64_t seed,
                         const NameSuggester& suggester = {});

// Builds a suggester that asks `provider` with `prompt_template` (placeholders
// {identifiers} and {code}) and reads `old -> new` lines from the reply.
NameSuggester ProviderSuggester(providers::Provider& provider, std::string prompt_template);

// ---- Type-3: reordering and inert code --------------------------------

struct Type3Result {
  std::string text;
  bool reordered = false;
  std::vector<std::string> inert_wires;  // fresh names that were injected
};

// Permutes the body items of each module in a random order that keeps every
// declaration ahead of its uses, and injects 0-2 inert items per file: an
// unused wire, or a fresh wire driven by an assign and read nowhere.
Type3Result Type3TransformDetailed(std::string_view source, std::uint64_t seed);
std::string Type3Transform(std::string_view source, std::uint64_t seed);

// ---- Partial-to-complete pairs ----------------------------------------

inline constexpr std::size_t kMaxPcTokens = 1024;

std::size_t WhitespaceTokens(std::string_view text);

// One pair per module with at least two body items. The partial keeps the
// header and a seeded strict prefix of the items (at least one). A seeded coin
// applies Type-2 to the source first, so partial and complete always agree on
// names.
std::vector<PairRecord> MakePcPairs(std::string_view source, std::uint64_t seed);

// ---- Functional equivalence -------------------------------------------

inline constexpr int kMaxEquivInputBits = 16;

// Exhaustive comparison of the top modules (the last module nobody
// instantiates), matching ports by position. Interface mismatches compare
// unequal.
bool CheckEquiv(std::string_view original, std::string_view transformed);

struct EquivOutcome {
  bool equivalent = false;
  std::string error;  // error code when the check could not run
};

std::vector<EquivOutcome> CheckEquivBatch(
    std::span<const std::pair<std::string, std::string>> pairs, int max_parallel = 4);

// One mutant per logic gate in the design's continuous assigns (any module),
// with that gate's output complemented.
std::vector<std::string> GateFlipMutants(std::string_view source);

// Type-2 and Type-3 pairs with their equivalence results.
std::vector<PairRecord> MakeFecPairs(std::string_view source, std::uint64_t seed);

// ---- Provider-backed families -----------------------------------------

// Text-to-code: the provider writes a problem statement for `code`
// (template placeholder {code}).
PairRecord MakeTcPair(std::string_view code, providers::Provider& provider,
                      const std::string& prompt_template);
// Code-to-summary.
PairRecord MakeCsPair(std::string_view code, providers::Provider& provider,
                      const std::string& prompt_template);

// ---- Type-4: cross-language back-translation --------------------------

struct Type4Config {
  // Shell command with {in} and {out} placeholders, e.g. a GHDL or Yosys
  // invocation.
  std::string command;
  std::string input_file = "in.vhd";
  std::string output_file = "out.v";
  double timeout_seconds = 60;
};

// Throws ToolUnavailable when the command is not installed or fails.
std::string Type4Translate(std::string_view source, const Type4Config& cfg);

// ---- Corpus statistics ------------------------------------------------

struct CorpusStats {
  int files = 0;
  int modules = 0;
  int parse_failures = 0;
  int combinational = 0;
  int fec_pairs = 0;         // generated and checked equivalent
  int fec_rejected = 0;      // generated but failed the check
  int fec_uncheckable = 0;   // sequential or too many inputs
  int pc_pairs = 0;
  int pc_too_small = 0;
  int pc_too_large = 0;
  int tc_candidates = 0;     // need a provider to become pairs
  int cs_candidates = 0;
};

CorpusStats ComputeStats(std::span<const std::string> paths, std::uint64_t seed = 0);

// Pair family, count and note, one row per family.
std::string FormatStats(const CorpusStats& stats);

}  // namespace symdirec::forge

#endif  // SYMDIREC_FORGE_FORGE_H_
