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

#ifndef SYMDIREC_PIPELINE_PIPELINE_H_
#define SYMDIREC_PIPELINE_PIPELINE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "symdirec/embeddings/embeddings.h"
#include "symdirec/error.h"
#include "symdirec/kb/knowledge_base.h"
#include "symdirec/providers/provider.h"
#include "symdirec/symlogic/expr.h"

namespace symdirec::pipeline {

using Trace = nlohmann::ordered_json;

enum class Direction { kSynthesis, kSummarization };

const char* DirectionName(Direction d);  // "synthesis" / "summarization"
Direction ParseDirection(std::string_view name);

struct TaskInput {
  Direction direction = Direction::kSynthesis;
  std::string x;                    // NL spec or RTL source
  std::string language = "verilog"; // target: verilog, vhdl or nl
  int n_hint = 4;
  int k = 5;
  std::string name = "task";        // run directory name
};

// ConfigError on an empty X, unknown language, n_hint < 1 or k < 1.
void Validate(const TaskInput& input);

struct SubComponent {
  int index = 0;  // 1-based, contiguous
  std::string x;
  std::string phi_text;                    // as produced
  std::optional<symlogic::SymBundle> phi;  // set when phi_text is formal
  std::string origin;                      // "llm" or "ast"
};

enum class VerifyMethod { kSymbolicExact, kLlm };
const char* VerifyMethodName(VerifyMethod m);  // "symbolic-exact" / "llm"

struct VerifyResult {
  double alpha = 0.0;
  VerifyMethod method = VerifyMethod::kLlm;
  std::string warning;  // non-empty when the reply held no usable score
  std::string prompt;   // llm path only
  std::string reply;
};

struct ScoredCandidate {
  kb::RetrievalResult result;
  double alpha = 0.0;
  VerifyMethod method = VerifyMethod::kLlm;
};

struct VerifiedCandidate {
  int sub_index = 0;
  std::string entry_id;
  double retrieval_score = 0.0;
  double alpha = 0.0;
  VerifyMethod method = VerifyMethod::kLlm;
};

SYMDIREC_DEFINE_ERROR(EmptyDecomposition);
SYMDIREC_DEFINE_ERROR(NoCandidates);

// A failure inside run(), tagged with the stage it came from. code() is the
// code of the underlying error.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), stage + ": " + cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// Prompt texts, one file per stage under a template directory.
struct PromptTemplates {
  std::string divide_synth;    // {X} {N} {language}
  std::string divide_block;    // {x_i}
  std::string verify;          // {x_i} {phi_i} {snippet} {description}
  std::string assemble_synth;  // {X} {language} {context}
  std::string assemble_summ;   // {X} {context}
  std::string assemble_item;   // {i} {x_i} {phi_i} {snippet}
  std::string repair;          // {X} {language} {previous} {error}

  static PromptTemplates Load(const std::string& dir);
  // Content hash over every template, recorded in traces.
  std::string Version() const;
};

struct Deps {
  providers::Provider* provider = nullptr;
  const kb::KbIndex* index = nullptr;
  const embeddings::ProjectionMatrix* w = nullptr;
  kb::Embedder embedder;
  PromptTemplates templates;
  int jobs = 4;
  double low_confidence_below = 0.5;
  std::string run_dir;  // trace goes to <run_dir>/<task name>/trace.json; empty: not written
};

// ---- Divide ----

// Parses a numbered decomposition reply:
//   1. <description>
//      phi: <symbolic expression(s)>
// Symbolic text that does not parse is kept as a free-text sketch and the
// error is appended to `notes`.
std::vector<SubComponent> ParseDecomposition(std::string_view reply,
                                             std::vector<std::string>* notes = nullptr);

// Fills `trace` (when given) with prompts, raw replies and parse notes.
// EmptyDecomposition carries the raw reply in the trace.
std::vector<SubComponent> Divide(const TaskInput& input, providers::Provider& provider,
                                 const PromptTemplates& templates, Trace* trace = nullptr);

// ---- Retrieve ----

// Synthesis restricts candidates to the target language; summarization
// searches every entry.
std::vector<std::vector<kb::RetrievalResult>> RetrieveAll(
    std::span<const SubComponent> subs, const kb::KbIndex& index,
    const embeddings::ProjectionMatrix& w, const kb::Embedder& embedder, int k,
    std::optional<std::string_view> language = std::nullopt);

// ---- Verify / select ----

// Defined outputs of a bundle with intermediate definitions inlined away.
symlogic::SymBundle OutputDefinitions(const symlogic::SymBundle& bundle);

// True when both bundles have the same number of outputs and each pair is
// equivalent after per-definition positional variable canonicalization.
bool SymbolicMatch(const symlogic::SymBundle& a, const symlogic::SymBundle& b);

// Reads the first number in `reply`; nullopt unless it lies in [0, 1].
std::optional<double> ParseScore(std::string_view reply);

VerifyResult VerifyScore(const kb::KbEntry& entry, const SubComponent& sub,
                         providers::Provider& provider, const PromptTemplates& templates);

// Argmax of alpha; ties by retrieval score (descending), then id (ascending).
// Returns the position in `candidates`. NoCandidates when empty.
std::size_t Select(std::span<const ScoredCandidate> candidates);

// ---- Conquer ----

struct Selection {
  SubComponent sub;
  const kb::KbEntry* entry = nullptr;  // null when nothing was retrieved
};

struct AssembleResult {
  std::string output;
  bool valid = true;   // synthesis: the output parses
  int generation_calls = 0;
  std::string error;   // last parse error
};

// Removes a surrounding ``` fence (with optional language tag) and trims.
std::string StripFences(std::string_view reply);

AssembleResult Assemble(const TaskInput& input, std::span<const Selection> selections,
                        providers::Provider& provider, const PromptTemplates& templates,
                        Trace* trace = nullptr);

// ---- Whole run ----

struct PipelineOutput {
  std::string y_hat;
  bool valid = true;
  bool low_confidence = false;
  std::vector<SubComponent> subcomponents;
  std::vector<VerifiedCandidate> selected;  // one per subcomponent that had candidates
  Trace trace;
};

// Divide, retrieve, verify, select and assemble. Errors are rethrown as
// StageError; the partial trace is still written when a run directory is set.
PipelineOutput Run(const TaskInput& input, const Deps& deps);

// ---- Knowledge-base sources ----

// Entries for every .v, .vhd and .txt file in `dir` (sorted by name). The id
// is the file name; d comes from a `<file>.desc` sidecar or the first comment
// line; phi from a `<file>.phi` sidecar or by extraction from the RTL when it
// is combinational. .txt files are NL entries.
std::vector<kb::KbEntry> CollectKbEntries(const std::string& dir);

}  // namespace symdirec::pipeline

#endif  // SYMDIREC_PIPELINE_PIPELINE_H_
