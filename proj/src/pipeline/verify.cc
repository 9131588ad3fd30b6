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
#include <regex>
#include <set>

#include "symdirec/pipeline/pipeline.h"
#include "symdirec/util/template.h"

namespace symdirec::pipeline {

using symlogic::SymBundle;
using symlogic::SymExpr;

const char* VerifyMethodName(VerifyMethod m) {
  return m == VerifyMethod::kSymbolicExact ? "symbolic-exact" : "llm";
}

SymBundle OutputDefinitions(const SymBundle& bundle) {
  std::set<std::string> read;
  for (const SymExpr& d : bundle.definitions) {
    for (const std::string& v : d.rhs().FreeVariables()) read.insert(v);
  }
  SymBundle inlined = symlogic::InlineDefinitions(bundle);
  SymBundle out;
  for (const SymExpr& d : inlined.definitions) {
    if (read.count(d.target().key()) == 0) out.definitions.push_back(d);
  }
  return out;
}

bool SymbolicMatch(const SymBundle& a, const SymBundle& b) {
  SymBundle oa = OutputDefinitions(a), ob = OutputDefinitions(b);
  if (oa.definitions.empty() || oa.definitions.size() != ob.definitions.size()) return false;
  for (std::size_t i = 0; i < oa.definitions.size(); ++i) {
    SymExpr ca = symlogic::CanonicalizeVariables(oa.definitions[i].rhs());
    SymExpr cb = symlogic::CanonicalizeVariables(ob.definitions[i].rhs());
    try {
      if (!symlogic::Equivalent(ca, cb)) return false;
    } catch (const symlogic::TooManyVariables&) {
      return false;
    } catch (const Error& e) {
      if (e.code() == "SymWidthError") return false;
      throw;
    }
  }
  return true;
}

std::optional<double> ParseScore(std::string_view reply) {
  static const std::regex kNumber(R"((\d+(?:\.\d+)?|\.\d+))");
  std::string s(reply);
  std::smatch m;
  if (!std::regex_search(s, m, kNumber)) return std::nullopt;
  double v = std::stod(m[1].str());
  if (v < 0.0 || v > 1.0) return std::nullopt;
  return v;
}

VerifyResult VerifyScore(const kb::KbEntry& entry, const SubComponent& sub,
                         providers::Provider& provider, const PromptTemplates& templates) {
  VerifyResult r;
  if (sub.phi && !entry.phi.empty()) {
    std::optional<SymBundle> entry_phi;
    try {
      entry_phi = symlogic::ParseBundle(entry.phi);
    } catch (const Error&) {
      // free-text sketch: only the llm can judge it
    }
    if (entry_phi && SymbolicMatch(*sub.phi, *entry_phi)) {
      r.alpha = 1.0;
      r.method = VerifyMethod::kSymbolicExact;
      return r;
    }
  }
  providers::GenRequest req;
  req.prompt = RenderTemplate(templates.verify, {{"x_i", sub.x},
                                                 {"phi_i", sub.phi_text},
                                                 {"snippet", entry.y},
                                                 {"description", entry.d}});
  r.prompt = req.prompt;
  r.reply = provider.Generate(req).text;
  r.method = VerifyMethod::kLlm;
  if (std::optional<double> score = ParseScore(r.reply)) {
    r.alpha = *score;
  } else {
    r.alpha = 0.0;
    r.warning = "no score in [0, 1] in verifier reply";
  }
  return r;
}

std::size_t Select(std::span<const ScoredCandidate> candidates) {
  if (candidates.empty()) throw NoCandidates("no candidates to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const ScoredCandidate& c = candidates[i];
    const ScoredCandidate& b = candidates[best];
    if (c.alpha != b.alpha) {
      if (c.alpha > b.alpha) best = i;
    } else if (c.result.score != b.result.score) {
      if (c.result.score > b.result.score) best = i;
    } else if (c.result.id < b.result.id) {
      best = i;
    }
  }
  return best;
}

}  // namespace symdirec::pipeline
