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

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>

#include "symdirec/pipeline/pipeline.h"

namespace symdirec::pipeline {

namespace fs = std::filesystem;

namespace {

void WriteRun(const Deps& deps, const TaskInput& input, const Trace& trace,
              const std::string* output) {
  if (deps.run_dir.empty()) return;
  fs::path dir = fs::path(deps.run_dir) / input.name;
  fs::create_directories(dir);
  std::ofstream(dir / "trace.json") << trace.dump(2) << "\n";
  if (output != nullptr) std::ofstream(dir / "output.txt") << *output;
}

template <typename Fn>
auto Staged(const std::string& stage, const Deps& deps, const TaskInput& input, Trace& trace,
            Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    trace["error"] = {{"stage", stage}, {"code", e.code()}, {"message", e.what()}};
    WriteRun(deps, input, trace, nullptr);
    throw StageError(stage, e);
  }
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first failure by
// index is rethrown so errors do not depend on scheduling.
template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> threads;
    int count = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
    for (int t = 0; t < count; ++t) threads.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<std::vector<kb::RetrievalResult>> RetrieveAll(
    std::span<const SubComponent> subs, const kb::KbIndex& index,
    const embeddings::ProjectionMatrix& w, const kb::Embedder& embedder, int k,
    std::optional<std::string_view> language) {
  kb::CheckEmbedder(index, embedder);
  std::vector<std::vector<kb::RetrievalResult>> out;
  for (const SubComponent& s : subs) {
    if (index.size() == 0) {
      out.emplace_back();
      continue;
    }
    std::string phi = s.phi ? s.phi->ToString() : s.phi_text;
    embeddings::Vector q = embeddings::JointQuery(embedder.embed(s.x), embedder.embed(phi), w);
    out.push_back(kb::TopK(index, q, k, language));
  }
  return out;
}

PipelineOutput Run(const TaskInput& input, const Deps& deps) {
  Validate(input);
  if (deps.provider == nullptr || deps.index == nullptr || deps.w == nullptr) {
    throw ConfigError("pipeline needs a provider, a knowledge base and a projection");
  }
  PipelineOutput out;
  Trace& trace = out.trace;
  trace["task"] = {{"name", input.name},
                   {"direction", DirectionName(input.direction)},
                   {"language", input.language},
                   {"n_hint", input.n_hint},
                   {"k", input.k},
                   {"x", input.x}};
  trace["config"] = {{"templates", deps.templates.Version()},
                     {"embedder", deps.embedder.fingerprint},
                     {"kb_size", deps.index->size()},
                     {"low_confidence_below", deps.low_confidence_below}};

  Trace divide_trace;
  out.subcomponents = Staged("divide", deps, input, trace, [&] {
    try {
      return Divide(input, *deps.provider, deps.templates, &divide_trace);
    } catch (...) {
      trace["divide"] = divide_trace;
      throw;
    }
  });
  trace["divide"] = divide_trace;
  const std::vector<SubComponent>& subs = out.subcomponents;

  std::optional<std::string_view> language;
  if (input.direction == Direction::kSynthesis) language = input.language;
  auto retrieved = Staged("retrieve", deps, input, trace, [&] {
    return RetrieveAll(subs, *deps.index, *deps.w, deps.embedder, input.k, language);
  });
  trace["retrieve"] = Trace::array();
  for (std::size_t i = 0; i < subs.size(); ++i) {
    Trace r = {{"index", subs[i].index}, {"results", Trace::array()}};
    for (const kb::RetrievalResult& res : retrieved[i]) {
      r["results"].push_back({{"id", res.id}, {"score", res.score}, {"rank", res.rank}});
    }
    trace["retrieve"].push_back(r);
  }

  // Every (subcomponent, candidate) pair is scored independently.
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (std::size_t m = 0; m < retrieved[i].size(); ++m) jobs.emplace_back(i, m);
  }
  std::vector<VerifyResult> verdicts(jobs.size());
  Staged("verify", deps, input, trace, [&] {
    ParallelFor(jobs.size(), deps.jobs, [&](std::size_t j) {
      auto [i, m] = jobs[j];
      const kb::KbEntry* entry = deps.index->Find(retrieved[i][m].id);
      verdicts[j] = VerifyScore(*entry, subs[i], *deps.provider, deps.templates);
    });
    return 0;
  });

  trace["verify"] = Trace::array();
  trace["select"] = Trace::array();
  std::vector<Selection> selections;
  std::size_t j = 0;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    std::vector<ScoredCandidate> scored;
    Trace v = {{"index", subs[i].index}, {"candidates", Trace::array()}};
    for (std::size_t m = 0; m < retrieved[i].size(); ++m, ++j) {
      const VerifyResult& r = verdicts[j];
      scored.push_back({retrieved[i][m], r.alpha, r.method});
      Trace c = {{"id", retrieved[i][m].id},
                 {"alpha", r.alpha},
                 {"method", VerifyMethodName(r.method)}};
      if (r.method == VerifyMethod::kLlm) {
        c["prompt"] = r.prompt;
        c["reply"] = r.reply;
      }
      if (!r.warning.empty()) c["warning"] = r.warning;
      v["candidates"].push_back(c);
    }
    trace["verify"].push_back(v);

    Selection sel{subs[i], nullptr};
    Trace s = {{"index", subs[i].index}};
    bool low = true;
    if (!scored.empty()) {
      const ScoredCandidate& best = scored[Select(scored)];
      sel.entry = deps.index->Find(best.result.id);
      out.selected.push_back(
          {subs[i].index, best.result.id, best.result.score, best.alpha, best.method});
      s["id"] = best.result.id;
      s["alpha"] = best.alpha;
      s["retrieval_score"] = best.result.score;
      s["method"] = VerifyMethodName(best.method);
      low = best.alpha < deps.low_confidence_below;
    } else {
      s["id"] = nullptr;
    }
    s["low_confidence"] = low;
    out.low_confidence = out.low_confidence || low;
    trace["select"].push_back(s);
    selections.push_back(std::move(sel));
  }

  Trace assemble_trace;
  AssembleResult assembled = Staged("assemble", deps, input, trace, [&] {
    try {
      return Assemble(input, selections, *deps.provider, deps.templates, &assemble_trace);
    } catch (...) {
      trace["assemble"] = assemble_trace;
      throw;
    }
  });
  trace["assemble"] = assemble_trace;
  out.y_hat = assembled.output;
  out.valid = assembled.valid;
  trace["low_confidence"] = out.low_confidence;
  trace["valid"] = out.valid;
  trace["output"] = out.y_hat;
  WriteRun(deps, input, trace, &out.y_hat);
  return out;
}

}  // namespace symdirec::pipeline
