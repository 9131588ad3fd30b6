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
#include <mutex>

#include "gtest/gtest.h"
#include "symdirec/metrics/metrics.h"
#include "symdirec/pipeline/pipeline.h"
#include "symdirec/util/hash.h"
#include "symdirec/util/template.h"

namespace symdirec::pipeline {
namespace {

namespace fs = std::filesystem;
using symlogic::SymBundle;
using symlogic::SymExpr;

const std::string kData = SYMDIREC_DATA_DIR;

// Scripted stand-in for an LLM: the first rule whose key occurs in the prompt
// answers. Records every prompt.
class ScriptedProvider : public providers::Provider {
 public:
  void On(std::string key, std::string reply) { rules_.emplace_back(std::move(key), std::move(reply)); }

  providers::ProviderKind kind() const override { return providers::ProviderKind::kMock; }
  providers::GenResponse Generate(const providers::GenRequest& req) override {
    std::lock_guard<std::mutex> lock(mu_);
    prompts_.push_back(req.prompt);
    for (const auto& [key, reply] : rules_) {
      if (req.prompt.find(key) != std::string::npos) return {reply, "stop", 0, 0};
    }
    throw providers::FixtureMiss(kind(), providers::RequestFingerprint(req), "no rule");
  }
  embeddings::Vector Embed(std::string_view text) override { return embeddings::HashEmbed(text); }
  int embedding_dim() const override { return embeddings::kDefaultDim; }
  std::string EmbedderFingerprint() const override { return "hash"; }

  std::vector<std::string> prompts() const { return prompts_; }

 private:
  std::vector<std::pair<std::string, std::string>> rules_;
  std::mutex mu_;
  std::vector<std::string> prompts_;
};

// Small templates whose prompts are easy to match in rules.
PromptTemplates TestTemplates() {
  PromptTemplates t;
  t.divide_synth = "DIVIDE N={N} L={language}\n{X}";
  t.divide_block = "BLOCK\n{x_i}";
  t.verify = "VERIFY {x_i} | {phi_i} | {description}\n{snippet}";
  t.assemble_synth = "ASSEMBLE {language}\n{X}\n{context}";
  t.assemble_summ = "SUMMARIZE\n{X}\n{context}";
  t.assemble_item = "[{i}] {x_i} :: {phi_i}\n{snippet}\n";
  t.repair = "REPAIR {error}\n{previous}";
  return t;
}

const char* kRcaReply =
    "1. LSB Half-Adder: adds bit 0\n"
    "   phi: S0 = A0 ^ B0, C1 = A0 & B0\n"
    "2. Bits 1-7 Full-Adders: adds bit i with the incoming carry\n"
    "   phi: Si = Ai ^ Bi ^ Ci, Ci1 = (Ai & Bi) | (Bi & Ci) | (Ai & Ci)\n";

// Brute-force truth-table comparison of two single-output expressions
// with variables matched by order of first appearance.
std::vector<std::string> VarsInOrder(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    char c = i < text.size() ? text[i] : ' ';
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '[' || c == ']') {
      cur += c;
    } else {
      if (!cur.empty() && cur != "0" && cur != "1" &&
          std::find(out.begin(), out.end(), cur) == out.end()) {
        out.push_back(cur);
      }
      cur.clear();
    }
  }
  return out;
}

bool SameFunction(const SymExpr& a, const SymExpr& b) {
  std::vector<std::string> va = VarsInOrder(a.ToString()), vb = VarsInOrder(b.ToString());
  if (va.size() != vb.size()) return false;
  for (std::uint32_t m = 0; m < (1u << va.size()); ++m) {
    symlogic::Assignment x, y;
    for (std::size_t i = 0; i < va.size(); ++i) {
      x[va[i]] = (m >> i) & 1;
      y[vb[i]] = (m >> i) & 1;
    }
    if (symlogic::Eval(a, x) != symlogic::Eval(b, y)) return false;
  }
  return true;
}

kb::KbIndex SnippetIndex() {
  return kb::BuildIndex(CollectKbEntries(kData + "/snippets"), kb::HashEmbedder());
}

TEST(DivideTest, ParsesTableStyleDecomposition) {
  std::vector<std::string> notes;
  std::vector<SubComponent> subs = ParseDecomposition(kRcaReply, &notes);
  ASSERT_EQ(subs.size(), 2u);
  EXPECT_TRUE(notes.empty());
  EXPECT_EQ(subs[0].index, 1);
  EXPECT_EQ(subs[1].index, 2);
  EXPECT_EQ(subs[0].x, "LSB Half-Adder: adds bit 0");
  ASSERT_TRUE(subs[0].phi && subs[1].phi);
  ASSERT_EQ(subs[0].phi->definitions.size(), 2u);
  EXPECT_EQ(subs[0].phi->definitions[0].target().key(), "S0");
  EXPECT_TRUE(SameFunction(subs[0].phi->definitions[0].rhs(), symlogic::ParseSym("p ^ q")));
  EXPECT_TRUE(SameFunction(subs[1].phi->definitions[1].rhs(),
                           symlogic::ParseSym("(p & q) | (q & r) | (p & r)")));
  EXPECT_EQ(subs[1].origin, "llm");
}

TEST(DivideTest, FreeTextSketchIsKept) {
  std::vector<std::string> notes;
  auto subs = ParseDecomposition("1. Counter\n   phi: counts up on every clock edge\n2) Decoder\n", &notes);
  ASSERT_EQ(subs.size(), 2u);
  EXPECT_FALSE(subs[0].phi.has_value());
  EXPECT_EQ(subs[0].phi_text, "counts up on every clock edge");
  EXPECT_EQ(subs[1].phi_text, "");
  ASSERT_EQ(notes.size(), 1u);
  EXPECT_NE(notes[0].find("subcomponent 1"), std::string::npos);
}

TEST(DivideTest, SynthesisThroughProvider) {
  ScriptedProvider p;
  p.On("DIVIDE N=4 L=verilog\nbuild an 8-bit ripple-carry adder", kRcaReply);
  TaskInput in{Direction::kSynthesis, "build an 8-bit ripple-carry adder"};
  Trace t;
  std::vector<SubComponent> subs = Divide(in, p, TestTemplates(), &t);
  ASSERT_EQ(subs.size(), 2u);
  EXPECT_EQ(t["subcomponents"].size(), 2u);
  EXPECT_EQ(t["reply"], kRcaReply);
}

TEST(DivideTest, UnparseableReply) {
  ScriptedProvider p;
  p.On("DIVIDE", "I am not sure what you mean.");
  TaskInput in{Direction::kSynthesis, "something"};
  Trace t;
  EXPECT_THROW(Divide(in, p, TestTemplates(), &t), EmptyDecomposition);
  EXPECT_EQ(t["reply"], "I am not sure what you mean.");
}

TEST(DivideTest, SummarizationUsesTheAst) {
  ScriptedProvider p;  // no rules: any provider call fails the test
  TaskInput in{Direction::kSummarization, ReadFile(kData + "/snippets/half_adder.v"), "nl"};
  std::vector<SubComponent> subs = Divide(in, p, TestTemplates());
  ASSERT_EQ(subs.size(), 1u);
  EXPECT_EQ(subs[0].origin, "ast");
  ASSERT_TRUE(subs[0].phi);
  SymBundle want = symlogic::ParseBundle("sum = a ^ b; carry = a & b");
  ASSERT_EQ(subs[0].phi->definitions.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(subs[0].phi->definitions[i].target(), want.definitions[i].target());
    EXPECT_TRUE(SameFunction(subs[0].phi->definitions[i].rhs(), want.definitions[i].rhs()));
  }
  EXPECT_TRUE(p.prompts().empty());
}

TEST(DivideTest, SequentialBlocksAskTheProvider) {
  ScriptedProvider p;
  p.On("BLOCK", "q follows d on each rising clock edge, cleared by rst");
  std::string src = ReadFile(kData + "/snippets/dff.v");
  std::vector<SubComponent> subs = Divide({Direction::kSummarization, src, "nl"}, p, TestTemplates());
  ASSERT_EQ(subs.size(), 1u);
  EXPECT_EQ(subs[0].origin, "llm");
  EXPECT_FALSE(subs[0].phi.has_value());
  EXPECT_EQ(p.prompts().size(), 1u);
}

TEST(RetrieveTest, HalfAdderSnippetInTopFive) {
  kb::KbIndex index = SnippetIndex();
  auto subs = ParseDecomposition(kRcaReply);
  embeddings::ProjectionMatrix w = embeddings::ProjectionMatrix::HalfSum(embeddings::kDefaultDim);
  auto results = RetrieveAll(std::span(subs).first(1), index, w, kb::HashEmbedder(), 5);
  ASSERT_EQ(results.size(), 1u);
  ASSERT_EQ(results[0].size(), 5u);
  bool found = std::any_of(results[0].begin(), results[0].end(),
                           [](const kb::RetrievalResult& r) { return r.id == "half_adder.v"; });
  EXPECT_TRUE(found);

  auto one = RetrieveAll(subs, index, w, kb::HashEmbedder(), 1);
  for (const auto& r : one) EXPECT_EQ(r.size(), 1u);

  auto verilog_only = RetrieveAll(subs, index, w, kb::HashEmbedder(), 20, "verilog");
  for (const auto& list : verilog_only) {
    for (const auto& r : list) EXPECT_EQ(index.Find(r.id)->language, "verilog");
  }

  kb::KbIndex empty = kb::BuildIndex({}, kb::HashEmbedder());
  auto none = RetrieveAll(subs, empty, w, kb::HashEmbedder(), 5);
  ASSERT_EQ(none.size(), 2u);
  EXPECT_TRUE(none[0].empty() && none[1].empty());

  EXPECT_THROW(RetrieveAll(subs, index, w, kb::HashEmbedder(64), 5), kb::FingerprintMismatch);
}

TEST(VerifyTest, SymbolicExactOnHalfAdder) {
  kb::KbIndex index = SnippetIndex();
  auto subs = ParseDecomposition(kRcaReply);
  ScriptedProvider p;
  VerifyResult r = VerifyScore(*index.Find("half_adder.v"), subs[0], p, TestTemplates());
  EXPECT_EQ(r.alpha, 1.0);
  EXPECT_EQ(r.method, VerifyMethod::kSymbolicExact);
  VerifyResult fa = VerifyScore(*index.Find("full_adder.v"), subs[1], p, TestTemplates());
  EXPECT_EQ(fa.method, VerifyMethod::kSymbolicExact);
  EXPECT_TRUE(p.prompts().empty());

  // Independent re-check of the claim with the test's own oracle.
  SymBundle entry = OutputDefinitions(symlogic::ParseBundle(index.Find("half_adder.v")->phi));
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_TRUE(SameFunction(subs[0].phi->definitions[i].rhs(), entry.definitions[i].rhs()));
  }
}

TEST(VerifyTest, LlmFallback) {
  kb::KbEntry entry{"and.v", "module g(input a, b, output y); assign y = a & b; endmodule",
                    "verilog", "and gate", "y = a & b", {}};
  SubComponent sub{1, "or gate", "y = a | b", symlogic::ParseBundle("y = a | b"), "llm"};
  ScriptedProvider p;
  p.On("VERIFY or gate", "0.2");
  VerifyResult r = VerifyScore(entry, sub, p, TestTemplates());
  EXPECT_EQ(r.alpha, 0.2);
  EXPECT_EQ(r.method, VerifyMethod::kLlm);
  EXPECT_TRUE(r.warning.empty());

  ScriptedProvider vague;
  vague.On("VERIFY", "high");
  r = VerifyScore(entry, sub, vague, TestTemplates());
  EXPECT_EQ(r.alpha, 0.0);
  EXPECT_EQ(r.method, VerifyMethod::kLlm);
  EXPECT_FALSE(r.warning.empty());

  // different output count goes to the llm even when one output matches
  kb::KbEntry two = entry;
  two.phi = "y = a | b; z = a";
  ScriptedProvider q;
  q.On("VERIFY", "Score: 0.7");
  EXPECT_EQ(VerifyScore(two, sub, q, TestTemplates()).alpha, 0.7);
}

TEST(VerifyTest, ParseScore) {
  EXPECT_EQ(ParseScore("0.25"), 0.25);
  EXPECT_EQ(ParseScore("score = 1"), 1.0);
  EXPECT_EQ(ParseScore(".5"), 0.5);
  EXPECT_FALSE(ParseScore("7"));
  EXPECT_FALSE(ParseScore("high"));
}

TEST(VerifyTest, OutputDefinitionsInlineWires) {
  SymBundle b = symlogic::ParseBundle("p = a ^ b; sum = p ^ c; cout = (a & b) | (p & c)");
  SymBundle out = OutputDefinitions(b);
  ASSERT_EQ(out.definitions.size(), 2u);
  EXPECT_EQ(out.definitions[0].target().key(), "sum");
  EXPECT_TRUE(SameFunction(out.definitions[0].rhs(), symlogic::ParseSym("a ^ b ^ c")));
  EXPECT_TRUE(SymbolicMatch(b, symlogic::ParseBundle("s = x ^ y ^ z; c = (x & y) | (y & z) | (x & z)")));
}

ScoredCandidate Cand(std::string id, double score, double alpha) {
  return {{std::move(id), score, 0}, alpha, VerifyMethod::kLlm};
}

TEST(SelectTest, TieBreaks) {
  std::vector<ScoredCandidate> c = {Cand("a", 0.8, 0.3), Cand("b", 0.5, 0.9), Cand("c", 0.7, 0.9)};
  EXPECT_EQ(Select(c), 2u);
  std::vector<ScoredCandidate> ids = {Cand("z", 0.5, 0.9), Cand("m", 0.5, 0.9)};
  EXPECT_EQ(Select(ids), 1u);
  std::vector<ScoredCandidate> one = {Cand("only", 0.1, 0.0)};
  EXPECT_EQ(Select(one), 0u);
  EXPECT_THROW(Select(std::vector<ScoredCandidate>{}), NoCandidates);
}

TEST(SelectTest, InvariantUnderRescaling) {
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    std::vector<ScoredCandidate> c;
    int n = 1 + static_cast<int>(rng.Below(8));
    for (int i = 0; i < n; ++i) {
      c.push_back(Cand("e" + std::to_string(rng.Below(20)), rng.Below(4) / 4.0, rng.Below(5) / 4.0));
    }
    std::size_t before = Select(c);
    double scale = 0.01 + rng.Uniform();
    for (auto& x : c) x.alpha *= scale;
    ASSERT_EQ(Select(c), before);
  }
}

TEST(AssembleTest, StripFences) {
  EXPECT_EQ(StripFences("```verilog\nmodule m(); endmodule\n```"), "module m(); endmodule\n");
  EXPECT_EQ(StripFences("  plain text \n"), "plain text");
  EXPECT_EQ(StripFences("```\nx\n"), "x\n");
}

TEST(AssembleTest, RepairOnce) {
  TaskInput in{Direction::kSynthesis, "an inverter"};
  std::vector<Selection> sel = {{SubComponent{1, "inverter", "y = ~a", std::nullopt, "llm"}, nullptr}};
  ScriptedProvider p;
  p.On("REPAIR", "module inv(input a, output y);\n  assign y = ~a;\nendmodule\n");
  p.On("ASSEMBLE", "module inv(input a, output y)\n  assign y = ~a;\nendmodule\n");
  Trace t;
  AssembleResult r = Assemble(in, sel, p, TestTemplates(), &t);
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(r.generation_calls, 2);
  EXPECT_EQ(t["calls"].size(), 2u);
  EXPECT_NE(p.prompts()[0].find("(no candidate retrieved)"), std::string::npos);

  ScriptedProvider bad;
  bad.On("ASSEMBLE", "not verilog");
  bad.On("REPAIR", "still not verilog");
  r = Assemble(in, sel, bad, TestTemplates(), &t);
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.output, "still not verilog");
  EXPECT_EQ(r.generation_calls, 2);
  EXPECT_FALSE(t["valid"].get<bool>());
}

TEST(AssembleTest, SummaryOfHalfAdder) {
  std::string src = ReadFile(kData + "/toy/half_adder/reference.v");
  std::string reference = ReadFile(kData + "/toy/half_adder/summary.txt");
  ScriptedProvider p;
  p.On("SUMMARIZE", ReadFile(kData + "/fixtures/answers/half_adder/summary.txt"));
  TaskInput in{Direction::kSummarization, src, "nl"};
  std::vector<SubComponent> subs = Divide(in, p, TestTemplates());
  std::vector<Selection> sel = {{subs[0], nullptr}};
  AssembleResult r = Assemble(in, sel, p, TestTemplates());
  EXPECT_NE(r.output.find("a XOR b"), std::string::npos);
  EXPECT_NE(r.output.find("a AND b"), std::string::npos);
  EXPECT_GE(metrics::RougeL(r.output, reference).f, 0.9);
}

struct RunFixture {
  kb::KbIndex index = SnippetIndex();
  embeddings::ProjectionMatrix w = embeddings::ProjectionMatrix::HalfSum(embeddings::kDefaultDim);
  ScriptedProvider provider;

  Deps MakeDeps(const std::string& run_dir = "") {
    Deps d;
    d.provider = &provider;
    d.index = &index;
    d.w = &w;
    d.embedder = kb::HashEmbedder();
    d.templates = TestTemplates();
    d.run_dir = run_dir;
    return d;
  }
};

TEST(RunTest, RippleCarryEndToEnd) {
  RunFixture f;
  f.provider.On("DIVIDE", kRcaReply);
  f.provider.On("VERIFY", "0.1");
  f.provider.On("ASSEMBLE", ReadFile(kData + "/fixtures/answers/rca8/design.v"));
  fs::path dir = fs::temp_directory_path() / "symdirec_run_test";
  fs::remove_all(dir);
  TaskInput in{Direction::kSynthesis, "build an 8-bit ripple-carry adder"};
  in.name = "rca8";
  PipelineOutput out = pipeline::Run(in, f.MakeDeps(dir.string()));
  EXPECT_TRUE(out.valid);
  EXPECT_FALSE(out.low_confidence);
  ASSERT_EQ(out.selected.size(), 2u);
  EXPECT_EQ(out.selected[0].entry_id, "half_adder.v");
  EXPECT_EQ(out.selected[1].entry_id, "full_adder.v");
  for (const auto& s : out.selected) EXPECT_EQ(s.method, VerifyMethod::kSymbolicExact);
  for (const char* stage : {"divide", "retrieve", "verify", "select", "assemble"}) {
    EXPECT_TRUE(out.trace.contains(stage)) << stage;
  }
  // Trace ids exist in the knowledge base.
  for (const auto& r : out.trace["retrieve"]) {
    for (const auto& res : r["results"]) EXPECT_NE(f.index.Find(res["id"].get<std::string>()), nullptr);
  }
  EXPECT_TRUE(fs::exists(dir / "rca8" / "trace.json"));
  EXPECT_EQ(ReadFile((dir / "rca8" / "output.txt").string()), out.y_hat);

  PipelineOutput again = pipeline::Run(in, f.MakeDeps());
  EXPECT_EQ(again.y_hat, out.y_hat);
  EXPECT_EQ(again.trace.dump(), out.trace.dump());
  fs::remove_all(dir);
}

TEST(RunTest, NoRelevantEntryIsLowConfidence) {
  RunFixture f;
  f.index = kb::BuildIndex(CollectKbEntries(kData + "/snippets"), kb::HashEmbedder());
  f.index.entries.erase(std::remove_if(f.index.entries.begin(), f.index.entries.end(),
                                       [](const kb::KbEntry& e) { return e.id != "dff.v"; }),
                        f.index.entries.end());
  f.provider.On("DIVIDE", kRcaReply);
  f.provider.On("VERIFY", "0");
  f.provider.On("ASSEMBLE", ReadFile(kData + "/fixtures/answers/rca8/design.v"));
  PipelineOutput out = pipeline::Run({Direction::kSynthesis, "build an 8-bit ripple-carry adder"}, f.MakeDeps());
  EXPECT_TRUE(out.low_confidence);
  EXPECT_TRUE(out.trace["low_confidence"].get<bool>());
  EXPECT_FALSE(out.y_hat.empty());
}

TEST(RunTest, SummarizationShowsAstOrigin) {
  RunFixture f;
  f.provider.On("VERIFY", "0.3");
  f.provider.On("SUMMARIZE", ReadFile(kData + "/fixtures/answers/half_adder/summary.txt"));
  TaskInput in{Direction::kSummarization, ReadFile(kData + "/toy/half_adder/reference.v"), "nl"};
  PipelineOutput out = pipeline::Run(in, f.MakeDeps());
  ASSERT_EQ(out.trace["divide"]["subcomponents"].size(), 1u);
  EXPECT_EQ(out.trace["divide"]["subcomponents"][0]["origin"], "ast");
  EXPECT_EQ(out.selected[0].method, VerifyMethod::kSymbolicExact);
}

TEST(RunTest, StageTaggedFailure) {
  RunFixture f;
  f.provider.On("DIVIDE", "no list here");
  try {
    pipeline::Run({Direction::kSynthesis, "anything"}, f.MakeDeps());
    FAIL() << "expected a StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "divide");
    EXPECT_EQ(e.code(), "EmptyDecomposition");
  }
  TaskInput bad{Direction::kSynthesis, "x"};
  bad.k = 0;
  EXPECT_THROW(pipeline::Run(bad, f.MakeDeps()), ConfigError);
}

TEST(TemplatesTest, ShippedTemplatesLoadAndRender) {
  PromptTemplates t = PromptTemplates::Load(SYMDIREC_PROMPTS_DIR);
  std::string p = RenderTemplate(t.divide_synth, {{"X", "adder {a, b}"}, {"N", "4"}, {"language", "verilog"}});
  EXPECT_NE(p.find("adder {a, b}"), std::string::npos);
  EXPECT_EQ(t.Version(), PromptTemplates::Load(SYMDIREC_PROMPTS_DIR).Version());
  EXPECT_THROW(RenderTemplate("{missing}", {}), ConfigError);
  EXPECT_EQ(RenderTemplate("{a, b} {x}", {{"x", "{y}"}}), "{a, b} {y}");
}

TEST(KbSourcesTest, SnippetEntries) {
  std::vector<kb::KbEntry> entries = CollectKbEntries(kData + "/snippets");
  auto find = [&](const std::string& id) {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const kb::KbEntry& e) { return e.id == id; });
    return it == entries.end() ? nullptr : &*it;
  };
  ASSERT_NE(find("half_adder.v"), nullptr);
  EXPECT_EQ(find("half_adder.v")->language, "verilog");
  EXPECT_EQ(find("half_adder.vhd")->language, "vhdl");
  EXPECT_EQ(find("mux2.txt")->language, "nl");
  EXPECT_TRUE(SymbolicMatch(symlogic::ParseBundle(find("half_adder.vhd")->phi),
                            symlogic::ParseBundle("s = a ^ b; c = a & b")));
  EXPECT_EQ(find("dff.v")->phi, "");
  EXPECT_EQ(find("dff.v")->d, "D flip-flop with synchronous reset");
  EXPECT_NE(find("full_adder.v")->d.find("majority"), std::string::npos);
}

}  // namespace
}  // namespace symdirec::pipeline
