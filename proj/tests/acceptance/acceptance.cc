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

// Acceptance run: one PASS/FAIL line per criterion. Every reference value is
// computed here by a separate, deliberately plain implementation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "support/synthetic.h"
#include "symdirec/embeddings/embeddings.h"
#include "symdirec/forge/forge.h"
#include "symdirec/hdl/parser.h"
#include "symdirec/kb/knowledge_base.h"
#include "symdirec/metrics/metrics.h"
#include "symdirec/pipeline/pipeline.h"
#include "symdirec/symlogic/expr.h"
#include "symdirec/util/hash.h"
#include "symdirec/util/process.h"
#include "symdirec/util/template.h"

namespace fs = std::filesystem;
using namespace symdirec;
using symlogic::SymExpr;
using json = nlohmann::json;

namespace {

const std::string kCli = SYMDIREC_CLI;
const std::string kRoot = SYMDIREC_SOURCE_DIR;
const std::string kData = kRoot + "/data";

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

// ---- 1: metric oracles ---------------------------------------------------

std::size_t DpLcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t[a.size()][b.size()];
}

std::vector<std::string> Tokens(Rng& rng, std::size_t max_len, int vocab) {
  std::vector<std::string> out(rng.Below(max_len + 1));
  for (auto& t : out) t = "t" + std::to_string(rng.Below(vocab));
  return out;
}

double HandNdcg(const std::vector<std::string>& ranked, const metrics::Judgments& rel, int k) {
  auto grade = [&](const std::string& id) {
    auto it = rel.find(id);
    return it == rel.end() ? 0 : it->second;
  };
  double dcg = 0.0;
  for (int i = 0; i < k && i < static_cast<int>(ranked.size()); ++i) {
    dcg += (std::pow(2.0, grade(ranked[i])) - 1.0) / std::log2(i + 2.0);
  }
  std::vector<int> ideal;
  for (const auto& [id, g] : rel) ideal.push_back(g);
  std::sort(ideal.rbegin(), ideal.rend());
  double idcg = 0.0;
  for (int i = 0; i < k && i < static_cast<int>(ideal.size()); ++i) {
    idcg += (std::pow(2.0, ideal[i]) - 1.0) / std::log2(i + 2.0);
  }
  return idcg == 0.0 ? 0.0 : dcg / idcg;
}

Verdict MetricOracles() {
  auto start = Clock::now();
  Rng rng(101);
  int rouge_ok = 0;
  for (int t = 0; t < 1000; ++t) {
    auto a = Tokens(rng, 60, 10), b = Tokens(rng, 60, 10);
    double l = static_cast<double>(DpLcs(a, b));
    double f;
    if (a.empty() && b.empty()) {
      f = 1.0;
    } else {
      double p = a.empty() ? 0.0 : l / a.size(), r = b.empty() ? 0.0 : l / b.size();
      f = p + r == 0.0 ? 0.0 : 2 * p * r / (p + r);
    }
    double got = metrics::RougeL(std::span<const std::string>(a), std::span<const std::string>(b)).f;
    if (got == f) ++rouge_ok;
  }
  int ndcg_ok = 0;
  for (int t = 0; t < 100; ++t) {
    int n = 5 + static_cast<int>(rng.Below(40));
    std::vector<std::string> ids;
    metrics::Judgments rel;
    for (int i = 0; i < n; ++i) {
      ids.push_back("d" + std::to_string(i));
      if (rng.Below(3) != 0) rel[ids.back()] = static_cast<int>(rng.Below(4));
    }
    rng.Shuffle(ids);
    int k = 1 + static_cast<int>(rng.Below(n + 5));
    if (std::abs(metrics::NdcgAtK(ids, rel, k) - HandNdcg(ids, rel, k)) <= 1e-9) ++ndcg_ok;
  }
  double secs = Seconds(start);
  char buf[160];
  std::snprintf(buf, sizeof buf, "rouge-l exact %d/1000, ndcg within 1e-9 %d/100, %.2fs (limit 10s)",
                rouge_ok, ndcg_ok, secs);
  return {rouge_ok == 1000 && ndcg_ok == 100 && secs < 10.0, buf};
}

// ---- 2: symbolic oracle --------------------------------------------------

// Own recursive evaluator over the expression tree; scalar variables only.
bool Value(const SymExpr& e, const std::map<std::string, bool>& env) {
  auto ops = e.operands();
  switch (e.kind()) {
    case SymExpr::Kind::kVar: return env.at(e.key());
    case SymExpr::Kind::kConst: return e.value();
    case SymExpr::Kind::kNot: return !Value(ops[0], env);
    case SymExpr::Kind::kAnd: {
      bool v = true;
      for (const auto& o : ops) v = v && Value(o, env);
      return v;
    }
    case SymExpr::Kind::kOr: {
      bool v = false;
      for (const auto& o : ops) v = v || Value(o, env);
      return v;
    }
    case SymExpr::Kind::kXor: {
      bool v = false;
      for (const auto& o : ops) v = v != Value(o, env);
      return v;
    }
    case SymExpr::Kind::kIte: return Value(ops[0], env) ? Value(ops[1], env) : Value(ops[2], env);
    case SymExpr::Kind::kEq: return Value(ops[1], env);
    default: throw std::runtime_error("oracle: unsupported node");
  }
}

void CollectVars(const SymExpr& e, std::vector<std::string>& order) {
  if (e.kind() == SymExpr::Kind::kVar) {
    if (std::find(order.begin(), order.end(), e.key()) == order.end()) order.push_back(e.key());
    return;
  }
  auto ops = e.operands();
  std::size_t first = e.kind() == SymExpr::Kind::kEq ? 1 : 0;  // skip the defined target
  for (std::size_t i = first; i < ops.size(); ++i) CollectVars(ops[i], order);
}

bool TruthTablesMatch(const SymExpr& a, const SymExpr& b) {
  std::vector<std::string> vars;
  CollectVars(a, vars);
  CollectVars(b, vars);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << vars.size()); ++m) {
    std::map<std::string, bool> env;
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = (m >> i) & 1;
    if (Value(a, env) != Value(b, env)) return false;
  }
  return true;
}

// Same function once variables are matched by order of first appearance.
bool PositionalMatch(const SymExpr& a, const SymExpr& b) {
  std::vector<std::string> va, vb;
  CollectVars(a, va);
  CollectVars(b, vb);
  if (va.size() != vb.size()) return false;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << va.size()); ++m) {
    std::map<std::string, bool> ea, eb;
    for (std::size_t i = 0; i < va.size(); ++i) {
      ea[va[i]] = (m >> i) & 1;
      eb[vb[i]] = (m >> i) & 1;
    }
    if (Value(a, ea) != Value(b, eb)) return false;
  }
  return true;
}

SymExpr RandomExpr(Rng& rng, int vars, int depth) {
  if (depth == 0 || rng.Below(4) == 0) {
    if (rng.Below(10) == 0) return SymExpr::Const(rng.Coin());
    return SymExpr::Var("v" + std::to_string(rng.Below(vars)));
  }
  auto several = [&] {
    std::vector<SymExpr> out;
    int n = 2 + static_cast<int>(rng.Below(2));
    for (int i = 0; i < n; ++i) out.push_back(RandomExpr(rng, vars, depth - 1));
    return out;
  };
  switch (rng.Below(5)) {
    case 0: return SymExpr::Not(RandomExpr(rng, vars, depth - 1));
    case 1: return SymExpr::And(several());
    case 2: return SymExpr::Or(several());
    case 3: return SymExpr::Xor(several());
    default:
      return SymExpr::Ite(RandomExpr(rng, vars, depth - 1), RandomExpr(rng, vars, depth - 1),
                          RandomExpr(rng, vars, depth - 1));
  }
}

// A rewrite that keeps the function: De Morgan on the root plus a double
// negation somewhere, so equivalent pairs are common.
SymExpr Rewrite(const SymExpr& e) {
  auto ops = e.operands();
  std::vector<SymExpr> neg;
  for (const auto& o : ops) neg.push_back(SymExpr::Not(o));
  switch (e.kind()) {
    case SymExpr::Kind::kAnd: return SymExpr::Not(SymExpr::Or(neg));
    case SymExpr::Kind::kOr: return SymExpr::Not(SymExpr::And(neg));
    case SymExpr::Kind::kIte: return SymExpr::Ite(SymExpr::Not(ops[0]), ops[2], ops[1]);
    default: return SymExpr::Not(SymExpr::Not(e));
  }
}

Verdict SymbolicOracle() {
  auto start = Clock::now();
  Rng rng(202);
  int agree = 0, equivalent = 0;
  for (int t = 0; t < 500; ++t) {
    int vars = 1 + static_cast<int>(rng.Below(8));
    SymExpr a = RandomExpr(rng, vars, 4);
    SymExpr b = rng.Below(2) == 0 ? Rewrite(a) : RandomExpr(rng, vars, 4);
    if (rng.Below(4) == 0) b = SymExpr::Xor({b, SymExpr::Var("v" + std::to_string(rng.Below(vars)))});
    bool expect = TruthTablesMatch(a, b);
    equivalent += expect;
    if (symlogic::Equivalent(a, b) == expect) ++agree;
  }
  double secs = Seconds(start);
  char buf[160];
  std::snprintf(buf, sizeof buf, "agreement %d/500 (%d equivalent pairs), %.2fs (limit 30s)", agree,
                equivalent, secs);
  return {agree == 500 && secs < 30.0, buf};
}

// ---- 3: transform safety -------------------------------------------------

Verdict TransformSafety() {
  auto start = Clock::now();
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(kData + "/corpus")) {
    if (e.path().extension() == ".v") files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  int combos = 0, held = 0, mutants = 0, caught = 0;
  std::string first_bad;
  for (const std::string& f : files) {
    std::string src = ReadFile(f);
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
      for (int kind = 0; kind < 2; ++kind) {
        std::string out = kind == 0 ? forge::Type2Rename(src, seed).text : forge::Type3Transform(src, seed);
        ++combos;
        bool ok = false;
        try {
          ok = forge::CheckEquiv(src, out);
        } catch (const Error&) {
        }
        if (ok) {
          ++held;
        } else if (first_bad.empty()) {
          first_bad = fs::path(f).filename().string();
        }
      }
    }
    for (const std::string& m : forge::GateFlipMutants(src)) {
      ++mutants;
      try {
        if (!forge::CheckEquiv(src, m)) ++caught;
      } catch (const Error&) {
      }
    }
  }
  double secs = Seconds(start);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu modules, equivalence held %d/%d, mutants caught %d/%d, %.2fs (limit 120s)%s%s",
                files.size(), held, combos, caught, mutants, secs, first_bad.empty() ? "" : ", first failure ",
                first_bad.c_str());
  return {files.size() == 25 && combos == 200 && held == combos && mutants > 0 && caught == mutants &&
              secs < 120.0,
          buf};
}

// ---- 4: retrieval --------------------------------------------------------

double PlainCosine(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return d / (std::sqrt(na) * std::sqrt(nb));
}

Verdict Retrieval() {
  Rng rng(303);
  int identical = 0;
  for (int t = 0; t < 100; ++t) {
    int dim = 4 + static_cast<int>(rng.Below(29));
    int size = 1 + static_cast<int>(rng.Below(1000));
    kb::KbIndex index;
    index.dim = dim;
    index.embedder = "synthetic";
    for (int i = 0; i < size; ++i) {
      kb::KbEntry e;
      e.id = "e" + std::to_string(rng.Below(100000)) + "-" + std::to_string(i);
      e.language = "verilog";
      e.e_y = testing::RandomVector(rng, dim);
      // a few exact duplicates exercise the tie rule
      if (i > 0 && rng.Below(20) == 0) e.e_y = index.entries[rng.Below(i)].e_y;
      index.entries.push_back(std::move(e));
    }
    std::vector<double> q = testing::RandomVector(rng, dim);
    if (rng.Below(5) == 0) q = index.entries[rng.Below(size)].e_y;
    int k = 1 + static_cast<int>(rng.Below(size + 10));

    std::vector<std::pair<double, std::string>> all;
    for (const auto& e : index.entries) all.push_back({-PlainCosine(q, e.e_y), e.id});
    std::sort(all.begin(), all.end());
    std::vector<std::string> want;
    for (int i = 0; i < k && i < size; ++i) want.push_back(all[i].second);
    std::vector<std::string> got;
    for (const auto& r : kb::TopK(index, q, k)) got.push_back(r.id);
    if (got == want) ++identical;
  }

  // S = 50: the query's logic text is exactly one entry's indexed text
  Rng words(304);
  static const char* kWords[] = {"carry", "sum", "select", "parity", "decode", "enable",
                                 "shift", "compare", "gray", "mask", "latch", "vote"};
  std::vector<kb::KbEntry> entries;
  for (int i = 0; i < 50; ++i) {
    kb::KbEntry e;
    e.id = "s" + std::to_string(i);
    e.language = "verilog";
    std::string expr = "a" + std::to_string(words.Below(6));
    for (int j = 0; j < 3; ++j) {
      expr += std::string(" ") + "&|^"[words.Below(3)] + " a" + std::to_string(words.Below(6));
    }
    e.y = "module m" + std::to_string(i) + "(input [5:0] a, output y);\n  assign y = " + expr +
          ";\nendmodule\n";
    e.d = std::string(kWords[words.Below(12)]) + " " + kWords[words.Below(12)] + " block " +
          std::to_string(i);
    entries.push_back(std::move(e));
  }
  kb::Embedder embedder = kb::HashEmbedder();
  kb::KbIndex index = kb::BuildIndex(entries, embedder);
  embeddings::ProjectionMatrix w = embeddings::ProjectionMatrix::HalfSum(embedder.dim);
  int hits = 0;
  for (const kb::KbEntry& e : index.entries) {
    auto q = embeddings::JointQuery(embedder.embed("find the matching block"),
                                    embedder.embed(kb::EntryText(e)), w);
    auto top = kb::TopK(index, q, 1);
    if (!top.empty() && top[0].id == e.id) ++hits;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "top-k identical to full sort %d/100, synthetic top-1 recall %d/50",
                identical, hits);
  return {identical == 100 && hits == 50, buf};
}

// ---- 5: projection training ----------------------------------------------

Verdict Training() {
  auto start = Clock::now();
  const int dim = 32;
  auto triples = testing::SeparableTriples(64, dim, 505);
  embeddings::TrainingConfig cfg;
  cfg.epochs = 100;
  cfg.seed = 5;
  embeddings::TrainingResult r = embeddings::TrainProjection(triples, cfg);
  double drop = 1.0 - r.final_loss / r.initial_loss;
  double acc = testing::Top1Accuracy(triples, r.w);

  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed * 7919);
    int batch = 2 + static_cast<int>(rng.Below(6));
    std::vector<embeddings::Vector> qs, ps;
    for (int i = 0; i < batch; ++i) {
      qs.push_back(testing::RandomVector(rng, 8));
      ps.push_back(testing::RandomVector(rng, 8));
    }
    double tau = 0.05 + 0.5 * rng.Uniform();
    auto analytic = embeddings::MnrLoss(qs, ps, tau).grad_q;
    auto numeric = testing::FiniteDifferenceGrad(qs, ps, tau);
    worst = std::max(worst, testing::RelativeError(analytic, numeric));
  }
  double secs = Seconds(start);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "loss %.4f -> %.4f (drop %.1f%%, need 50%%), top-1 %.3f, worst gradient rel. error "
                "%.2e over 20 seeds, %.2fs (limit 60s)",
                r.initial_loss, r.final_loss, 100 * drop, acc, worst, secs);
  return {drop >= 0.5 && acc == 1.0 && worst < 1e-4 && secs < 60.0, buf};
}

// ---- 6-8: end to end through the binary ----------------------------------

struct Cli {
  int code = -1;
  std::string out;
};

Cli RunCli(const std::string& args, const std::string& run_dir) {
  std::string cmd = ShellQuote(kCli) + " --config " + ShellQuote(kRoot + "/configs/mock.ini") +
                    " --seed 7 --run-dir " + ShellQuote(run_dir) + " " + args + " 2>/dev/null";
  ProcessResult r = RunShell(cmd, kRoot, 600);
  return {r.exit_code, r.output};
}

bool SubcomponentsCheck(const json& trace, const kb::KbIndex& index, std::string& why) {
  const json& subs = trace["divide"]["subcomponents"];
  const json& sel = trace["select"];
  if (subs.empty() || sel.size() != subs.size()) {
    why = "selection count";
    return false;
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]["phi_formal"].get<bool>() || sel[i]["id"].is_null()) {
      why = "subcomponent " + std::to_string(i + 1) + " has no formal logic or no selection";
      return false;
    }
    const kb::KbEntry* e = index.Find(sel[i]["id"].get<std::string>());
    symlogic::SymBundle want = symlogic::ParseBundle(subs[i]["phi"].get<std::string>());
    symlogic::SymBundle have = symlogic::ParseBundle(e->phi);
    if (want.definitions.size() != have.definitions.size()) {
      why = e->id + " output count";
      return false;
    }
    for (std::size_t d = 0; d < want.definitions.size(); ++d) {
      if (!PositionalMatch(want.definitions[d], have.definitions[d])) {
        why = e->id + " differs from subcomponent " + std::to_string(i + 1);
        return false;
      }
    }
  }
  return true;
}

struct EndToEnd {
  Verdict golden;
  Verdict determinism;
};

EndToEnd GoldenAndDeterminism(const std::string& scratch) {
  EndToEnd out;
  kb::KbIndex index = kb::BuildIndex(pipeline::CollectKbEntries(kData + "/snippets"), kb::HashEmbedder());
  const bool have_sim = CommandAvailable("iverilog") && CommandAvailable("vvp");

  // the headline run
  std::vector<std::string> notes;
  bool ok = true;
  Cli a = RunCli("run synth \"8-bit ripple-carry adder\" --name golden", scratch + "/a");
  json trace_a;
  if (a.code != 0) {
    ok = false;
    notes.push_back("run exit " + std::to_string(a.code));
  } else {
    try {
      hdl::ParseVerilogDesign(a.out);
      trace_a = json::parse(ReadFile(scratch + "/a/golden/trace.json"));
      std::string why;
      if (!SubcomponentsCheck(trace_a, index, why)) {
        ok = false;
        notes.push_back("rca8 " + why);
      }
      if (!forge::CheckEquiv(ReadFile(kData + "/toy/rca8/reference.v"), a.out)) {
        ok = false;
        notes.push_back("rca8 output differs from the reference");
      }
    } catch (const Error& e) {
      ok = false;
      notes.push_back(std::string("rca8: ") + e.what());
    }
  }

  // the five-task suite
  Cli suite = RunCli("eval synth " + kData + "/toy", scratch + "/suite_a");
  int parsed = 0, sub_ok = 0, skipped = 0, passed = 0;
  if (suite.code != 0) {
    ok = false;
    notes.push_back("eval exit " + std::to_string(suite.code));
  } else {
    json report = json::parse(ReadFile(scratch + "/suite_a/eval-synth/report.json"));
    for (const json& t : report["tasks"]) {
      std::string name = t["task"];
      json trace = json::parse(ReadFile(scratch + "/suite_a/" + name + "/trace.json"));
      std::string why;
      try {
        hdl::ParseVerilogDesign(trace["output"].get<std::string>());
        ++parsed;
      } catch (const Error&) {
        notes.push_back(name + " does not parse");
      }
      if (SubcomponentsCheck(trace, index, why)) {
        ++sub_ok;
      } else {
        notes.push_back(name + ": " + why);
      }
      std::string sim = t.value("sim", "");
      if (sim == "skipped") ++skipped;
      if (sim == "passed") ++passed;
    }
    int n = static_cast<int>(report["tasks"].size());
    ok = ok && n == 5 && parsed == 5 && sub_ok == 5;
    if (have_sim) {
      ok = ok && passed == 5;
    } else {
      ok = ok && skipped == 5;
    }
  }
  std::ostringstream d;
  d << "rca8 parses and matches; suite parse " << parsed << "/5, subcomponents symbolic-equivalent "
    << sub_ok << "/5, ";
  if (have_sim) {
    d << "pass@1 " << passed << "/5";
  } else {
    d << "no simulator, " << skipped << "/5 simulation cases reported skipped";
  }
  for (const auto& n : notes) d << "; " << n;
  out.golden = {ok, d.str()};

  // a second seeded run of both
  Cli b = RunCli("run synth \"8-bit ripple-carry adder\" --name golden", scratch + "/b");
  Cli suite_b = RunCli("eval synth " + kData + "/toy", scratch + "/suite_b");
  int same = 0, total = 0;
  auto compare = [&](const std::string& x, const std::string& y) {
    ++total;
    if (fs::exists(x) && fs::exists(y) && ReadFile(x) == ReadFile(y)) ++same;
  };
  compare(scratch + "/a/golden/trace.json", scratch + "/b/golden/trace.json");
  compare(scratch + "/a/golden/output.txt", scratch + "/b/golden/output.txt");
  for (const char* t : {"full_adder", "half_adder", "mux2", "rca4", "rca8"}) {
    compare(scratch + "/suite_a/" + t + "/trace.json", scratch + "/suite_b/" + t + "/trace.json");
    compare(scratch + "/suite_a/" + t + "/output.txt", scratch + "/suite_b/" + t + "/output.txt");
  }
  bool det = a.code == 0 && a.out == b.out && suite.out == suite_b.out && same == total;
  out.determinism = {det, "stdout " + std::string(a.out == b.out ? "identical" : "differs") + ", " +
                              std::to_string(same) + "/" + std::to_string(total) +
                              " trace and output files byte-identical"};
  return out;
}

Verdict AblationShape(const std::string& scratch) {
  Cli c = RunCli("ablate --sweep k=1..5 --tasks " + kData + "/toy", scratch + "/ablate");
  if (c.code != 0) return {false, "exit " + std::to_string(c.code)};
  std::istringstream in(c.out);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  const std::vector<std::string> header = {"param", "value", "tasks", "mean_candidates", "mean_alpha",
                                           "parse_rate", "equiv_rate", "pass_at_1", "skipped"};
  if (rows.size() != 6 || rows[0] != header) return {false, "expected a header and 5 rows"};
  double prev = -1.0;
  bool monotone = true;
  std::string sizes;
  for (int i = 1; i <= 5; ++i) {
    if (rows[i].size() != header.size() || rows[i][0] != "k" || rows[i][1] != std::to_string(i)) {
      return {false, "malformed row " + std::to_string(i)};
    }
    double m = std::stod(rows[i][3]);
    if (m < prev) monotone = false;
    prev = m;
    sizes += (i > 1 ? " " : "") + rows[i][3];
  }
  return {monotone, "5 rows x 9 columns, mean candidate-set sizes " + sizes +
                        (monotone ? " (non-decreasing)" : " (decreasing somewhere)")};
}

}  // namespace

int main() {
  const std::string scratch = MakeTempDir("symdirec-acceptance");
  std::vector<std::pair<std::string, std::function<Verdict()>>> plan;
  EndToEnd e2e;
  bool e2e_done = false;
  auto end_to_end = [&]() -> EndToEnd& {
    if (!e2e_done) {
      e2e = GoldenAndDeterminism(scratch);
      e2e_done = true;
    }
    return e2e;
  };
  plan.push_back({"metric oracle equivalence", MetricOracles});
  plan.push_back({"symbolic oracle", SymbolicOracle});
  plan.push_back({"transform safety", TransformSafety});
  plan.push_back({"retrieval correctness", Retrieval});
  plan.push_back({"projection training", Training});
  plan.push_back({"end-to-end golden", [&] { return end_to_end().golden; }});
  plan.push_back({"determinism", [&] { return end_to_end().determinism; }});
  plan.push_back({"ablation harness shape", [&] { return AblationShape(scratch); }});

  int failed = 0;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    Verdict v;
    try {
      v = plan[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("criterion %zu %-26s %s  %s\n", i + 1, plan[i].first.c_str(), v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(scratch);
  return failed == 0 ? 0 : 1;
}
