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

// symdirec: command-line front end for the divide-retrieve-conquer pipeline,
// knowledge-base builds, projection training, dataset forging and evaluation.
//
// Exit codes: 0 success, 1 task failure, 2 usage or configuration error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "config.h"
#include "json.hpp"
#include "symdirec/embeddings/embeddings.h"
#include "symdirec/forge/forge.h"
#include "symdirec/hdl/parser.h"
#include "symdirec/kb/knowledge_base.h"
#include "symdirec/metrics/metrics.h"
#include "symdirec/pipeline/pipeline.h"
#include "symdirec/providers/provider.h"
#include "symdirec/util/hash.h"
#include "symdirec/util/template.h"

#ifndef SYMDIREC_DEFAULT_CONFIG
#define SYMDIREC_DEFAULT_CONFIG ""
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace symdirec::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitTaskFailure = 1;
constexpr int kExitUsage = 2;

// A task ran but did not succeed; the message has already been printed.
struct TaskFailed {};

struct Globals {
  std::string config;
  std::string provider;
  std::string record_misses;
  std::string run_dir;
  std::uint64_t seed = 0;
  int jobs = 0;
};

std::string ConfigPath(const Globals& g) {
  if (!g.config.empty()) return g.config;
  if (const char* env = std::getenv("SYMDIREC_CONFIG"); env && *env) return env;
  if (fs::exists("symdirec.ini")) return "symdirec.ini";
  if (std::string builtin = SYMDIREC_DEFAULT_CONFIG; !builtin.empty()) return builtin;
  throw ConfigError("no config: pass --config or set SYMDIREC_CONFIG");
}

int Jobs(const Globals& g, const Config& cfg) {
  int j = g.jobs > 0 ? g.jobs : cfg.jobs;
  if (j <= 0) j = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return j;
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  if (fs::path parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

std::string Fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::vector<json> ReadJsonLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<json> rows;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ConfigError(path + ":" + std::to_string(n) + ": not a JSON object");
    }
    rows.push_back(std::move(j));
  }
  return rows;
}

std::string Field(const json& row, const char* key, const std::string& where) {
  if (!row.contains(key) || !row[key].is_string()) {
    throw ConfigError(where + ": missing string field '" + key + "'");
  }
  return row[key].get<std::string>();
}

// Everything a pipeline run needs, loaded from the config.
struct Runtime {
  Config cfg;
  int jobs = 1;
  std::unique_ptr<providers::Provider> provider;
  kb::Embedder embedder;
  kb::KbIndex index;
  embeddings::ProjectionMatrix w;
  pipeline::PromptTemplates templates;

  pipeline::Deps Deps(const std::string& run_dir) const {
    pipeline::Deps d;
    d.provider = provider.get();
    d.index = &index;
    d.w = &w;
    d.embedder = embedder;
    d.templates = templates;
    d.jobs = jobs;
    d.low_confidence_below = cfg.low_confidence_below;
    d.run_dir = run_dir;
    return d;
  }
};

Config LoadWithOverrides(const Globals& g) {
  Config cfg = LoadConfig(ConfigPath(g));
  if (!g.provider.empty()) {
    if (g.provider == "mock") {
      cfg.provider.kind = providers::ProviderKind::kMock;
    } else if (g.provider == "remote") {
      cfg.provider.kind = providers::ProviderKind::kRemote;
    } else {
      throw ConfigError("--provider: expected mock or remote, got '" + g.provider + "'");
    }
  }
  if (!g.record_misses.empty()) cfg.provider.record_misses_path = g.record_misses;
  if (!g.run_dir.empty()) cfg.run_dir = g.run_dir;
  return cfg;
}

std::unique_ptr<providers::Provider> OpenProvider(const Config& cfg) {
  if (cfg.provider.kind == providers::ProviderKind::kMock) {
    for (const std::string& f : cfg.provider.fixture_paths) RequirePath("provider.fixtures", f);
  }
  providers::Validate(cfg.provider);
  return providers::MakeProvider(cfg.provider);
}

kb::Embedder ProviderEmbedder(providers::Provider& p) {
  return kb::Embedder{p.EmbedderFingerprint(), p.embedding_dim(),
                      [&p](std::string_view text) { return p.Embed(text); }};
}

embeddings::ProjectionMatrix LoadProjection(const Config& cfg) {
  if (cfg.projection_path.empty()) {
    return embeddings::ProjectionMatrix::HalfSum(cfg.provider.embedding_dim);
  }
  RequirePath("projection.path", cfg.projection_path);
  embeddings::ProjectionMatrix w = embeddings::ProjectionMatrix::Load(cfg.projection_path);
  if (w.dim() != cfg.provider.embedding_dim) {
    throw ConfigError("projection.path: matrix dimension " + std::to_string(w.dim()) +
                      " does not match embedding.dim " +
                      std::to_string(cfg.provider.embedding_dim));
  }
  return w;
}

std::unique_ptr<Runtime> OpenRuntime(const Globals& g) {
  auto rt = std::make_unique<Runtime>();
  rt->cfg = LoadWithOverrides(g);
  const Config& cfg = rt->cfg;
  RequirePath("kb.path", cfg.kb_path);
  RequirePath("prompts.dir", cfg.prompts_dir);
  rt->jobs = Jobs(g, cfg);
  rt->provider = OpenProvider(cfg);
  rt->embedder = ProviderEmbedder(*rt->provider);
  if (fs::is_directory(cfg.kb_path)) {
    rt->index = kb::BuildIndex(pipeline::CollectKbEntries(cfg.kb_path), rt->embedder);
  } else {
    rt->index = kb::LoadKb(cfg.kb_path);
  }
  rt->w = LoadProjection(cfg);
  rt->templates = pipeline::PromptTemplates::Load(cfg.prompts_dir);
  return rt;
}

// ---- kb / train-wq ---------------------------------------------------------

int KbBuild(const Globals& g, const std::string& dir, const std::string& out) {
  Config cfg = LoadWithOverrides(g);
  if (!fs::is_directory(dir)) throw ConfigError("kb build: not a directory: " + dir);
  auto provider = OpenProvider(cfg);
  kb::KbIndex index = kb::BuildIndex(pipeline::CollectKbEntries(dir), ProviderEmbedder(*provider));
  kb::SaveKb(index, out);
  std::cout << "entries " << index.size() << "\nembedder " << index.embedder << "\n";
  return kExitOk;
}

struct TrainOptions {
  std::string out;
  embeddings::TrainingConfig training;
};

int TrainWq(const Globals& g, const std::string& triples_path, TrainOptions opt) {
  Config cfg = LoadWithOverrides(g);
  RequirePath("triples", triples_path);
  auto provider = OpenProvider(cfg);
  kb::Embedder embed = ProviderEmbedder(*provider);
  std::vector<embeddings::Triple> triples;
  for (const json& row : ReadJsonLines(triples_path)) {
    triples.push_back({embed.embed(Field(row, "x", triples_path)),
                       embed.embed(Field(row, "phi", triples_path)),
                       embed.embed(Field(row, "y", triples_path))});
  }
  opt.training.seed = g.seed;
  embeddings::TrainingResult r = embeddings::TrainProjection(triples, opt.training);
  r.w.Save(opt.out);
  std::cout << "triples " << triples.size() << "\ninitial_loss " << Fixed(r.initial_loss, 6)
            << "\nfinal_loss " << Fixed(r.final_loss, 6) << "\n";
  return kExitOk;
}

// ---- run --------------------------------------------------------------------

std::string DefaultName(const char* prefix, const std::string& x) {
  return std::string(prefix) + "-" + Fingerprint(x).substr(0, 8);
}

int RunTask(const Globals& g, pipeline::Direction dir, const std::string& arg,
            std::optional<int> n, std::optional<int> k, std::string name,
            const std::string& language) {
  auto rt = OpenRuntime(g);
  pipeline::TaskInput in;
  in.direction = dir;
  if (dir == pipeline::Direction::kSynthesis) {
    in.x = arg;
    in.language = language.empty() ? "verilog" : language;
  } else {
    RequirePath("input file", arg);
    in.x = ReadFile(arg);
    in.language = "nl";
  }
  in.n_hint = n.value_or(rt->cfg.n);
  in.k = k.value_or(rt->cfg.k);
  in.name = name.empty() ? DefaultName(dir == pipeline::Direction::kSynthesis ? "synth" : "summ",
                                       in.x)
                         : name;
  pipeline::Validate(in);
  pipeline::PipelineOutput out = pipeline::Run(in, rt->Deps(rt->cfg.run_dir));
  std::cout << out.y_hat << "\n";
  if (!rt->cfg.run_dir.empty()) {
    std::cerr << "trace: " << (fs::path(rt->cfg.run_dir) / in.name / "trace.json").string() << "\n";
  }
  if (out.low_confidence) std::cerr << "warning: low-confidence selection\n";
  if (!out.valid) {
    std::cerr << "error: output does not parse\n";
    throw TaskFailed{};
  }
  return kExitOk;
}

// ---- eval synth / ablate ----------------------------------------------------

struct SynthOutcome {
  metrics::TaskResult result;
  bool ran = false;
  bool valid = false;
  std::vector<int> candidates;  // per subcomponent
  std::vector<double> alphas;   // per selection
};

std::vector<fs::path> TaskDirs(const std::string& dir) {
  RequirePath("tasks", dir);
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && fs::exists(e.path() / "spec.txt")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw ConfigError("tasks: no task directories with spec.txt in " + dir);
  return out;
}

SynthOutcome RunSynthTask(const Runtime& rt, const fs::path& task, int n, int k,
                          const std::string& run_dir, bool simulate) {
  SynthOutcome o;
  const std::string name = task.filename().string();
  o.result.task = name;
  pipeline::TaskInput in;
  in.x = ReadFile((task / "spec.txt").string());
  while (!in.x.empty() && std::isspace(static_cast<unsigned char>(in.x.back()))) in.x.pop_back();
  in.n_hint = n;
  in.k = k;
  in.name = name;
  pipeline::PipelineOutput out;
  try {
    out = pipeline::Run(in, rt.Deps(run_dir));
  } catch (const pipeline::StageError& e) {
    o.result.note = e.what();
    if (simulate) o.result.sim = metrics::SimStatus::kFailed;
    return o;
  }
  o.ran = true;
  o.valid = out.valid;
  for (const auto& r : out.trace["retrieve"]) o.candidates.push_back(static_cast<int>(r["results"].size()));
  int exact = 0;
  for (const pipeline::VerifiedCandidate& c : out.selected) {
    o.alphas.push_back(c.alpha);
    if (c.method == pipeline::VerifyMethod::kSymbolicExact && c.alpha == 1.0) ++exact;
  }
  o.result.note = "subcomponents " + std::to_string(out.subcomponents.size()) +
                  ", symbolic-exact " + std::to_string(exact);
  if (!out.valid) o.result.note += ", output does not parse";

  const fs::path reference = task / "reference.v";
  if (out.valid && fs::exists(reference)) {
    try {
      o.result.equivalent = forge::CheckEquiv(ReadFile(reference.string()), out.y_hat);
    } catch (const Error& e) {
      o.result.note += std::string(", equivalence unchecked: ") + e.code();
    }
  }
  const fs::path tb = task / "tb.v";
  if (simulate && fs::exists(tb)) {
    if (!out.valid) {
      o.result.sim = metrics::SimStatus::kFailed;
    } else {
      o.result.sim = metrics::PassAt1(out.y_hat, ReadFile(tb.string()), rt.cfg.sim).status;
    }
  }
  return o;
}

int EvalSynth(const Globals& g, std::string tasks, std::string out_dir) {
  auto rt = OpenRuntime(g);
  if (tasks.empty()) tasks = rt->cfg.tasks_dir;
  const bool simulate = !rt->cfg.sim.command.empty();
  if (simulate) metrics::Validate(rt->cfg.sim);
  std::vector<metrics::TaskResult> results;
  for (const fs::path& t : TaskDirs(tasks)) {
    results.push_back(RunSynthTask(*rt, t, rt->cfg.n, rt->cfg.k, rt->cfg.run_dir, simulate).result);
  }
  metrics::Report report = metrics::Aggregate(std::move(results));
  report.metadata["direction"] = "synthesis";
  report.metadata["n"] = std::to_string(rt->cfg.n);
  report.metadata["k"] = std::to_string(rt->cfg.k);
  report.metadata["embedder"] = rt->embedder.fingerprint;
  report.metadata["simulator"] = simulate && metrics::SimulatorAvailable(rt->cfg.sim) ? "yes" : "no";
  if (out_dir.empty() && !rt->cfg.run_dir.empty()) {
    out_dir = (fs::path(rt->cfg.run_dir) / "eval-synth").string();
  }
  if (!out_dir.empty()) metrics::WriteReport(report, out_dir);
  std::cout << metrics::ReportText(report);
  return kExitOk;
}

struct Sweep {
  std::string param;  // "N" or "k"
  int lo = 1;
  int hi = 1;
};

Sweep ParseSweep(const std::string& text) {
  static const std::regex re(R"(^\s*(N|k)\s*=\s*(\d+)(?:\s*\.\.\s*(\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) {
    throw CLI::ValidationError("--sweep", "expected N=<lo>..<hi> or k=<lo>..<hi>, got '" + text + "'");
  }
  Sweep s{m[1], std::stoi(m[2]), m[3].matched ? std::stoi(m[3]) : std::stoi(m[2])};
  if (s.lo < 1 || s.hi < s.lo || s.hi > 64) {
    throw CLI::ValidationError("--sweep", "range must satisfy 1 <= lo <= hi <= 64");
  }
  return s;
}

double Mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

int Ablate(const Globals& g, const std::string& sweep_text, std::string tasks, const std::string& out) {
  Sweep sweep = ParseSweep(sweep_text);
  auto rt = OpenRuntime(g);
  if (tasks.empty()) tasks = rt->cfg.tasks_dir;
  const std::vector<fs::path> dirs = TaskDirs(tasks);
  const bool simulate = !rt->cfg.sim.command.empty();
  if (simulate) metrics::Validate(rt->cfg.sim);

  std::ostringstream csv;
  csv << "param,value,tasks,mean_candidates,mean_alpha,parse_rate,equiv_rate,pass_at_1,skipped\n";
  for (int v = sweep.lo; v <= sweep.hi; ++v) {
    const int n = sweep.param == "N" ? v : rt->cfg.n;
    const int k = sweep.param == "k" ? v : rt->cfg.k;
    std::string run_dir;
    if (!rt->cfg.run_dir.empty()) {
      run_dir = (fs::path(rt->cfg.run_dir) / ("ablate-" + sweep.param + std::to_string(v))).string();
    }
    std::vector<double> candidates, alphas;
    int parsed = 0, equiv_checked = 0, equiv = 0, passed = 0, ran_sim = 0, skipped = 0;
    for (const fs::path& t : dirs) {
      SynthOutcome o = RunSynthTask(*rt, t, n, k, run_dir, simulate);
      for (int c : o.candidates) candidates.push_back(c);
      alphas.insert(alphas.end(), o.alphas.begin(), o.alphas.end());
      if (o.valid) ++parsed;
      if (o.result.equivalent) {
        ++equiv_checked;
        if (*o.result.equivalent) ++equiv;
      }
      if (!o.result.sim || *o.result.sim == metrics::SimStatus::kUnavailable) {
        ++skipped;
      } else {
        ++ran_sim;
        if (*o.result.sim == metrics::SimStatus::kPassed) ++passed;
      }
    }
    const double total = static_cast<double>(dirs.size());
    csv << sweep.param << "," << v << "," << dirs.size() << "," << Fixed(Mean(candidates)) << ","
        << Fixed(Mean(alphas)) << "," << Fixed(parsed / total) << ","
        << (equiv_checked ? Fixed(static_cast<double>(equiv) / equiv_checked) : "NA") << ","
        << (ran_sim ? Fixed(static_cast<double>(passed) / ran_sim) : "NA") << "," << skipped
        << "\n";
  }
  WriteText(out, csv.str());
  return kExitOk;
}

// ---- eval summ / retrieval --------------------------------------------------

int EvalSumm(const Globals& g, const std::string& pairs_path, std::string out_dir) {
  auto rt = OpenRuntime(g);
  RequirePath("pairs", pairs_path);
  const fs::path base = fs::absolute(pairs_path).parent_path();
  auto text_of = [&](const json& row, const char* key) {
    fs::path p(Field(row, key, pairs_path));
    return ReadFile((p.is_absolute() ? p : base / p).string());
  };
  std::vector<metrics::TaskResult> results;
  for (const json& row : ReadJsonLines(pairs_path)) {
    metrics::TaskResult r;
    r.task = Field(row, "name", pairs_path);
    pipeline::TaskInput in{pipeline::Direction::kSummarization, text_of(row, "source"), "nl",
                           rt->cfg.n, rt->cfg.k, r.task};
    try {
      pipeline::PipelineOutput out = pipeline::Run(in, rt->Deps(rt->cfg.run_dir));
      r.rouge_l = metrics::RougeL(out.y_hat, text_of(row, "reference")).f;
    } catch (const pipeline::StageError& e) {
      r.rouge_l = 0.0;
      r.note = e.what();
    }
    results.push_back(std::move(r));
  }
  metrics::Report report = metrics::Aggregate(std::move(results));
  report.metadata["direction"] = "summarization";
  report.metadata["k"] = std::to_string(rt->cfg.k);
  if (out_dir.empty() && !rt->cfg.run_dir.empty()) {
    out_dir = (fs::path(rt->cfg.run_dir) / "eval-summ").string();
  }
  if (!out_dir.empty()) metrics::WriteReport(report, out_dir);
  std::cout << metrics::ReportText(report);
  return kExitOk;
}

int EvalRetrieval(const Globals& g, const std::string& queries_path, const std::string& qrels_path,
                  int depth, std::string out_dir) {
  auto rt = OpenRuntime(g);
  RequirePath("queries", queries_path);
  RequirePath("qrels", qrels_path);
  auto qrels = metrics::LoadJudgments(qrels_path);
  kb::CheckEmbedder(rt->index, rt->embedder);
  std::vector<metrics::TaskResult> results;
  for (const json& row : ReadJsonLines(queries_path)) {
    metrics::TaskResult r;
    r.task = Field(row, "qid", queries_path);
    const std::string text = Field(row, "text", queries_path);
    const std::string phi = row.value("phi", text);
    embeddings::Vector q =
        embeddings::JointQuery(rt->embedder.embed(text), rt->embedder.embed(phi), rt->w);
    std::vector<std::string> ranked;
    for (const kb::RetrievalResult& hit : kb::TopK(rt->index, q, depth)) ranked.push_back(hit.id);
    const metrics::Judgments& judged = qrels[r.task];
    if (judged.empty()) r.note = "no judgments";
    r.ndcg["ndcg@1"] = metrics::NdcgAtK(ranked, judged, 1);
    r.ndcg["ndcg@" + std::to_string(depth)] = metrics::NdcgAtK(ranked, judged, depth);
    results.push_back(std::move(r));
  }
  metrics::Report report = metrics::Aggregate(std::move(results));
  report.metadata["embedder"] = rt->embedder.fingerprint;
  report.metadata["projection"] = rt->cfg.projection_path.empty() ? "half-sum" : rt->cfg.projection_path;
  if (out_dir.empty() && !rt->cfg.run_dir.empty()) {
    out_dir = (fs::path(rt->cfg.run_dir) / "eval-retrieval").string();
  }
  if (!out_dir.empty()) metrics::WriteReport(report, out_dir);
  std::cout << metrics::ReportText(report);
  return kExitOk;
}

// ---- forge --------------------------------------------------------------------

std::string PairsText(const std::vector<forge::PairRecord>& pairs) {
  std::string s;
  for (const auto& p : pairs) s += forge::ToJsonLine(p) + "\n";
  return s;
}

int ForgeStats(const Globals& g, const std::string& corpus) {
  std::vector<std::string> paths;
  if (fs::is_directory(corpus)) {
    for (const auto& e : fs::directory_iterator(corpus)) {
      if (e.is_regular_file() && e.path().extension() == ".v") paths.push_back(e.path().string());
    }
  } else if (fs::is_regular_file(corpus)) {
    paths.push_back(corpus);
  } else {
    throw ConfigError("corpus: no such file or directory: " + corpus);
  }
  std::sort(paths.begin(), paths.end());
  std::cout << forge::FormatStats(forge::ComputeStats(paths, g.seed));
  return kExitOk;
}

// ---- help -------------------------------------------------------------------

constexpr const char* kFooter = R"(Exit codes: 0 success, 1 task failure, 2 usage or configuration error.

Config: INI file from --config, $SYMDIREC_CONFIG, ./symdirec.ini, or the bundled
configs/mock.ini. Sections: [provider] kind fixtures record_misses endpoint model
token_env timeout max_retries max_in_flight temperature; [embedding] dim; [kb] path;
[projection] path; [prompts] dir; [sim] command success timeout; [pipeline] n k jobs
run_dir tasks low_confidence_below. Relative paths follow the config file.

Reports: eval writes report.json and report.txt under <run_dir>/eval-<kind>/.
ablate prints CSV: param,value,tasks,mean_candidates,mean_alpha,parse_rate,
equiv_rate,pass_at_1,skipped (NA when nothing was checked or simulated).
Runs write <run_dir>/<name>/trace.json and output.txt.)";

}  // namespace

int Main(int argc, char** argv) {
  CLI::App app{"Divide-retrieve-conquer HDL synthesis and summarization", "symdirec"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "INI config file");
  app.add_option("--provider", g.provider, "Override provider.kind")
      ->check(CLI::IsMember({"mock", "remote"}));
  app.add_option("--seed", g.seed, "Seed for forging and training")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Parallel workers (default: config, then core count)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--record-misses", g.record_misses,
                 "Mock provider: append unmatched prompts to this JSONL file");
  app.add_option("--run-dir", g.run_dir, "Override pipeline.run_dir");

  std::function<int()> action;

  // kb
  auto* kb_cmd = app.add_subcommand("kb", "Knowledge-base management");
  kb_cmd->require_subcommand(1);
  std::string kb_dir, kb_out;
  auto* kb_build = kb_cmd->add_subcommand("build", "Index a directory of snippet files");
  kb_build->add_option("corpus-dir", kb_dir, "Directory of .v/.vhd/.txt files")->required();
  kb_build->add_option("-o,--output", kb_out, "Output kb.jsonl")->required();
  kb_build->callback([&] { action = [&] { return KbBuild(g, kb_dir, kb_out); }; });

  // train-wq
  TrainOptions train;
  std::string triples;
  auto* train_cmd = app.add_subcommand("train-wq", "Train the joint query projection");
  train_cmd->add_option("triples", triples, "JSONL lines {\"x\", \"phi\", \"y\"}")->required();
  train_cmd->add_option("-o,--output", train.out, "Output matrix file")->required();
  train_cmd->add_option("--epochs", train.training.epochs, "Training epochs")->capture_default_str();
  train_cmd->add_option("--batch", train.training.batch_size, "Batch size")->capture_default_str();
  train_cmd->add_option("--lr", train.training.learning_rate, "Learning rate")->capture_default_str();
  train_cmd->add_option("--tau", train.training.temperature, "Softmax temperature")
      ->capture_default_str();
  train_cmd->add_flag("--bias", train.training.bias, "Learn a bias vector");
  train_cmd->callback([&] { action = [&] { return TrainWq(g, triples, train); }; });

  // run
  auto* run_cmd = app.add_subcommand("run", "Run the pipeline on one task");
  run_cmd->require_subcommand(1);
  std::optional<int> run_n, run_k;
  std::string run_name, run_language, run_arg;
  auto add_run_options = [&](CLI::App* c) {
    c->add_option("-N,--n", run_n, "Decomposition size hint (default pipeline.n)")
        ->check(CLI::PositiveNumber);
    c->add_option("-k,--k", run_k, "Candidates per subcomponent (default pipeline.k)")
        ->check(CLI::PositiveNumber);
    c->add_option("--name", run_name, "Run directory name (default derived from the input)");
  };
  auto* run_synth = run_cmd->add_subcommand("synth", "Natural-language spec to HDL");
  run_synth->add_option("spec", run_arg, "Design request")->required();
  run_synth->add_option("--language", run_language, "Target language")
      ->check(CLI::IsMember({"verilog", "vhdl"}));
  add_run_options(run_synth);
  run_synth->callback([&] {
    action = [&] {
      return RunTask(g, pipeline::Direction::kSynthesis, run_arg, run_n, run_k, run_name,
                     run_language);
    };
  });
  auto* run_summ = run_cmd->add_subcommand("summ", "HDL file to a summary");
  run_summ->add_option("file", run_arg, "Verilog or VHDL source")->required();
  add_run_options(run_summ);
  run_summ->callback([&] {
    action = [&] {
      return RunTask(g, pipeline::Direction::kSummarization, run_arg, run_n, run_k, run_name, "");
    };
  });

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate on a task suite");
  eval_cmd->require_subcommand(1);
  std::string eval_a, eval_b, eval_out;
  int depth = 10;
  auto* eval_synth = eval_cmd->add_subcommand("synth", "Synthesis suite: parse, equivalence, Pass@1");
  eval_synth->add_option("tasks-dir", eval_a, "Directories with spec.txt, reference.v, tb.v (default pipeline.tasks)");
  eval_synth->add_option("--out", eval_out, "Report directory");
  eval_synth->callback([&] { action = [&] { return EvalSynth(g, eval_a, eval_out); }; });
  auto* eval_summ = eval_cmd->add_subcommand("summ", "Summarization pairs: ROUGE-L");
  eval_summ->add_option("pairs", eval_a, "JSONL lines {\"name\", \"source\", \"reference\"} (paths)")
      ->required();
  eval_summ->add_option("--out", eval_out, "Report directory");
  eval_summ->callback([&] { action = [&] { return EvalSumm(g, eval_a, eval_out); }; });
  auto* eval_ret = eval_cmd->add_subcommand("retrieval", "Retrieval: NDCG@1 and NDCG@depth");
  eval_ret->add_option("queries", eval_a, "JSONL lines {\"qid\", \"text\", \"phi\"}")->required();
  eval_ret->add_option("qrels", eval_b, "JSONL {\"qid\", \"id\", \"grade\"} or a JSON object")
      ->required();
  eval_ret->add_option("--depth", depth, "Ranking depth")->capture_default_str()->check(CLI::PositiveNumber);
  eval_ret->add_option("--out", eval_out, "Report directory");
  eval_ret->callback([&] { action = [&] { return EvalRetrieval(g, eval_a, eval_b, depth, eval_out); }; });

  // forge
  auto* forge_cmd = app.add_subcommand("forge", "Dataset forging");
  forge_cmd->require_subcommand(1);
  std::string forge_in, forge_out;
  auto add_forge = [&](const char* name, const char* help, const char* what,
                       std::function<std::string(const std::string&)> make) {
    auto* c = forge_cmd->add_subcommand(name, help);
    c->add_option("input", forge_in, what)->required()->check(CLI::ExistingPath);
    c->add_option("-o,--output", forge_out, "Output file (default stdout)");
    c->callback([&, make] {
      action = [&, make] {
        WriteText(forge_out, make(forge_in));
        return kExitOk;
      };
    });
  };
  add_forge("type2", "Identifier renaming clone", "Verilog file", [&](const std::string& in) {
    return forge::Type2Rename(ReadFile(in), g.seed).text;
  });
  add_forge("type3", "Reordering and inert-code clone", "Verilog file", [&](const std::string& in) {
    return forge::Type3Transform(ReadFile(in), g.seed);
  });
  add_forge("pc", "Partial-to-complete pairs (JSONL)", "Verilog file", [&](const std::string& in) {
    return PairsText(forge::MakePcPairs(ReadFile(in), g.seed));
  });
  add_forge("fec", "Checked functionally equivalent pairs (JSONL)", "Verilog file",
            [&](const std::string& in) {
              auto pairs = forge::MakeFecPairs(ReadFile(in), g.seed);
              if (pairs.empty()) throw forge::TooSmall(in + ": no checked equivalent pairs");
              return PairsText(pairs);
            });
  auto* forge_stats = forge_cmd->add_subcommand("stats", "Pair counts for a corpus");
  forge_stats->add_option("corpus", forge_in, "Directory of .v files, or one file")->required();
  forge_stats->callback([&] { action = [&] { return ForgeStats(g, forge_in); }; });

  // ablate
  std::string sweep, ablate_tasks, ablate_out;
  auto* ablate_cmd = app.add_subcommand("ablate", "Sweep N or k over a task suite (CSV)");
  ablate_cmd->add_option("--sweep", sweep, "N=<lo>..<hi> or k=<lo>..<hi>")->required();
  ablate_cmd->add_option("--tasks", ablate_tasks, "Task suite (default pipeline.tasks)");
  ablate_cmd->add_option("-o,--output", ablate_out, "CSV file (default stdout)");
  ablate_cmd->callback([&] { action = [&] { return Ablate(g, sweep, ablate_tasks, ablate_out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const TaskFailed&) {
    return kExitTaskFailure;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pipeline::StageError& e) {
    std::cerr << "error: [" << e.code() << "] " << e.what() << "\n";
    return e.code() == std::string("ConfigError") ? kExitUsage : kExitTaskFailure;
  } catch (const Error& e) {
    std::cerr << "error: [" << e.code() << "] " << e.what() << "\n";
    return kExitTaskFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTaskFailure;
  }
}

}  // namespace symdirec::cli

int main(int argc, char** argv) { return symdirec::cli::Main(argc, argv); }
