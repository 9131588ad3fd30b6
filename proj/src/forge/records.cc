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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "symdirec/forge/forge.h"
#include "symdirec/hdl/parser.h"
#include "symdirec/providers/provider.h"
#include "symdirec/util/process.h"
#include "symdirec/util/template.h"

namespace symdirec::forge {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* PairTypeName(PairType type) {
  switch (type) {
    case PairType::kTC: return "TC";
    case PairType::kCS: return "CS";
    case PairType::kFEC: return "FEC";
    case PairType::kPC: return "PC";
  }
  return "?";
}

PairType ParsePairType(std::string_view name) {
  for (PairType t : {PairType::kTC, PairType::kCS, PairType::kFEC, PairType::kPC}) {
    if (name == PairTypeName(t)) return t;
  }
  throw ConfigError("unknown pair type '" + std::string(name) + "'");
}

void Validate(const PairRecord& record) {
  if (record.source.empty() || record.target.empty()) {
    throw ConfigError(std::string(PairTypeName(record.type)) + " pair with an empty text");
  }
  if (record.type == PairType::kFEC && record.provenance.count("equivalent") == 0) {
    throw ConfigError("FEC pair without an equivalence result");
  }
}

std::string ToJsonLine(const PairRecord& record) {
  Validate(record);
  ordered_json j;
  j["type"] = PairTypeName(record.type);
  j["source"] = record.source;
  j["target"] = record.target;
  j["provenance"] = record.provenance;
  return j.dump();
}

PairRecord FromJsonLine(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const ordered_json::exception& e) {
    throw ConfigError(std::string("bad pair record: ") + e.what());
  }
  PairRecord rec;
  try {
    rec.type = ParsePairType(j.at("type").get<std::string>());
    rec.source = j.at("source").get<std::string>();
    rec.target = j.at("target").get<std::string>();
    if (j.contains("provenance")) {
      for (const auto& [k, v] : j["provenance"].items()) {
        rec.provenance[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
  } catch (const ordered_json::exception& e) {
    throw ConfigError(std::string("bad pair record: ") + e.what());
  }
  Validate(rec);
  return rec;
}

void WritePairs(const std::string& path, std::span<const PairRecord> records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const PairRecord& r : records) out << ToJsonLine(r) << "\n";
}

std::vector<PairRecord> ReadPairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<PairRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(FromJsonLine(line));
  }
  return out;
}

namespace {

std::string Ask(providers::Provider& provider, const std::string& tmpl, std::string_view code) {
  providers::GenRequest req;
  req.prompt = RenderTemplate(tmpl, {{"code", std::string(code)}});
  std::string text = provider.Generate(req).text;
  text.erase(0, text.find_first_not_of(" \t\r\n"));
  text.erase(text.find_last_not_of(" \t\r\n") + 1);
  if (text.empty()) throw ConfigError("provider returned an empty reply");
  return text;
}

}  // namespace

PairRecord MakeTcPair(std::string_view code, providers::Provider& provider,
                      const std::string& prompt_template) {
  PairRecord rec;
  rec.type = PairType::kTC;
  rec.source = Ask(provider, prompt_template, code);
  rec.target = std::string(code);
  rec.provenance = {{"transform", "problem-statement"},
                    {"provider", providers::ProviderKindName(provider.kind())}};
  return rec;
}

PairRecord MakeCsPair(std::string_view code, providers::Provider& provider,
                      const std::string& prompt_template) {
  PairRecord rec;
  rec.type = PairType::kCS;
  rec.source = std::string(code);
  rec.target = Ask(provider, prompt_template, code);
  rec.provenance = {{"transform", "summary"},
                    {"provider", providers::ProviderKindName(provider.kind())}};
  return rec;
}

std::string Type4Translate(std::string_view source, const Type4Config& cfg) {
  if (cfg.command.empty() || !CommandAvailable(cfg.command)) {
    throw ToolUnavailable("translation tool for '" + cfg.command + "' not found");
  }
  fs::path dir = MakeTempDir("symdirec-type4");
  fs::path in = dir / cfg.input_file;
  fs::path out = dir / cfg.output_file;
  std::ofstream(in) << source;
  std::string cmd = cfg.command;
  for (const auto& [key, value] : {std::pair{std::string("{in}"), ShellQuote(in.string())},
                                   std::pair{std::string("{out}"), ShellQuote(out.string())}}) {
    for (std::size_t p = cmd.find(key); p != std::string::npos; p = cmd.find(key, p + value.size())) {
      cmd.replace(p, key.size(), value);
    }
  }
  ProcessResult run = RunShell(cmd, dir.string(), cfg.timeout_seconds);
  std::string text;
  if (!run.timed_out && run.exit_code == 0 && fs::exists(out)) text = ReadFile(out.string());
  std::error_code ec;
  fs::remove_all(dir, ec);
  if (text.empty()) {
    throw ToolUnavailable("translation failed" +
                          std::string(run.timed_out ? " (timeout)" : "") + ": " + run.output);
  }
  return text;
}

CorpusStats ComputeStats(std::span<const std::string> paths, std::uint64_t seed) {
  CorpusStats s;
  for (const std::string& path : paths) {
    ++s.files;
    std::string text = ReadFile(path);
    std::vector<hdl::ModuleAst> modules;
    try {
      modules = hdl::ParseVerilogDesign(text);
    } catch (const Error&) {
      ++s.parse_failures;
      continue;
    }
    s.modules += static_cast<int>(modules.size());
    s.tc_candidates += static_cast<int>(modules.size());
    s.cs_candidates += static_cast<int>(modules.size());
    bool sequential = false;
    for (const hdl::ModuleAst& m : modules) {
      for (const hdl::AstItem& item : m.items) {
        sequential = sequential || item.kind() == hdl::ItemKind::kAlwaysBlock;
      }
    }
    if (!sequential) s.combinational += static_cast<int>(modules.size());
    for (const PairRecord& rec : MakeFecPairs(text, seed)) {
      const std::string& eq = rec.provenance.at("equivalent");
      if (eq == "true") {
        ++s.fec_pairs;
      } else if (eq == "false") {
        ++s.fec_rejected;
      } else {
        ++s.fec_uncheckable;
      }
    }
    try {
      s.pc_pairs += static_cast<int>(MakePcPairs(text, seed).size());
    } catch (const TooSmall&) {
      ++s.pc_too_small;
    } catch (const TooLarge&) {
      ++s.pc_too_large;
    }
  }
  return s;
}

std::string FormatStats(const CorpusStats& s) {
  std::ostringstream out;
  out << "corpus: " << s.files << " files, " << s.modules << " modules, " << s.combinational
      << " combinational, " << s.parse_failures << " unparsable\n";
  auto row = [&](const char* family, const std::string& count, const std::string& note) {
    out << family;
    for (std::size_t i = std::string_view(family).size(); i < 6; ++i) out << ' ';
    out << count;
    for (std::size_t i = count.size(); i < 8; ++i) out << ' ';
    out << note << "\n";
  };
  row("type", "pairs", "note");
  row("TC", "-", std::to_string(s.tc_candidates) + " modules; needs a provider");
  row("FEC", std::to_string(s.fec_pairs),
      std::to_string(s.fec_rejected) + " rejected, " + std::to_string(s.fec_uncheckable) +
          " unchecked");
  row("CS", "-", std::to_string(s.cs_candidates) + " modules; needs a provider");
  row("PC", std::to_string(s.pc_pairs),
      std::to_string(s.pc_too_small) + " too small, " + std::to_string(s.pc_too_large) +
          " too large (whitespace tokens)");
  return out.str();
}

}  // namespace symdirec::forge
