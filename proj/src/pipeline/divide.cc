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

#include <regex>
#include <sstream>

#include "symdirec/hdl/parser.h"
#include "symdirec/hdl/segment.h"
#include "symdirec/pipeline/pipeline.h"
#include "symdirec/symlogic/extract.h"
#include "symdirec/util/template.h"

namespace symdirec::pipeline {

namespace {

std::string Trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Decomposition replies often list several definitions separated by commas;
// commas inside {...} belong to concatenations.
std::string TopLevelCommasToSemicolons(std::string_view text) {
  std::string out(text);
  int depth = 0;
  for (char& c : out) {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ',' && depth == 0) c = ';';
  }
  return out;
}

bool LooksLikeVhdl(std::string_view x) {
  std::string lower(x);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return lower.find("entity") != std::string::npos &&
         lower.find("architecture") != std::string::npos;
}

Trace SubToJson(const SubComponent& s) {
  Trace j;
  j["index"] = s.index;
  j["x"] = s.x;
  j["phi"] = s.phi ? s.phi->ToString() : s.phi_text;
  j["phi_formal"] = s.phi.has_value();
  j["origin"] = s.origin;
  return j;
}

}  // namespace

const char* DirectionName(Direction d) {
  return d == Direction::kSynthesis ? "synthesis" : "summarization";
}

Direction ParseDirection(std::string_view name) {
  if (name == "synthesis" || name == "synth") return Direction::kSynthesis;
  if (name == "summarization" || name == "summ") return Direction::kSummarization;
  throw ConfigError("unknown direction '" + std::string(name) + "'");
}

void Validate(const TaskInput& input) {
  if (Trim(input.x).empty()) throw ConfigError("task input X is empty");
  if (input.language != "verilog" && input.language != "vhdl" && input.language != "nl") {
    throw ConfigError("unknown target language '" + input.language + "'");
  }
  if (input.n_hint < 1) throw ConfigError("N hint must be at least 1");
  if (input.k < 1) throw ConfigError("k must be at least 1");
}

std::vector<SubComponent> ParseDecomposition(std::string_view reply,
                                             std::vector<std::string>* notes) {
  static const std::regex kItem(R"(^\s*(?:[-*]\s*)?(\d+)[.)]\s+(.*\S)\s*$)");
  static const std::regex kPhi(R"(^\s*(?:phi|Phi|PHI|φ)\s*:\s*(.*\S)\s*$)");
  std::vector<SubComponent> out;
  std::istringstream lines{std::string(reply)};
  std::string line;
  std::smatch m;
  while (std::getline(lines, line)) {
    if (std::regex_match(line, m, kPhi)) {
      if (out.empty()) continue;
      SubComponent& s = out.back();
      s.phi_text = s.phi_text.empty() ? m[1].str() : s.phi_text + "; " + m[1].str();
    } else if (std::regex_match(line, m, kItem)) {
      SubComponent s;
      s.index = static_cast<int>(out.size()) + 1;
      s.x = m[2].str();
      s.origin = "llm";
      out.push_back(std::move(s));
    }
  }
  for (SubComponent& s : out) {
    if (s.phi_text.empty()) continue;
    try {
      s.phi = symlogic::ParseBundle(TopLevelCommasToSemicolons(s.phi_text));
    } catch (const Error& e) {
      if (notes != nullptr) {
        notes->push_back("subcomponent " + std::to_string(s.index) +
                         ": phi kept as free text (" + e.what() + ")");
      }
    }
  }
  return out;
}

std::vector<SubComponent> Divide(const TaskInput& input, providers::Provider& provider,
                                 const PromptTemplates& templates, Trace* trace) {
  Trace local;
  Trace& t = trace != nullptr ? *trace : local;
  std::vector<std::string> notes;
  std::vector<SubComponent> subs;

  if (input.direction == Direction::kSynthesis) {
    providers::GenRequest req;
    req.prompt = RenderTemplate(templates.divide_synth, {{"X", input.x},
                                                         {"N", std::to_string(input.n_hint)},
                                                         {"language", input.language}});
    std::string reply = provider.Generate(req).text;
    t["prompt"] = req.prompt;
    t["reply"] = reply;
    subs = ParseDecomposition(reply, &notes);
    t["notes"] = notes;
    if (subs.empty()) {
      throw EmptyDecomposition("the decomposition reply holds no numbered subcomponents");
    }
  } else {
    std::vector<hdl::ModuleAst> modules = LooksLikeVhdl(input.x)
                                              ? hdl::ParseVhdlDesign(input.x)
                                              : hdl::ParseVerilogDesign(input.x);
    t["calls"] = Trace::array();
    for (const hdl::ModuleAst& m : modules) {
      for (const hdl::CodeBlock& block : hdl::Segment(m, input.x, modules)) {
        SubComponent s;
        s.x = Trim(block.text);
        try {
          symlogic::SymBundle b = symlogic::ExtractFromRtl(block);
          if (b.definitions.empty()) continue;  // declarations only
          s.phi = std::move(b);
          s.phi_text = s.phi->ToString();
          s.origin = "ast";
        } catch (const Error& e) {
          if (e.code() != "NotCombinational" && e.code() != "UnsupportedConstruct") throw;
          providers::GenRequest req;
          req.prompt = RenderTemplate(templates.divide_block, {{"x_i", s.x}});
          std::string reply = provider.Generate(req).text;
          t["calls"].push_back({{"prompt", req.prompt}, {"reply", reply}});
          s.phi_text = Trim(reply);
          s.origin = "llm";
          try {
            s.phi = symlogic::ParseBundle(TopLevelCommasToSemicolons(s.phi_text));
          } catch (const Error&) {
            notes.push_back("block at offset " + std::to_string(block.span.offset) +
                            ": phi kept as free text");
          }
        }
        s.index = static_cast<int>(subs.size()) + 1;
        subs.push_back(std::move(s));
      }
    }
    t["notes"] = notes;
    if (subs.empty()) throw EmptyDecomposition("the source has no functional blocks");
  }

  t["subcomponents"] = Trace::array();
  for (const SubComponent& s : subs) t["subcomponents"].push_back(SubToJson(s));
  return subs;
}

}  // namespace symdirec::pipeline
