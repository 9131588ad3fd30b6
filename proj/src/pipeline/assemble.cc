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

#include "symdirec/hdl/parser.h"
#include "symdirec/pipeline/pipeline.h"
#include "symdirec/util/hash.h"
#include "symdirec/util/template.h"

namespace symdirec::pipeline {

namespace {

std::string Trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string Context(std::span<const Selection> selections, const PromptTemplates& templates) {
  std::string out;
  for (const Selection& s : selections) {
    std::string snippet = s.entry != nullptr ? Trim(s.entry->y) : "(no candidate retrieved)";
    out += RenderTemplate(templates.assemble_item, {{"i", std::to_string(s.sub.index)},
                                                    {"x_i", s.sub.x},
                                                    {"phi_i", s.sub.phi_text},
                                                    {"snippet", snippet}});
  }
  return out;
}

// Returns the parse error, empty when the text parses.
std::string ParseProblem(const std::string& text, const std::string& language) {
  try {
    if (language == "vhdl") {
      hdl::ParseVhdlDesign(text);
    } else {
      hdl::ParseVerilogDesign(text);
    }
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

PromptTemplates PromptTemplates::Load(const std::string& dir) {
  PromptTemplates t;
  t.divide_synth = LoadTemplate(dir, "divide_synth");
  t.divide_block = LoadTemplate(dir, "divide_block");
  t.verify = LoadTemplate(dir, "verify");
  t.assemble_synth = LoadTemplate(dir, "assemble_synth");
  t.assemble_summ = LoadTemplate(dir, "assemble_summ");
  t.assemble_item = LoadTemplate(dir, "assemble_item");
  t.repair = LoadTemplate(dir, "repair");
  return t;
}

std::string PromptTemplates::Version() const {
  std::string all;
  for (const std::string* s : {&divide_synth, &divide_block, &verify, &assemble_synth,
                               &assemble_summ, &assemble_item, &repair}) {
    all += *s;
    all += '\x1e';
  }
  return Fingerprint(all);
}

std::string StripFences(std::string_view reply) {
  std::string text = Trim(reply);
  if (text.rfind("```", 0) != 0) return text;
  std::size_t first_nl = text.find('\n');
  if (first_nl == std::string::npos) return "";
  std::size_t close = text.rfind("```");
  if (close <= first_nl) close = text.size();
  return Trim(std::string_view(text).substr(first_nl + 1, close - first_nl - 1)) + "\n";
}

AssembleResult Assemble(const TaskInput& input, std::span<const Selection> selections,
                        providers::Provider& provider, const PromptTemplates& templates,
                        Trace* trace) {
  if (selections.empty()) throw NoCandidates("nothing to assemble");
  Trace local;
  Trace& t = trace != nullptr ? *trace : local;
  t["calls"] = Trace::array();
  AssembleResult r;
  std::string context = Context(selections, templates);

  auto call = [&](const std::string& prompt) {
    providers::GenRequest req;
    req.prompt = prompt;
    std::string reply = provider.Generate(req).text;
    t["calls"].push_back({{"prompt", prompt}, {"reply", reply}});
    ++r.generation_calls;
    return reply;
  };

  if (input.direction == Direction::kSummarization) {
    r.output = StripFences(call(RenderTemplate(templates.assemble_summ,
                                               {{"X", input.x}, {"context", context}})));
    if (!r.output.empty() && r.output.back() == '\n') r.output.pop_back();
    t["valid"] = true;
    return r;
  }

  r.output = StripFences(call(RenderTemplate(
      templates.assemble_synth,
      {{"X", input.x}, {"language", input.language}, {"context", context}})));
  r.error = ParseProblem(r.output, input.language);
  if (!r.error.empty()) {
    t["first_error"] = r.error;
    r.output = StripFences(call(RenderTemplate(templates.repair, {{"X", input.x},
                                                                  {"language", input.language},
                                                                  {"previous", r.output},
                                                                  {"error", r.error}})));
    r.error = ParseProblem(r.output, input.language);
  }
  r.valid = r.error.empty();
  t["valid"] = r.valid;
  if (!r.valid) t["error"] = r.error;
  return r;
}

}  // namespace symdirec::pipeline
