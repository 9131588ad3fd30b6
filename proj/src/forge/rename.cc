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
#include <cctype>
#include <set>
#include <sstream>

#include "symdirec/forge/forge.h"
#include "symdirec/hdl/parser.h"
#include "symdirec/providers/provider.h"
#include "symdirec/util/hash.h"
#include "symdirec/util/template.h"

namespace symdirec::forge {

using hdl::IdentifierEntry;
using hdl::IdentifierRole;

namespace {

// Short, pronounceable stems; the role prefix keeps generated names from
// reading like keywords.
constexpr const char* kWords[] = {
    "amber",  "birch",  "cedar",  "delta",  "ember",  "fjord",  "garnet", "harbor",
    "indigo", "jasper", "kestrel", "lumen", "maple",  "nectar", "onyx",   "pebble",
    "quartz", "raven",  "sable",  "tundra", "umber",  "violet", "willow", "xenon",
    "yarrow", "zephyr", "acorn",  "basalt", "comet",  "dune",   "ferric", "glacier",
    "heron",  "ivory",  "juniper", "krypton", "lotus", "meadow", "nimbus", "orchid",
    "prism",  "quill",  "ridge",  "spruce", "thistle", "ursa",  "vortex", "wren",
};

std::string Prefixed(IdentifierRole role, std::optional<hdl::Direction> dir,
                     const std::string& word) {
  switch (role) {
    case IdentifierRole::kModule: return word + "_unit";
    case IdentifierRole::kParam: {
      std::string upper = word;
      for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      return "K_" + upper;
    }
    case IdentifierRole::kPort:
      if (dir == hdl::Direction::kOutput) return "out_" + word;
      if (dir == hdl::Direction::kInout) return "io_" + word;
      return "in_" + word;
    case IdentifierRole::kNet: return "n_" + word;
    case IdentifierRole::kReg: return "r_" + word;
    case IdentifierRole::kInstance: return "u_" + word;
  }
  return word;
}

bool ValidIdentifier(std::string_view s) {
  if (s.empty() || s.size() > 64) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return !hdl::IsVerilogKeyword(s);
}

bool Inside(const std::vector<hdl::Span>& spans, std::size_t offset) {
  for (const hdl::Span& s : spans) {
    if (offset >= s.offset && offset < s.end()) return true;
  }
  return false;
}

}  // namespace

RenameResult Type2Rename(std::string_view source, std::uint64_t seed,
                         const NameSuggester& suggester) {
  std::vector<hdl::ModuleAst> modules = hdl::ParseVerilogDesign(source);

  std::set<std::string> defined;
  for (const hdl::ModuleAst& m : modules) defined.insert(m.name);

  std::vector<IdentifierEntry> ids;
  std::set<std::string> names;
  std::map<std::string, hdl::Direction> port_dir;
  std::vector<hdl::Span> external_instances;
  for (const hdl::ModuleAst& m : modules) {
    for (IdentifierEntry& e : hdl::ExtractIdentifiers(m)) {
      if (names.insert(e.name).second) ids.push_back(std::move(e));
    }
    for (const hdl::Port& p : m.ports) port_dir.emplace(p.name, p.direction);
    for (const hdl::AstItem& item : m.items) {
      const auto* inst = std::get_if<hdl::Instantiation>(&item.payload);
      if (inst != nullptr && defined.count(inst->module_name) == 0) {
        external_instances.push_back(item.span);
      }
    }
  }

  // Decide per token; identifiers that stay as they are constrain the new
  // names.
  std::vector<hdl::LexToken> toks = hdl::LexVerilog(source);
  std::vector<bool> rewrite(toks.size(), false);
  std::set<std::string> taken;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].kind != hdl::LexToken::Kind::kIdent) continue;
    std::string text(source.substr(toks[i].span.offset, toks[i].span.length));
    bool formal = i > 0 && toks[i - 1].kind == hdl::LexToken::Kind::kPunct &&
                  source.substr(toks[i - 1].span.offset, toks[i - 1].span.length) == ".";
    bool keep = names.count(text) == 0 ||
                (formal && Inside(external_instances, toks[i].span.offset));
    if (keep) {
      taken.insert(text);
    } else {
      rewrite[i] = true;
    }
  }

  std::map<std::string, std::string> proposals;
  if (suggester) proposals = suggester(ids, source);

  Rng rng(seed);
  RenameResult result;
  for (const IdentifierEntry& id : ids) {
    std::string chosen;
    auto it = proposals.find(id.name);
    if (it != proposals.end() && ValidIdentifier(it->second) && it->second != id.name &&
        taken.count(it->second) == 0) {
      chosen = it->second;
    } else {
      std::optional<hdl::Direction> dir;
      if (auto p = port_dir.find(id.name); p != port_dir.end()) dir = p->second;
      std::string base =
          Prefixed(id.role, dir, kWords[rng.Below(std::size(kWords))]);
      chosen = base;
      for (int k = 2; taken.count(chosen) != 0 || chosen == id.name; ++k) {
        chosen = base + "_" + std::to_string(k);
      }
    }
    taken.insert(chosen);
    result.renames[id.name] = chosen;
  }

  std::size_t pos = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (!rewrite[i]) continue;
    const hdl::Span& s = toks[i].span;
    result.text.append(source.substr(pos, s.offset - pos));
    result.text += result.renames.at(std::string(source.substr(s.offset, s.length)));
    pos = s.end();
  }
  result.text.append(source.substr(pos));

  hdl::ParseVerilogDesign(result.text);  // must still parse
  return result;
}

NameSuggester ProviderSuggester(providers::Provider& provider, std::string prompt_template) {
  return [&provider, tmpl = std::move(prompt_template)](
             const std::vector<IdentifierEntry>& ids, std::string_view source) {
    std::string listing;
    for (const IdentifierEntry& id : ids) {
      listing += id.name + " (" + hdl::IdentifierRoleName(id.role) + ")\n";
    }
    providers::GenRequest req;
    req.prompt = RenderTemplate(tmpl, {{"identifiers", listing}, {"code", std::string(source)}});
    std::string reply = provider.Generate(req).text;

    std::map<std::string, std::string> out;
    std::istringstream lines(reply);
    std::string line;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r`"));
      s.erase(s.find_last_not_of(" \t\r`") + 1);
      return s;
    };
    while (std::getline(lines, line)) {
      std::size_t arrow = line.find("->");
      if (arrow == std::string::npos) continue;
      out[trim(line.substr(0, arrow))] = trim(line.substr(arrow + 2));
    }
    return out;
  };
}

}  // namespace symdirec::forge
