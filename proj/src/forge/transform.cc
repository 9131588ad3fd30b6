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
#include <set>

#include "symdirec/forge/forge.h"
#include "symdirec/hdl/parser.h"
#include "symdirec/util/hash.h"

namespace symdirec::forge {

namespace {

struct Chunk {
  std::string text;  // leading trivia plus the item itself
  std::set<std::string> declares;
  std::set<std::string> refs;
  int original = -1;  // index in the source order, -1 for injected items
};

std::set<std::string> IdentTokens(std::string_view text) {
  std::set<std::string> out;
  for (const hdl::LexToken& t : hdl::LexVerilog(text)) {
    if (t.kind == hdl::LexToken::Kind::kIdent) {
      out.emplace(text.substr(t.span.offset, t.span.length));
    }
  }
  return out;
}

std::set<std::string> Declared(const hdl::AstItem& item) {
  std::set<std::string> out;
  if (const auto* n = std::get_if<hdl::NetDecl>(&item.payload)) {
    out.insert(n->names.begin(), n->names.end());
  } else if (const auto* r = std::get_if<hdl::RegDecl>(&item.payload)) {
    out.insert(r->names.begin(), r->names.end());
  } else if (const auto* p = std::get_if<hdl::ParamDecl>(&item.payload)) {
    for (const auto& [name, value] : p->assignments) out.insert(name);
  }
  return out;
}

std::string IndentBefore(std::string_view source, std::size_t offset) {
  std::size_t nl = source.rfind('\n', offset == 0 ? 0 : offset - 1);
  std::size_t start = nl == std::string_view::npos ? 0 : nl + 1;
  std::string_view ws = source.substr(start, offset - start);
  if (ws.empty() || ws.find_first_not_of(" \t") != std::string_view::npos) return "  ";
  return std::string(ws);
}

std::string RangeText(const hdl::Range& r) {
  if (r.scalar()) return "";
  return "[" + std::to_string(r.msb) + ":" + std::to_string(r.lsb) + "] ";
}

struct ModuleParts {
  std::string head;  // through the header's `;`
  std::vector<Chunk> chunks;
  std::string tail;  // trivia before endmodule, then the footer
  std::string indent;
};

ModuleParts Split(const hdl::ModuleAst& m, std::string_view source) {
  ModuleParts parts;
  parts.head = std::string(hdl::Header(m, source));
  std::size_t prev = m.header_end;
  for (std::size_t i = 0; i < m.items.size(); ++i) {
    const hdl::AstItem& item = m.items[i];
    Chunk c;
    c.text = std::string(source.substr(prev, item.span.end() - prev));
    c.declares = Declared(item);
    c.refs = IdentTokens(source.substr(item.span.offset, item.span.length));
    c.original = static_cast<int>(i);
    parts.chunks.push_back(std::move(c));
    prev = item.span.end();
  }
  parts.tail = std::string(source.substr(prev, m.source_span.end() - prev));
  parts.indent = m.items.empty() ? "  " : IndentBefore(source, m.items.front().span.offset);
  return parts;
}

// Random order in which every chunk follows the chunks declaring what it
// references.
std::vector<int> RandomTopoOrder(const std::vector<Chunk>& chunks, Rng& rng) {
  const int n = static_cast<int>(chunks.size());
  std::vector<std::vector<int>> succ(n);
  std::vector<int> indeg(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      bool depends = std::any_of(chunks[i].declares.begin(), chunks[i].declares.end(),
                                 [&](const std::string& d) { return chunks[j].refs.count(d) != 0; });
      if (depends) {
        succ[i].push_back(j);
        ++indeg[j];
      }
    }
  }
  std::vector<int> ready, order;
  for (int i = 0; i < n; ++i) {
    if (indeg[i] == 0) ready.push_back(i);
  }
  while (!ready.empty()) {
    std::size_t pick = rng.Below(ready.size());
    int next = ready[pick];
    ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(pick));
    order.push_back(next);
    for (int s : succ[next]) {
      if (--indeg[s] == 0) ready.insert(std::upper_bound(ready.begin(), ready.end(), s), s);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    // A cycle would mean the source declares after use, which the parser
    // rejects; keep the original order rather than guess.
    order.resize(n);
    for (int i = 0; i < n; ++i) order[i] = i;
  }
  return order;
}

}  // namespace

Type3Result Type3TransformDetailed(std::string_view source, std::uint64_t seed) {
  std::vector<hdl::ModuleAst> modules = hdl::ParseVerilogDesign(source);
  Rng rng(seed);
  std::vector<ModuleParts> parts;
  for (const hdl::ModuleAst& m : modules) parts.push_back(Split(m, source));

  Type3Result result;

  // Inert items, each tied to one module.
  std::set<std::string> in_use = IdentTokens(source);
  int inert = static_cast<int>(rng.Below(3));
  for (int k = 0; k < inert && !modules.empty(); ++k) {
    std::size_t mi = rng.Below(modules.size());
    const hdl::ModuleAst& m = modules[mi];
    ModuleParts& mp = parts[mi];
    std::string name;
    do {
      name = "spare_" + std::to_string(rng.Below(1000));
    } while (in_use.count(name) != 0);
    in_use.insert(name);
    result.inert_wires.push_back(name);

    std::vector<const hdl::Port*> inputs;
    for (const hdl::Port& p : m.ports) {
      if (p.direction == hdl::Direction::kInput) inputs.push_back(&p);
    }
    bool driven = !inputs.empty() && rng.Coin();
    hdl::Range range;
    std::string rhs;
    if (driven) {
      const hdl::Port* a = inputs[rng.Below(inputs.size())];
      const hdl::Port* b = inputs[rng.Below(inputs.size())];
      range = a->range;
      rhs = (a != b && b->range == a->range) ? a->name + " & " + b->name : "~" + a->name;
    }
    Chunk decl;
    decl.text = "\n" + mp.indent + "wire " + RangeText(range) + name + ";";
    decl.declares = {name};
    mp.chunks.push_back(std::move(decl));
    if (driven) {
      Chunk assign;
      assign.text = "\n" + mp.indent + "assign " + name + " = " + rhs + ";";
      assign.refs = IdentTokens(name + " = " + rhs);
      mp.chunks.push_back(std::move(assign));
    }
  }

  std::string out;
  std::size_t prev = 0;
  for (std::size_t mi = 0; mi < modules.size(); ++mi) {
    const hdl::ModuleAst& m = modules[mi];
    out.append(source.substr(prev, m.source_span.offset - prev));
    const ModuleParts& mp = parts[mi];
    out += mp.head;
    int last_original = -1;
    for (int idx : RandomTopoOrder(mp.chunks, rng)) {
      const Chunk& c = mp.chunks[idx];
      out += c.text;
      if (c.original >= 0) {
        if (c.original < last_original) result.reordered = true;
        last_original = c.original;
      }
    }
    out += mp.tail;
    prev = m.source_span.end();
  }
  out.append(source.substr(prev));

  hdl::ParseVerilogDesign(out);
  result.text = std::move(out);
  return result;
}

std::string Type3Transform(std::string_view source, std::uint64_t seed) {
  return Type3TransformDetailed(source, seed).text;
}

std::size_t WhitespaceTokens(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (char c : text) {
    bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

std::vector<PairRecord> MakePcPairs(std::string_view source, std::uint64_t seed) {
  std::size_t tokens = WhitespaceTokens(source);
  if (tokens > kMaxPcTokens) {
    throw TooLarge("source has " + std::to_string(tokens) + " whitespace tokens, limit " +
                   std::to_string(kMaxPcTokens));
  }
  Rng rng(seed);
  bool rename = rng.Coin();
  std::string text = rename ? Type2Rename(source, seed).text : std::string(source);
  std::vector<hdl::ModuleAst> modules = hdl::ParseVerilogDesign(text);

  std::vector<PairRecord> out;
  for (const hdl::ModuleAst& m : modules) {
    const std::size_t n = m.items.size();
    if (n < 2) continue;
    std::size_t keep = 1 + rng.Below(n - 1);
    PairRecord rec;
    rec.type = PairType::kPC;
    rec.source = std::string(hdl::Header(m, text)) +
                 text.substr(m.header_end, m.items[keep - 1].span.end() - m.header_end) + "\n" +
                 std::string(hdl::Footer(m, text)) + "\n";
    rec.target = modules.size() == 1
                     ? text
                     : text.substr(m.source_span.offset, m.source_span.length) + "\n";
    rec.provenance = {{"transform", "pc"},
                      {"seed", std::to_string(seed)},
                      {"module", m.name},
                      {"kept_items", std::to_string(keep)},
                      {"total_items", std::to_string(n)},
                      {"type2", rename ? "yes" : "no"},
                      {"token_rule", "whitespace"},
                      {"tokens", std::to_string(WhitespaceTokens(rec.target))}};
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw TooSmall("no module has two or more body items");
  return out;
}

}  // namespace symdirec::forge
