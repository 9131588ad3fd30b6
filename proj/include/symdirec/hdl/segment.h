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

#ifndef SYMDIREC_HDL_SEGMENT_H_
#define SYMDIREC_HDL_SEGMENT_H_

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symdirec/hdl/ast.h"

namespace symdirec::hdl {

// A functional block of a module: an always block, an instantiation, or a
// run of related continuous assigns, together with the declarations and
// trivia that precede it in the source.
struct CodeBlock {
  std::string text;  // exact source slice
  ItemKind kind = ItemKind::kWholeModule;
  std::set<std::string> identifiers_read;
  std::set<std::string> identifiers_written;
  Span span;
  std::vector<AstItem> items;
  // Declared width of every port/net/reg the block touches.
  std::map<std::string, Range> signal_ranges;
};

// Splits a parsed module into blocks in source order. Consecutive continuous
// assigns are grouped while they share an identifier (read or written);
// always blocks and instantiations are always their own block. The texts of
// the blocks tile [header_end, footer_begin) exactly, so
// Header() + texts + Footer() reproduces the module's source.
//
// `library` resolves instance port directions; unresolved instance
// connections count as reads.
std::vector<CodeBlock> Segment(const ModuleAst& ast, std::string_view source,
                               std::span<const ModuleAst> library = {});

std::string_view Header(const ModuleAst& ast, std::string_view source);
std::string_view Footer(const ModuleAst& ast, std::string_view source);

// The whole module as one block.
CodeBlock WholeModuleBlock(const ModuleAst& ast, std::string_view source);

enum class IdentifierRole { kModule, kParam, kPort, kNet, kReg, kInstance };

const char* IdentifierRoleName(IdentifierRole role);

struct IdentifierEntry {
  std::string name;
  IdentifierRole role;
  bool operator==(const IdentifierEntry&) const = default;
};

// User identifiers in declaration order: module, header parameters, ports,
// then body declarations and instance names. Keywords never appear.
std::vector<IdentifierEntry> ExtractIdentifiers(const ModuleAst& ast);

}  // namespace symdirec::hdl

#endif  // SYMDIREC_HDL_SEGMENT_H_
