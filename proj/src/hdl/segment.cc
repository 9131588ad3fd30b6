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

#include "symdirec/hdl/segment.h"

#include <algorithm>

#include "symdirec/hdl/eval.h"

namespace symdirec::hdl {
namespace {

void CollectLvalue(const Expr& e, std::set<std::string>& out) {
  ForEachIdentifier(e, [&out](const std::string& name) { out.insert(name); });
}

// Index expressions inside an lvalue (`y[sel] = ...`) are reads.
void CollectLvalueIndexReads(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::kIndex) {
    ForEachIdentifier(e.operands[0],
                      [&out](const std::string& name) { out.insert(name); });
  }
  if (e.kind == Expr::Kind::kConcat) {
    for (const Expr& child : e.operands) CollectLvalueIndexReads(child, out);
  }
}

void CollectRead(const Expr& e, std::set<std::string>& out) {
  ForEachIdentifier(e, [&out](const std::string& name) { out.insert(name); });
}

void CollectStmt(const Stmt& s, std::set<std::string>& read,
                 std::set<std::string>& written) {
  if (s.cond) CollectRead(*s.cond, read);
  if (s.lhs) {
    CollectLvalue(*s.lhs, written);
    CollectLvalueIndexReads(*s.lhs, read);
  }
  if (s.rhs) CollectRead(*s.rhs, read);
  for (const Stmt& child : s.body) CollectStmt(child, read, written);
  for (const Stmt::CaseArm& arm : s.arms) {
    for (const Expr& label : arm.labels) CollectRead(label, read);
    for (const Stmt& child : arm.body) CollectStmt(child, read, written);
  }
}

const ModuleAst* FindModule(std::span<const ModuleAst> library,
                            const std::string& name) {
  for (const ModuleAst& m : library) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

void CollectItem(const AstItem& item, std::span<const ModuleAst> library,
                 std::set<std::string>& read, std::set<std::string>& written) {
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ContinuousAssign>) {
          CollectLvalue(p.lhs, written);
          CollectLvalueIndexReads(p.lhs, read);
          CollectRead(p.rhs, read);
        } else if constexpr (std::is_same_v<T, AlwaysBlock>) {
          for (const SensitivityItem& s : p.sensitivity) read.insert(s.signal);
          CollectStmt(p.body, read, written);
        } else if constexpr (std::is_same_v<T, Instantiation>) {
          const ModuleAst* callee = FindModule(library, p.module_name);
          for (std::size_t i = 0; i < p.connections.size(); ++i) {
            const PortConnection& c = p.connections[i];
            if (!c.actual) continue;
            const Port* port = nullptr;
            if (callee != nullptr) {
              if (!c.formal.empty()) {
                port = callee->FindPort(c.formal);
              } else if (i < callee->ports.size()) {
                port = &callee->ports[i];
              }
            }
            if (port != nullptr && port->direction == Direction::kOutput) {
              CollectLvalue(*c.actual, written);
            } else {
              CollectRead(*c.actual, read);
            }
          }
          for (const PortConnection& c : p.parameters) {
            if (c.actual) CollectRead(*c.actual, read);
          }
        } else if constexpr (std::is_same_v<T, ParamDecl>) {
          for (const auto& [name, value] : p.assignments) CollectRead(value, read);
        }
      },
      item.payload);
}

bool Intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return true;
    if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return false;
}

void FillRanges(const ModuleAst& ast, CodeBlock& block) {
  auto add = [&](const std::string& name) {
    if (const Range* r = FindSignalRange(ast, name)) {
      block.signal_ranges.emplace(name, *r);
    }
  };
  for (const std::string& n : block.identifiers_read) add(n);
  for (const std::string& n : block.identifiers_written) add(n);
}

}  // namespace

std::string_view Header(const ModuleAst& ast, std::string_view source) {
  return source.substr(ast.source_span.offset,
                       ast.header_end - ast.source_span.offset);
}

std::string_view Footer(const ModuleAst& ast, std::string_view source) {
  return source.substr(ast.footer_begin,
                       ast.source_span.end() - ast.footer_begin);
}

std::vector<CodeBlock> Segment(const ModuleAst& ast, std::string_view source,
                               std::span<const ModuleAst> library) {
  std::vector<CodeBlock> blocks;
  std::vector<const AstItem*> pending_decls;
  std::set<std::string> group_ids;  // identifiers of the open assign group

  for (const AstItem& item : ast.items) {
    if (item.is_declaration()) {
      pending_decls.push_back(&item);
      continue;
    }
    std::set<std::string> read, written;
    CollectItem(item, library, read, written);
    std::set<std::string> ids = read;
    ids.insert(written.begin(), written.end());

    bool extend = item.kind() == ItemKind::kContinuousAssign &&
                  !blocks.empty() &&
                  blocks.back().kind == ItemKind::kContinuousAssign &&
                  Intersects(group_ids, ids);
    if (!extend) {
      CodeBlock block;
      block.kind = item.kind();
      block.span.offset = blocks.empty() ? ast.header_end : blocks.back().span.end();
      blocks.push_back(std::move(block));
      group_ids.clear();
    }
    CodeBlock& block = blocks.back();
    for (const AstItem* decl : pending_decls) block.items.push_back(*decl);
    pending_decls.clear();
    block.items.push_back(item);
    block.identifiers_read.insert(read.begin(), read.end());
    block.identifiers_written.insert(written.begin(), written.end());
    block.span.length = item.span.end() - block.span.offset;
    group_ids.insert(ids.begin(), ids.end());
  }

  if (!pending_decls.empty()) {
    if (blocks.empty()) {
      CodeBlock block;
      block.kind = pending_decls.front()->kind();
      block.span.offset = ast.header_end;
      blocks.push_back(std::move(block));
    }
    for (const AstItem* decl : pending_decls) blocks.back().items.push_back(*decl);
  }
  if (!blocks.empty()) {
    blocks.back().span.length = ast.footer_begin - blocks.back().span.offset;
  }
  for (CodeBlock& block : blocks) {
    block.text = std::string(source.substr(block.span.offset, block.span.length));
    FillRanges(ast, block);
  }
  return blocks;
}

CodeBlock WholeModuleBlock(const ModuleAst& ast, std::string_view source) {
  CodeBlock block;
  block.kind = ItemKind::kWholeModule;
  block.span = ast.source_span;
  block.text = std::string(source.substr(ast.source_span.offset, ast.source_span.length));
  block.items = ast.items;
  for (const AstItem& item : ast.items) {
    CollectItem(item, {}, block.identifiers_read, block.identifiers_written);
  }
  FillRanges(ast, block);
  return block;
}

const char* IdentifierRoleName(IdentifierRole role) {
  switch (role) {
    case IdentifierRole::kModule: return "module";
    case IdentifierRole::kParam: return "param";
    case IdentifierRole::kPort: return "port";
    case IdentifierRole::kNet: return "net";
    case IdentifierRole::kReg: return "reg";
    case IdentifierRole::kInstance: return "instance";
  }
  return "?";
}

std::vector<IdentifierEntry> ExtractIdentifiers(const ModuleAst& ast) {
  std::vector<IdentifierEntry> table;
  table.push_back({ast.name, IdentifierRole::kModule});
  for (const auto& [name, value] : ast.parameters) {
    table.push_back({name, IdentifierRole::kParam});
  }
  for (const Port& p : ast.ports) table.push_back({p.name, IdentifierRole::kPort});
  for (const AstItem& item : ast.items) {
    if (const auto* net = std::get_if<NetDecl>(&item.payload)) {
      for (const std::string& n : net->names) table.push_back({n, IdentifierRole::kNet});
    } else if (const auto* reg = std::get_if<RegDecl>(&item.payload)) {
      for (const std::string& n : reg->names) table.push_back({n, IdentifierRole::kReg});
    } else if (const auto* param = std::get_if<ParamDecl>(&item.payload)) {
      for (const auto& [n, v] : param->assignments) {
        table.push_back({n, IdentifierRole::kParam});
      }
    } else if (const auto* inst = std::get_if<Instantiation>(&item.payload)) {
      table.push_back({inst->instance_name, IdentifierRole::kInstance});
    }
  }
  return table;
}

}  // namespace symdirec::hdl
