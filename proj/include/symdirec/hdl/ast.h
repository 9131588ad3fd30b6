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

#ifndef SYMDIREC_HDL_AST_H_
#define SYMDIREC_HDL_AST_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace symdirec::hdl {

enum class Language { kVerilog, kVhdl };

// Byte range into the original source. Ignored by structural equality.
struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;

  std::size_t end() const { return offset + length; }
};

enum class Direction { kInput, kOutput, kInout };

const char* DirectionName(Direction d);

// Packed range [msb:lsb]. Scalars use [0:0].
struct Range {
  int msb = 0;
  int lsb = 0;

  int width() const { return (msb >= lsb ? msb - lsb : lsb - msb) + 1; }
  bool scalar() const { return msb == 0 && lsb == 0; }
  bool operator==(const Range&) const = default;
};

struct Expr {
  enum class Kind {
    kIdent,      // name
    kNumber,     // value, width (-1 when unsized)
    kUnary,      // op, operands[0]
    kBinary,     // op, operands[0..1]
    kTernary,    // operands[0] ? operands[1] : operands[2]
    kConcat,     // {operands...}
    kReplicate,  // {value{operands[0]}}
    kIndex,      // name[operands[0]]
    kSlice,      // name[msb:lsb]
  };

  Kind kind = Kind::kNumber;
  std::string name;
  std::string op;
  std::vector<Expr> operands;
  std::uint64_t value = 0;
  int width = -1;
  int msb = 0;
  int lsb = 0;

  static Expr Ident(std::string name);
  static Expr Number(std::uint64_t value, int width = -1);
  static Expr Unary(std::string op, Expr operand);
  static Expr Binary(std::string op, Expr lhs, Expr rhs);
  static Expr Ternary(Expr cond, Expr then_expr, Expr else_expr);

  bool operator==(const Expr&) const = default;
};

struct Stmt {
  enum class Kind { kBlock, kIf, kCase, kBlockingAssign, kNonblockingAssign, kEmpty };

  struct CaseArm {
    std::vector<Expr> labels;  // empty for `default`
    std::vector<Stmt> body;    // exactly one statement
    bool operator==(const CaseArm&) const = default;
  };

  Kind kind = Kind::kEmpty;
  std::vector<Stmt> body;        // kBlock statements; kIf then/else (1 or 2)
  std::optional<Expr> cond;      // kIf condition, kCase subject
  std::string case_keyword;      // "case" / "casez" / "casex"
  std::vector<CaseArm> arms;     // kCase
  std::optional<Expr> lhs;       // assignments
  std::optional<Expr> rhs;

  bool operator==(const Stmt&) const = default;
};

struct NetDecl {
  Range range;
  std::vector<std::string> names;
  bool operator==(const NetDecl&) const = default;
};

struct RegDecl {
  Range range;
  std::vector<std::string> names;
  bool operator==(const RegDecl&) const = default;
};

struct ParamDecl {
  bool local = false;
  std::vector<std::pair<std::string, Expr>> assignments;
  bool operator==(const ParamDecl&) const = default;
};

struct ContinuousAssign {
  Expr lhs;
  Expr rhs;
  bool operator==(const ContinuousAssign&) const = default;
};

struct SensitivityItem {
  enum class Edge { kNone, kPosedge, kNegedge };
  Edge edge = Edge::kNone;
  std::string signal;
  bool operator==(const SensitivityItem&) const = default;
};

struct AlwaysBlock {
  bool star = false;  // @* / @(*)
  std::vector<SensitivityItem> sensitivity;
  Stmt body;
  bool operator==(const AlwaysBlock&) const = default;
};

struct PortConnection {
  std::string formal;           // empty for positional connections
  std::optional<Expr> actual;   // nullopt for `.p()`
  bool operator==(const PortConnection&) const = default;
};

struct Instantiation {
  std::string module_name;
  std::string instance_name;
  std::vector<PortConnection> parameters;  // #(...) overrides
  std::vector<PortConnection> connections;
  bool operator==(const Instantiation&) const = default;
};

enum class ItemKind {
  kNetDecl,
  kRegDecl,
  kParamDecl,
  kContinuousAssign,
  kAlwaysBlock,
  kInstantiation,
  kWholeModule,  // only used by CodeBlock
};

const char* ItemKindName(ItemKind kind);

struct AstItem {
  std::variant<NetDecl, RegDecl, ParamDecl, ContinuousAssign, AlwaysBlock,
               Instantiation>
      payload;
  Span span;

  ItemKind kind() const { return static_cast<ItemKind>(payload.index()); }
  bool is_declaration() const {
    return kind() == ItemKind::kNetDecl || kind() == ItemKind::kRegDecl ||
           kind() == ItemKind::kParamDecl;
  }

  bool operator==(const AstItem& other) const {
    return payload == other.payload;
  }
};

struct Port {
  std::string name;
  Direction direction = Direction::kInput;
  bool is_reg = false;
  Range range;

  int width() const { return range.width(); }
  bool operator==(const Port&) const = default;
};

struct ModuleAst {
  std::string name;
  Language language = Language::kVerilog;
  std::vector<std::pair<std::string, Expr>> parameters;  // header #(...)
  std::vector<Port> ports;
  std::vector<AstItem> items;
  Span source_span;
  // End of the header (the `;` after the port list), and start of the
  // footer (`endmodule`/`end architecture`), both absolute offsets.
  std::size_t header_end = 0;
  std::size_t footer_begin = 0;

  const Port* FindPort(const std::string& port_name) const;

  // Structural equality: spans and header/footer offsets are ignored.
  bool operator==(const ModuleAst& other) const {
    return name == other.name && language == other.language &&
           parameters == other.parameters && ports == other.ports &&
           items == other.items;
  }
};

// Calls `fn(name)` for every identifier an expression reads.
template <typename Fn>
void ForEachIdentifier(const Expr& e, Fn&& fn) {
  switch (e.kind) {
    case Expr::Kind::kIdent:
    case Expr::Kind::kSlice:
      fn(e.name);
      break;
    case Expr::Kind::kIndex:
      fn(e.name);
      break;
    default:
      break;
  }
  for (const Expr& child : e.operands) ForEachIdentifier(child, fn);
}

}  // namespace symdirec::hdl

#endif  // SYMDIREC_HDL_AST_H_
