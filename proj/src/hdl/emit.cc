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

#include "symdirec/hdl/emit.h"

#include <string>

namespace symdirec::hdl {
namespace {

int Precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kTernary:
      return 0;
    case Expr::Kind::kBinary: {
      const std::string& op = e.op;
      if (op == "||") return 1;
      if (op == "&&") return 2;
      if (op == "|" || op == "~|") return 3;
      if (op == "^" || op == "~^") return 4;
      if (op == "&" || op == "~&") return 5;
      if (op == "==" || op == "!=") return 6;
      if (op == "<" || op == "<=" || op == ">" || op == ">=") return 7;
      if (op == "<<" || op == ">>") return 8;
      if (op == "+" || op == "-") return 9;
      return 10;
    }
    case Expr::Kind::kUnary:
      return 11;
    default:
      return 12;
  }
}

std::string RenderNumber(const Expr& e) {
  if (e.width < 0) return std::to_string(e.value);
  std::string out = std::to_string(e.width) + "'";
  if (e.width <= 4) {
    out += "b";
    for (int i = e.width - 1; i >= 0; --i) {
      out.push_back(((e.value >> i) & 1) != 0 ? '1' : '0');
    }
  } else {
    static const char* kHex = "0123456789abcdef";
    std::string digits;
    std::uint64_t v = e.value;
    do {
      digits.insert(digits.begin(), kHex[v & 0xf]);
      v >>= 4;
    } while (v != 0);
    out += "h" + digits;
  }
  return out;
}

std::string Render(const Expr& e);

std::string Paren(const Expr& e, bool wrap) {
  return wrap ? "(" + Render(e) + ")" : Render(e);
}

std::string Render(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kIdent:
      return e.name;
    case Expr::Kind::kNumber:
      return RenderNumber(e);
    case Expr::Kind::kUnary: {
      const Expr& operand = e.operands[0];
      bool wrap = operand.kind == Expr::Kind::kUnary || Precedence(operand) < 11;
      return e.op + Paren(operand, wrap);
    }
    case Expr::Kind::kBinary: {
      int p = Precedence(e);
      const Expr& lhs = e.operands[0];
      const Expr& rhs = e.operands[1];
      return Paren(lhs, Precedence(lhs) < p) + " " + e.op + " " +
             Paren(rhs, Precedence(rhs) <= p);
    }
    case Expr::Kind::kTernary:
      return Paren(e.operands[0], Precedence(e.operands[0]) == 0) + " ? " +
             Render(e.operands[1]) + " : " + Render(e.operands[2]);
    case Expr::Kind::kConcat: {
      std::string out = "{";
      for (std::size_t i = 0; i < e.operands.size(); ++i) {
        if (i != 0) out += ", ";
        out += Render(e.operands[i]);
      }
      return out + "}";
    }
    case Expr::Kind::kReplicate: {
      const Expr& inner = e.operands[0];
      std::string body;
      if (inner.kind == Expr::Kind::kConcat) {
        body = Render(inner);
      } else {
        body = "{" + Render(inner) + "}";
      }
      return "{" + std::to_string(e.value) + body + "}";
    }
    case Expr::Kind::kIndex:
      return e.name + "[" + Render(e.operands[0]) + "]";
    case Expr::Kind::kSlice:
      return e.name + "[" + std::to_string(e.msb) + ":" + std::to_string(e.lsb) + "]";
  }
  return "";
}

std::string RenderRange(const Range& r) {
  if (r.scalar()) return "";
  return "[" + std::to_string(r.msb) + ":" + std::to_string(r.lsb) + "] ";
}

void Indent(std::string& out, int depth) { out.append(2 * depth, ' '); }

void RenderStmt(std::string& out, const Stmt& s, int depth);

// Statements that follow a keyword on the same line (`if (c) stmt`).
void RenderNested(std::string& out, const Stmt& s, int depth) {
  if (s.kind == Stmt::Kind::kBlock) {
    out += " ";
    RenderStmt(out, s, depth);
  } else {
    out += "\n";
    Indent(out, depth + 1);
    RenderStmt(out, s, depth + 1);
  }
}

void RenderStmt(std::string& out, const Stmt& s, int depth) {
  switch (s.kind) {
    case Stmt::Kind::kBlock:
      out += "begin\n";
      for (const Stmt& child : s.body) {
        Indent(out, depth + 1);
        RenderStmt(out, child, depth + 1);
      }
      Indent(out, depth);
      out += "end\n";
      break;
    case Stmt::Kind::kIf:
      out += "if (" + Render(*s.cond) + ")";
      RenderNested(out, s.body[0], depth);
      if (s.body.size() > 1) {
        Indent(out, depth);
        out += "else";
        if (s.body[1].kind == Stmt::Kind::kIf) {
          out += " ";
          RenderStmt(out, s.body[1], depth);
        } else {
          RenderNested(out, s.body[1], depth);
        }
      }
      break;
    case Stmt::Kind::kCase:
      out += s.case_keyword + " (" + Render(*s.cond) + ")\n";
      for (const Stmt::CaseArm& arm : s.arms) {
        Indent(out, depth + 1);
        if (arm.labels.empty()) {
          out += "default:";
        } else {
          for (std::size_t i = 0; i < arm.labels.size(); ++i) {
            if (i != 0) out += ", ";
            out += Render(arm.labels[i]);
          }
          out += ":";
        }
        RenderNested(out, arm.body[0], depth + 1);
      }
      Indent(out, depth);
      out += "endcase\n";
      break;
    case Stmt::Kind::kBlockingAssign:
      out += Render(*s.lhs) + " = " + Render(*s.rhs) + ";\n";
      break;
    case Stmt::Kind::kNonblockingAssign:
      out += Render(*s.lhs) + " <= " + Render(*s.rhs) + ";\n";
      break;
    case Stmt::Kind::kEmpty:
      out += ";\n";
      break;
  }
}

std::string RenderConnections(const std::vector<PortConnection>& conns) {
  std::string out;
  for (std::size_t i = 0; i < conns.size(); ++i) {
    if (i != 0) out += ", ";
    const PortConnection& c = conns[i];
    if (c.formal.empty()) {
      out += Render(*c.actual);
    } else {
      out += "." + c.formal + "(" + (c.actual ? Render(*c.actual) : "") + ")";
    }
  }
  return out;
}

void RenderItem(std::string& out, const AstItem& item) {
  Indent(out, 1);
  std::visit(
      [&out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        auto names = [](const std::vector<std::string>& ns) {
          std::string s;
          for (std::size_t i = 0; i < ns.size(); ++i) {
            if (i != 0) s += ", ";
            s += ns[i];
          }
          return s;
        };
        if constexpr (std::is_same_v<T, NetDecl>) {
          out += "wire " + RenderRange(p.range) + names(p.names) + ";\n";
        } else if constexpr (std::is_same_v<T, RegDecl>) {
          out += "reg " + RenderRange(p.range) + names(p.names) + ";\n";
        } else if constexpr (std::is_same_v<T, ParamDecl>) {
          out += p.local ? "localparam " : "parameter ";
          for (std::size_t i = 0; i < p.assignments.size(); ++i) {
            if (i != 0) out += ", ";
            out += p.assignments[i].first + " = " + Render(p.assignments[i].second);
          }
          out += ";\n";
        } else if constexpr (std::is_same_v<T, ContinuousAssign>) {
          out += "assign " + Render(p.lhs) + " = " + Render(p.rhs) + ";\n";
        } else if constexpr (std::is_same_v<T, AlwaysBlock>) {
          out += "always @";
          if (p.star) {
            out += "*";
          } else {
            out += "(";
            for (std::size_t i = 0; i < p.sensitivity.size(); ++i) {
              if (i != 0) out += " or ";
              const SensitivityItem& s = p.sensitivity[i];
              if (s.edge == SensitivityItem::Edge::kPosedge) out += "posedge ";
              if (s.edge == SensitivityItem::Edge::kNegedge) out += "negedge ";
              out += s.signal;
            }
            out += ")";
          }
          RenderNested(out, p.body, 1);
        } else if constexpr (std::is_same_v<T, Instantiation>) {
          out += p.module_name + " ";
          if (!p.parameters.empty()) {
            out += "#(" + RenderConnections(p.parameters) + ") ";
          }
          out += p.instance_name + " (" + RenderConnections(p.connections) + ");\n";
        }
      },
      item.payload);
}

}  // namespace

std::string EmitExpr(const Expr& expr) { return Render(expr); }

std::string Emit(const ModuleAst& ast) {
  std::string out = "module " + ast.name;
  if (!ast.parameters.empty()) {
    out += " #(";
    for (std::size_t i = 0; i < ast.parameters.size(); ++i) {
      if (i != 0) out += ", ";
      out += "parameter " + ast.parameters[i].first + " = " +
             Render(ast.parameters[i].second);
    }
    out += ")";
  }
  out += "(";
  for (std::size_t i = 0; i < ast.ports.size(); ++i) {
    const Port& p = ast.ports[i];
    if (i != 0) out += ", ";
    out += DirectionName(p.direction);
    out += " ";
    if (p.is_reg) out += "reg ";
    out += RenderRange(p.range) + p.name;
  }
  out += ");\n";
  for (const AstItem& item : ast.items) RenderItem(out, item);
  out += "endmodule\n";
  return out;
}

std::string EmitDesign(std::span<const ModuleAst> modules) {
  std::string out;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    if (i != 0) out += "\n";
    out += Emit(modules[i]);
  }
  return out;
}

}  // namespace symdirec::hdl
