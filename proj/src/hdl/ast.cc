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

#include "symdirec/hdl/ast.h"

namespace symdirec::hdl {

const char* DirectionName(Direction d) {
  switch (d) {
    case Direction::kInput: return "input";
    case Direction::kOutput: return "output";
    case Direction::kInout: return "inout";
  }
  return "?";
}

const char* ItemKindName(ItemKind kind) {
  switch (kind) {
    case ItemKind::kNetDecl: return "NetDecl";
    case ItemKind::kRegDecl: return "RegDecl";
    case ItemKind::kParamDecl: return "ParamDecl";
    case ItemKind::kContinuousAssign: return "ContinuousAssign";
    case ItemKind::kAlwaysBlock: return "AlwaysBlock";
    case ItemKind::kInstantiation: return "Instantiation";
    case ItemKind::kWholeModule: return "WholeModule";
  }
  return "?";
}

Expr Expr::Ident(std::string name) {
  Expr e;
  e.kind = Kind::kIdent;
  e.name = std::move(name);
  return e;
}

Expr Expr::Number(std::uint64_t value, int width) {
  Expr e;
  e.kind = Kind::kNumber;
  e.value = value;
  e.width = width;
  return e;
}

Expr Expr::Unary(std::string op, Expr operand) {
  Expr e;
  e.kind = Kind::kUnary;
  e.op = std::move(op);
  e.operands.push_back(std::move(operand));
  return e;
}

Expr Expr::Binary(std::string op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::kBinary;
  e.op = std::move(op);
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  return e;
}

Expr Expr::Ternary(Expr cond, Expr then_expr, Expr else_expr) {
  Expr e;
  e.kind = Kind::kTernary;
  e.operands.push_back(std::move(cond));
  e.operands.push_back(std::move(then_expr));
  e.operands.push_back(std::move(else_expr));
  return e;
}

const Port* ModuleAst::FindPort(const std::string& port_name) const {
  for (const Port& p : ports) {
    if (p.name == port_name) return &p;
  }
  return nullptr;
}

}  // namespace symdirec::hdl
