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

#ifndef SYMDIREC_HDL_EMIT_H_
#define SYMDIREC_HDL_EMIT_H_

#include <span>
#include <string>

#include "symdirec/hdl/ast.h"

namespace symdirec::hdl {

// Deterministic Verilog rendering. Re-parsing the result yields a module
// structurally equal to `ast`. VHDL-sourced modules are rendered as Verilog.
std::string Emit(const ModuleAst& ast);

// Renders every module, separated by one blank line.
std::string EmitDesign(std::span<const ModuleAst> modules);

std::string EmitExpr(const Expr& expr);

}  // namespace symdirec::hdl

#endif  // SYMDIREC_HDL_EMIT_H_
