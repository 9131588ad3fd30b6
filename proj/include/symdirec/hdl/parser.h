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

#ifndef SYMDIREC_HDL_PARSER_H_
#define SYMDIREC_HDL_PARSER_H_

#include <string_view>
#include <vector>

#include "symdirec/hdl/ast.h"

namespace symdirec::hdl {

// Parses a source holding exactly one Verilog module.
//
// Accepted subset: ANSI-style module headers with optional `#(parameter ...)`,
// wire/reg/parameter/localparam declarations, continuous assigns, always
// blocks (if/else, case/casez/casex, blocking and nonblocking assignments,
// begin/end), and module instantiations with named or positional
// connections. Anything else raises UnsupportedConstruct; malformed input
// raises SyntaxError. Every referenced identifier must be declared.
ModuleAst ParseVerilog(std::string_view source);

// Parses a file that may hold several modules (e.g. an adder together with
// the half/full adder cells it instantiates).
std::vector<ModuleAst> ParseVerilogDesign(std::string_view source);

// Parses one VHDL entity plus its architecture. Only `std_logic` /
// `std_logic_vector` ports, `signal` declarations and concurrent signal
// assignments using and/or/xor/nand/nor/xnor/not are accepted; the result is
// expressed with Verilog operators so the rest of the library can treat both
// languages uniformly.
ModuleAst ParseVhdl(std::string_view source);

// All entity/architecture pairs in a VHDL file.
std::vector<ModuleAst> ParseVhdlDesign(std::string_view source);

struct LexToken {
  enum class Kind { kIdent, kKeyword, kNumber, kPunct };
  Kind kind;
  Span span;
};

// Token spans of a Verilog source, comments and directives skipped.
std::vector<LexToken> LexVerilog(std::string_view source);

// True for reserved words of the accepted Verilog subset and of the
// constructs it rejects.
bool IsVerilogKeyword(std::string_view word);

}  // namespace symdirec::hdl

#endif  // SYMDIREC_HDL_PARSER_H_
