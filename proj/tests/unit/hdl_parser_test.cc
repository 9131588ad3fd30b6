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

#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "symdirec/error.h"
#include "symdirec/hdl/emit.h"
#include "symdirec/hdl/eval.h"
#include "symdirec/hdl/parser.h"
#include "symdirec/hdl/segment.h"
#include "support/random_hdl.h"

namespace symdirec::hdl {
namespace {

constexpr const char* kHalfAdder =
    "module half_adder(input a, b, output sum, carry); assign sum = a ^ b; "
    "assign carry = a & b; endmodule";

std::string ReadData(const std::string& rel) {
  std::ifstream in(std::string(SYMDIREC_DATA_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(ParseVerilogTest, HalfAdder) {
  ModuleAst m = ParseVerilog(kHalfAdder);
  EXPECT_EQ(m.name, "half_adder");
  ASSERT_EQ(m.ports.size(), 4u);
  EXPECT_EQ(m.ports[0].direction, Direction::kInput);
  EXPECT_EQ(m.ports[1].direction, Direction::kInput);
  EXPECT_EQ(m.ports[2].direction, Direction::kOutput);
  EXPECT_EQ(m.ports[3].direction, Direction::kOutput);
  EXPECT_EQ(m.ports[3].name, "carry");
  ASSERT_EQ(m.items.size(), 2u);
  EXPECT_EQ(m.items[0].kind(), ItemKind::kContinuousAssign);
  EXPECT_EQ(m.items[1].kind(), ItemKind::kContinuousAssign);
}

TEST(ParseVerilogTest, EmptyModule) {
  ModuleAst m = ParseVerilog("module m(); endmodule");
  EXPECT_EQ(m.name, "m");
  EXPECT_TRUE(m.ports.empty());
  EXPECT_TRUE(m.items.empty());
}

TEST(ParseVerilogTest, MalformedAssignReportsEqualsSign) {
  const std::string src = "module m(input a); assign = a; endmodule";
  try {
    ParseVerilog(src);
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.token(), "=");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), src.find('=') + 1);
  }
}

TEST(ParseVerilogTest, RejectsUnsupportedConstructsByName) {
  const char* cases[] = {
      "module m(input a); initial begin end endmodule",
      "module m(input a); function f; endfunction endmodule",
      "module m(input a); generate endgenerate endmodule",
      "module m(input a); task t; endtask endmodule",
      "module m(a); input a; endmodule",
  };
  for (const char* src : cases) {
    EXPECT_THROW(ParseVerilog(src), UnsupportedConstruct) << src;
  }
  try {
    ParseVerilog("module m(input a); function f; endfunction endmodule");
  } catch (const UnsupportedConstruct& e) {
    EXPECT_NE(std::string(e.what()).find("function"), std::string::npos);
  }
}

TEST(ParseVerilogTest, UndeclaredIdentifierIsAnError) {
  EXPECT_THROW(ParseVerilog("module m(input a, output y); assign y = a & b; endmodule"),
               SyntaxError);
}

TEST(ParseVerilogTest, DuplicatePortIsAnError) {
  EXPECT_THROW(ParseVerilog("module m(input a, output a); endmodule"), SyntaxError);
}

TEST(ParseVerilogTest, AlwaysCaseAndInstantiation) {
  const std::string src = R"(
module top #(parameter W = 4)(input clk, input rst, input [W-1:0] d,
                             input [1:0] sel, output reg [W-1:0] q, output y);
  wire [W-1:0] t;
  reg r;
  localparam ZERO = 0;
  always @(posedge clk or posedge rst)
    if (rst) q <= ZERO;
    else begin
      case (sel)
        2'b00, 2'b01: q <= d;
        2'b10: q <= {d[W-2:0], 1'b0};
        default: q <= ~q;
      endcase
    end
  always @* r = ^d;
  half_adder u0 (.a(d[0]), .b(d[1]), .sum(t[0]), .carry());
  assign y = r;
endmodule
)";
  ModuleAst m = ParseVerilog(src);
  EXPECT_EQ(m.parameters.size(), 1u);
  EXPECT_EQ(m.ports[2].range.width(), 4);
  EXPECT_EQ(m.ports[4].is_reg, true);
  ASSERT_EQ(m.items.size(), 7u);
  EXPECT_EQ(m.items[3].kind(), ItemKind::kAlwaysBlock);
  const auto& always = std::get<AlwaysBlock>(m.items[3].payload);
  EXPECT_EQ(always.sensitivity.size(), 2u);
  EXPECT_TRUE(std::get<AlwaysBlock>(m.items[4].payload).star);
  const auto& inst = std::get<Instantiation>(m.items[5].payload);
  EXPECT_EQ(inst.module_name, "half_adder");
  EXPECT_EQ(inst.connections.size(), 4u);
  EXPECT_FALSE(inst.connections[3].actual.has_value());

  // Round-trip through the emitter.
  EXPECT_EQ(ParseVerilog(Emit(m)), m);
}

TEST(ParseVhdlTest, Table4Snippets) {
  ModuleAst ha = ParseVhdl(ReadData("snippets/half_adder.vhd"));
  EXPECT_EQ(ha.name, "half_adder");
  EXPECT_EQ(ha.language, Language::kVhdl);
  ASSERT_EQ(ha.ports.size(), 4u);
  EXPECT_EQ(ha.items.size(), 2u);

  ModuleAst fa = ParseVhdl(ReadData("snippets/full_adder.vhd"));
  EXPECT_EQ(fa.ports.size(), 5u);
  ModuleAst fa_v = ParseVerilog(ReadData("snippets/full_adder.v"));
  std::vector<ModuleAst> d1{fa}, d2{fa_v};
  CombinationalEvaluator e1(d1), e2(d2);
  for (std::uint64_t bits = 0; bits < 8; ++bits) {
    SignalValues in{{"a", bits & 1}, {"b", (bits >> 1) & 1}, {"cin", (bits >> 2) & 1}};
    EXPECT_EQ(e1.Evaluate("full_adder", in), e2.Evaluate("full_adder", in));
  }
}

TEST(ParseVhdlTest, ConditionalAssignAndVectors) {
  ModuleAst m = ParseVhdl(R"(
library ieee;
use ieee.std_logic_1164.all;
entity mux2 is
  port(a, b: in std_logic_vector(3 downto 0); s: in std_logic;
       y: out std_logic_vector(3 downto 0));
end mux2;
architecture rtl of mux2 is
  signal t : std_logic;
begin
  t <= not s;
  y <= a when t = '1' else b;
end rtl;
)");
  EXPECT_EQ(m.ports[0].range.width(), 4);
  ASSERT_EQ(m.items.size(), 3u);
  std::vector<ModuleAst> design{m};
  CombinationalEvaluator ev(design);
  EXPECT_EQ(ev.Evaluate("mux2", {{"a", 5}, {"b", 9}, {"s", 0}}).at("y"), 5u);
  EXPECT_EQ(ev.Evaluate("mux2", {{"a", 5}, {"b", 9}, {"s", 1}}).at("y"), 9u);
}

TEST(ParseVhdlTest, RejectsProcess) {
  EXPECT_THROW(ParseVhdl(R"(entity m is port(a: in std_logic; y: out std_logic); end;
architecture rtl of m is begin
  process(a) begin y <= a; end process;
end;)"),
               UnsupportedConstruct);
}

TEST(SegmentTest, HalfAdderIsOneBlock) {
  ModuleAst m = ParseVerilog(kHalfAdder);
  std::vector<CodeBlock> blocks = Segment(m, kHalfAdder);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].kind, ItemKind::kContinuousAssign);
  EXPECT_EQ(blocks[0].items.size(), 2u);
  EXPECT_EQ(blocks[0].identifiers_written, (std::set<std::string>{"carry", "sum"}));
  EXPECT_EQ(blocks[0].identifiers_read, (std::set<std::string>{"a", "b"}));
}

TEST(SegmentTest, AlwaysAndIndependentAssignAreSeparate) {
  const std::string src =
      "module m(input clk, input d, input e, output reg q, output y);\n"
      "  always @(posedge clk) q <= d;\n"
      "  assign y = ~e;\n"
      "endmodule\n";
  std::vector<CodeBlock> blocks = Segment(ParseVerilog(src), src);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].kind, ItemKind::kAlwaysBlock);
  EXPECT_EQ(blocks[1].kind, ItemKind::kContinuousAssign);
}

TEST(SegmentTest, InstantiationsAreNeverGrouped) {
  std::string src = "module rca8(input [7:0] a, b, input cin, output [7:0] s, output cout);\n"
                    "  wire [8:0] c;\n  assign c[0] = cin;\n";
  for (int i = 0; i < 8; ++i) {
    std::string n = std::to_string(i);
    src += "  full_adder fa" + n + " (.a(a[" + n + "]), .b(b[" + n + "]), .cin(c[" +
           n + "]), .sum(s[" + n + "]), .cout(c[" + std::to_string(i + 1) + "]));\n";
  }
  src += "  assign cout = c[8];\nendmodule\n";
  std::vector<CodeBlock> blocks = Segment(ParseVerilog(src), src);
  int instances = 0;
  for (const CodeBlock& b : blocks) instances += b.kind == ItemKind::kInstantiation;
  EXPECT_EQ(instances, 8);
  EXPECT_EQ(blocks.size(), 10u);
}

TEST(SegmentTest, EmptyModuleHasNoBlocks) {
  std::string src = "module m(); endmodule";
  EXPECT_TRUE(Segment(ParseVerilog(src), src).empty());
}

TEST(SegmentTest, BlocksTileTheSource) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    testing::RandomModuleOptions opts;
    opts.allow_always = seed % 3 == 0;
    std::string src = "// leading comment\n" + testing::RandomModule(seed, opts) + "\n";
    ModuleAst m = ParseVerilog(src);
    std::vector<CodeBlock> blocks = Segment(m, src);
    std::string rebuilt(Header(m, src));
    std::size_t cursor = m.header_end;
    for (const CodeBlock& b : blocks) {
      ASSERT_EQ(b.span.offset, cursor) << "gap or overlap, seed " << seed;
      cursor = b.span.end();
      rebuilt += b.text;
    }
    rebuilt += Footer(m, src);
    ASSERT_EQ(rebuilt, src) << "seed " << seed;
  }
}

TEST(ExtractIdentifiersTest, HalfAdder) {
  std::vector<IdentifierEntry> ids = ExtractIdentifiers(ParseVerilog(kHalfAdder));
  std::vector<IdentifierEntry> expected = {
      {"half_adder", IdentifierRole::kModule}, {"a", IdentifierRole::kPort},
      {"b", IdentifierRole::kPort},            {"sum", IdentifierRole::kPort},
      {"carry", IdentifierRole::kPort}};
  EXPECT_EQ(ids, expected);
}

TEST(ExtractIdentifiersTest, EmptyModuleAndNets) {
  EXPECT_EQ(ExtractIdentifiers(ParseVerilog("module m(); endmodule")),
            (std::vector<IdentifierEntry>{{"m", IdentifierRole::kModule}}));
  auto ids = ExtractIdentifiers(ParseVerilog("module m(); wire w; assign w = 1'b0; endmodule"));
  ASSERT_EQ(ids.size(), 2u);
  EXPECT_EQ(ids[1], (IdentifierEntry{"w", IdentifierRole::kNet}));
}

TEST(ExtractIdentifiersTest, NeverReturnsKeywords) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    testing::RandomModuleOptions opts;
    opts.allow_always = seed % 2 == 0;
    for (const IdentifierEntry& e :
         ExtractIdentifiers(ParseVerilog(testing::RandomModule(seed, opts)))) {
      ASSERT_FALSE(IsVerilogKeyword(e.name)) << e.name;
    }
  }
}

TEST(EmitTest, EmptyModuleCanonicalForm) {
  EXPECT_EQ(Emit(ParseVerilog("module m(); endmodule")), "module m();\nendmodule\n");
}

TEST(EmitTest, Table4RoundTrips) {
  for (const char* file : {"snippets/half_adder.v", "snippets/full_adder.v"}) {
    ModuleAst m = ParseVerilog(ReadData(file));
    std::string emitted = Emit(m);
    EXPECT_EQ(ParseVerilog(emitted), m) << emitted;
    EXPECT_EQ(Emit(ParseVerilog(emitted)), emitted);
  }
  ModuleAst ha = ParseVerilog(kHalfAdder);
  EXPECT_EQ(ParseVerilog(Emit(ha)), ha);
}

TEST(EmitTest, RoundTripProperty) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    testing::RandomModuleOptions opts;
    opts.allow_always = seed % 4 == 0;
    ModuleAst m = ParseVerilog(testing::RandomModule(seed, opts));
    ASSERT_EQ(ParseVerilog(Emit(m)), m) << Emit(m);
  }
}

TEST(EmitTest, OperatorPrecedenceIsPreserved) {
  const std::string src =
      "module m(input [3:0] a, b, output [4:0] y, output z);\n"
      "  assign y = (a - (b - 4'd1)) + {1'b0, a & ~(b | a)};\n"
      "  assign z = a[0] ? ~&b : (a == b) && !(|a);\n"
      "endmodule\n";
  ModuleAst m = ParseVerilog(src);
  EXPECT_EQ(ParseVerilog(Emit(m)), m) << Emit(m);
}

TEST(EvalTest, ContextDeterminedCarryOut) {
  const std::string src =
      "module add4(input [3:0] a, b, output [3:0] s, output c);\n"
      "  assign {c, s} = a + b;\n"
      "endmodule\n";
  std::vector<ModuleAst> design{ParseVerilog(src)};
  CombinationalEvaluator ev(design);
  SignalValues out = ev.Evaluate("add4", {{"a", 9}, {"b", 8}});
  EXPECT_EQ(out.at("s"), 1u);
  EXPECT_EQ(out.at("c"), 1u);
  EXPECT_EQ(ev.InputBits("add4"), 8);
}

TEST(EvalTest, HierarchicalRippleAdder) {
  std::string src = ReadData("snippets/half_adder.v") + ReadData("snippets/full_adder.v") +
                    "module rca2(input [1:0] a, b, output [1:0] s, output co);\n"
                    "  wire c1;\n"
                    "  half_adder h (.a(a[0]), .b(b[0]), .sum(s[0]), .carry(c1));\n"
                    "  full_adder f (a[1], b[1], c1, s[1], co);\n"
                    "endmodule\n";
  std::vector<ModuleAst> design = ParseVerilogDesign(src);
  ASSERT_EQ(design.size(), 3u);
  CombinationalEvaluator ev(design);
  for (std::uint64_t a = 0; a < 4; ++a) {
    for (std::uint64_t b = 0; b < 4; ++b) {
      SignalValues out = ev.Evaluate("rca2", {{"a", a}, {"b", b}});
      EXPECT_EQ(out.at("s") | (out.at("co") << 2), a + b);
    }
  }
}

TEST(EvalTest, AlwaysBlockIsNotCombinational) {
  std::vector<ModuleAst> design{
      ParseVerilog("module m(input clk, d, output reg q); always @(posedge clk) q <= d; endmodule")};
  CombinationalEvaluator ev(design);
  EXPECT_THROW(ev.Evaluate("m", {}), NotCombinational);
}

}  // namespace
}  // namespace symdirec::hdl
