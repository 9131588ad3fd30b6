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
#include <string>

#include "symdirec/error.h"
#include "symdirec/hdl/ast.h"
#include "symdirec/hdl/parser.h"

namespace symdirec::hdl {
namespace {

struct VToken {
  enum class Kind { kIdent, kChar, kBitString, kNumber, kPunct, kEof };
  Kind kind = Kind::kEof;
  std::string text;   // identifiers are lower-cased
  std::string raw;
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::vector<VToken> LexVhdl(std::string_view src) {
  std::vector<VToken> out;
  std::size_t pos = 0, line = 1, col = 1;
  auto advance = [&] {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  };
  for (;;) {
    while (pos < src.size()) {
      if (std::isspace(static_cast<unsigned char>(src[pos]))) {
        advance();
      } else if (src.substr(pos, 2) == "--") {
        while (pos < src.size() && src[pos] != '\n') advance();
      } else {
        break;
      }
    }
    VToken t;
    t.offset = pos;
    t.line = line;
    t.column = col;
    if (pos >= src.size()) {
      out.push_back(t);
      return out;
    }
    char c = src[pos];
    std::size_t start = pos;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
        advance();
      }
      t.kind = VToken::Kind::kIdent;
      t.text = Lower(src.substr(start, pos - start));
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        advance();
      }
      t.kind = VToken::Kind::kNumber;
      t.text = std::string(src.substr(start, pos - start));
    } else if (c == '\'' && pos + 2 < src.size() && src[pos + 2] == '\'') {
      char bit = src[pos + 1];
      if (bit != '0' && bit != '1') {
        throw UnsupportedConstruct("character literal '" + std::string(1, bit) + "'");
      }
      advance();
      advance();
      advance();
      t.kind = VToken::Kind::kChar;
      t.text = std::string(1, bit);
    } else if (c == '"') {
      advance();
      while (pos < src.size() && src[pos] != '"') {
        if (src[pos] != '0' && src[pos] != '1') {
          throw UnsupportedConstruct("non-binary bit string literal");
        }
        advance();
      }
      if (pos >= src.size()) {
        throw SyntaxError("unterminated string", t.line, t.column, "\"");
      }
      advance();
      t.kind = VToken::Kind::kBitString;
      t.text = std::string(src.substr(start + 1, pos - start - 2));
    } else {
      t.kind = VToken::Kind::kPunct;
      for (std::string_view m : {"<=", ":=", "/=", "=>", ">="}) {
        if (src.substr(pos, m.size()) == m) {
          t.text = std::string(m);
          break;
        }
      }
      if (t.text.empty()) {
        if (std::string_view("();:,.=<>&").find(c) == std::string_view::npos) {
          throw SyntaxError("unexpected character", t.line, t.column,
                            std::string(1, c));
        }
        t.text = std::string(1, c);
      }
      for (std::size_t i = 0; i < t.text.size(); ++i) advance();
    }
    t.raw = std::string(src.substr(start, pos - start));
    out.push_back(std::move(t));
  }
}

class VhdlParser {
 public:
  VhdlParser(std::string_view src, std::vector<VToken> toks)
      : src_(src), toks_(std::move(toks)) {}

  std::vector<ModuleAst> ParseAll() {
    std::vector<ModuleAst> modules;
    SkipContextClauses();
    while (!AtEof()) {
      modules.push_back(ParseEntityAndArchitecture());
      SkipContextClauses();
    }
    for (std::size_t i = 0; i < modules.size(); ++i) {
      std::size_t begin = i == 0 ? 0 : modules[i - 1].source_span.end();
      std::size_t end = i + 1 == modules.size() ? src_.size()
                                                : modules[i].source_span.end();
      modules[i].source_span = {begin, end - begin};
    }
    return modules;
  }

 private:
  const VToken& Peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool AtEof() const { return Peek().kind == VToken::Kind::kEof; }
  bool Is(std::string_view text) const {
    return (Peek().kind == VToken::Kind::kIdent ||
            Peek().kind == VToken::Kind::kPunct) &&
           Peek().text == text;
  }
  const VToken& Take() {
    const VToken& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool Accept(std::string_view text) {
    if (!Is(text)) return false;
    Take();
    return true;
  }
  [[noreturn]] void Fail(const std::string& message) const {
    const VToken& t = Peek();
    throw SyntaxError(message, t.line, t.column,
                      t.kind == VToken::Kind::kEof ? "<eof>" : t.raw);
  }
  void Expect(std::string_view text) {
    if (!Accept(text)) Fail("expected '" + std::string(text) + "'");
  }
  std::string ExpectIdent(const char* what) {
    if (Peek().kind != VToken::Kind::kIdent || IsReserved(Peek().text)) {
      Fail(std::string("expected ") + what);
    }
    return Take().text;
  }
  std::size_t EndOfPrevious() const {
    const VToken& t = toks_[pos_ - 1];
    return t.offset + t.raw.size();
  }
  static bool IsReserved(const std::string& w) {
    static const std::set<std::string> kReserved = {
        "entity", "is",     "port",    "in",    "out",     "inout",
        "end",    "architecture", "of", "begin", "signal", "and",
        "or",     "xor",    "nand",    "nor",   "xnor",    "not",
        "when",   "else",   "downto",  "to",    "library", "use",
        "process", "generic", "component", "generate", "function",
        "procedure", "variable", "constant", "type", "with", "select"};
    return kReserved.count(w) != 0;
  }

  void SkipContextClauses() {
    while (Is("library") || Is("use")) {
      while (!Accept(";")) {
        if (AtEof()) Fail("unterminated context clause");
        Take();
      }
    }
  }

  Range ParseType() {
    std::string type = ExpectIdent("type name");
    if (type == "std_logic" || type == "std_ulogic" || type == "bit") {
      return Range{};
    }
    if (type != "std_logic_vector" && type != "std_ulogic_vector" &&
        type != "bit_vector") {
      throw UnsupportedConstruct("VHDL type '" + type + "'");
    }
    Expect("(");
    int left = ParseInt();
    bool downto = Accept("downto");
    if (!downto) Expect("to");
    int right = ParseInt();
    Expect(")");
    Range r{left, right};
    if ((downto && left < right) || (!downto && left > right)) {
      Fail("null range");
    }
    if (r.width() > 64) throw UnsupportedConstruct("vector wider than 64 bits");
    return r;
  }

  int ParseInt() {
    if (Peek().kind != VToken::Kind::kNumber) Fail("expected integer");
    return std::stoi(Take().text);
  }

  ModuleAst ParseEntityAndArchitecture() {
    if (Is("package") || Is("configuration")) {
      throw UnsupportedConstruct("VHDL '" + Peek().text + "'");
    }
    std::size_t start = Peek().offset;
    Expect("entity");
    ModuleAst m;
    m.language = Language::kVhdl;
    m.name = ExpectIdent("entity name");
    Expect("is");
    if (Is("generic")) throw UnsupportedConstruct("VHDL generics");
    std::set<std::string> declared;
    if (Accept("port")) {
      Expect("(");
      do {
        std::vector<std::string> names;
        do {
          names.push_back(ExpectIdent("port name"));
        } while (Accept(","));
        Expect(":");
        Direction dir;
        if (Accept("in")) {
          dir = Direction::kInput;
        } else if (Accept("out")) {
          dir = Direction::kOutput;
        } else if (Accept("inout")) {
          dir = Direction::kInout;
        } else if (Is("buffer")) {
          throw UnsupportedConstruct("VHDL buffer ports");
        } else {
          Fail("expected port mode");
        }
        Range range = ParseType();
        for (std::string& n : names) {
          if (!declared.insert(n).second) Fail("duplicate port '" + n + "'");
          m.ports.push_back(Port{std::move(n), dir, false, range});
        }
      } while (Accept(";"));
      Expect(")");
      Expect(";");
    }
    Expect("end");
    Accept("entity");
    if (Peek().kind == VToken::Kind::kIdent && Peek().text == m.name) Take();
    Expect(";");

    SkipContextClauses();
    Expect("architecture");
    std::string arch = ExpectIdent("architecture name");
    Expect("of");
    if (ExpectIdent("entity name") != m.name) {
      Fail("architecture does not match entity '" + m.name + "'");
    }
    Expect("is");
    m.header_end = EndOfPrevious();

    std::vector<IdentRef> uses;
    while (!Is("begin")) {
      if (AtEof()) Fail("expected 'begin'");
      if (!Is("signal")) {
        throw UnsupportedConstruct("VHDL declaration '" + Peek().raw + "'");
      }
      std::size_t item_start = Peek().offset;
      Take();
      NetDecl decl;
      do {
        std::string n = ExpectIdent("signal name");
        if (!declared.insert(n).second) Fail("redeclared signal '" + n + "'");
        decl.names.push_back(std::move(n));
      } while (Accept(","));
      Expect(":");
      decl.range = ParseType();
      if (Is(":=")) throw UnsupportedConstruct("signal initializer");
      Expect(";");
      AstItem item;
      item.payload = std::move(decl);
      item.span = {item_start, EndOfPrevious() - item_start};
      m.items.push_back(std::move(item));
    }
    Expect("begin");
    while (!Is("end")) {
      if (AtEof()) Fail("expected 'end'");
      if (Is("process") || Is("with") || Is("generate") ||
          (Peek().kind == VToken::Kind::kIdent && Peek(1).text == ":")) {
        throw UnsupportedConstruct("VHDL statement '" + Peek().raw + "'");
      }
      std::size_t item_start = Peek().offset;
      ContinuousAssign assign;
      assign.lhs = ParseTarget(uses);
      Expect("<=");
      assign.rhs = ParseConditional(uses);
      Expect(";");
      AstItem item;
      item.payload = std::move(assign);
      item.span = {item_start, EndOfPrevious() - item_start};
      m.items.push_back(std::move(item));
    }
    m.footer_begin = Peek().offset;
    Expect("end");
    Accept("architecture");
    if (Peek().kind == VToken::Kind::kIdent && Peek().text == arch) Take();
    Expect(";");
    m.source_span = {start, EndOfPrevious() - start};

    for (const IdentRef& use : uses) {
      if (declared.count(use.name) == 0) {
        throw SyntaxError("undeclared identifier", use.line, use.column,
                          use.name);
      }
    }
    return m;
  }

  struct IdentRef {
    std::string name;
    std::size_t line;
    std::size_t column;
  };

  Expr ParseName(std::vector<IdentRef>& uses) {
    const VToken& t = Peek();
    std::string name = ExpectIdent("signal name");
    uses.push_back({name, t.line, t.column});
    if (!Accept("(")) return Expr::Ident(std::move(name));
    int first = ParseInt();
    if (Accept("downto")) {
      Expr e;
      e.kind = Expr::Kind::kSlice;
      e.name = std::move(name);
      e.msb = first;
      e.lsb = ParseInt();
      Expect(")");
      return e;
    }
    Expect(")");
    Expr e;
    e.kind = Expr::Kind::kIndex;
    e.name = std::move(name);
    e.operands.push_back(Expr::Number(static_cast<std::uint64_t>(first)));
    return e;
  }

  Expr ParseTarget(std::vector<IdentRef>& uses) { return ParseName(uses); }

  // expr [when cond else expr]...
  Expr ParseConditional(std::vector<IdentRef>& uses) {
    Expr value = ParseLogical(uses);
    if (!Accept("when")) return value;
    Expr cond = ParseLogical(uses);
    Expect("else");
    Expr rest = ParseConditional(uses);
    return Expr::Ternary(std::move(cond), std::move(value), std::move(rest));
  }

  static bool IsLogicalOp(const std::string& w) {
    return w == "and" || w == "or" || w == "xor" || w == "nand" ||
           w == "nor" || w == "xnor";
  }

  Expr ParseLogical(std::vector<IdentRef>& uses) {
    Expr lhs = ParseRelation(uses);
    while (Peek().kind == VToken::Kind::kIdent && IsLogicalOp(Peek().text)) {
      std::string op = Take().text;
      Expr rhs = ParseRelation(uses);
      if (op == "and") {
        lhs = Expr::Binary("&", std::move(lhs), std::move(rhs));
      } else if (op == "or") {
        lhs = Expr::Binary("|", std::move(lhs), std::move(rhs));
      } else if (op == "xor") {
        lhs = Expr::Binary("^", std::move(lhs), std::move(rhs));
      } else if (op == "xnor") {
        lhs = Expr::Binary("~^", std::move(lhs), std::move(rhs));
      } else if (op == "nand") {
        lhs = Expr::Unary("~", Expr::Binary("&", std::move(lhs), std::move(rhs)));
      } else {
        lhs = Expr::Unary("~", Expr::Binary("|", std::move(lhs), std::move(rhs)));
      }
    }
    return lhs;
  }

  Expr ParseRelation(std::vector<IdentRef>& uses) {
    Expr lhs = ParseUnary(uses);
    if (Accept("=")) return Expr::Binary("==", std::move(lhs), ParseUnary(uses));
    if (Accept("/=")) return Expr::Binary("!=", std::move(lhs), ParseUnary(uses));
    if (Is("&")) throw UnsupportedConstruct("VHDL concatenation");
    return lhs;
  }

  Expr ParseUnary(std::vector<IdentRef>& uses) {
    if (Accept("not")) return Expr::Unary("~", ParseUnary(uses));
    if (Accept("(")) {
      Expr e = ParseLogical(uses);
      Expect(")");
      return e;
    }
    if (Peek().kind == VToken::Kind::kChar) {
      return Expr::Number(Take().text == "1" ? 1 : 0, 1);
    }
    if (Peek().kind == VToken::Kind::kBitString) {
      std::string bits = Take().text;
      if (bits.empty() || bits.size() > 64) Fail("bad bit string width");
      std::uint64_t v = 0;
      for (char b : bits) v = (v << 1) | static_cast<std::uint64_t>(b == '1');
      return Expr::Number(v, static_cast<int>(bits.size()));
    }
    if (Peek().kind == VToken::Kind::kIdent && !IsReserved(Peek().text)) {
      return ParseName(uses);
    }
    Fail("expected expression");
  }

  std::string_view src_;
  std::vector<VToken> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<ModuleAst> ParseVhdlDesign(std::string_view source) {
  VhdlParser parser(source, LexVhdl(source));
  return parser.ParseAll();
}

ModuleAst ParseVhdl(std::string_view source) {
  std::vector<ModuleAst> modules = ParseVhdlDesign(source);
  if (modules.size() != 1) {
    throw SyntaxError("expected exactly one entity/architecture, found " +
                          std::to_string(modules.size()),
                      1, 1, "");
  }
  return std::move(modules.front());
}

}  // namespace symdirec::hdl
