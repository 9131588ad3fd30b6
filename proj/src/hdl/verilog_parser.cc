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
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>

#include "symdirec/error.h"
#include "symdirec/hdl/ast.h"
#include "symdirec/hdl/parser.h"

namespace symdirec::hdl {
namespace {

const std::unordered_set<std::string_view>& Keywords() {
  static const std::unordered_set<std::string_view> kKeywords = {
      "module",     "endmodule", "input",       "output",     "inout",
      "wire",       "reg",       "logic",       "tri",        "signed",
      "parameter",  "localparam", "assign",     "always",     "begin",
      "end",        "if",        "else",        "case",       "casez",
      "casex",      "endcase",   "default",     "posedge",    "negedge",
      "or",         "and",       "not",         "nand",       "nor",
      "xor",        "xnor",      "buf",         "initial",    "generate",
      "endgenerate", "genvar",   "function",    "endfunction", "task",
      "endtask",    "interface", "endinterface", "integer",   "real",
      "time",       "for",       "while",       "repeat",     "forever",
      "always_comb", "always_ff", "always_latch", "supply0",  "supply1",
      "package",    "endpackage", "program",    "endprogram", "class",
      "endclass",   "typedef",   "struct",      "enum",       "specify",
      "endspecify", "primitive", "endprimitive", "fork",      "join",
      "wait",       "disable",   "event",       "defparam",   "automatic",
  };
  return kKeywords;
}

// Constructs recognised only so that they can be rejected by name.
const std::set<std::string, std::less<>>& RejectedKeywords() {
  static const std::set<std::string, std::less<>> kRejected = {
      "initial",  "generate",  "genvar",      "function",   "task",
      "interface", "integer",  "real",        "time",       "for",
      "while",    "repeat",    "forever",     "always_comb", "always_ff",
      "always_latch", "supply0", "supply1",   "package",    "program",
      "class",    "typedef",   "struct",      "enum",       "specify",
      "primitive", "fork",     "wait",        "disable",    "event",
      "defparam", "and",       "or",          "not",        "nand",
      "nor",      "xor",       "xnor",        "buf",
  };
  return kRejected;
}

struct Token {
  enum class Kind { kIdent, kNumber, kPunct, kEof };
  Kind kind = Kind::kEof;
  std::string text;
  std::size_t offset = 0;
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;
  std::uint64_t value = 0;
  int width = -1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    for (;;) {
      SkipTrivia();
      Token t;
      t.offset = pos_;
      t.line = line_;
      t.column = column_;
      if (pos_ >= src_.size()) {
        t.kind = Token::Kind::kEof;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_' || src_[pos_] == '$')) {
          Advance();
        }
        t.kind = Token::Kind::kIdent;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'') {
        LexNumber(t);
      } else if (c == '\\') {
        throw UnsupportedConstruct(Where(t) + "escaped identifier");
      } else if (c == '"') {
        throw UnsupportedConstruct(Where(t) + "string literal");
      } else if (c == '$') {
        throw UnsupportedConstruct(Where(t) + "system task or function");
      } else {
        static const char* kMulti[] = {"===", "!==", "<<<", ">>>", "==", "!=",
                                       "<=",  ">=",  "&&",  "||",  "<<", ">>",
                                       "~&",  "~|",  "~^",  "^~",  "**"};
        t.kind = Token::Kind::kPunct;
        for (const char* m : kMulti) {
          std::string_view mv(m);
          if (src_.substr(pos_, mv.size()) == mv) {
            t.text = std::string(mv);
            break;
          }
        }
        if (t.text.empty()) {
          static const std::string_view kSingle = "()[]{};,.:?=@#+-*/%&|^~!<>";
          if (kSingle.find(c) == std::string_view::npos) {
            throw SyntaxError("unexpected character", t.line, t.column,
                              std::string(1, c));
          }
          t.text = std::string(1, c);
        }
        for (std::size_t i = 0; i < t.text.size(); ++i) Advance();
      }
      t.end = pos_;
      out.push_back(std::move(t));
    }
  }

 private:
  static std::string Where(const Token& t) {
    return std::to_string(t.line) + ":" + std::to_string(t.column) + ": ";
  }

  void Advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void SkipTrivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') Advance();
      } else if (src_.substr(pos_, 2) == "/*") {
        std::size_t line = line_, col = column_;
        Advance();
        Advance();
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") Advance();
        if (pos_ >= src_.size()) {
          throw SyntaxError("unterminated block comment", line, col, "/*");
        }
        Advance();
        Advance();
      } else if (c == '`') {
        // Compiler directives (`timescale, `default_nettype) carry no
        // structure for this subset.
        std::size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != '\n') Advance();
        std::string_view directive = src_.substr(start, pos_ - start);
        if (directive.rfind("`timescale", 0) != 0 &&
            directive.rfind("`default_nettype", 0) != 0 &&
            directive.rfind("`resetall", 0) != 0) {
          throw UnsupportedConstruct("compiler directive " +
                                     std::string(directive));
        }
      } else {
        return;
      }
    }
  }

  void LexNumber(Token& t) {
    t.kind = Token::Kind::kNumber;
    std::size_t start = pos_;
    std::string digits;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_')) {
      if (src_[pos_] != '_') digits.push_back(src_[pos_]);
      Advance();
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      throw UnsupportedConstruct(Where(t) + "real literal");
    }
    std::size_t save_pos = pos_, save_line = line_, save_col = column_;
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) {
      Advance();
    }
    if (pos_ < src_.size() && src_[pos_] == '\'') {
      Advance();
      if (pos_ < src_.size() && (src_[pos_] == 's' || src_[pos_] == 'S')) {
        Advance();
      }
      if (pos_ >= src_.size()) {
        throw SyntaxError("truncated based literal", t.line, t.column, "'");
      }
      char base_char = static_cast<char>(
          std::tolower(static_cast<unsigned char>(src_[pos_])));
      int base = 0;
      switch (base_char) {
        case 'b': base = 2; break;
        case 'o': base = 8; break;
        case 'd': base = 10; break;
        case 'h': base = 16; break;
        default:
          throw SyntaxError("bad base in literal", line_, column_,
                            std::string(1, src_[pos_]));
      }
      Advance();
      while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) {
        Advance();
      }
      std::string body;
      while (pos_ < src_.size() &&
             (std::isxdigit(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_' || src_[pos_] == 'x' || src_[pos_] == 'X' ||
              src_[pos_] == 'z' || src_[pos_] == 'Z' || src_[pos_] == '?')) {
        if (src_[pos_] != '_') body.push_back(src_[pos_]);
        Advance();
      }
      if (body.empty()) {
        throw SyntaxError("empty literal body", t.line, t.column,
                          std::string(src_.substr(start, pos_ - start)));
      }
      std::uint64_t value = 0;
      for (char d : body) {
        char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(d)));
        if (lower == 'x' || lower == 'z' || lower == '?') {
          throw UnsupportedConstruct(Where(t) + "x/z literal " +
                                     std::string(src_.substr(start, pos_ - start)));
        }
        int v = std::isdigit(static_cast<unsigned char>(d)) ? d - '0' : lower - 'a' + 10;
        if (v >= base) {
          throw SyntaxError("digit out of range for base", t.line, t.column,
                            std::string(src_.substr(start, pos_ - start)));
        }
        value = value * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(v);
      }
      int width = -1;
      if (!digits.empty()) {
        width = std::stoi(digits);
        if (width < 1 || width > 64) {
          throw UnsupportedConstruct(Where(t) + "literal width " + digits +
                                     " (1..64 supported)");
        }
        if (width < 64) value &= (std::uint64_t{1} << width) - 1;
      }
      t.value = value;
      t.width = width;
    } else {
      pos_ = save_pos;
      line_ = save_line;
      column_ = save_col;
      if (digits.size() > 19) {
        throw UnsupportedConstruct(Where(t) + "decimal literal too large");
      }
      t.value = std::stoull(digits);
      t.width = -1;
    }
    t.text = std::string(src_.substr(start, pos_ - start));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct IdentUse {
  std::string name;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  Parser(std::string_view src, std::vector<Token> tokens)
      : src_(src), toks_(std::move(tokens)) {}

  std::vector<ModuleAst> ParseAll() {
    std::vector<ModuleAst> modules;
    while (!AtEof()) {
      if (Peek().kind == Token::Kind::kIdent && Peek().text != "module" &&
          Keywords().count(Peek().text) != 0) {
        throw UnsupportedConstruct(Here() + "'" + Peek().text +
                                   "' outside a module");
      }
      modules.push_back(ParseModule());
    }
    // Leading/trailing trivia belongs to the adjacent module so that the
    // modules' spans tile the whole source.
    for (std::size_t i = 0; i < modules.size(); ++i) {
      std::size_t begin = i == 0 ? 0 : modules[i - 1].source_span.end();
      std::size_t end = i + 1 == modules.size() ? src_.size()
                                                : modules[i].source_span.end();
      modules[i].source_span = {begin, end - begin};
    }
    return modules;
  }

 private:
  const Token& Peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool AtEof() const { return Peek().kind == Token::Kind::kEof; }
  bool Is(std::string_view text) const {
    return Peek().kind != Token::Kind::kEof &&
           Peek().kind != Token::Kind::kNumber && Peek().text == text;
  }
  const Token& Take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool Accept(std::string_view text) {
    if (!Is(text)) return false;
    Take();
    return true;
  }
  [[noreturn]] void Fail(const std::string& message) const {
    const Token& t = Peek();
    throw SyntaxError(message, t.line, t.column,
                      t.kind == Token::Kind::kEof ? "<eof>" : t.text);
  }
  const Token& Expect(std::string_view text) {
    if (!Is(text)) Fail("expected '" + std::string(text) + "'");
    return Take();
  }
  std::string Here() const {
    return std::to_string(Peek().line) + ":" + std::to_string(Peek().column) +
           ": ";
  }
  std::string ExpectIdent(const char* what) {
    const Token& t = Peek();
    if (t.kind != Token::Kind::kIdent) Fail(std::string("expected ") + what);
    if (Keywords().count(t.text) != 0) {
      Fail(std::string("expected ") + what + ", found keyword");
    }
    return Take().text;
  }
  std::size_t EndOfPrevious() const {
    const Token& t = toks_[pos_ - 1];
    return t.offset + t.text.size();
  }

  void RejectIfUnsupported() const {
    const Token& t = Peek();
    if (t.kind == Token::Kind::kIdent && RejectedKeywords().count(t.text) != 0) {
      throw UnsupportedConstruct(Here() + "'" + t.text + "'");
    }
  }

  // --- constant evaluation -------------------------------------------------

  std::int64_t ConstEval(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::kNumber:
        return static_cast<std::int64_t>(e.value);
      case Expr::Kind::kIdent: {
        auto it = params_.find(e.name);
        if (it == params_.end()) {
          throw UnsupportedConstruct("non-constant '" + e.name +
                                     "' in constant expression");
        }
        return it->second;
      }
      case Expr::Kind::kUnary: {
        std::int64_t v = ConstEval(e.operands[0]);
        if (e.op == "-") return -v;
        if (e.op == "+") return v;
        if (e.op == "~") return ~v;
        if (e.op == "!") return v == 0;
        break;
      }
      case Expr::Kind::kBinary: {
        std::int64_t a = ConstEval(e.operands[0]);
        std::int64_t b = ConstEval(e.operands[1]);
        if (e.op == "+") return a + b;
        if (e.op == "-") return a - b;
        if (e.op == "*") return a * b;
        if ((e.op == "/" || e.op == "%") && b == 0) {
          throw UnsupportedConstruct("division by zero in constant expression");
        }
        if (e.op == "/") return a / b;
        if (e.op == "%") return a % b;
        if (e.op == "<<") return a << b;
        if (e.op == ">>") return a >> b;
        break;
      }
      case Expr::Kind::kTernary:
        return ConstEval(e.operands[0]) != 0 ? ConstEval(e.operands[1])
                                             : ConstEval(e.operands[2]);
      default:
        break;
    }
    throw UnsupportedConstruct("unsupported constant expression");
  }

  int ConstInt(const Expr& e) const {
    std::int64_t v = ConstEval(e);
    if (v < 0 || v > 1'000'000) {
      throw UnsupportedConstruct("constant out of range: " + std::to_string(v));
    }
    return static_cast<int>(v);
  }

  Range ParseOptionalRange() {
    Range r;
    if (!Accept("[")) return r;
    r.msb = ConstInt(ParseExpr());
    Expect(":");
    r.lsb = ConstInt(ParseExpr());
    Expect("]");
    if (r.width() > 64) {
      throw UnsupportedConstruct("vector wider than 64 bits");
    }
    return r;
  }

  // --- module --------------------------------------------------------------

  ModuleAst ParseModule() {
    const Token& kw = Expect("module");
    std::size_t module_offset = kw.offset;
    params_.clear();
    uses_.clear();
    declared_.clear();

    ModuleAst m;
    m.language = Language::kVerilog;
    m.name = ExpectIdent("module name");

    if (Accept("#")) {
      Expect("(");
      if (!Is(")")) {
        do {
          Accept("parameter");
          if (Is("[")) ParseOptionalRange();
          std::string name = ExpectIdent("parameter name");
          Expect("=");
          Expr value = ParseExpr();
          params_[name] = ConstEval(value);
          declared_.insert(name);
          m.parameters.emplace_back(name, std::move(value));
        } while (Accept(","));
      }
      Expect(")");
    }

    if (Accept("(")) {
      if (!Is(")")) ParsePortList(m);
      Expect(")");
    }
    Expect(";");
    m.header_end = EndOfPrevious();

    while (!Is("endmodule")) {
      if (AtEof()) Fail("missing 'endmodule'");
      m.items.push_back(ParseItem());
    }
    m.footer_begin = Peek().offset;
    Take();
    m.source_span = {module_offset, EndOfPrevious() - module_offset};

    for (const IdentUse& use : uses_) {
      if (declared_.count(use.name) == 0) {
        throw SyntaxError("undeclared identifier", use.line, use.column,
                          use.name);
      }
    }
    return m;
  }

  void ParsePortList(ModuleAst& m) {
    if (!(Is("input") || Is("output") || Is("inout"))) {
      throw UnsupportedConstruct(Here() + "non-ANSI port list");
    }
    Port current;
    do {
      if (Is("input") || Is("output") || Is("inout")) {
        std::string dir = Take().text;
        current = Port{};
        current.direction = dir == "input"    ? Direction::kInput
                            : dir == "output" ? Direction::kOutput
                                              : Direction::kInout;
        if (Accept("reg") || Accept("logic")) {
          current.is_reg = true;
        } else {
          Accept("wire");
        }
        if (Is("signed")) throw UnsupportedConstruct(Here() + "'signed'");
        current.range = ParseOptionalRange();
      }
      const Token& name_tok = Peek();
      Port p = current;
      p.name = ExpectIdent("port name");
      if (m.FindPort(p.name) != nullptr) {
        throw SyntaxError("duplicate port", name_tok.line, name_tok.column,
                          p.name);
      }
      declared_.insert(p.name);
      m.ports.push_back(std::move(p));
    } while (Accept(","));
  }

  std::vector<std::string> ParseNameList() {
    std::vector<std::string> names;
    do {
      const Token& t = Peek();
      std::string name = ExpectIdent("identifier");
      if (declared_.count(name) != 0) {
        throw SyntaxError("redeclared identifier", t.line, t.column, name);
      }
      declared_.insert(name);
      names.push_back(std::move(name));
      if (Is("=")) {
        throw UnsupportedConstruct(Here() + "declaration with initializer");
      }
      if (Is("[")) throw UnsupportedConstruct(Here() + "memory array");
    } while (Accept(","));
    return names;
  }

  AstItem ParseItem() {
    RejectIfUnsupported();
    std::size_t start = Peek().offset;
    AstItem item;
    if (Is("input") || Is("output") || Is("inout")) {
      throw UnsupportedConstruct(Here() + "non-ANSI port declaration");
    }
    if (Accept("wire") || Accept("tri")) {
      if (Is("signed")) throw UnsupportedConstruct(Here() + "'signed'");
      NetDecl decl;
      decl.range = ParseOptionalRange();
      decl.names = ParseNameList();
      Expect(";");
      item.payload = std::move(decl);
    } else if (Accept("reg") || Accept("logic")) {
      if (Is("signed")) throw UnsupportedConstruct(Here() + "'signed'");
      RegDecl decl;
      decl.range = ParseOptionalRange();
      decl.names = ParseNameList();
      Expect(";");
      item.payload = std::move(decl);
    } else if (Is("parameter") || Is("localparam")) {
      ParamDecl decl;
      decl.local = Take().text == "localparam";
      if (Is("[")) ParseOptionalRange();
      do {
        const Token& t = Peek();
        std::string name = ExpectIdent("parameter name");
        if (declared_.count(name) != 0) {
          throw SyntaxError("redeclared identifier", t.line, t.column, name);
        }
        Expect("=");
        Expr value = ParseExpr();
        params_[name] = ConstEval(value);
        declared_.insert(name);
        decl.assignments.emplace_back(std::move(name), std::move(value));
      } while (Accept(","));
      Expect(";");
      item.payload = std::move(decl);
    } else if (Accept("assign")) {
      ContinuousAssign assign;
      assign.lhs = ParseLvalue();
      Expect("=");
      assign.rhs = ParseExpr();
      if (Is(",")) {
        throw UnsupportedConstruct(Here() + "multiple assignments in one 'assign'");
      }
      Expect(";");
      item.payload = std::move(assign);
    } else if (Accept("always")) {
      item.payload = ParseAlways();
    } else if (Peek().kind == Token::Kind::kIdent &&
               Keywords().count(Peek().text) == 0) {
      item.payload = ParseInstantiation();
    } else {
      Fail("expected module item");
    }
    item.span = {start, EndOfPrevious() - start};
    return item;
  }

  AlwaysBlock ParseAlways() {
    AlwaysBlock block;
    if (!Accept("@")) {
      throw UnsupportedConstruct(Here() + "always block without event control");
    }
    if (Accept("*")) {
      block.star = true;
    } else {
      Expect("(");
      if (Accept("*")) {
        block.star = true;
      } else {
        do {
          SensitivityItem s;
          if (Accept("posedge")) {
            s.edge = SensitivityItem::Edge::kPosedge;
          } else if (Accept("negedge")) {
            s.edge = SensitivityItem::Edge::kNegedge;
          }
          const Token& t = Peek();
          s.signal = ExpectIdent("signal name");
          uses_.push_back({s.signal, t.line, t.column});
          block.sensitivity.push_back(std::move(s));
        } while (Accept("or") || Accept(","));
      }
      Expect(")");
    }
    block.body = ParseStmt();
    return block;
  }

  Stmt ParseStmt() {
    RejectIfUnsupported();
    Stmt s;
    if (Accept("begin")) {
      if (Is(":")) throw UnsupportedConstruct(Here() + "named block");
      s.kind = Stmt::Kind::kBlock;
      while (!Accept("end")) {
        if (AtEof()) Fail("missing 'end'");
        s.body.push_back(ParseStmt());
      }
    } else if (Accept("if")) {
      s.kind = Stmt::Kind::kIf;
      Expect("(");
      s.cond = ParseExpr();
      Expect(")");
      s.body.push_back(ParseStmt());
      if (Accept("else")) s.body.push_back(ParseStmt());
    } else if (Is("case") || Is("casez") || Is("casex")) {
      s.kind = Stmt::Kind::kCase;
      s.case_keyword = Take().text;
      Expect("(");
      s.cond = ParseExpr();
      Expect(")");
      bool seen_default = false;
      while (!Accept("endcase")) {
        if (AtEof()) Fail("missing 'endcase'");
        Stmt::CaseArm arm;
        if (Accept("default")) {
          if (seen_default) Fail("duplicate default arm");
          seen_default = true;
          Accept(":");
        } else {
          do {
            arm.labels.push_back(ParseExpr());
          } while (Accept(","));
          Expect(":");
        }
        arm.body.push_back(ParseStmt());
        s.arms.push_back(std::move(arm));
      }
    } else if (Accept(";")) {
      s.kind = Stmt::Kind::kEmpty;
    } else {
      s.lhs = ParseLvalue();
      if (Accept("=")) {
        s.kind = Stmt::Kind::kBlockingAssign;
      } else if (Accept("<=")) {
        s.kind = Stmt::Kind::kNonblockingAssign;
      } else {
        Fail("expected '=' or '<='");
      }
      s.rhs = ParseExpr();
      Expect(";");
    }
    return s;
  }

  Instantiation ParseInstantiation() {
    Instantiation inst;
    inst.module_name = Take().text;
    if (Accept("#")) {
      Expect("(");
      inst.parameters = ParseConnections();
      Expect(")");
    }
    inst.instance_name = ExpectIdent("instance name");
    if (Is("[")) throw UnsupportedConstruct(Here() + "instance array");
    Expect("(");
    inst.connections = ParseConnections();
    Expect(")");
    if (Is(",")) {
      throw UnsupportedConstruct(Here() + "multiple instances in one statement");
    }
    Expect(";");
    return inst;
  }

  std::vector<PortConnection> ParseConnections() {
    std::vector<PortConnection> conns;
    if (Is(")")) return conns;
    bool named = Is(".");
    do {
      PortConnection c;
      if (named) {
        Expect(".");
        if (Is("*")) throw UnsupportedConstruct(Here() + "'.*' connection");
        const Token& t = Peek();
        if (t.kind != Token::Kind::kIdent) Fail("expected port name");
        c.formal = Take().text;
        Expect("(");
        if (!Is(")")) c.actual = ParseExpr();
        Expect(")");
      } else {
        if (Is(".")) Fail("mixed named and positional connections");
        c.actual = ParseExpr();
      }
      conns.push_back(std::move(c));
    } while (Accept(","));
    return conns;
  }

  // --- expressions ---------------------------------------------------------

  Expr ParseLvalue() {
    if (Accept("{")) {
      Expr e;
      e.kind = Expr::Kind::kConcat;
      do {
        e.operands.push_back(ParseLvalue());
      } while (Accept(","));
      Expect("}");
      return e;
    }
    if (Peek().kind != Token::Kind::kIdent) Fail("expected assignment target");
    return ParseNamed();
  }

  Expr ParseNamed() {
    const Token& t = Peek();
    std::string name = ExpectIdent("identifier");
    uses_.push_back({name, t.line, t.column});
    if (!Accept("[")) return Expr::Ident(std::move(name));
    Expr first = ParseExpr();
    if (Accept(":")) {
      Expr e;
      e.kind = Expr::Kind::kSlice;
      e.name = std::move(name);
      e.msb = ConstInt(first);
      e.lsb = ConstInt(ParseExpr());
      Expect("]");
      return e;
    }
    Expect("]");
    Expr e;
    e.kind = Expr::Kind::kIndex;
    e.name = std::move(name);
    e.operands.push_back(std::move(first));
    return e;
  }

  static int BinaryPrecedence(const std::string& op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "|" || op == "~|") return 3;
    if (op == "^" || op == "~^" || op == "^~") return 4;
    if (op == "&" || op == "~&") return 5;
    if (op == "==" || op == "!=" || op == "===" || op == "!==") return 6;
    if (op == "<" || op == "<=" || op == ">" || op == ">=") return 7;
    if (op == "<<" || op == ">>" || op == "<<<" || op == ">>>") return 8;
    if (op == "+" || op == "-") return 9;
    if (op == "*" || op == "/" || op == "%") return 10;
    return 0;
  }

  Expr ParseExpr() {
    Expr cond = ParseBinary(1);
    if (!Accept("?")) return cond;
    Expr then_expr = ParseExpr();
    Expect(":");
    Expr else_expr = ParseExpr();
    return Expr::Ternary(std::move(cond), std::move(then_expr),
                         std::move(else_expr));
  }

  Expr ParseBinary(int min_prec) {
    Expr lhs = ParseUnary();
    for (;;) {
      const Token& t = Peek();
      if (t.kind != Token::Kind::kPunct) break;
      if (t.text == "**") throw UnsupportedConstruct(Here() + "'**'");
      int prec = BinaryPrecedence(t.text);
      if (prec == 0 || prec < min_prec) break;
      std::string op = Take().text;
      if (op == "^~") op = "~^";
      if (op == "===" || op == "!==" || op == "<<<" || op == ">>>") {
        throw UnsupportedConstruct("operator '" + op + "'");
      }
      Expr rhs = ParseBinary(prec + 1);
      lhs = Expr::Binary(std::move(op), std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr ParseUnary() {
    static const std::set<std::string, std::less<>> kUnary = {
        "+", "-", "!", "~", "&", "~&", "|", "~|", "^", "~^", "^~"};
    if (Peek().kind == Token::Kind::kPunct && kUnary.count(Peek().text) != 0) {
      std::string op = Take().text;
      if (op == "^~") op = "~^";
      return Expr::Unary(std::move(op), ParseUnary());
    }
    return ParsePrimary();
  }

  Expr ParsePrimary() {
    const Token& t = Peek();
    if (t.kind == Token::Kind::kNumber) {
      Take();
      return Expr::Number(t.value, t.width);
    }
    if (Accept("(")) {
      Expr e = ParseExpr();
      Expect(")");
      return e;
    }
    if (Accept("{")) {
      Expr first = ParseExpr();
      if (Accept("{")) {
        Expr rep;
        rep.kind = Expr::Kind::kReplicate;
        rep.value = static_cast<std::uint64_t>(ConstInt(first));
        if (rep.value == 0) Fail("zero replication count");
        Expr inner;
        inner.kind = Expr::Kind::kConcat;
        do {
          inner.operands.push_back(ParseExpr());
        } while (Accept(","));
        Expect("}");
        Expect("}");
        rep.operands.push_back(inner.operands.size() == 1
                                   ? std::move(inner.operands[0])
                                   : std::move(inner));
        return rep;
      }
      Expr e;
      e.kind = Expr::Kind::kConcat;
      e.operands.push_back(std::move(first));
      while (Accept(",")) e.operands.push_back(ParseExpr());
      Expect("}");
      return e;
    }
    if (t.kind == Token::Kind::kIdent) {
      RejectIfUnsupported();
      if (Keywords().count(t.text) != 0) Fail("unexpected keyword");
      return ParseNamed();
    }
    Fail("expected expression");
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, std::int64_t, std::less<>> params_;
  std::vector<IdentUse> uses_;
  std::set<std::string, std::less<>> declared_;
};

}  // namespace

std::vector<LexToken> LexVerilog(std::string_view source) {
  std::vector<LexToken> out;
  for (const Token& t : Lexer(source).Run()) {
    if (t.kind == Token::Kind::kEof) break;
    LexToken::Kind kind = t.kind == Token::Kind::kIdent
                              ? (IsVerilogKeyword(t.text) ? LexToken::Kind::kKeyword
                                                          : LexToken::Kind::kIdent)
                              : t.kind == Token::Kind::kNumber ? LexToken::Kind::kNumber
                                                               : LexToken::Kind::kPunct;
    out.push_back({kind, Span{t.offset, t.end - t.offset}});
  }
  return out;
}

bool IsVerilogKeyword(std::string_view word) {
  return Keywords().count(word) != 0;
}

std::vector<ModuleAst> ParseVerilogDesign(std::string_view source) {
  Lexer lexer(source);
  Parser parser(source, lexer.Run());
  return parser.ParseAll();
}

ModuleAst ParseVerilog(std::string_view source) {
  std::vector<ModuleAst> modules = ParseVerilogDesign(source);
  if (modules.size() != 1) {
    throw SyntaxError("expected exactly one module, found " +
                          std::to_string(modules.size()),
                      1, 1, "");
  }
  return std::move(modules.front());
}

}  // namespace symdirec::hdl
