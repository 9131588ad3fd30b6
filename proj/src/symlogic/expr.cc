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

#include "symdirec/symlogic/expr.h"

#include <algorithm>
#include <cctype>
#include <cstdint>

namespace symdirec::symlogic {

struct SymExpr::Node {
  Kind kind = Kind::kConst;
  std::string name;
  std::optional<int> bit;
  bool value = false;
  std::vector<SymExpr> operands;
};

namespace {

Error StructureError(const std::string& message) {
  return Error("SymStructureError", message);
}

void CheckNotEq(const SymExpr& e) {
  if (e.kind() == SymExpr::Kind::kEq) {
    throw StructureError("Eq may only appear at the root");
  }
}

}  // namespace

SymExpr SymExpr::Make(Kind kind, std::vector<SymExpr> operands) {
  for (const SymExpr& op : operands) CheckNotEq(op);
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->operands = std::move(operands);
  return SymExpr(std::move(n));
}

SymExpr SymExpr::Var(std::string name, std::optional<int> bit) {
  if (name.empty()) throw StructureError("empty variable name");
  if (bit && *bit < 0) throw StructureError("negative bit index");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kVar;
  n->name = std::move(name);
  n->bit = bit;
  return SymExpr(std::move(n));
}

SymExpr SymExpr::Const(bool value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kConst;
  n->value = value;
  return SymExpr(std::move(n));
}

SymExpr SymExpr::Not(SymExpr operand) { return Make(Kind::kNot, {std::move(operand)}); }

SymExpr SymExpr::And(std::vector<SymExpr> operands) {
  if (operands.size() < 2) throw StructureError("And needs two operands");
  return Make(Kind::kAnd, std::move(operands));
}

SymExpr SymExpr::Or(std::vector<SymExpr> operands) {
  if (operands.size() < 2) throw StructureError("Or needs two operands");
  return Make(Kind::kOr, std::move(operands));
}

SymExpr SymExpr::Xor(std::vector<SymExpr> operands) {
  if (operands.size() < 2) throw StructureError("Xor needs two operands");
  return Make(Kind::kXor, std::move(operands));
}

SymExpr SymExpr::Ite(SymExpr cond, SymExpr then_expr, SymExpr else_expr) {
  return Make(Kind::kIte, {std::move(cond), std::move(then_expr), std::move(else_expr)});
}

SymExpr SymExpr::Concat(std::vector<SymExpr> parts) {
  if (parts.empty()) throw StructureError("empty concatenation");
  return Make(Kind::kConcat, std::move(parts));
}

SymExpr SymExpr::Eq(SymExpr target, SymExpr value) {
  if (target.kind() != Kind::kVar) throw StructureError("Eq target must be a variable");
  CheckNotEq(value);
  auto n = std::make_shared<Node>();
  n->kind = Kind::kEq;
  n->operands = {std::move(target), std::move(value)};
  return SymExpr(std::move(n));
}

SymExpr::Kind SymExpr::kind() const { return node_->kind; }
const std::string& SymExpr::name() const { return node_->name; }
std::optional<int> SymExpr::bit() const { return node_->bit; }
bool SymExpr::value() const { return node_->value; }
std::span<const SymExpr> SymExpr::operands() const { return node_->operands; }

std::string SymExpr::key() const {
  if (!node_->bit) return node_->name;
  return node_->name + "[" + std::to_string(*node_->bit) + "]";
}

bool SymExpr::operator==(const SymExpr& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind || a.name != b.name || a.bit != b.bit ||
      a.value != b.value || a.operands.size() != b.operands.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.operands.size(); ++i) {
    if (!(a.operands[i] == b.operands[i])) return false;
  }
  return true;
}

// --- rendering -------------------------------------------------------------

namespace {

int Precedence(SymExpr::Kind k) {
  switch (k) {
    case SymExpr::Kind::kEq: return -1;
    case SymExpr::Kind::kIte: return 0;
    case SymExpr::Kind::kOr: return 1;
    case SymExpr::Kind::kXor: return 2;
    case SymExpr::Kind::kAnd: return 3;
    case SymExpr::Kind::kNot: return 4;
    default: return 5;
  }
}

const char* OperatorText(SymExpr::Kind k) {
  switch (k) {
    case SymExpr::Kind::kAnd: return " & ";
    case SymExpr::Kind::kOr: return " | ";
    default: return " ^ ";
  }
}

void Render(const SymExpr& e, std::string& out) {
  auto wrapped = [&out](const SymExpr& child, bool wrap) {
    if (wrap) out += "(";
    Render(child, out);
    if (wrap) out += ")";
  };
  switch (e.kind()) {
    case SymExpr::Kind::kVar:
      out += e.key();
      break;
    case SymExpr::Kind::kConst:
      out += e.value() ? "1" : "0";
      break;
    case SymExpr::Kind::kNot:
      out += "~";
      wrapped(e.operands()[0], Precedence(e.operands()[0].kind()) < 4);
      break;
    case SymExpr::Kind::kAnd:
    case SymExpr::Kind::kOr:
    case SymExpr::Kind::kXor: {
      bool first = true;
      for (const SymExpr& child : e.operands()) {
        if (!first) out += OperatorText(e.kind());
        first = false;
        wrapped(child, Precedence(child.kind()) < 4);
      }
      break;
    }
    case SymExpr::Kind::kIte:
      wrapped(e.operands()[0], e.operands()[0].kind() == SymExpr::Kind::kIte);
      out += " ? ";
      Render(e.operands()[1], out);
      out += " : ";
      Render(e.operands()[2], out);
      break;
    case SymExpr::Kind::kConcat: {
      out += "{";
      bool first = true;
      for (const SymExpr& child : e.operands()) {
        if (!first) out += ", ";
        first = false;
        Render(child, out);
      }
      out += "}";
      break;
    }
    case SymExpr::Kind::kEq:
      Render(e.target(), out);
      out += " = ";
      Render(e.rhs(), out);
      break;
  }
}

void CollectVars(const SymExpr& e, std::set<std::string>& out) {
  if (e.kind() == SymExpr::Kind::kVar) {
    out.insert(e.key());
    return;
  }
  if (e.kind() == SymExpr::Kind::kEq) {
    CollectVars(e.rhs(), out);
    return;
  }
  for (const SymExpr& child : e.operands()) CollectVars(child, out);
}

}  // namespace

std::string SymExpr::ToString() const {
  std::string out;
  Render(*this, out);
  return out;
}

std::set<std::string> SymExpr::FreeVariables() const {
  std::set<std::string> out;
  CollectVars(*this, out);
  return out;
}

std::string SymBundle::ToString() const {
  std::string out;
  for (std::size_t i = 0; i < definitions.size(); ++i) {
    if (i != 0) out += "; ";
    out += definitions[i].ToString();
  }
  return out;
}

// --- parsing ---------------------------------------------------------------

namespace {

struct SymToken {
  enum class Kind { kIdent, kNumber, kOp, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  std::size_t pos = 0;
};

std::vector<SymToken> Tokenize(std::string_view text) {
  static const std::pair<std::string_view, char> kAliases[] = {
      {"\xE2\x8A\x95", '^'},  // ⊕
      {"\xE2\x88\xA7", '&'},  // ∧
      {"\xE2\x88\xA8", '|'},  // ∨
      {"\xC2\xAC", '~'},      // ¬
  };
  std::vector<SymToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    SymToken t;
    t.pos = i;
    bool aliased = false;
    for (const auto& [seq, op] : kAliases) {
      if (text.substr(i, seq.size()) == seq) {
        t.kind = SymToken::Kind::kOp;
        t.text = std::string(1, op);
        i += seq.size();
        aliased = true;
        break;
      }
    }
    if (aliased) {
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        ++i;
      }
      t.kind = SymToken::Kind::kIdent;
      t.text = std::string(text.substr(start, i - start));
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      t.kind = SymToken::Kind::kNumber;
      t.text = std::string(text.substr(start, i - start));
    } else if (std::string_view("&|^~!?:=(){}[],").find(c) != std::string_view::npos) {
      t.kind = SymToken::Kind::kOp;
      t.text = std::string(1, c == '!' ? '~' : c);
      ++i;
    } else {
      throw SymSyntaxError(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back(std::move(t));
  }
  SymToken end;
  end.pos = text.size();
  out.push_back(end);
  return out;
}

class SymParser {
 public:
  explicit SymParser(std::vector<SymToken> toks) : toks_(std::move(toks)) {}

  SymExpr ParseTop() {
    SymExpr result = LooksLikeDefinition() ? ParseDefinition() : ParseIte();
    if (Peek().kind != SymToken::Kind::kEnd) Fail("unexpected token '" + Peek().text + "'");
    return result;
  }

 private:
  const SymToken& Peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool IsOp(std::string_view op, std::size_t ahead = 0) const {
    return Peek(ahead).kind == SymToken::Kind::kOp && Peek(ahead).text == op;
  }
  [[noreturn]] void Fail(const std::string& message) const {
    if (Peek().kind == SymToken::Kind::kEnd) {
      throw SymSyntaxError(message + " (end of input)", Peek().pos);
    }
    throw SymSyntaxError(message, Peek().pos);
  }
  void Expect(std::string_view op) {
    if (!IsOp(op)) Fail("expected '" + std::string(op) + "'");
    ++pos_;
  }

  bool LooksLikeDefinition() const {
    if (Peek().kind != SymToken::Kind::kIdent) return false;
    if (IsOp("=", 1)) return true;
    return IsOp("[", 1) && Peek(2).kind == SymToken::Kind::kNumber && IsOp("]", 3) &&
           IsOp("=", 4);
  }

  SymExpr ParseDefinition() {
    SymExpr target = ParseVar();
    Expect("=");
    return SymExpr::Eq(std::move(target), ParseIte());
  }

  SymExpr ParseVar() {
    std::string name = toks_[pos_++].text;
    if (!IsOp("[")) return SymExpr::Var(std::move(name));
    ++pos_;
    if (Peek().kind != SymToken::Kind::kNumber) Fail("expected bit index");
    int bit = std::stoi(toks_[pos_++].text);
    Expect("]");
    return SymExpr::Var(std::move(name), bit);
  }

  SymExpr ParseIte() {
    SymExpr cond = ParseNary(SymExpr::Kind::kOr);
    if (!IsOp("?")) return cond;
    ++pos_;
    SymExpr then_expr = ParseIte();
    Expect(":");
    SymExpr else_expr = ParseIte();
    return SymExpr::Ite(std::move(cond), std::move(then_expr), std::move(else_expr));
  }

  SymExpr ParseNary(SymExpr::Kind kind) {
    const char* op = kind == SymExpr::Kind::kOr    ? "|"
                     : kind == SymExpr::Kind::kXor ? "^"
                                                   : "&";
    auto next = [&]() {
      if (kind == SymExpr::Kind::kOr) return ParseNary(SymExpr::Kind::kXor);
      if (kind == SymExpr::Kind::kXor) return ParseNary(SymExpr::Kind::kAnd);
      return ParseUnary();
    };
    std::vector<SymExpr> parts;
    parts.push_back(next());
    while (IsOp(op)) {
      ++pos_;
      parts.push_back(next());
    }
    if (parts.size() == 1) return parts.front();
    switch (kind) {
      case SymExpr::Kind::kOr: return SymExpr::Or(std::move(parts));
      case SymExpr::Kind::kXor: return SymExpr::Xor(std::move(parts));
      default: return SymExpr::And(std::move(parts));
    }
  }

  SymExpr ParseUnary() {
    if (IsOp("~")) {
      ++pos_;
      return SymExpr::Not(ParseUnary());
    }
    return ParsePrimary();
  }

  SymExpr ParsePrimary() {
    const SymToken& t = Peek();
    if (IsOp("(")) {
      ++pos_;
      SymExpr e = ParseIte();
      Expect(")");
      return e;
    }
    if (IsOp("{")) {
      ++pos_;
      std::vector<SymExpr> parts;
      parts.push_back(ParseIte());
      while (IsOp(",")) {
        ++pos_;
        parts.push_back(ParseIte());
      }
      Expect("}");
      return SymExpr::Concat(std::move(parts));
    }
    if (t.kind == SymToken::Kind::kIdent) return ParseVar();
    if (t.kind == SymToken::Kind::kNumber) {
      if (t.text != "0" && t.text != "1") Fail("constants must be 0 or 1");
      ++pos_;
      return SymExpr::Const(t.text == "1");
    }
    Fail("expected an operand");
  }

  std::vector<SymToken> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SymExpr ParseSym(std::string_view text) {
  SymParser parser(Tokenize(text));
  try {
    return parser.ParseTop();
  } catch (const SymSyntaxError&) {
    throw;
  } catch (const Error& e) {
    throw SymSyntaxError(e.what(), 0);
  }
}

SymBundle ParseBundle(std::string_view text) {
  SymBundle bundle;
  std::set<std::string> targets;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find_first_of(";\n", start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view piece = text.substr(start, end - start);
    bool blank = std::all_of(piece.begin(), piece.end(), [](char c) {
      return std::isspace(static_cast<unsigned char>(c)) != 0;
    });
    if (!blank) {
      SymExpr def = [&] {
        try {
          return ParseSym(piece);
        } catch (const SymSyntaxError& e) {
          throw SymSyntaxError(e.what(), start + e.position());
        }
      }();
      if (def.kind() != SymExpr::Kind::kEq) {
        throw SymSyntaxError("expected a definition 'name = expr'", start);
      }
      if (!targets.insert(def.target().key()).second) {
        throw SymSyntaxError("duplicate definition of '" + def.target().key() + "'", start);
      }
      bundle.definitions.push_back(std::move(def));
    }
    start = end + 1;
  }
  return bundle;
}

namespace {

SymExpr Substitute(const SymExpr& e, const std::map<std::string, SymExpr>& defs,
                   std::map<std::string, SymExpr>& done, std::set<std::string>& active);

SymExpr Resolve(const std::string& key, const std::map<std::string, SymExpr>& defs,
                std::map<std::string, SymExpr>& done, std::set<std::string>& active) {
  if (auto it = done.find(key); it != done.end()) return it->second;
  if (!active.insert(key).second) {
    throw Error("SymCycle", "circular definition through '" + key + "'");
  }
  SymExpr value = Substitute(defs.at(key), defs, done, active);
  active.erase(key);
  done.emplace(key, value);
  return value;
}

SymExpr Substitute(const SymExpr& e, const std::map<std::string, SymExpr>& defs,
                   std::map<std::string, SymExpr>& done, std::set<std::string>& active) {
  switch (e.kind()) {
    case SymExpr::Kind::kVar:
      return defs.count(e.key()) != 0 ? Resolve(e.key(), defs, done, active) : e;
    case SymExpr::Kind::kConst:
      return e;
    case SymExpr::Kind::kNot:
      return SymExpr::Not(Substitute(e.operands()[0], defs, done, active));
    default: {
      std::vector<SymExpr> parts;
      for (const SymExpr& c : e.operands()) parts.push_back(Substitute(c, defs, done, active));
      switch (e.kind()) {
        case SymExpr::Kind::kAnd: return SymExpr::And(std::move(parts));
        case SymExpr::Kind::kOr: return SymExpr::Or(std::move(parts));
        case SymExpr::Kind::kXor: return SymExpr::Xor(std::move(parts));
        case SymExpr::Kind::kIte: return SymExpr::Ite(parts[0], parts[1], parts[2]);
        default: return SymExpr::Concat(std::move(parts));
      }
    }
  }
}

}  // namespace

SymBundle InlineDefinitions(const SymBundle& bundle) {
  std::map<std::string, SymExpr> defs;
  for (const SymExpr& d : bundle.definitions) defs.emplace(d.target().key(), d.rhs());
  std::map<std::string, SymExpr> done;
  std::set<std::string> active;
  SymBundle out;
  for (const SymExpr& d : bundle.definitions) {
    out.definitions.push_back(
        SymExpr::Eq(d.target(), Resolve(d.target().key(), defs, done, active)));
  }
  return out;
}

// --- evaluation ------------------------------------------------------------

namespace {

void EvalInto(const SymExpr& e, const Assignment& a, std::vector<bool>& out);

bool EvalScalar(const SymExpr& e, const Assignment& a) {
  std::vector<bool> bits;
  EvalInto(e, a, bits);
  if (bits.size() != 1) {
    throw Error("SymWidthError", "operand '" + e.ToString() + "' is not a single bit");
  }
  return bits[0];
}

void EvalInto(const SymExpr& e, const Assignment& a, std::vector<bool>& out) {
  switch (e.kind()) {
    case SymExpr::Kind::kVar: {
      auto it = a.find(e.key());
      if (it == a.end()) throw UnboundVariable(e.key());
      out.push_back(it->second);
      return;
    }
    case SymExpr::Kind::kConst:
      out.push_back(e.value());
      return;
    case SymExpr::Kind::kNot:
      out.push_back(!EvalScalar(e.operands()[0], a));
      return;
    case SymExpr::Kind::kAnd: {
      bool v = true;
      for (const SymExpr& c : e.operands()) v = EvalScalar(c, a) && v;
      out.push_back(v);
      return;
    }
    case SymExpr::Kind::kOr: {
      bool v = false;
      for (const SymExpr& c : e.operands()) v = EvalScalar(c, a) || v;
      out.push_back(v);
      return;
    }
    case SymExpr::Kind::kXor: {
      bool v = false;
      for (const SymExpr& c : e.operands()) v ^= EvalScalar(c, a);
      out.push_back(v);
      return;
    }
    case SymExpr::Kind::kIte: {
      bool c = EvalScalar(e.operands()[0], a);
      out.push_back(EvalScalar(e.operands()[c ? 1 : 2], a));
      return;
    }
    case SymExpr::Kind::kConcat:
      for (const SymExpr& c : e.operands()) EvalInto(c, a, out);
      return;
    case SymExpr::Kind::kEq:
      EvalInto(e.rhs(), a, out);
      return;
  }
}

// Bit-sliced evaluation: each word carries 64 assignments at once.
class WordEvaluator {
 public:
  WordEvaluator(const std::vector<std::string>& vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) index_[vars[i]] = i;
    words_.resize(vars.size());
  }

  void SetChunk(std::uint64_t chunk) {
    static const std::uint64_t kLanePatterns[6] = {
        0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
        0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
    for (std::size_t i = 0; i < words_.size(); ++i) {
      words_[i] = i < 6 ? kLanePatterns[i]
                        : (((chunk >> (i - 6)) & 1) != 0 ? ~std::uint64_t{0} : 0);
    }
  }

  void Outputs(const SymExpr& e, std::vector<std::uint64_t>& out) const {
    if (e.kind() == SymExpr::Kind::kConcat) {
      for (const SymExpr& c : e.operands()) Outputs(c, out);
    } else if (e.kind() == SymExpr::Kind::kEq) {
      Outputs(e.rhs(), out);
    } else {
      out.push_back(Word(e));
    }
  }

 private:
  std::uint64_t Word(const SymExpr& e) const {
    switch (e.kind()) {
      case SymExpr::Kind::kVar:
        return words_[index_.at(e.key())];
      case SymExpr::Kind::kConst:
        return e.value() ? ~std::uint64_t{0} : 0;
      case SymExpr::Kind::kNot:
        return ~Word(e.operands()[0]);
      case SymExpr::Kind::kAnd: {
        std::uint64_t v = ~std::uint64_t{0};
        for (const SymExpr& c : e.operands()) v &= Word(c);
        return v;
      }
      case SymExpr::Kind::kOr: {
        std::uint64_t v = 0;
        for (const SymExpr& c : e.operands()) v |= Word(c);
        return v;
      }
      case SymExpr::Kind::kXor: {
        std::uint64_t v = 0;
        for (const SymExpr& c : e.operands()) v ^= Word(c);
        return v;
      }
      case SymExpr::Kind::kIte: {
        std::uint64_t c = Word(e.operands()[0]);
        return (c & Word(e.operands()[1])) | (~c & Word(e.operands()[2]));
      }
      default:
        throw Error("SymWidthError", "concatenation used as a single bit");
    }
  }

  std::map<std::string, std::size_t> index_;
  std::vector<std::uint64_t> words_;
};

}  // namespace

bool Eval(const SymExpr& expr, const Assignment& assignment) {
  return EvalScalar(expr, assignment);
}

std::vector<bool> EvalBits(const SymExpr& expr, const Assignment& assignment) {
  std::vector<bool> out;
  EvalInto(expr, assignment, out);
  return out;
}

bool Equivalent(const SymExpr& a, const SymExpr& b) {
  std::set<std::string> vars = a.FreeVariables();
  std::set<std::string> vb = b.FreeVariables();
  vars.insert(vb.begin(), vb.end());
  if (vars.size() > kMaxEquivalenceVariables) {
    throw TooManyVariables("equivalence check over " + std::to_string(vars.size()) +
                           " variables exceeds the bound of " +
                           std::to_string(kMaxEquivalenceVariables));
  }
  std::vector<std::string> ordered(vars.begin(), vars.end());
  WordEvaluator ev(ordered);
  const std::size_t n = ordered.size();
  const std::uint64_t chunks = n <= 6 ? 1 : (std::uint64_t{1} << (n - 6));
  const std::uint64_t lane_mask =
      n >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
  std::vector<std::uint64_t> wa, wb;
  for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
    ev.SetChunk(chunk);
    wa.clear();
    wb.clear();
    ev.Outputs(a, wa);
    ev.Outputs(b, wb);
    if (wa.size() != wb.size()) return false;
    for (std::size_t i = 0; i < wa.size(); ++i) {
      if (((wa[i] ^ wb[i]) & lane_mask) != 0) return false;
    }
  }
  return true;
}

// --- normalization ---------------------------------------------------------

namespace {

SymExpr NormalizeNot(const SymExpr& operand) {
  if (operand.kind() == SymExpr::Kind::kConst) return SymExpr::Const(!operand.value());
  if (operand.kind() == SymExpr::Kind::kNot) return operand.operands()[0];
  return SymExpr::Not(operand);
}

struct Keyed {
  std::string key;
  SymExpr expr;
};

void SortUnique(std::vector<Keyed>& items) {
  std::sort(items.begin(), items.end(),
            [](const Keyed& x, const Keyed& y) { return x.key < y.key; });
  items.erase(std::unique(items.begin(), items.end(),
                          [](const Keyed& x, const Keyed& y) { return x.key == y.key; }),
              items.end());
}

SymExpr BuildNary(SymExpr::Kind kind, std::vector<Keyed>& items) {
  std::vector<SymExpr> parts;
  parts.reserve(items.size());
  for (Keyed& k : items) parts.push_back(std::move(k.expr));
  switch (kind) {
    case SymExpr::Kind::kAnd: return SymExpr::And(std::move(parts));
    case SymExpr::Kind::kOr: return SymExpr::Or(std::move(parts));
    default: return SymExpr::Xor(std::move(parts));
  }
}

SymExpr NormalizeImpl(const SymExpr& e);

void Flatten(SymExpr::Kind kind, const SymExpr& e, std::vector<SymExpr>& out) {
  for (const SymExpr& child : e.operands()) {
    SymExpr n = NormalizeImpl(child);
    if (n.kind() == kind) {
      out.insert(out.end(), n.operands().begin(), n.operands().end());
    } else {
      out.push_back(std::move(n));
    }
  }
}

SymExpr NormalizeAndOr(const SymExpr& e) {
  const bool is_and = e.kind() == SymExpr::Kind::kAnd;
  const bool identity = is_and;  // And: 1, Or: 0
  std::vector<SymExpr> flat;
  Flatten(e.kind(), e, flat);
  std::vector<Keyed> items;
  for (SymExpr& c : flat) {
    if (c.kind() == SymExpr::Kind::kConst) {
      if (c.value() != identity) return SymExpr::Const(!identity);
      continue;
    }
    items.push_back({c.ToString(), std::move(c)});
  }
  SortUnique(items);
  std::set<std::string> keys;
  for (const Keyed& k : items) keys.insert(k.key);
  for (const Keyed& k : items) {
    if (k.expr.kind() == SymExpr::Kind::kNot &&
        keys.count(k.expr.operands()[0].ToString()) != 0) {
      return SymExpr::Const(!identity);  // x & ~x, x | ~x
    }
  }
  if (items.empty()) return SymExpr::Const(identity);
  if (items.size() == 1) return items.front().expr;
  return BuildNary(e.kind(), items);
}

SymExpr NormalizeXor(const SymExpr& e) {
  std::vector<SymExpr> flat;
  Flatten(SymExpr::Kind::kXor, e, flat);
  bool parity = false;
  std::vector<Keyed> items;
  while (!flat.empty()) {
    SymExpr c = std::move(flat.back());
    flat.pop_back();
    if (c.kind() == SymExpr::Kind::kConst) {
      parity ^= c.value();
      continue;
    }
    if (c.kind() == SymExpr::Kind::kNot) {
      parity = !parity;
      c = c.operands()[0];
    }
    if (c.kind() == SymExpr::Kind::kXor) {  // exposed by stripping a negation
      flat.insert(flat.end(), c.operands().begin(), c.operands().end());
      continue;
    }
    items.push_back({c.ToString(), std::move(c)});
  }
  std::sort(items.begin(), items.end(),
            [](const Keyed& x, const Keyed& y) { return x.key < y.key; });
  std::vector<Keyed> kept;  // x ^ x cancels
  for (Keyed& k : items) {
    if (!kept.empty() && kept.back().key == k.key) {
      kept.pop_back();
    } else {
      kept.push_back(std::move(k));
    }
  }
  SymExpr result = kept.empty()        ? SymExpr::Const(false)
                   : kept.size() == 1  ? kept.front().expr
                                       : BuildNary(SymExpr::Kind::kXor, kept);
  return parity ? NormalizeNot(result) : result;
}

SymExpr NormalizeImpl(const SymExpr& e) {
  switch (e.kind()) {
    case SymExpr::Kind::kVar:
    case SymExpr::Kind::kConst:
      return e;
    case SymExpr::Kind::kNot:
      return NormalizeNot(NormalizeImpl(e.operands()[0]));
    case SymExpr::Kind::kAnd:
    case SymExpr::Kind::kOr:
      return NormalizeAndOr(e);
    case SymExpr::Kind::kXor:
      return NormalizeXor(e);
    case SymExpr::Kind::kIte: {
      SymExpr c = NormalizeImpl(e.operands()[0]);
      SymExpr t = NormalizeImpl(e.operands()[1]);
      SymExpr f = NormalizeImpl(e.operands()[2]);
      if (c.kind() == SymExpr::Kind::kConst) return c.value() ? t : f;
      if (c.kind() == SymExpr::Kind::kNot) {
        c = c.operands()[0];
        std::swap(t, f);
      }
      if (t == f) return t;
      if (t.kind() == SymExpr::Kind::kConst && f.kind() == SymExpr::Kind::kConst) {
        return t.value() ? c : NormalizeNot(c);
      }
      return SymExpr::Ite(std::move(c), std::move(t), std::move(f));
    }
    case SymExpr::Kind::kConcat: {
      std::vector<SymExpr> parts;
      for (const SymExpr& child : e.operands()) {
        SymExpr n = NormalizeImpl(child);
        if (n.kind() == SymExpr::Kind::kConcat) {
          parts.insert(parts.end(), n.operands().begin(), n.operands().end());
        } else {
          parts.push_back(std::move(n));
        }
      }
      return parts.size() == 1 ? parts.front() : SymExpr::Concat(std::move(parts));
    }
    case SymExpr::Kind::kEq:
      return SymExpr::Eq(e.target(), NormalizeImpl(e.rhs()));
  }
  return e;
}

SymExpr Rename(const SymExpr& e, std::map<std::string, std::string>& names) {
  switch (e.kind()) {
    case SymExpr::Kind::kVar: {
      auto [it, inserted] = names.try_emplace(e.key(), "v" + std::to_string(names.size()));
      return SymExpr::Var(it->second);
    }
    case SymExpr::Kind::kConst:
      return e;
    case SymExpr::Kind::kNot:
      return SymExpr::Not(Rename(e.operands()[0], names));
    case SymExpr::Kind::kEq:
      return SymExpr::Eq(e.target(), Rename(e.rhs(), names));
    default: {
      std::vector<SymExpr> parts;
      for (const SymExpr& c : e.operands()) parts.push_back(Rename(c, names));
      switch (e.kind()) {
        case SymExpr::Kind::kAnd: return SymExpr::And(std::move(parts));
        case SymExpr::Kind::kOr: return SymExpr::Or(std::move(parts));
        case SymExpr::Kind::kXor: return SymExpr::Xor(std::move(parts));
        case SymExpr::Kind::kIte:
          return SymExpr::Ite(parts[0], parts[1], parts[2]);
        default: return SymExpr::Concat(std::move(parts));
      }
    }
  }
}

}  // namespace

SymExpr Normalize(const SymExpr& expr) { return NormalizeImpl(expr); }

SymExpr CanonicalizeVariables(const SymExpr& expr) {
  std::map<std::string, std::string> names;
  return Rename(expr, names);
}

}  // namespace symdirec::symlogic
