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

#include "symdirec/symlogic/extract.h"

#include <algorithm>

namespace symdirec::symlogic {
namespace {

using hdl::Expr;
using Bits = std::vector<SymExpr>;  // least significant first

bool IsConst(const SymExpr& e, bool v) {
  return e.kind() == SymExpr::Kind::kConst && e.value() == v;
}

SymExpr MkNot(SymExpr e) {
  if (e.kind() == SymExpr::Kind::kConst) return SymExpr::Const(!e.value());
  if (e.kind() == SymExpr::Kind::kNot) return e.operands()[0];
  return SymExpr::Not(std::move(e));
}

// n-ary constructor with same-operator flattening and constant folding, so
// `a & b & c` reads as one And and zero-extension bits vanish.
SymExpr MkNary(SymExpr::Kind kind, const Bits& in) {
  Bits parts;
  bool parity = false;
  for (const SymExpr& e : in) {
    if (e.kind() == SymExpr::Kind::kConst) {
      if (kind == SymExpr::Kind::kAnd && !e.value()) return e;
      if (kind == SymExpr::Kind::kOr && e.value()) return e;
      if (kind == SymExpr::Kind::kXor) parity ^= e.value();
      continue;
    }
    if (e.kind() == kind) {
      parts.insert(parts.end(), e.operands().begin(), e.operands().end());
    } else {
      parts.push_back(e);
    }
  }
  SymExpr result = SymExpr::Const(kind == SymExpr::Kind::kAnd);
  if (parts.size() == 1) {
    result = parts[0];
  } else if (parts.size() > 1) {
    result = kind == SymExpr::Kind::kAnd  ? SymExpr::And(std::move(parts))
             : kind == SymExpr::Kind::kOr ? SymExpr::Or(std::move(parts))
                                          : SymExpr::Xor(std::move(parts));
  }
  return parity ? MkNot(result) : result;
}

SymExpr MkIte(SymExpr c, SymExpr t, SymExpr f) {
  if (c.kind() == SymExpr::Kind::kConst) return c.value() ? t : f;
  if (t == f) return t;
  if (IsConst(t, true) && IsConst(f, false)) return c;
  if (IsConst(t, false) && IsConst(f, true)) return MkNot(c);
  return SymExpr::Ite(std::move(c), std::move(t), std::move(f));
}

Bits Resize(Bits bits, int width) {
  bits.resize(static_cast<std::size_t>(width), SymExpr::Const(false));
  return bits;
}

class Blaster {
 public:
  explicit Blaster(const hdl::CodeBlock& block) : block_(block) {}

  const hdl::Range& RangeOf(const std::string& name) const {
    auto it = block_.signal_ranges.find(name);
    if (it == block_.signal_ranges.end()) {
      throw UnsupportedConstruct("'" + name + "' is not a port, net or reg");
    }
    return it->second;
  }

  // Variable for bit position `pos` (0 = least significant) of `name`.
  SymExpr BitVar(const std::string& name, int pos) const {
    const hdl::Range& r = RangeOf(name);
    if (r.scalar()) return SymExpr::Var(name);
    int index = r.msb >= r.lsb ? r.lsb + pos : r.lsb - pos;
    return SymExpr::Var(name, index);
  }

  int Position(const std::string& name, int index) const {
    const hdl::Range& r = RangeOf(name);
    int pos = r.msb >= r.lsb ? index - r.lsb : r.lsb - index;
    if (pos < 0 || pos >= r.width()) {
      throw UnsupportedConstruct("index " + std::to_string(index) + " outside '" +
                                 name + "'");
    }
    return pos;
  }

  int ConstIndex(const Expr& e) const {
    if (e.operands.empty() || e.operands[0].kind != Expr::Kind::kNumber) {
      throw UnsupportedConstruct("variable index into '" + e.name + "'");
    }
    return static_cast<int>(e.operands[0].value);
  }

  int SelfWidth(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::kIdent:
        return RangeOf(e.name).width();
      case Expr::Kind::kNumber:
        return e.width > 0 ? e.width : 32;
      case Expr::Kind::kIndex:
        return 1;
      case Expr::Kind::kSlice:
        return std::abs(e.msb - e.lsb) + 1;
      case Expr::Kind::kUnary:
        return e.op == "~" ? SelfWidth(e.operands[0]) : 1;
      case Expr::Kind::kBinary:
        if (e.op == "==" || e.op == "!=" || e.op == "&&" || e.op == "||") return 1;
        return std::max(SelfWidth(e.operands[0]), SelfWidth(e.operands[1]));
      case Expr::Kind::kTernary:
        return std::max(SelfWidth(e.operands[1]), SelfWidth(e.operands[2]));
      case Expr::Kind::kConcat: {
        int w = 0;
        for (const Expr& op : e.operands) w += SelfWidth(op);
        return w;
      }
      case Expr::Kind::kReplicate:
        return static_cast<int>(e.value) * SelfWidth(e.operands[0]);
    }
    return 1;
  }

  Bits Self(const Expr& e) { return Blast(e, SelfWidth(e)); }

  SymExpr Truthy(const Expr& e) { return MkNary(SymExpr::Kind::kOr, Self(e)); }

  Bits Blast(const Expr& e, int width) {
    switch (e.kind) {
      case Expr::Kind::kIdent: {
        Bits bits;
        for (int i = 0; i < RangeOf(e.name).width(); ++i) bits.push_back(BitVar(e.name, i));
        return Resize(std::move(bits), width);
      }
      case Expr::Kind::kNumber: {
        Bits bits;
        for (int i = 0; i < width; ++i) {
          bits.push_back(SymExpr::Const(i < 64 && ((e.value >> i) & 1) != 0));
        }
        return bits;
      }
      case Expr::Kind::kIndex:
        return Resize({BitVar(e.name, Position(e.name, ConstIndex(e)))}, width);
      case Expr::Kind::kSlice: {
        int lo = Position(e.name, e.lsb);
        int hi = Position(e.name, e.msb);
        if (lo > hi) throw UnsupportedConstruct("reversed slice of '" + e.name + "'");
        Bits bits;
        for (int p = lo; p <= hi; ++p) bits.push_back(BitVar(e.name, p));
        return Resize(std::move(bits), width);
      }
      case Expr::Kind::kUnary:
        return Resize(Unary(e, width), width);
      case Expr::Kind::kBinary:
        return Resize(Binary(e, width), width);
      case Expr::Kind::kTernary: {
        SymExpr c = Truthy(e.operands[0]);
        Bits t = Blast(e.operands[1], width);
        Bits f = Blast(e.operands[2], width);
        Bits out;
        for (int i = 0; i < width; ++i) out.push_back(MkIte(c, t[i], f[i]));
        return out;
      }
      case Expr::Kind::kConcat: {
        Bits out;
        for (auto it = e.operands.rbegin(); it != e.operands.rend(); ++it) {
          Bits part = Self(*it);
          out.insert(out.end(), part.begin(), part.end());
        }
        return Resize(std::move(out), width);
      }
      case Expr::Kind::kReplicate: {
        Bits part = Self(e.operands[0]);
        Bits out;
        for (std::uint64_t i = 0; i < e.value; ++i) out.insert(out.end(), part.begin(), part.end());
        return Resize(std::move(out), width);
      }
    }
    return Bits(static_cast<std::size_t>(width), SymExpr::Const(false));
  }

  // Flattened lhs targets, least significant first.
  Bits Targets(const Expr& lhs) {
    switch (lhs.kind) {
      case Expr::Kind::kIdent:
      case Expr::Kind::kSlice:
      case Expr::Kind::kIndex:
        return Self(lhs);
      case Expr::Kind::kConcat: {
        Bits out;
        for (auto it = lhs.operands.rbegin(); it != lhs.operands.rend(); ++it) {
          Bits part = Targets(*it);
          out.insert(out.end(), part.begin(), part.end());
        }
        return out;
      }
      default:
        throw UnsupportedConstruct("assignment target");
    }
  }

 private:
  Bits Unary(const Expr& e, int width) {
    const Expr& x = e.operands[0];
    const std::string& op = e.op;
    if (op == "~") {
      Bits bits = Blast(x, width);
      for (SymExpr& b : bits) b = MkNot(b);
      return bits;
    }
    if (op == "!") return {MkNot(Truthy(x))};
    SymExpr::Kind kind;
    bool invert = op.size() == 2;
    char base = op.back();
    if (base == '&') {
      kind = SymExpr::Kind::kAnd;
    } else if (base == '|') {
      kind = SymExpr::Kind::kOr;
    } else if (base == '^') {
      kind = SymExpr::Kind::kXor;
    } else {
      throw UnsupportedConstruct("arithmetic operator '" + op + "'");
    }
    SymExpr r = MkNary(kind, Self(x));
    return {invert ? MkNot(r) : r};
  }

  Bits Binary(const Expr& e, int width) {
    const std::string& op = e.op;
    const Expr& a = e.operands[0];
    const Expr& b = e.operands[1];
    auto bitwise = [&](SymExpr::Kind kind, bool invert) {
      Bits x = Blast(a, width), y = Blast(b, width), out;
      for (int i = 0; i < width; ++i) {
        SymExpr r = MkNary(kind, {x[i], y[i]});
        out.push_back(invert ? MkNot(r) : r);
      }
      return out;
    };
    if (op == "&") return bitwise(SymExpr::Kind::kAnd, false);
    if (op == "|") return bitwise(SymExpr::Kind::kOr, false);
    if (op == "^") return bitwise(SymExpr::Kind::kXor, false);
    if (op == "~&") return bitwise(SymExpr::Kind::kAnd, true);
    if (op == "~|") return bitwise(SymExpr::Kind::kOr, true);
    if (op == "~^") return bitwise(SymExpr::Kind::kXor, true);
    if (op == "&&") return {MkNary(SymExpr::Kind::kAnd, {Truthy(a), Truthy(b)})};
    if (op == "||") return {MkNary(SymExpr::Kind::kOr, {Truthy(a), Truthy(b)})};
    if (op == "==" || op == "!=") {
      int w = std::max(SelfWidth(a), SelfWidth(b));
      Bits x = Blast(a, w), y = Blast(b, w), diffs;
      for (int i = 0; i < w; ++i) diffs.push_back(MkNary(SymExpr::Kind::kXor, {x[i], y[i]}));
      SymExpr any = MkNary(SymExpr::Kind::kOr, diffs);
      return {op == "!=" ? any : MkNot(any)};
    }
    throw UnsupportedConstruct("operator '" + op + "' has no Boolean translation");
  }

  const hdl::CodeBlock& block_;
};

}  // namespace

SymBundle ExtractFromRtl(const hdl::CodeBlock& block) {
  for (const hdl::AstItem& item : block.items) {
    if (item.kind() == hdl::ItemKind::kAlwaysBlock) {
      throw NotCombinational("always block in a combinational extraction");
    }
    if (item.kind() == hdl::ItemKind::kInstantiation) {
      throw NotCombinational("instantiation of '" +
                             std::get<hdl::Instantiation>(item.payload).module_name +
                             "' in a combinational extraction");
    }
  }
  Blaster blaster(block);
  SymBundle bundle;
  std::set<std::string> defined;
  for (const hdl::AstItem& item : block.items) {
    if (item.kind() != hdl::ItemKind::kContinuousAssign) continue;
    const auto& assign = std::get<hdl::ContinuousAssign>(item.payload);
    Bits targets = blaster.Targets(assign.lhs);
    int width = std::max(static_cast<int>(targets.size()), blaster.SelfWidth(assign.rhs));
    Bits values = blaster.Blast(assign.rhs, width);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (!defined.insert(targets[i].key()).second) {
        throw UnsupportedConstruct("'" + targets[i].key() + "' driven twice");
      }
      bundle.definitions.push_back(SymExpr::Eq(targets[i], values[i]));
    }
  }
  return bundle;
}

}  // namespace symdirec::symlogic
