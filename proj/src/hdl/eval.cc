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

#include "symdirec/hdl/eval.h"

#include <algorithm>

#include "symdirec/error.h"

namespace symdirec::hdl {
namespace {

constexpr int kMaxDepth = 64;
constexpr int kMaxMemoInputBits = 16;
constexpr std::size_t kMaxMemoEntries = std::size_t{1} << 18;

std::uint64_t Mask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

// Bit position of index `i` inside a vector declared with `r`.
int BitPosition(const Range& r, int i) {
  return r.msb >= r.lsb ? i - r.lsb : r.lsb - i;
}

bool InRange(const Range& r, int i) {
  return r.msb >= r.lsb ? (i >= r.lsb && i <= r.msb) : (i >= r.msb && i <= r.lsb);
}

std::map<std::string, std::int64_t> ParameterValues(const ModuleAst& m);

struct Env {
  const ModuleAst& module;
  std::map<std::string, std::uint64_t> values;
  std::map<std::string, Range> ranges;
  std::map<std::string, std::int64_t> params;
};

int SelfWidthIn(const Expr& e, const Env& env);

std::uint64_t EvalExpr(const Expr& e, int ctx, const Env& env);

std::int64_t ConstValue(const Expr& e, const std::map<std::string, std::int64_t>& params) {
  switch (e.kind) {
    case Expr::Kind::kNumber:
      return static_cast<std::int64_t>(e.value);
    case Expr::Kind::kIdent: {
      auto it = params.find(e.name);
      if (it == params.end()) {
        throw UnsupportedConstruct("non-constant '" + e.name + "' in parameter");
      }
      return it->second;
    }
    case Expr::Kind::kUnary: {
      std::int64_t v = ConstValue(e.operands[0], params);
      if (e.op == "-") return -v;
      if (e.op == "~") return ~v;
      if (e.op == "!") return v == 0;
      return v;
    }
    case Expr::Kind::kBinary: {
      std::int64_t a = ConstValue(e.operands[0], params);
      std::int64_t b = ConstValue(e.operands[1], params);
      if (e.op == "+") return a + b;
      if (e.op == "-") return a - b;
      if (e.op == "*") return a * b;
      if (e.op == "/") return b == 0 ? 0 : a / b;
      if (e.op == "%") return b == 0 ? 0 : a % b;
      if (e.op == "<<") return a << b;
      if (e.op == ">>") return a >> b;
      throw UnsupportedConstruct("operator '" + e.op + "' in parameter");
    }
    case Expr::Kind::kTernary:
      return ConstValue(e.operands[0], params) != 0
                 ? ConstValue(e.operands[1], params)
                 : ConstValue(e.operands[2], params);
    default:
      throw UnsupportedConstruct("unsupported parameter expression");
  }
}

std::map<std::string, std::int64_t> ParameterValues(const ModuleAst& m) {
  std::map<std::string, std::int64_t> params;
  for (const auto& [name, value] : m.parameters) params[name] = ConstValue(value, params);
  for (const AstItem& item : m.items) {
    if (const auto* p = std::get_if<ParamDecl>(&item.payload)) {
      for (const auto& [name, value] : p->assignments) {
        params[name] = ConstValue(value, params);
      }
    }
  }
  return params;
}

int SelfWidthIn(const Expr& e, const Env& env) {
  switch (e.kind) {
    case Expr::Kind::kIdent: {
      auto it = env.ranges.find(e.name);
      if (it != env.ranges.end()) return it->second.width();
      return 32;  // parameter
    }
    case Expr::Kind::kNumber:
      return e.width < 0 ? 32 : e.width;
    case Expr::Kind::kUnary:
      if (e.op == "~" || e.op == "-" || e.op == "+") {
        return SelfWidthIn(e.operands[0], env);
      }
      return 1;
    case Expr::Kind::kBinary: {
      const std::string& op = e.op;
      if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" ||
          op == ">=" || op == "&&" || op == "||") {
        return 1;
      }
      if (op == "<<" || op == ">>") return SelfWidthIn(e.operands[0], env);
      return std::max(SelfWidthIn(e.operands[0], env), SelfWidthIn(e.operands[1], env));
    }
    case Expr::Kind::kTernary:
      return std::max(SelfWidthIn(e.operands[1], env), SelfWidthIn(e.operands[2], env));
    case Expr::Kind::kConcat: {
      int w = 0;
      for (const Expr& child : e.operands) w += SelfWidthIn(child, env);
      return w;
    }
    case Expr::Kind::kReplicate:
      return static_cast<int>(e.value) * SelfWidthIn(e.operands[0], env);
    case Expr::Kind::kIndex:
      return 1;
    case Expr::Kind::kSlice:
      return std::abs(e.msb - e.lsb) + 1;
  }
  return 1;
}

std::uint64_t ReadSignal(const std::string& name, const Env& env) {
  auto it = env.values.find(name);
  if (it != env.values.end()) return it->second;
  auto p = env.params.find(name);
  if (p != env.params.end()) return static_cast<std::uint64_t>(p->second);
  throw UnsupportedConstruct("unknown signal '" + name + "'");
}

const Range& RangeOf(const std::string& name, const Env& env) {
  auto it = env.ranges.find(name);
  if (it == env.ranges.end()) {
    throw UnsupportedConstruct("'" + name + "' is not a vector signal");
  }
  return it->second;
}

std::uint64_t EvalExpr(const Expr& e, int ctx, const Env& env) {
  if (ctx > 64) throw UnsupportedConstruct("expression wider than 64 bits");
  const std::uint64_t mask = Mask(ctx);
  switch (e.kind) {
    case Expr::Kind::kIdent:
      return ReadSignal(e.name, env) & mask;
    case Expr::Kind::kNumber:
      return e.value & mask;
    case Expr::Kind::kUnary: {
      const Expr& a = e.operands[0];
      if (e.op == "~") return ~EvalExpr(a, ctx, env) & mask;
      if (e.op == "-") return (~EvalExpr(a, ctx, env) + 1) & mask;
      if (e.op == "+") return EvalExpr(a, ctx, env);
      int w = SelfWidthIn(a, env);
      std::uint64_t v = EvalExpr(a, w, env);
      std::uint64_t full = Mask(w);
      if (e.op == "!") return v == 0 ? 1 : 0;
      if (e.op == "&") return v == full ? 1 : 0;
      if (e.op == "~&") return v == full ? 0 : 1;
      if (e.op == "|") return v != 0 ? 1 : 0;
      if (e.op == "~|") return v != 0 ? 0 : 1;
      int parity = __builtin_popcountll(v) & 1;
      if (e.op == "^") return static_cast<std::uint64_t>(parity);
      if (e.op == "~^") return static_cast<std::uint64_t>(parity ^ 1);
      throw UnsupportedConstruct("unary operator '" + e.op + "'");
    }
    case Expr::Kind::kBinary: {
      const std::string& op = e.op;
      const Expr& a = e.operands[0];
      const Expr& b = e.operands[1];
      if (op == "&&" || op == "||") {
        bool x = EvalExpr(a, SelfWidthIn(a, env), env) != 0;
        bool y = EvalExpr(b, SelfWidthIn(b, env), env) != 0;
        return op == "&&" ? (x && y) : (x || y);
      }
      if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" ||
          op == ">=") {
        int w = std::max(SelfWidthIn(a, env), SelfWidthIn(b, env));
        std::uint64_t x = EvalExpr(a, w, env);
        std::uint64_t y = EvalExpr(b, w, env);
        if (op == "==") return x == y;
        if (op == "!=") return x != y;
        if (op == "<") return x < y;
        if (op == "<=") return x <= y;
        if (op == ">") return x > y;
        return x >= y;
      }
      if (op == "<<" || op == ">>") {
        std::uint64_t x = EvalExpr(a, ctx, env);
        std::uint64_t n = EvalExpr(b, SelfWidthIn(b, env), env);
        if (n >= 64) return 0;
        return (op == "<<" ? x << n : x >> n) & mask;
      }
      std::uint64_t x = EvalExpr(a, ctx, env);
      std::uint64_t y = EvalExpr(b, ctx, env);
      if (op == "&") return x & y;
      if (op == "|") return x | y;
      if (op == "^") return x ^ y;
      if (op == "~^") return ~(x ^ y) & mask;
      if (op == "~&") return ~(x & y) & mask;
      if (op == "~|") return ~(x | y) & mask;
      if (op == "+") return (x + y) & mask;
      if (op == "-") return (x - y) & mask;
      if (op == "*") return (x * y) & mask;
      if (op == "/") return y == 0 ? 0 : (x / y) & mask;
      if (op == "%") return y == 0 ? 0 : (x % y) & mask;
      throw UnsupportedConstruct("binary operator '" + op + "'");
    }
    case Expr::Kind::kTernary: {
      const Expr& c = e.operands[0];
      bool cond = EvalExpr(c, SelfWidthIn(c, env), env) != 0;
      return EvalExpr(e.operands[cond ? 1 : 2], ctx, env);
    }
    case Expr::Kind::kConcat: {
      std::uint64_t v = 0;
      for (const Expr& child : e.operands) {
        int w = SelfWidthIn(child, env);
        v = (w >= 64 ? 0 : v << w) | EvalExpr(child, w, env);
      }
      return v & mask;
    }
    case Expr::Kind::kReplicate: {
      const Expr& inner = e.operands[0];
      int w = SelfWidthIn(inner, env);
      std::uint64_t part = EvalExpr(inner, w, env);
      std::uint64_t v = 0;
      for (std::uint64_t i = 0; i < e.value; ++i) v = (w >= 64 ? 0 : v << w) | part;
      return v & mask;
    }
    case Expr::Kind::kIndex: {
      const Range& r = RangeOf(e.name, env);
      const Expr& idx = e.operands[0];
      auto i = static_cast<int>(EvalExpr(idx, SelfWidthIn(idx, env), env));
      if (!InRange(r, i)) return 0;
      return (ReadSignal(e.name, env) >> BitPosition(r, i)) & 1 & mask;
    }
    case Expr::Kind::kSlice: {
      const Range& r = RangeOf(e.name, env);
      if (!InRange(r, e.msb) || !InRange(r, e.lsb)) {
        throw UnsupportedConstruct("part-select out of range on '" + e.name + "'");
      }
      int lo = std::min(BitPosition(r, e.msb), BitPosition(r, e.lsb));
      int w = std::abs(e.msb - e.lsb) + 1;
      return (ReadSignal(e.name, env) >> lo) & Mask(w) & mask;
    }
  }
  return 0;
}

// Writes `value` (already sized to the lvalue width) into the target.
// Returns true when some stored value changed.
bool Store(const Expr& lhs, std::uint64_t value, Env& env) {
  switch (lhs.kind) {
    case Expr::Kind::kIdent: {
      const Range& r = RangeOf(lhs.name, env);
      std::uint64_t v = value & Mask(r.width());
      std::uint64_t& slot = env.values[lhs.name];
      bool changed = slot != v;
      slot = v;
      return changed;
    }
    case Expr::Kind::kIndex:
    case Expr::Kind::kSlice: {
      const Range& r = RangeOf(lhs.name, env);
      int lo = 0, w = 1;
      if (lhs.kind == Expr::Kind::kIndex) {
        const Expr& idx = lhs.operands[0];
        int i = static_cast<int>(EvalExpr(idx, SelfWidthIn(idx, env), env));
        if (!InRange(r, i)) return false;
        lo = BitPosition(r, i);
      } else {
        lo = std::min(BitPosition(r, lhs.msb), BitPosition(r, lhs.lsb));
        w = std::abs(lhs.msb - lhs.lsb) + 1;
      }
      std::uint64_t field = Mask(w) << lo;
      std::uint64_t& slot = env.values[lhs.name];
      std::uint64_t next = (slot & ~field) | ((value << lo) & field);
      bool changed = slot != next;
      slot = next;
      return changed;
    }
    case Expr::Kind::kConcat: {
      bool changed = false;
      int shift = 0;
      for (auto it = lhs.operands.rbegin(); it != lhs.operands.rend(); ++it) {
        int w = SelfWidthIn(*it, env);
        changed |= Store(*it, (value >> shift) & Mask(w), env);
        shift += w;
      }
      return changed;
    }
    default:
      throw UnsupportedConstruct("invalid assignment target");
  }
}

}  // namespace

const Range* FindSignalRange(const ModuleAst& m, const std::string& name) {
  for (const Port& p : m.ports) {
    if (p.name == name) return &p.range;
  }
  for (const AstItem& item : m.items) {
    if (const auto* net = std::get_if<NetDecl>(&item.payload)) {
      if (std::find(net->names.begin(), net->names.end(), name) != net->names.end()) {
        return &net->range;
      }
    } else if (const auto* reg = std::get_if<RegDecl>(&item.payload)) {
      if (std::find(reg->names.begin(), reg->names.end(), name) != reg->names.end()) {
        return &reg->range;
      }
    }
  }
  return nullptr;
}

int SelfWidth(const Expr& e, const ModuleAst& m) {
  Env env{m, {}, {}, ParameterValues(m)};
  ForEachIdentifier(e, [&](const std::string& name) {
    if (const Range* r = FindSignalRange(m, name)) env.ranges[name] = *r;
  });
  return SelfWidthIn(e, env);
}

CombinationalEvaluator::CombinationalEvaluator(std::span<const ModuleAst> design) {
  for (const ModuleAst& m : design) modules_[m.name] = &m;
}

const ModuleAst& CombinationalEvaluator::Module(const std::string& name) const {
  auto it = modules_.find(name);
  if (it == modules_.end()) {
    throw UnsupportedConstruct("module '" + name + "' is not defined in the design");
  }
  return *it->second;
}

int CombinationalEvaluator::InputBits(const std::string& top) const {
  int bits = 0;
  for (const Port& p : Module(top).ports) {
    if (p.direction == Direction::kInput) bits += p.width();
  }
  return bits;
}

SignalValues CombinationalEvaluator::Evaluate(const std::string& top,
                                              const SignalValues& inputs) const {
  return EvaluateModule(Module(top), inputs, 0);
}

SignalValues CombinationalEvaluator::EvaluateModule(const ModuleAst& m,
                                                    const SignalValues& inputs,
                                                    int depth) const {
  if (depth > kMaxDepth) {
    throw UnsupportedConstruct("instantiation depth exceeded (recursive design?)");
  }
  Env env{m, {}, {}, ParameterValues(m)};
  for (const Port& p : m.ports) {
    if (p.direction == Direction::kInout) {
      throw UnsupportedConstruct("inout port '" + p.name + "'");
    }
    env.ranges[p.name] = p.range;
    std::uint64_t v = 0;
    if (p.direction == Direction::kInput) {
      auto it = inputs.find(p.name);
      if (it != inputs.end()) v = it->second & Mask(p.width());
    }
    env.values[p.name] = v;
  }
  std::size_t logic_items = 0;
  for (const AstItem& item : m.items) {
    if (const auto* net = std::get_if<NetDecl>(&item.payload)) {
      for (const std::string& n : net->names) {
        env.ranges[n] = net->range;
        env.values[n] = 0;
      }
    } else if (const auto* reg = std::get_if<RegDecl>(&item.payload)) {
      for (const std::string& n : reg->names) {
        env.ranges[n] = reg->range;
        env.values[n] = 0;
      }
    } else if (item.kind() == ItemKind::kAlwaysBlock) {
      throw NotCombinational("module '" + m.name + "' contains an always block");
    } else if (item.kind() != ItemKind::kParamDecl) {
      ++logic_items;
    }
  }

  // Relaxation to a fixed point; acyclic logic settles within
  // (number of logic items + 1) sweeps.
  const std::size_t max_sweeps = logic_items + 2;
  for (std::size_t sweep = 0;; ++sweep) {
    if (sweep > max_sweeps) {
      throw NotCombinational("module '" + m.name +
                             "' does not settle (combinational loop)");
    }
    bool changed = false;
    for (const AstItem& item : m.items) {
      if (const auto* assign = std::get_if<ContinuousAssign>(&item.payload)) {
        int lw = SelfWidthIn(assign->lhs, env);
        int ctx = std::max(lw, SelfWidthIn(assign->rhs, env));
        std::uint64_t v = EvalExpr(assign->rhs, std::min(ctx, 64), env);
        changed |= Store(assign->lhs, v & Mask(lw), env);
      } else if (const auto* inst = std::get_if<Instantiation>(&item.payload)) {
        if (!inst->parameters.empty()) {
          throw UnsupportedConstruct("parameter overrides on instance '" +
                                     inst->instance_name + "'");
        }
        const ModuleAst& callee = Module(inst->module_name);
        SignalValues sub_inputs;
        std::vector<std::pair<const Port*, const Expr*>> outputs;
        for (std::size_t i = 0; i < inst->connections.size(); ++i) {
          const PortConnection& c = inst->connections[i];
          const Port* port = nullptr;
          if (!c.formal.empty()) {
            port = callee.FindPort(c.formal);
            if (port == nullptr) {
              throw UnsupportedConstruct("module '" + callee.name +
                                         "' has no port '" + c.formal + "'");
            }
          } else if (i < callee.ports.size()) {
            port = &callee.ports[i];
          } else {
            throw UnsupportedConstruct("too many connections on '" +
                                       inst->instance_name + "'");
          }
          if (!c.actual) continue;
          if (port->direction == Direction::kInput) {
            int ctx = std::max(port->width(), SelfWidthIn(*c.actual, env));
            sub_inputs[port->name] =
                EvalExpr(*c.actual, std::min(ctx, 64), env) & Mask(port->width());
          } else {
            outputs.emplace_back(port, &*c.actual);
          }
        }
        SignalValues sub;
        int callee_bits = 0;
        MemoKey key{&callee, {}};
        for (const Port& p : callee.ports) {
          if (p.direction != Direction::kInput) continue;
          callee_bits += p.width();
          auto it = sub_inputs.find(p.name);
          key.second.push_back(it == sub_inputs.end() ? 0 : it->second);
        }
        const bool memo = callee_bits <= kMaxMemoInputBits;
        bool hit = false;
        if (memo) {
          std::lock_guard<std::mutex> lock(memo_mu_);
          if (auto it = memo_.find(key); it != memo_.end()) {
            sub = it->second;
            hit = true;
          }
        }
        if (!hit) {
          sub = EvaluateModule(callee, sub_inputs, depth + 1);
          if (memo) {
            std::lock_guard<std::mutex> lock(memo_mu_);
            if (memo_.size() >= kMaxMemoEntries) memo_.clear();
            memo_.emplace(std::move(key), sub);
          }
        }
        for (const auto& [port, actual] : outputs) {
          int w = SelfWidthIn(*actual, env);
          changed |= Store(*actual, sub[port->name] & Mask(w), env);
        }
      }
    }
    if (!changed) break;
  }

  SignalValues out;
  for (const Port& p : m.ports) {
    if (p.direction == Direction::kOutput) out[p.name] = env.values[p.name];
  }
  return out;
}

}  // namespace symdirec::hdl
