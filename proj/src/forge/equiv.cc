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

#include <atomic>
#include <set>
#include <thread>

#include "symdirec/forge/forge.h"
#include "symdirec/hdl/emit.h"
#include "symdirec/hdl/eval.h"
#include "symdirec/hdl/parser.h"

namespace symdirec::forge {

namespace {

const hdl::ModuleAst& Top(const std::vector<hdl::ModuleAst>& design) {
  std::set<std::string> instantiated;
  for (const hdl::ModuleAst& m : design) {
    for (const hdl::AstItem& item : m.items) {
      if (const auto* inst = std::get_if<hdl::Instantiation>(&item.payload)) {
        instantiated.insert(inst->module_name);
      }
    }
  }
  for (auto it = design.rbegin(); it != design.rend(); ++it) {
    if (instantiated.count(it->name) == 0) return *it;
  }
  return design.back();  // everything instantiates something: a cycle
}

void RequireCombinational(const std::vector<hdl::ModuleAst>& design) {
  for (const hdl::ModuleAst& m : design) {
    for (const hdl::AstItem& item : m.items) {
      if (item.kind() == hdl::ItemKind::kAlwaysBlock) {
        throw NotCombinational("module '" + m.name + "' contains an always block");
      }
    }
  }
}

bool SameInterface(const hdl::ModuleAst& a, const hdl::ModuleAst& b) {
  if (a.ports.size() != b.ports.size()) return false;
  for (std::size_t i = 0; i < a.ports.size(); ++i) {
    if (a.ports[i].direction != b.ports[i].direction ||
        a.ports[i].width() != b.ports[i].width()) {
      return false;
    }
  }
  return true;
}

bool IsGate(const hdl::Expr& e) {
  static const std::set<std::string> kUnary = {"~", "!", "&", "|", "^", "~&", "~|", "~^"};
  static const std::set<std::string> kBinary = {"&", "|",  "^",  "~&", "~|",
                                                "~^", "&&", "||", "==", "!="};
  switch (e.kind) {
    case hdl::Expr::Kind::kUnary: return kUnary.count(e.op) != 0;
    case hdl::Expr::Kind::kBinary: return kBinary.count(e.op) != 0;
    case hdl::Expr::Kind::kTernary: return true;
    default: return false;
  }
}

// Operators whose result is a single bit get a logical negation so the flip
// does not widen in a vector context.
bool OneBitResult(const hdl::Expr& e) {
  if (e.kind == hdl::Expr::Kind::kUnary) return e.op != "~";
  if (e.kind == hdl::Expr::Kind::kBinary) {
    return e.op == "&&" || e.op == "||" || e.op == "==" || e.op == "!=";
  }
  return false;
}

int CountGates(const hdl::Expr& e) {
  int n = IsGate(e) ? 1 : 0;
  for (const hdl::Expr& c : e.operands) n += CountGates(c);
  return n;
}

// Complements the `target`-th gate in preorder; `seen` counts gates visited.
bool FlipGate(hdl::Expr& e, int target, int& seen) {
  if (IsGate(e) && seen++ == target) {
    std::string op = OneBitResult(e) ? "!" : "~";
    e = hdl::Expr::Unary(op, std::move(e));
    return true;
  }
  for (hdl::Expr& c : e.operands) {
    if (FlipGate(c, target, seen)) return true;
  }
  return false;
}

}  // namespace

bool CheckEquiv(std::string_view original, std::string_view transformed) {
  std::vector<hdl::ModuleAst> da = hdl::ParseVerilogDesign(original);
  std::vector<hdl::ModuleAst> db = hdl::ParseVerilogDesign(transformed);
  RequireCombinational(da);
  RequireCombinational(db);
  const hdl::ModuleAst& ta = Top(da);
  const hdl::ModuleAst& tb = Top(db);
  if (!SameInterface(ta, tb)) return false;

  hdl::CombinationalEvaluator ea(da), eb(db);
  int bits = ea.InputBits(ta.name);
  if (bits > kMaxEquivInputBits) {
    throw TooManyInputs("module '" + ta.name + "' has " + std::to_string(bits) +
                        " input bits, limit " + std::to_string(kMaxEquivInputBits));
  }
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
    hdl::SignalValues ia, ib;
    int shift = 0;
    for (std::size_t i = 0; i < ta.ports.size(); ++i) {
      if (ta.ports[i].direction != hdl::Direction::kInput) continue;
      int w = ta.ports[i].width();
      std::uint64_t part = (v >> shift) & ((std::uint64_t{1} << w) - 1);
      ia[ta.ports[i].name] = part;
      ib[tb.ports[i].name] = part;
      shift += w;
    }
    hdl::SignalValues oa = ea.Evaluate(ta.name, ia);
    hdl::SignalValues ob = eb.Evaluate(tb.name, ib);
    for (std::size_t i = 0; i < ta.ports.size(); ++i) {
      if (ta.ports[i].direction == hdl::Direction::kInput) continue;
      if (oa.at(ta.ports[i].name) != ob.at(tb.ports[i].name)) return false;
    }
  }
  return true;
}

std::vector<EquivOutcome> CheckEquivBatch(
    std::span<const std::pair<std::string, std::string>> pairs, int max_parallel) {
  std::vector<EquivOutcome> out(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      try {
        out[i].equivalent = CheckEquiv(pairs[i].first, pairs[i].second);
      } catch (const Error& e) {
        out[i].error = e.code();
      }
    }
  };
  int n = std::max(1, std::min<int>(max_parallel, static_cast<int>(pairs.size())));
  {
    std::vector<std::jthread> threads;
    for (int t = 0; t < n; ++t) threads.emplace_back(worker);
  }
  return out;
}

std::vector<std::string> GateFlipMutants(std::string_view source) {
  std::vector<hdl::ModuleAst> design = hdl::ParseVerilogDesign(source);
  std::vector<std::string> out;
  for (std::size_t mi = 0; mi < design.size(); ++mi) {
    const hdl::ModuleAst& m = design[mi];
    for (std::size_t i = 0; i < m.items.size(); ++i) {
      const auto* assign = std::get_if<hdl::ContinuousAssign>(&m.items[i].payload);
      if (assign == nullptr) continue;
      int gates = CountGates(assign->rhs);
      for (int g = 0; g < gates; ++g) {
        std::vector<hdl::ModuleAst> mutant = design;
        auto& target = std::get<hdl::ContinuousAssign>(mutant[mi].items[i].payload);
        int seen = 0;
        FlipGate(target.rhs, g, seen);
        out.push_back(hdl::EmitDesign(mutant));
      }
    }
  }
  return out;
}

std::vector<PairRecord> MakeFecPairs(std::string_view source, std::uint64_t seed) {
  std::vector<PairRecord> out;
  auto add = [&](const char* transform, std::string target) {
    PairRecord rec;
    rec.type = PairType::kFEC;
    rec.source = std::string(source);
    rec.provenance = {{"transform", transform}, {"seed", std::to_string(seed)}};
    try {
      rec.provenance["equivalent"] = CheckEquiv(source, target) ? "true" : "false";
    } catch (const Error& e) {
      rec.provenance["equivalent"] = "unchecked";
      rec.provenance["check_error"] = e.code();
    }
    rec.target = std::move(target);
    out.push_back(std::move(rec));
  };
  add("type2", Type2Rename(source, seed).text);
  add("type3", Type3Transform(source, seed));
  return out;
}

}  // namespace symdirec::forge
