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

#ifndef SYMDIREC_HDL_EVAL_H_
#define SYMDIREC_HDL_EVAL_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symdirec/hdl/ast.h"

namespace symdirec::hdl {

using SignalValues = std::map<std::string, std::uint64_t>;

// Evaluates a combinational design: continuous assigns and instantiations of
// other modules in `design`. Values are unsigned, at most 64 bits wide, and
// follow Verilog's context-determined sizing. Returns the output ports of
// `top`. Always blocks raise NotCombinational. Results of instantiated
// modules are memoized, so exhaustive sweeps over chained cells stay cheap;
// Evaluate is safe to call from several threads.
class CombinationalEvaluator {
 public:
  explicit CombinationalEvaluator(std::span<const ModuleAst> design);

  SignalValues Evaluate(const std::string& top, const SignalValues& inputs) const;

  // Total input bits of `top` (the size of its truth table is 2^n).
  int InputBits(const std::string& top) const;

  const ModuleAst& Module(const std::string& name) const;

 private:
  SignalValues EvaluateModule(const ModuleAst& m, const SignalValues& inputs,
                              int depth) const;

  std::map<std::string, const ModuleAst*> modules_;

  using MemoKey = std::pair<const ModuleAst*, std::vector<std::uint64_t>>;
  mutable std::mutex memo_mu_;
  mutable std::map<MemoKey, SignalValues> memo_;
};

// Self-determined width of `e` given the module it lives in.
int SelfWidth(const Expr& e, const ModuleAst& m);

// Declared range of a port, net or reg; nullptr when `name` is none of those.
const Range* FindSignalRange(const ModuleAst& m, const std::string& name);

}  // namespace symdirec::hdl

#endif  // SYMDIREC_HDL_EVAL_H_
