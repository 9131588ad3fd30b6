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

#ifndef SYMDIREC_SYMLOGIC_EXPR_H_
#define SYMDIREC_SYMLOGIC_EXPR_H_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symdirec/error.h"

namespace symdirec::symlogic {

class SymSyntaxError : public Error {
 public:
  SymSyntaxError(const std::string& message, std::size_t position)
      : Error("SymSyntaxError",
              "at position " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(std::string variable)
      : Error("UnboundVariable", "unbound variable '" + variable + "'"),
        variable_(std::move(variable)) {}
  const std::string& variable() const noexcept { return variable_; }

 private:
  std::string variable_;
};

SYMDIREC_DEFINE_ERROR(TooManyVariables);

// Immutable Boolean/dataflow expression. And/Or/Xor are n-ary (two or more
// operands); Eq may only appear at the root.
class SymExpr {
 public:
  enum class Kind { kVar, kConst, kNot, kAnd, kOr, kXor, kIte, kConcat, kEq };

  static SymExpr Var(std::string name, std::optional<int> bit = std::nullopt);
  static SymExpr Const(bool value);
  static SymExpr Not(SymExpr operand);
  static SymExpr And(std::vector<SymExpr> operands);
  static SymExpr Or(std::vector<SymExpr> operands);
  static SymExpr Xor(std::vector<SymExpr> operands);
  static SymExpr Ite(SymExpr cond, SymExpr then_expr, SymExpr else_expr);
  static SymExpr Concat(std::vector<SymExpr> parts);
  // `target` must be a Var.
  static SymExpr Eq(SymExpr target, SymExpr value);

  Kind kind() const;
  // Var only.
  const std::string& name() const;
  std::optional<int> bit() const;
  // Const only.
  bool value() const;
  std::span<const SymExpr> operands() const;

  // Variable key: "name" or "name[bit]". Var only.
  std::string key() const;

  // For Eq, the defined symbol and the right-hand side.
  const SymExpr& target() const { return operands()[0]; }
  const SymExpr& rhs() const { return operands()[1]; }

  // Infix rendering in the textual grammar; parses back to an equal tree.
  std::string ToString() const;

  // Keys of all variables read (the Eq target is not read).
  std::set<std::string> FreeVariables() const;

  bool operator==(const SymExpr& other) const;

 private:
  struct Node;
  static SymExpr Make(Kind kind, std::vector<SymExpr> operands);
  explicit SymExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Ordered multi-output component, e.g. {sum = a ^ b, carry = a & b}.
struct SymBundle {
  std::vector<SymExpr> definitions;  // each an Eq with a unique target

  std::string ToString() const;  // definitions joined with "; "
  bool operator==(const SymBundle&) const = default;
};

// Parses `IDENT = expr` or a bare expression. Precedence, tightest first:
// ~ (also !, ¬), & (∧), ^ (⊕), | (∨), ?:. Variables may carry a bit index
// (`A[3]`); constants are 0 and 1.
SymExpr ParseSym(std::string_view text);

// Definitions separated by ';' or newlines. Defined symbols must be unique.
SymBundle ParseBundle(std::string_view text);

// Replaces references to other definitions' targets by their right-hand
// sides, so every definition depends on free inputs only. Throws Error with
// code "SymCycle" on circular definitions.
SymBundle InlineDefinitions(const SymBundle& bundle);

using Assignment = std::map<std::string, bool>;

// Boolean value of a scalar expression (Eq evaluates its right-hand side).
bool Eval(const SymExpr& expr, const Assignment& assignment);

// Bit vector value, most significant part first for Concat.
std::vector<bool> EvalBits(const SymExpr& expr, const Assignment& assignment);

inline constexpr std::size_t kMaxEquivalenceVariables = 20;

// Exhaustive comparison over every assignment to the union of free variables.
// Throws TooManyVariables past kMaxEquivalenceVariables.
bool Equivalent(const SymExpr& a, const SymExpr& b);

// Canonical form: associative chains flattened, commutative operands sorted by
// rendering, duplicates and double negations removed, constants folded.
SymExpr Normalize(const SymExpr& expr);

// Renames variables to v0, v1, ... in order of first appearance (left to
// right); the Eq target, if any, is kept.
SymExpr CanonicalizeVariables(const SymExpr& expr);

}  // namespace symdirec::symlogic

#endif  // SYMDIREC_SYMLOGIC_EXPR_H_
