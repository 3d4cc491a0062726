#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcas/expr.hpp"

namespace tcas {

class Context;

// One-directional rewrite rule; lhs is a single-term pattern whose tensor
// heads may be wildcards (A?) and whose abstract indices are pattern
// variables.
struct Rule {
    std::string label;
    ExprPtr lhs;
    ExprPtr rhs;
};

// Match state: wildcard head name -> concrete head, pattern index name ->
// target index.
struct Bindings {
    std::map<std::string, std::string> head_map;
    std::map<std::string, Index> index_map;
};

// Matches the pattern against one factor (or a factor sequence for product
// patterns) of the target term. Returns bindings on success.
std::optional<Bindings> match(const Context& ctx, const ExprPtr& pattern, const ExprPtr& target);

// Replaces every maximal subterm of target that matches rule.lhs by rule.rhs
// under the match bindings. Right-hand-side dummies that would collide with
// names already present in the surrounding term are renamed to fresh family
// members. Maps over both sides of an equation.
ExprPtr substitute(const Context& ctx, const Rule& rule, const ExprPtr& target);

// Distributes products over sums (and derivatives over sums of their
// arguments) until no sum sits under a product; other structure is kept.
ExprPtr distribute(const Context& ctx, const ExprPtr& e);

}  // namespace tcas
