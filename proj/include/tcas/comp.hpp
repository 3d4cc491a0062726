#pragma once

#include <array>
#include <string>
#include <vector>

#include "tcas/context.hpp"
#include "tcas/expr.hpp"
#include "tcas/rational_function.hpp"

namespace tcas {

// Component engine: dimension-bound dummy expansion, ordered `id` pattern
// rules, Levi-Civita contraction, and the epsilon-formula determinant.
//
// The engine works on flat term lists (CompExpr) whose coefficients are
// exact rational functions; factors carry only indexed structure, all scalar
// symbol content lives in the coefficient. lower() bridges from parsed
// expressions; render_form() prints the fixed-width component listing.

// Levi-Civita symbol. It appears in expressions as the builtin tensor head
// "e_" with e_(0,1,...,arity-1) = +1 and total antisymmetry.
struct EpsilonSymbol {
    static constexpr const char* head = "e_";
    int arity = 4;
    // Permutation sign of a concrete index tuple; 0 on any repeated value.
    static int sign_of(const std::vector<int>& values);
};

// Kronecker delta factors produced by contract_epsilon use this head.
inline constexpr const char* kDeltaHead = "d_";

// One multiplicative factor: tensor head plus index slots (concrete values
// and/or abstract names).
struct CompFactor {
    std::string head;
    std::vector<Index> indices;
};

// coeff * factor_1 * ... * factor_n.
struct CompTerm {
    RationalFunction coeff;
    std::vector<CompFactor> factors;
};

using CompExpr = std::vector<CompTerm>;

// One slot of an id-rule pattern: a concrete value or a named wildcard i?.
struct IdSlot {
    bool wildcard = false;
    int value = 0;     // when !wildcard
    std::string name;  // when wildcard
};

// Ordered component rewrite rule "id head(slots) = rhs" with a scalar rhs.
// A repeated wildcard name requires equal concrete values; distinct wildcard
// names only match distinct values, which keeps the usual specific /
// diagonal / off-diagonal rule lists order-independent.
struct IdRule {
    std::string head;
    std::vector<IdSlot> slots;
    ExprPtr rhs;
};

// Builds an IdRule from a parsed "lhs = rhs" pair; lhs must be a single
// tensor whose slots are concrete values or wildcards.
IdRule make_id_rule(const ExprPtr& lhs, ExprPtr rhs);

// Folds an index-free expression over declared symbols into a rational
// function. Errors on tensors, derivatives, and undeclared scalar names.
RationalFunction eval_scalar(const Context& ctx, const ExprPtr& e);

// Flattens a parsed expression into component terms: distributes products
// over sums, moves numeric and scalar content into coefficients, and keeps
// tensor factors. A derivative of a single tensor becomes an opaque factor
// "op{head}" whose slots are the operator index followed by the tensor's.
CompExpr lower(const Context& ctx, const ExprPtr& e);

// Merges terms with equal factor lists, drops zero terms, and orders both
// the factors within a term and the terms themselves by the frozen byte
// keys (concrete slots compare by value, so equal-shape terms come out in
// lexicographic index order).
CompExpr collect_terms(CompExpr in);

// Replaces every dummy (twice-occurring) abstract index by an explicit sum
// over its component range, consumes Kronecker deltas, evaluates concrete
// e_/d_ factors, and collects the result. Free (once-occurring) abstract
// indices are preserved. The two variants compute the same thing;
// expand_dummies may fan terms out across OpenMP threads.
CompExpr expand_dummies_serial(const Context& ctx, const CompExpr& in);
CompExpr expand_dummies(const Context& ctx, const CompExpr& in);

// Contracts each pair of e_ factors into the generalized Kronecker delta
// determinant, then evaluates any remaining fully-concrete e_ factor to its
// permutation sign.
CompExpr contract_epsilon(const Context& ctx, const CompExpr& in);

// First-match ordered id substitution: for every fully-concrete tensor
// factor the first matching rule fires and its scalar value multiplies the
// coefficient. Unmatched factors stay. The result is collected.
CompExpr apply_id_rules(const Context& ctx, const CompExpr& in,
                        const std::vector<IdRule>& rules);

using Matrix4 = std::array<std::array<RationalFunction, 4>, 4>;

// det(m) through the epsilon-formula path: contract_epsilon over
// e_(0,1,2,3)*e_(i,j,k,l)*m(0,i)*m(1,j)*m(2,k)*m(3,l), expansion, then
// component substitution. Matrix entries must share ctx's scalar symbols
// (or be purely numeric).
RationalFunction determinant(const Context& ctx, const Matrix4& m);

// Fixed-width component listing: "name =" then the wrapped term list with a
// final ";". `width` follows the Format statement; lines are wrapped to
// width-4 columns with a three-space continuation indent.
std::string render_form(const std::string& name, const CompExpr& e, int width = 40);

}  // namespace tcas
