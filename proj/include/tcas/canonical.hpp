#pragma once

#include <string>

#include "tcas/context.hpp"
#include "tcas/expr.hpp"

namespace tcas {

// Canonical form of each term:
//  - slots inside every declared symmetry group sorted (antisymmetric groups
//    track the permutation sign; a repeated index inside one kills the term),
//  - factors sorted by the frozen factor order,
//  - dummy indices renamed to the first family names not taken by free
//    indices, in traversal order,
//  - symmetric-antisymmetric double contractions recognized as zero.
// Terms are not merged and their order is kept; collect_terms does that.
ExprPtr canonicalize(const Context& ctx, const ExprPtr& e);

// Merges structurally equal terms, drops zero coefficients and emits the
// surviving terms in the frozen term order. An empty result is 0.
ExprPtr collect_terms(const Context& ctx, const ExprPtr& e);

// Frozen orderings, shared with the component engine. Keys are byte
// strings; lexicographic comparison realizes the order.
std::string factor_sort_key(const Context& ctx, const ExprPtr& factor);
std::string term_sort_key(const Context& ctx, const ExprPtr& term);
int compare_terms(const Context& ctx, const ExprPtr& a, const ExprPtr& b);

}  // namespace tcas
