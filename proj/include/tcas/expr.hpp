#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tcas/index.hpp"
#include "tcas/rational.hpp"

namespace tcas {

enum class ExprKind {
    Number,      // exact rational constant
    Scalar,      // named scalar atom: \pi, c, a, b
    Tensor,      // head + index slots
    Derivative,  // operator name, one index, one argument
    Power,       // base, integer exponent
    Product,     // flattened: no Product children
    Sum,         // flattened: no Sum children
    SqrtNegDet,  // \sqrt{-g} for a named metric
    Equation,    // lhs = rhs, top level only
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression node. Built through the factory functions below, which
// maintain the structural invariants (flattened sums/products, merged numeric
// factors, simplified trivial powers).
class Expr {
  public:
    ExprKind kind;
    Rational number;             // Number
    std::string name;            // Scalar, Tensor head, Derivative op, SqrtNegDet metric
    bool head_wildcard = false;  // Tensor pattern head, written "A?"
    bool call_syntax = false;    // Tensor rendered g(0,i) instead of g_{0 i}
    std::vector<Index> indices;  // Tensor slots; Derivative operator index at [0]
    std::vector<ExprPtr> args;   // children (see kind)
    long exponent = 0;           // Power

    explicit Expr(ExprKind k) : kind(k), number(0) {}
};

ExprPtr make_number(Rational r);
ExprPtr make_number(long n);
ExprPtr make_scalar(std::string name);
ExprPtr make_tensor(std::string head, std::vector<Index> indices, bool head_wildcard = false,
                    bool call_syntax = false);
ExprPtr make_derivative(std::string op, Index idx, ExprPtr argument);
ExprPtr make_power(ExprPtr base, long exponent);
ExprPtr make_product(std::vector<ExprPtr> factors);
ExprPtr make_sum(std::vector<ExprPtr> terms);
ExprPtr make_sqrt_neg_det(std::string metric = "g");
ExprPtr make_equation(ExprPtr lhs, ExprPtr rhs);

inline ExprPtr negate(ExprPtr e) { return make_product({make_number(-1), std::move(e)}); }

bool structural_equal(const ExprPtr& a, const ExprPtr& b);

// Term view of a product: numeric coefficient plus non-numeric factors.
struct Term {
    Rational coeff{1};
    std::vector<ExprPtr> factors;
};

Term split_term(const ExprPtr& e);
ExprPtr make_term(const Term& t);

// Top-level summands (a single non-sum expression is one term).
std::vector<ExprPtr> summands(const ExprPtr& e);

// Free abstract indices of every term, sorted by (name, variance). Throws
// Error::eval when an index name occurs more than twice in a term, when the
// terms of a sum disagree, or when the sides of an equation disagree.
// Concrete indices never participate. An index name occurring twice in a
// term is a dummy pair and is not reported.
std::vector<Index> free_indices(const ExprPtr& e);

}  // namespace tcas
