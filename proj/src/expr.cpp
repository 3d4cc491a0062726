#include "tcas/expr.hpp"

#include <algorithm>
#include <map>

#include "tcas/error.hpp"

namespace tcas {

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

void forbid_equation(const std::vector<ExprPtr>& args) {
    for (const auto& a : args)
        if (a->kind == ExprKind::Equation) throw Error::eval("equation used as a subexpression");
}

}  // namespace

ExprPtr make_number(Rational r) {
    Expr e(ExprKind::Number);
    e.number = std::move(r);
    return node(std::move(e));
}

ExprPtr make_number(long n) { return make_number(Rational(n)); }

ExprPtr make_scalar(std::string name) {
    Expr e(ExprKind::Scalar);
    e.name = std::move(name);
    return node(std::move(e));
}

ExprPtr make_tensor(std::string head, std::vector<Index> indices, bool head_wildcard,
                    bool call_syntax) {
    Expr e(ExprKind::Tensor);
    e.name = std::move(head);
    e.indices = std::move(indices);
    e.head_wildcard = head_wildcard;
    e.call_syntax = call_syntax;
    return node(std::move(e));
}

ExprPtr make_derivative(std::string op, Index idx, ExprPtr argument) {
    if (argument->kind == ExprKind::Equation)
        throw Error::eval("equation used as a subexpression");
    Expr e(ExprKind::Derivative);
    e.name = std::move(op);
    e.indices = {std::move(idx)};
    e.args = {std::move(argument)};
    return node(std::move(e));
}

ExprPtr make_power(ExprPtr base, long exponent) {
    if (exponent == 0) return make_number(1);
    if (exponent == 1) return base;
    if (base->kind == ExprKind::Number) {
        if (base->number == 0 && exponent < 0) throw Error::eval("0 raised to a negative power");
        return make_number(pow_rational(base->number, exponent));
    }
    if (base->kind == ExprKind::Power) return make_power(base->args[0], base->exponent * exponent);
    if (base->kind == ExprKind::Equation) throw Error::eval("equation used as a subexpression");
    Expr e(ExprKind::Power);
    e.args = {std::move(base)};
    e.exponent = exponent;
    return node(std::move(e));
}

ExprPtr make_product(std::vector<ExprPtr> factors) {
    forbid_equation(factors);
    Rational coeff(1);
    std::vector<ExprPtr> flat;
    for (auto& f : factors) {
        if (f->kind == ExprKind::Number) {
            coeff *= f->number;
        } else if (f->kind == ExprKind::Product) {
            for (const auto& c : f->args) {
                if (c->kind == ExprKind::Number)
                    coeff *= c->number;
                else
                    flat.push_back(c);
            }
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (coeff == 0) return make_number(0);
    if (flat.empty()) return make_number(std::move(coeff));
    if (coeff == 1 && flat.size() == 1) return flat[0];
    Expr e(ExprKind::Product);
    if (coeff != 1) e.args.push_back(make_number(std::move(coeff)));
    for (auto& f : flat) e.args.push_back(std::move(f));
    return node(std::move(e));
}

ExprPtr make_sum(std::vector<ExprPtr> terms) {
    forbid_equation(terms);
    std::vector<ExprPtr> flat;
    for (auto& t : terms) {
        if (t->kind == ExprKind::Sum) {
            for (const auto& c : t->args) flat.push_back(c);
        } else if (t->kind == ExprKind::Number && t->number == 0) {
            // dropped
        } else {
            flat.push_back(std::move(t));
        }
    }
    if (flat.empty()) return make_number(0);
    if (flat.size() == 1) return flat[0];
    Expr e(ExprKind::Sum);
    e.args = std::move(flat);
    return node(std::move(e));
}

ExprPtr make_sqrt_neg_det(std::string metric) {
    Expr e(ExprKind::SqrtNegDet);
    e.name = std::move(metric);
    return node(std::move(e));
}

ExprPtr make_equation(ExprPtr lhs, ExprPtr rhs) {
    if (lhs->kind == ExprKind::Equation || rhs->kind == ExprKind::Equation)
        throw Error::eval("nested equation");
    Expr e(ExprKind::Equation);
    e.args = {std::move(lhs), std::move(rhs)};
    return node(std::move(e));
}

bool structural_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->number != b->number || a->name != b->name ||
        a->head_wildcard != b->head_wildcard || a->exponent != b->exponent ||
        a->indices != b->indices || a->args.size() != b->args.size())
        return false;
    for (size_t i = 0; i < a->args.size(); ++i)
        if (!structural_equal(a->args[i], b->args[i])) return false;
    return true;
}

Term split_term(const ExprPtr& e) {
    Term t;
    if (e->kind == ExprKind::Number) {
        t.coeff = e->number;
    } else if (e->kind == ExprKind::Product) {
        for (const auto& f : e->args) {
            if (f->kind == ExprKind::Number)
                t.coeff *= f->number;
            else
                t.factors.push_back(f);
        }
    } else {
        t.factors.push_back(e);
    }
    return t;
}

ExprPtr make_term(const Term& t) {
    std::vector<ExprPtr> fs;
    fs.reserve(t.factors.size() + 1);
    fs.push_back(make_number(t.coeff));
    for (const auto& f : t.factors) fs.push_back(f);
    return make_product(std::move(fs));
}

std::vector<ExprPtr> summands(const ExprPtr& e) {
    if (e->kind == ExprKind::Sum) return e->args;
    return {e};
}

namespace {

using Census = std::map<std::string, std::vector<Variance>>;

std::vector<Index> term_free(const ExprPtr& term);

// Adds the index occurrences a factor exposes to its enclosing term. Nested
// scopes (sums, power bases) contribute only their free indices, so internal
// dummies do not leak out.
void census_factor(const ExprPtr& e, Census& occ) {
    switch (e->kind) {
        case ExprKind::Number:
        case ExprKind::Scalar:
        case ExprKind::SqrtNegDet:
            return;
        case ExprKind::Tensor:
            for (const auto& idx : e->indices)
                if (!idx.is_concrete()) occ[idx.name].push_back(idx.variance);
            return;
        case ExprKind::Derivative: {
            const Index& op = e->indices[0];
            if (!op.is_concrete()) occ[op.name].push_back(op.variance);
            for (const auto& idx : free_indices(e->args[0])) occ[idx.name].push_back(idx.variance);
            return;
        }
        case ExprKind::Power: {
            auto inside = free_indices(e->args[0]);
            if (!inside.empty())
                throw Error::eval("power of an expression with free index '" + inside[0].label() +
                                  "'");
            return;
        }
        case ExprKind::Product:
            for (const auto& f : e->args) census_factor(f, occ);
            return;
        case ExprKind::Sum:
            for (const auto& idx : free_indices(e)) occ[idx.name].push_back(idx.variance);
            return;
        case ExprKind::Equation:
            throw Error::eval("equation used as a subexpression");
    }
}

std::vector<Index> term_free(const ExprPtr& term) {
    Census occ;
    census_factor(term, occ);
    std::vector<Index> out;
    for (const auto& [name, vs] : occ) {
        if (vs.size() == 1) {
            out.push_back(Index::abstract(name, vs[0]));
        } else if (vs.size() > 2) {
            throw Error::eval("index '" + name + "' appears " + std::to_string(vs.size()) +
                              " times in one term");
        }
    }
    std::sort(out.begin(), out.end(), [](const Index& a, const Index& b) {
        if (a.name != b.name) return a.name < b.name;
        return a.variance < b.variance;
    });
    return out;
}

}  // namespace

std::vector<Index> free_indices(const ExprPtr& e) {
    if (e->kind == ExprKind::Equation) {
        auto l = free_indices(e->args[0]);
        auto r = free_indices(e->args[1]);
        if (l != r) throw Error::eval("free indices differ between equation sides");
        return l;
    }
    if (e->kind == ExprKind::Sum) {
        std::vector<Index> first = term_free(e->args[0]);
        for (size_t i = 1; i < e->args.size(); ++i) {
            if (term_free(e->args[i]) != first)
                throw Error::eval("free indices differ between terms of a sum");
        }
        return first;
    }
    return term_free(e);
}

}  // namespace tcas
