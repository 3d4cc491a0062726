#include "tcas/rewrite.hpp"

#include <set>

#include "tcas/context.hpp"
#include "tcas/error.hpp"

namespace tcas {

namespace {

// Occurrence counts of the pattern's index variables; wildcard flag kept to
// scope the distinct-value rule to explicit `i?` patterns.
struct PatternVar {
    int count = 0;
    bool wildcard = false;
};

void scan_pattern(const ExprPtr& p, std::map<std::string, PatternVar>& vars) {
    switch (p->kind) {
        case ExprKind::Tensor:
            for (const auto& idx : p->indices)
                if (!idx.is_concrete()) {
                    vars[idx.name].count++;
                    vars[idx.name].wildcard = vars[idx.name].wildcard || idx.wildcard;
                }
            return;
        case ExprKind::Derivative:
            if (!p->indices[0].is_concrete()) vars[p->indices[0].name].count++;
            scan_pattern(p->args[0], vars);
            return;
        case ExprKind::Power:
        case ExprKind::Product:
        case ExprKind::Sum:
            for (const auto& c : p->args) scan_pattern(c, vars);
            return;
        default:
            return;
    }
}

bool same_binding_target(const Index& a, const Index& b) {
    if (a.is_concrete() != b.is_concrete()) return false;
    return a.is_concrete() ? a.value == b.value : a.name == b.name;
}

bool bind_index(const std::map<std::string, PatternVar>& vars, Bindings& b, const Index& pat,
                const Index& tgt) {
    if (pat.variance != tgt.variance) return false;
    if (pat.is_concrete()) return tgt.is_concrete() && pat.value == tgt.value;
    auto it = b.index_map.find(pat.name);
    if (it != b.index_map.end()) return same_binding_target(it->second, tgt);
    const PatternVar& self = vars.at(pat.name);
    // Distinct pattern dummies stay distinct, and so do distinct explicit
    // wildcards; unrelated free pattern indices may share a target.
    for (const auto& [other_name, bound] : b.index_map) {
        if (other_name == pat.name) continue;
        const PatternVar& other = vars.at(other_name);
        bool both_dummies = self.count >= 2 && other.count >= 2;
        bool both_wildcards = self.wildcard && other.wildcard;
        if ((both_dummies || both_wildcards) && same_binding_target(bound, tgt)) return false;
    }
    b.index_map.emplace(pat.name, tgt);
    return true;
}

bool match_node(const Context& ctx, const std::map<std::string, PatternVar>& vars,
                const ExprPtr& pat, const ExprPtr& tgt, Bindings& b) {
    if (pat->kind != tgt->kind) return false;
    switch (pat->kind) {
        case ExprKind::Tensor: {
            if (tgt->head_wildcard) return false;
            if (pat->head_wildcard) {
                auto it = b.head_map.find(pat->name);
                if (it != b.head_map.end()) {
                    if (it->second != tgt->name) return false;
                } else {
                    b.head_map.emplace(pat->name, tgt->name);
                }
            } else if (pat->name != tgt->name) {
                return false;
            }
            if (pat->indices.size() != tgt->indices.size()) return false;
            for (size_t i = 0; i < pat->indices.size(); ++i)
                if (!bind_index(vars, b, pat->indices[i], tgt->indices[i])) return false;
            return true;
        }
        case ExprKind::Derivative:
            return pat->name == tgt->name &&
                   bind_index(vars, b, pat->indices[0], tgt->indices[0]) &&
                   match_node(ctx, vars, pat->args[0], tgt->args[0], b);
        case ExprKind::Number:
            return pat->number == tgt->number;
        case ExprKind::Scalar:
        case ExprKind::SqrtNegDet:
            return pat->name == tgt->name;
        case ExprKind::Power:
            return pat->exponent == tgt->exponent &&
                   match_node(ctx, vars, pat->args[0], tgt->args[0], b);
        case ExprKind::Product:
        case ExprKind::Sum: {
            if (pat->args.size() != tgt->args.size()) return false;
            for (size_t i = 0; i < pat->args.size(); ++i)
                if (!match_node(ctx, vars, pat->args[i], tgt->args[i], b)) return false;
            return true;
        }
        case ExprKind::Equation:
            return false;
    }
    return false;
}

// Every abstract index name anywhere in the expression, including nested
// scopes: fresh dummies must avoid them all.
void gather_names(const ExprPtr& e, std::set<std::string>& names) {
    switch (e->kind) {
        case ExprKind::Tensor:
            for (const auto& idx : e->indices)
                if (!idx.is_concrete()) names.insert(idx.name);
            return;
        case ExprKind::Derivative:
            if (!e->indices[0].is_concrete()) names.insert(e->indices[0].name);
            gather_names(e->args[0], names);
            return;
        case ExprKind::Power:
        case ExprKind::Product:
        case ExprKind::Sum:
            for (const auto& c : e->args) gather_names(c, names);
            return;
        default:
            return;
    }
}

// Binds fresh family names, in first-use order, for rhs index variables the
// match left unbound; wildcard heads must all be bound.
void bind_fresh(const Context& ctx, const Rule& rule, const ExprPtr& rhs, Bindings& b,
                std::set<std::string>& used) {
    switch (rhs->kind) {
        case ExprKind::Tensor: {
            if (rhs->head_wildcard && !b.head_map.count(rhs->name))
                throw Error::eval("rule '" + rule.label + "' uses unbound pattern head '" +
                                  rhs->name + "?'");
            for (const auto& idx : rhs->indices) {
                if (idx.is_concrete() || b.index_map.count(idx.name)) continue;
                const IndexFamily* fam = ctx.family_of(idx.name);
                if (!fam) {
                    b.index_map.emplace(idx.name, Index::abstract(idx.name));
                    continue;
                }
                std::string fresh = ctx.fresh_names(*fam, used, 1)[0];
                used.insert(fresh);
                b.index_map.emplace(idx.name, Index::abstract(fresh));
            }
            return;
        }
        case ExprKind::Derivative: {
            const Index& op = rhs->indices[0];
            if (!op.is_concrete() && !b.index_map.count(op.name)) {
                const IndexFamily* fam = ctx.family_of(op.name);
                if (!fam) {
                    b.index_map.emplace(op.name, Index::abstract(op.name));
                } else {
                    std::string fresh = ctx.fresh_names(*fam, used, 1)[0];
                    used.insert(fresh);
                    b.index_map.emplace(op.name, Index::abstract(fresh));
                }
            }
            bind_fresh(ctx, rule, rhs->args[0], b, used);
            return;
        }
        case ExprKind::Power:
        case ExprKind::Product:
        case ExprKind::Sum:
            for (const auto& c : rhs->args) bind_fresh(ctx, rule, c, b, used);
            return;
        default:
            return;
    }
}

Index apply_index(const Bindings& b, const Index& idx) {
    if (idx.is_concrete()) return idx;
    auto it = b.index_map.find(idx.name);
    if (it == b.index_map.end()) return idx;
    // Bound name or value with the variance written at this rhs slot.
    Index out = it->second;
    out.variance = idx.variance;
    out.wildcard = false;
    return out;
}

ExprPtr apply_bindings(const Bindings& b, const ExprPtr& rhs) {
    switch (rhs->kind) {
        case ExprKind::Tensor: {
            std::vector<Index> idxs;
            idxs.reserve(rhs->indices.size());
            for (const auto& idx : rhs->indices) idxs.push_back(apply_index(b, idx));
            std::string head = rhs->name;
            bool wildcard = rhs->head_wildcard;
            if (wildcard) {
                head = b.head_map.at(head);
                wildcard = false;
            }
            return make_tensor(std::move(head), std::move(idxs), wildcard, rhs->call_syntax);
        }
        case ExprKind::Derivative:
            return make_derivative(rhs->name, apply_index(b, rhs->indices[0]),
                                   apply_bindings(b, rhs->args[0]));
        case ExprKind::Power:
            return make_power(apply_bindings(b, rhs->args[0]), rhs->exponent);
        case ExprKind::Product:
        case ExprKind::Sum: {
            std::vector<ExprPtr> args;
            args.reserve(rhs->args.size());
            for (const auto& c : rhs->args) args.push_back(apply_bindings(b, c));
            return rhs->kind == ExprKind::Product ? make_product(std::move(args))
                                                  : make_sum(std::move(args));
        }
        default:
            return rhs;
    }
}

// Top-down walk over one term: a node matching the pattern is replaced
// whole (maximal subterm); otherwise the walk descends.
ExprPtr try_replace(const Context& ctx, const Rule& rule,
                    const std::map<std::string, PatternVar>& vars, const ExprPtr& e,
                    std::set<std::string>& used, bool& any) {
    Bindings b;
    if (match_node(ctx, vars, rule.lhs, e, b)) {
        any = true;
        bind_fresh(ctx, rule, rule.rhs, b, used);
        return apply_bindings(b, rule.rhs);
    }
    switch (e->kind) {
        case ExprKind::Derivative: {
            ExprPtr arg = try_replace(ctx, rule, vars, e->args[0], used, any);
            if (arg == e->args[0]) return e;
            return make_derivative(e->name, e->indices[0], arg);
        }
        case ExprKind::Power: {
            ExprPtr base = try_replace(ctx, rule, vars, e->args[0], used, any);
            if (base == e->args[0]) return e;
            return make_power(base, e->exponent);
        }
        case ExprKind::Product:
        case ExprKind::Sum: {
            std::vector<ExprPtr> args;
            args.reserve(e->args.size());
            bool changed = false;
            for (const auto& c : e->args) {
                ExprPtr r = try_replace(ctx, rule, vars, c, used, any);
                changed = changed || r != c;
                args.push_back(std::move(r));
            }
            if (!changed) return e;
            return e->kind == ExprKind::Product ? make_product(std::move(args))
                                                : make_sum(std::move(args));
        }
        default:
            return e;
    }
}

}  // namespace

std::optional<Bindings> match(const Context& ctx, const ExprPtr& pattern, const ExprPtr& target) {
    std::map<std::string, PatternVar> vars;
    scan_pattern(pattern, vars);
    Bindings b;
    if (match_node(ctx, vars, pattern, target, b)) return b;
    return std::nullopt;
}

ExprPtr substitute(const Context& ctx, const Rule& rule, const ExprPtr& target) {
    if (target->kind == ExprKind::Equation)
        return make_equation(substitute(ctx, rule, target->args[0]),
                             substitute(ctx, rule, target->args[1]));
    std::map<std::string, PatternVar> vars;
    scan_pattern(rule.lhs, vars);
    std::vector<ExprPtr> terms;
    bool changed = false;
    for (const auto& term : summands(target)) {
        // Fresh names drawn for one term must dodge every name in that term.
        std::set<std::string> used;
        gather_names(term, used);
        bool any = false;
        ExprPtr replaced = try_replace(ctx, rule, vars, term, used, any);
        changed = changed || any;
        terms.push_back(replaced);
    }
    if (!changed) return target;
    return make_sum(std::move(terms));
}

ExprPtr distribute(const Context& ctx, const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::Equation:
            return make_equation(distribute(ctx, e->args[0]), distribute(ctx, e->args[1]));
        case ExprKind::Sum: {
            std::vector<ExprPtr> terms;
            terms.reserve(e->args.size());
            for (const auto& t : e->args) terms.push_back(distribute(ctx, t));
            return make_sum(std::move(terms));
        }
        case ExprKind::Product: {
            // Expand left to right: the last sum varies fastest.
            std::vector<std::vector<ExprPtr>> combos(1);
            for (const auto& f0 : e->args) {
                ExprPtr f = distribute(ctx, f0);
                if (f->kind == ExprKind::Sum) {
                    std::vector<std::vector<ExprPtr>> next;
                    next.reserve(combos.size() * f->args.size());
                    for (const auto& combo : combos)
                        for (const auto& s : f->args) {
                            next.push_back(combo);
                            next.back().push_back(s);
                        }
                    combos = std::move(next);
                } else {
                    for (auto& combo : combos) combo.push_back(f);
                }
            }
            if (combos.size() == 1) return make_product(std::move(combos[0]));
            std::vector<ExprPtr> terms;
            terms.reserve(combos.size());
            for (auto& combo : combos) terms.push_back(make_product(std::move(combo)));
            return make_sum(std::move(terms));
        }
        case ExprKind::Derivative: {
            ExprPtr arg = distribute(ctx, e->args[0]);
            if (arg->kind != ExprKind::Sum) {
                if (arg == e->args[0]) return e;
                return make_derivative(e->name, e->indices[0], arg);
            }
            std::vector<ExprPtr> terms;
            terms.reserve(arg->args.size());
            for (const auto& t : arg->args)
                terms.push_back(make_derivative(e->name, e->indices[0], t));
            return make_sum(std::move(terms));
        }
        case ExprKind::Power: {
            // Powers stay closed; only their interior is normalized.
            ExprPtr base = distribute(ctx, e->args[0]);
            if (base == e->args[0]) return e;
            return make_power(base, e->exponent);
        }
        default:
            return e;
    }
}

}  // namespace tcas
