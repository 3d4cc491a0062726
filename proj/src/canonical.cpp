#include "tcas/canonical.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "tcas/error.hpp"

namespace tcas {

namespace {

constexpr char kAtomSep = '\x01';
constexpr char kFactorSep = '\x02';

// Canonicalization tries every admissible dummy-name assignment; the bound
// only guards against pathological terms (7+ dummies in one family).
constexpr long kMaxAssignments = 5040;

std::string pad(int v, int digits = 4) {
    std::string s = std::to_string(v);
    while (static_cast<int>(s.size()) < digits) s.insert(s.begin(), '0');
    return s;
}

// Position of an index name inside the declared families: (family position,
// member position), or nullopt for names outside every family.
std::optional<std::pair<int, int>> family_position(const Context& ctx, const std::string& name) {
    const auto& fams = ctx.families();
    for (size_t f = 0; f < fams.size(); ++f) {
        const auto& ms = fams[f].members;
        for (size_t m = 0; m < ms.size(); ++m)
            if (ms[m] == name) return std::pair<int, int>(int(f), int(m));
    }
    return std::nullopt;
}

// Sortable atom for one index. Concrete values sort before declared family
// names, which sort before unknown names; the family order is declaration
// order, not spelling. Covariant sorts before contravariant on ties.
std::string index_atom(const Context& ctx, const Index& idx) {
    char var = idx.variance == Variance::Covariant ? '0' : '1';
    if (idx.is_concrete()) return "C" + pad(idx.value) + var;
    if (auto pos = family_position(ctx, idx.name))
        return "F" + pad(pos->first, 2) + pad(pos->second, 2) + var;
    return "U" + idx.name + (idx.wildcard ? "?" : "") + var;
}

// Deterministic byte serialization of one expression; lexicographic order
// over these strings is the frozen factor order. Head names come first, so
// factors group by head before their index tuples.
std::string serialize(const Context& ctx, const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::Number:
            return "N" + to_string(e->number);
        case ExprKind::Scalar:
            return e->name + kAtomSep + "s";
        case ExprKind::SqrtNegDet:
            return e->name + kAtomSep + "q";
        case ExprKind::Tensor: {
            std::string out = e->name + (e->head_wildcard ? "?" : "") + kAtomSep + "T";
            for (const auto& idx : e->indices) out += kAtomSep + index_atom(ctx, idx);
            return out;
        }
        case ExprKind::Derivative: {
            std::string out =
                e->name + kAtomSep + "P" + kAtomSep + index_atom(ctx, e->indices[0]);
            return out + kAtomSep + "(" + serialize(ctx, e->args[0]) + ")";
        }
        case ExprKind::Power:
            return serialize(ctx, e->args[0]) + kAtomSep + "^" +
                   (e->exponent < 0 ? "-" : "+") + pad(int(std::labs(e->exponent)), 3);
        case ExprKind::Product: {
            std::string out = std::string(1, kAtomSep) + "M(";
            for (const auto& f : e->args) out += serialize(ctx, f) + kFactorSep;
            return out + ")";
        }
        case ExprKind::Sum: {
            std::string out = std::string(1, kAtomSep) + "S(";
            for (const auto& t : e->args) out += serialize(ctx, t) + kFactorSep;
            return out + ")";
        }
        case ExprKind::Equation:
            throw Error::eval("equation used as a subexpression");
    }
    return {};
}

// Scalar-like factors sort ahead of indexed ones inside a term.
bool scalar_class(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::Number:
        case ExprKind::Scalar:
        case ExprKind::SqrtNegDet:
            return true;
        case ExprKind::Power:
        case ExprKind::Sum:
        case ExprKind::Product:
            return free_indices(e).empty();
        default:
            return false;
    }
}

std::string full_factor_key(const Context& ctx, const ExprPtr& f) {
    return (scalar_class(f) ? "0" : "1") + serialize(ctx, f);
}

// --- index occurrence walk --------------------------------------------------

// Visits every index slot the enclosing term can see, in traversal order:
// tensor slots left to right, derivative operator index before the argument.
// Power bases are index-free and skipped. A sum is an opaque scope: only its
// free indices face the enclosing term, each visited once.
template <typename Fn>
void walk_indices(const ExprPtr& e, const Fn& fn) {
    switch (e->kind) {
        case ExprKind::Tensor:
            for (const auto& idx : e->indices) fn(idx);
            return;
        case ExprKind::Derivative:
            fn(e->indices[0]);
            walk_indices(e->args[0], fn);
            return;
        case ExprKind::Product:
            for (const auto& c : e->args) walk_indices(c, fn);
            return;
        case ExprKind::Sum:
            for (const auto& idx : free_indices(e)) fn(idx);
            return;
        default:
            return;
    }
}

ExprPtr rename_indices(const ExprPtr& e, const std::map<std::string, std::string>& names) {
    switch (e->kind) {
        case ExprKind::Tensor: {
            std::vector<Index> idxs = e->indices;
            bool changed = false;
            for (auto& idx : idxs) {
                if (idx.is_concrete() || idx.wildcard) continue;
                auto it = names.find(idx.name);
                if (it != names.end() && it->second != idx.name) {
                    idx.name = it->second;
                    changed = true;
                }
            }
            if (!changed) return e;
            return make_tensor(e->name, std::move(idxs), e->head_wildcard, e->call_syntax);
        }
        case ExprKind::Derivative: {
            Index op = e->indices[0];
            auto it = names.find(op.name);
            if (!op.is_concrete() && it != names.end()) op.name = it->second;
            ExprPtr arg = rename_indices(e->args[0], names);
            if (op == e->indices[0] && arg == e->args[0]) return e;
            return make_derivative(e->name, std::move(op), std::move(arg));
        }
        case ExprKind::Product:
        case ExprKind::Sum: {
            std::vector<ExprPtr> args;
            args.reserve(e->args.size());
            bool changed = false;
            for (const auto& c : e->args) {
                ExprPtr r = rename_indices(c, names);
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

// --- slot-group sorting -----------------------------------------------------

bool index_equal_for_zero(const Index& a, const Index& b) {
    if (a.is_concrete() != b.is_concrete()) return false;
    if (a.is_concrete()) return a.value == b.value;
    return a.name == b.name;  // any variance: a trace over an antisymmetric pair
}

struct SlotSortResult {
    ExprPtr expr;
    int sign = 1;
    bool zero = false;
};

// Sorts the indices inside every declared symmetry group of every tensor in
// the subexpression; antisymmetric groups contribute the permutation sign and
// collapse to zero on a repeated index.
SlotSortResult sort_slot_groups(const Context& ctx, const ExprPtr& e) {
    SlotSortResult res{e, 1, false};
    switch (e->kind) {
        case ExprKind::Tensor: {
            const SymmetryDecl* decl = ctx.symmetry_of(e->name);
            if (!decl) return res;
            std::vector<Index> idxs = e->indices;
            bool changed = false;
            for (const auto& group : decl->groups) {
                for (int s : group.slots)
                    if (s < 0 || static_cast<size_t>(s) >= idxs.size())
                        throw Error::eval("symmetry of '" + e->name + "' refers to slot " +
                                          std::to_string(s) + " outside the written indices");
                std::vector<Index> slice;
                slice.reserve(group.slots.size());
                for (int s : group.slots) slice.push_back(idxs[static_cast<size_t>(s)]);
                // Insertion sort, counting swaps for the antisymmetric sign.
                int swaps = 0;
                for (size_t i = 1; i < slice.size(); ++i) {
                    for (size_t j = i; j > 0; --j) {
                        if (index_atom(ctx, slice[j]) < index_atom(ctx, slice[j - 1])) {
                            std::swap(slice[j - 1], slice[j]);
                            ++swaps;
                        } else {
                            break;
                        }
                    }
                }
                if (group.antisymmetric) {
                    for (size_t i = 1; i < slice.size(); ++i)
                        if (index_equal_for_zero(slice[i - 1], slice[i])) {
                            res.zero = true;
                            return res;
                        }
                    if (swaps % 2) res.sign = -res.sign;
                }
                for (size_t i = 0; i < group.slots.size(); ++i) {
                    if (idxs[static_cast<size_t>(group.slots[i])] != slice[i]) changed = true;
                    idxs[static_cast<size_t>(group.slots[i])] = slice[i];
                }
            }
            if (changed)
                res.expr = make_tensor(e->name, std::move(idxs), e->head_wildcard, e->call_syntax);
            return res;
        }
        case ExprKind::Derivative: {
            SlotSortResult inner = sort_slot_groups(ctx, e->args[0]);
            if (inner.zero) return inner;
            res.sign = inner.sign;
            if (inner.expr != e->args[0])
                res.expr = make_derivative(e->name, e->indices[0], inner.expr);
            return res;
        }
        case ExprKind::Product: {
            std::vector<ExprPtr> args;
            args.reserve(e->args.size());
            bool rebuilt = false;
            for (const auto& c : e->args) {
                SlotSortResult inner = sort_slot_groups(ctx, c);
                if (inner.zero) return inner;
                res.sign *= inner.sign;
                rebuilt = rebuilt || inner.expr != c;
                args.push_back(inner.expr);
            }
            if (rebuilt) res.expr = make_product(std::move(args));
            return res;
        }
        case ExprKind::Sum: {
            // Signs and zeros belong to the individual summands here.
            std::vector<ExprPtr> args;
            args.reserve(e->args.size());
            bool rebuilt = false;
            for (const auto& c : e->args) {
                SlotSortResult inner = sort_slot_groups(ctx, c);
                if (inner.zero) {
                    rebuilt = true;
                    continue;
                }
                ExprPtr term = inner.sign == 1 ? inner.expr : negate(inner.expr);
                rebuilt = rebuilt || term != c;
                args.push_back(term);
            }
            if (rebuilt) res.expr = make_sum(std::move(args));
            return res;
        }
        default:
            return res;
    }
}

// --- dummy bookkeeping ------------------------------------------------------

struct TermIndexInfo {
    std::set<std::string> dummies;
    std::set<std::string> free_names;
};

TermIndexInfo census(const Context& ctx, const std::vector<ExprPtr>& factors) {
    std::map<std::string, std::vector<Variance>> occ;
    for (const auto& f : factors)
        walk_indices(f, [&](const Index& idx) {
            if (!idx.is_concrete()) occ[idx.name].push_back(idx.variance);
        });
    TermIndexInfo info;
    for (const auto& [name, vs] : occ) {
        if (vs.size() == 1) {
            info.free_names.insert(name);
        } else if (vs.size() == 2) {
            if (ctx.is_strict(name) && vs[0] == vs[1])
                throw Error::eval("dummy index '" + name + "' repeated with the same variance");
            info.dummies.insert(name);
        } else {
            throw Error::eval("index '" + name + "' appears " + std::to_string(vs.size()) +
                              " times in one term");
        }
        if (!family_position(ctx, name) && !ctx.families().empty())
            ctx.diagnose("index '" + name + "' is outside every declared family");
    }
    return info;
}

// All admissible renamings: per family, every bijection from that family's
// dummies onto the first unused names; dummies outside any family keep their
// spelling. The canonical term is the assignment with the smallest key.
std::vector<std::map<std::string, std::string>> dummy_assignments(const Context& ctx,
                                                                  const TermIndexInfo& info) {
    std::map<std::string, std::vector<std::string>> per_family;
    std::map<std::string, std::string> fixed;
    for (const auto& name : info.dummies) {
        if (const IndexFamily* fam = ctx.family_of(name))
            per_family[fam->name].push_back(name);
        else
            fixed[name] = name;
    }
    std::vector<std::vector<std::string>> dummies, targets;
    long combinations = 1;
    for (auto& [fam_name, names] : per_family) {
        const IndexFamily* fam = nullptr;
        for (const auto& f : ctx.families())
            if (f.name == fam_name) fam = &f;
        // Deterministic base order: family member position.
        std::sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
            return index_atom(ctx, Index::abstract(a)) < index_atom(ctx, Index::abstract(b));
        });
        std::set<std::string> used;
        for (const auto& fr : info.free_names) used.insert(fr);
        dummies.push_back(names);
        targets.push_back(ctx.fresh_names(*fam, used, names.size()));
        for (size_t k = 2; k <= names.size(); ++k) combinations *= long(k);
        if (combinations > kMaxAssignments)
            throw Error::eval("too many dummy indices in one term to canonicalise");
    }
    std::vector<std::map<std::string, std::string>> out;
    std::function<void(size_t, std::map<std::string, std::string>)> rec =
        [&](size_t level, std::map<std::string, std::string> acc) {
            if (level == dummies.size()) {
                out.push_back(std::move(acc));
                return;
            }
            std::vector<size_t> perm(dummies[level].size());
            std::iota(perm.begin(), perm.end(), size_t(0));
            do {
                auto next = acc;
                for (size_t j = 0; j < perm.size(); ++j)
                    next[dummies[level][j]] = targets[level][perm[j]];
                rec(level + 1, std::move(next));
            } while (std::next_permutation(perm.begin(), perm.end()));
        };
    rec(0, fixed);
    return out;
}

// --- candidate evaluation ---------------------------------------------------

struct Candidate {
    std::vector<ExprPtr> factors;
    int sign = 1;
    bool zero = false;
    std::string key;
};

ExprPtr canonicalize_term(const Context& ctx, const ExprPtr& term);

Candidate evaluate(const Context& ctx, const std::vector<ExprPtr>& factors,
                   const std::map<std::string, std::string>& names) {
    Candidate c;
    for (const auto& f0 : factors) {
        ExprPtr f = names.empty() ? f0 : rename_indices(f0, names);
        // Renaming can perturb the interior order of an indexed sum factor;
        // re-normalizing keeps the key independent of the original names.
        if (f->kind == ExprKind::Sum && f != f0)
            f = collect_terms(ctx, canonicalize(ctx, f));
        SlotSortResult r = sort_slot_groups(ctx, f);
        if (r.zero) {
            c.zero = true;
            return c;
        }
        c.sign *= r.sign;
        c.factors.push_back(r.expr);
    }
    std::vector<std::string> keys(c.factors.size());
    for (size_t i = 0; i < c.factors.size(); ++i) keys[i] = full_factor_key(ctx, c.factors[i]);
    std::vector<size_t> order(c.factors.size());
    std::iota(order.begin(), order.end(), size_t(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return keys[a] < keys[b]; });
    std::vector<ExprPtr> sorted;
    sorted.reserve(c.factors.size());
    for (size_t i : order) {
        sorted.push_back(c.factors[i]);
        c.key += keys[i] + kFactorSep;
    }
    c.factors = std::move(sorted);
    return c;
}

// Canonicalizes inside a derivative argument and pulls its numeric
// coefficient out front (derivatives are linear); a constant argument
// differentiates to zero.
ExprPtr normalize_derivative(const Context& ctx, const ExprPtr& d, Rational& coeff) {
    ExprPtr arg = collect_terms(ctx, canonicalize(ctx, d->args[0]));
    if (arg->kind == ExprKind::Number) return make_number(0);
    Term t = split_term(arg);
    if (arg->kind != ExprKind::Sum && t.coeff != 1) {
        coeff *= t.coeff;
        return make_derivative(d->name, d->indices[0], make_term({Rational(1), t.factors}));
    }
    return make_derivative(d->name, d->indices[0], arg);
}

ExprPtr canonicalize_term(const Context& ctx, const ExprPtr& term) {
    Term t = split_term(term);
    if (t.coeff == 0) return make_number(0);

    // Normalize nested scopes first.
    for (auto& f : t.factors) {
        if (f->kind == ExprKind::Derivative) {
            f = normalize_derivative(ctx, f, t.coeff);
        } else if (f->kind == ExprKind::Power) {
            f = make_power(collect_terms(ctx, canonicalize(ctx, f->args[0])), f->exponent);
        } else if (f->kind == ExprKind::Sum) {
            f = collect_terms(ctx, canonicalize(ctx, f));
        }
    }
    // Sub-scope collapses can surface numeric factors (including zero).
    t = split_term(make_term(t));
    if (t.coeff == 0) return make_number(0);

    TermIndexInfo info = census(ctx, t.factors);

    std::optional<Candidate> best;
    std::map<std::string, int> seen;
    for (const auto& assignment : dummy_assignments(ctx, info)) {
        Candidate c = evaluate(ctx, t.factors, assignment);
        if (c.zero) return make_number(0);
        auto [it, fresh] = seen.emplace(c.key, c.sign);
        // The same shape with both signs forces the term to vanish.
        if (!fresh && it->second != c.sign) return make_number(0);
        if (!best || c.key < best->key) best = std::move(c);
    }
    t.coeff *= best->sign;
    t.factors = std::move(best->factors);
    return make_term(t);
}

}  // namespace

ExprPtr canonicalize(const Context& ctx, const ExprPtr& e) {
    if (e->kind == ExprKind::Equation)
        return make_equation(canonicalize(ctx, e->args[0]), canonicalize(ctx, e->args[1]));
    if (e->kind == ExprKind::Sum) {
        std::vector<ExprPtr> terms;
        terms.reserve(e->args.size());
        for (const auto& s : e->args) terms.push_back(canonicalize_term(ctx, s));
        return make_sum(std::move(terms));
    }
    return canonicalize_term(ctx, e);
}

std::string factor_sort_key(const Context& ctx, const ExprPtr& factor) {
    return full_factor_key(ctx, factor);
}

std::string term_sort_key(const Context& ctx, const ExprPtr& term) {
    Term t = split_term(term);
    std::string key = pad(int(t.factors.size()), 3);
    for (const auto& f : t.factors) key += full_factor_key(ctx, f) + kFactorSep;
    return key;
}

int compare_terms(const Context& ctx, const ExprPtr& a, const ExprPtr& b) {
    std::string ka = term_sort_key(ctx, a), kb = term_sort_key(ctx, b);
    if (ka < kb) return -1;
    return ka == kb ? 0 : 1;
}

ExprPtr collect_terms(const Context& ctx, const ExprPtr& e) {
    if (e->kind == ExprKind::Equation)
        return make_equation(collect_terms(ctx, e->args[0]), collect_terms(ctx, e->args[1]));
    struct Bucket {
        Term shape;
        Rational total{0};
        std::string key;
    };
    std::vector<Bucket> buckets;
    std::map<std::string, size_t> by_key;
    for (const auto& s : summands(e)) {
        Term t = split_term(s);
        std::string key;
        for (const auto& f : t.factors) key += serialize(ctx, f) + kFactorSep;
        auto it = by_key.find(key);
        if (it == by_key.end()) {
            by_key.emplace(key, buckets.size());
            buckets.push_back({t, t.coeff, term_sort_key(ctx, s)});
        } else {
            buckets[it->second].total += t.coeff;
        }
    }
    std::stable_sort(buckets.begin(), buckets.end(),
                     [](const Bucket& x, const Bucket& y) { return x.key < y.key; });
    std::vector<ExprPtr> out;
    for (auto& b : buckets) {
        if (b.total == 0) continue;
        out.push_back(make_term({b.total, b.shape.factors}));
    }
    return make_sum(std::move(out));
}

}  // namespace tcas
