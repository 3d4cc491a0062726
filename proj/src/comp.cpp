#include "tcas/comp.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <utility>

#include "tcas/error.hpp"
#include "tcas/rewrite.hpp"

namespace tcas {

namespace {

constexpr char kAtomSep = '\x01';
constexpr char kFactorSep = '\x02';
constexpr size_t kMaxContractionArity = 8;

std::string pad4(int v) {
    std::string digits = std::to_string(v);
    return digits.size() >= 4 ? digits : std::string(4 - digits.size(), '0') + digits;
}

std::string factor_key(const CompFactor& f) {
    std::string k = f.head;
    k += kAtomSep;
    for (const Index& idx : f.indices) {
        if (idx.is_concrete()) {
            k += 'C';
            k += pad4(idx.value);
        } else {
            k += 'A';
            k += idx.name;
        }
        k += idx.variance == Variance::Covariant ? '0' : '1';
        k += kAtomSep;
    }
    return k;
}

std::string term_key(const CompTerm& t) {
    std::string k;
    for (const CompFactor& f : t.factors) {
        k += factor_key(f);
        k += kFactorSep;
    }
    return k;
}

bool all_concrete(const CompFactor& f) {
    return std::all_of(f.indices.begin(), f.indices.end(),
                       [](const Index& i) { return i.is_concrete(); });
}

std::vector<int> concrete_values(const CompFactor& f) {
    std::vector<int> v;
    v.reserve(f.indices.size());
    for (const Index& idx : f.indices) v.push_back(idx.value);
    return v;
}

void substitute_concrete(CompTerm& t, const std::string& name, int value) {
    for (CompFactor& f : t.factors)
        for (Index& idx : f.indices)
            if (!idx.is_concrete() && idx.name == name) {
                idx.kind = IndexKind::Concrete;
                idx.value = value;
                idx.name.clear();
            }
}

void rename_abstract(CompTerm& t, const std::string& from, const std::string& to) {
    for (CompFactor& f : t.factors)
        for (Index& idx : f.indices)
            if (!idx.is_concrete() && idx.name == from) idx.name = to;
}

struct NameCount {
    std::string name;
    int count = 0;
};

// Abstract index names of the term in first-occurrence order. More than two
// occurrences of one name make the contraction structure ambiguous.
std::vector<NameCount> census(const CompTerm& t) {
    std::vector<NameCount> out;
    for (const CompFactor& f : t.factors)
        for (const Index& idx : f.indices) {
            if (idx.is_concrete()) continue;
            auto it = std::find_if(out.begin(), out.end(),
                                   [&](const NameCount& c) { return c.name == idx.name; });
            if (it == out.end())
                out.push_back({idx.name, 1});
            else
                ++it->count;
        }
    for (const NameCount& c : out)
        if (c.count > 2)
            throw Error::eval("index '" + c.name + "' appears " + std::to_string(c.count) +
                              " times in one term");
    return out;
}

std::pair<int, int> range_or_throw(const Context& ctx, const std::string& name) {
    auto [lo, hi] = ctx.range_of(name);
    if (lo > hi) throw Error::eval("index '" + name + "' has no usable component range");
    return {lo, hi};
}

// Fully expands one term: folds concrete e_/d_ factors, consumes Kronecker
// deltas (pin to a concrete value, trace, or splice two names together), and
// sums any remaining dummy over its component range.
void expand_term(const Context& ctx, CompTerm t, CompExpr& out) {
    for (;;) {
        if (t.coeff.is_zero()) return;

        for (size_t i = 0; i < t.factors.size();) {
            CompFactor& f = t.factors[i];
            if (f.head == EpsilonSymbol::head && all_concrete(f)) {
                int s = EpsilonSymbol::sign_of(concrete_values(f));
                if (s == 0) return;
                if (s < 0) t.coeff = -t.coeff;
                t.factors.erase(t.factors.begin() + static_cast<long>(i));
                continue;
            }
            if (f.head == kDeltaHead) {
                if (f.indices.size() != 2)
                    throw Error::eval("d_ takes exactly two indices");
                if (all_concrete(f)) {
                    if (f.indices[0].value != f.indices[1].value) return;
                    t.factors.erase(t.factors.begin() + static_cast<long>(i));
                    continue;
                }
            }
            ++i;
        }

        std::vector<NameCount> counts = census(t);
        auto is_dummy = [&](const std::string& n) {
            auto it = std::find_if(counts.begin(), counts.end(),
                                   [&](const NameCount& c) { return c.name == n; });
            return it != counts.end() && it->count == 2;
        };

        bool stepped = false;
        for (size_t i = 0; i < t.factors.size() && !stepped; ++i) {
            const CompFactor& f = t.factors[i];
            if (f.head != kDeltaHead) continue;
            const Index& a = f.indices[0];
            const Index& b = f.indices[1];
            if (a.is_concrete() != b.is_concrete()) {
                int value = a.is_concrete() ? a.value : b.value;
                std::string name = a.is_concrete() ? b.name : a.name;
                if (!is_dummy(name)) continue;  // delta against a free index stays
                substitute_concrete(t, name, value);
                stepped = true;
            } else if (!a.is_concrete()) {
                if (a.name == b.name) {
                    auto [lo, hi] = range_or_throw(ctx, a.name);
                    t.coeff *= RationalFunction(Rational(hi - lo + 1));
                    t.factors.erase(t.factors.begin() + static_cast<long>(i));
                    stepped = true;
                } else if (is_dummy(a.name) || is_dummy(b.name)) {
                    std::string from = is_dummy(a.name) ? a.name : b.name;
                    std::string to = is_dummy(a.name) ? b.name : a.name;
                    t.factors.erase(t.factors.begin() + static_cast<long>(i));
                    rename_abstract(t, from, to);
                    stepped = true;
                }
            }
        }
        if (stepped) continue;

        const NameCount* dummy = nullptr;
        for (const NameCount& c : counts)
            if (c.count == 2) {
                dummy = &c;
                break;
            }
        if (!dummy) {
            out.push_back(std::move(t));
            return;
        }
        auto [lo, hi] = range_or_throw(ctx, dummy->name);
        for (int v = lo; v <= hi; ++v) {
            CompTerm branch = t;
            substitute_concrete(branch, dummy->name, v);
            expand_term(ctx, branch, out);
        }
        return;
    }
}

void contract_term(const Context& ctx, CompTerm t, CompExpr& out) {
    size_t first = t.factors.size(), second = t.factors.size();
    for (size_t i = 0; i < t.factors.size(); ++i) {
        if (t.factors[i].head != EpsilonSymbol::head) continue;
        if (first == t.factors.size()) {
            first = i;
        } else {
            second = i;
            break;
        }
    }
    if (second == t.factors.size()) {
        if (first != t.factors.size() && all_concrete(t.factors[first])) {
            int s = EpsilonSymbol::sign_of(concrete_values(t.factors[first]));
            if (s == 0) return;
            if (s < 0) t.coeff = -t.coeff;
            t.factors.erase(t.factors.begin() + static_cast<long>(first));
        }
        out.push_back(std::move(t));
        return;
    }

    const std::vector<Index> lhs = t.factors[first].indices;
    const std::vector<Index> rhs = t.factors[second].indices;
    if (lhs.size() != rhs.size())
        throw Error::eval("cannot contract e_ factors of arities " +
                          std::to_string(lhs.size()) + " and " + std::to_string(rhs.size()));
    if (lhs.size() > kMaxContractionArity)
        throw Error::eval("e_ contraction arity " + std::to_string(lhs.size()) +
                          " exceeds the supported maximum " +
                          std::to_string(kMaxContractionArity));

    CompTerm base = t;
    base.factors.erase(base.factors.begin() + static_cast<long>(second));
    base.factors.erase(base.factors.begin() + static_cast<long>(first));

    std::vector<int> perm(lhs.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        CompTerm branch = base;
        if (EpsilonSymbol::sign_of(perm) < 0) branch.coeff = -branch.coeff;
        for (size_t k = 0; k < lhs.size(); ++k)
            branch.factors.push_back(
                CompFactor{kDeltaHead, {lhs[k], rhs[static_cast<size_t>(perm[k])]}});
        contract_term(ctx, std::move(branch), out);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

ExprKind kind_of(const ExprPtr& e) { return e->kind; }

CompFactor lower_derivative(const ExprPtr& d) {
    const ExprPtr& arg = d->args[0];
    CompFactor inner;
    if (arg->kind == ExprKind::Tensor) {
        inner = CompFactor{arg->name, arg->indices};
    } else if (arg->kind == ExprKind::Derivative) {
        inner = lower_derivative(arg);
    } else {
        throw Error::eval("component evaluation needs derivative arguments that are single tensors");
    }
    CompFactor out;
    out.head = d->name + "{" + inner.head + "}";
    out.indices.push_back(d->indices[0]);
    out.indices.insert(out.indices.end(), inner.indices.begin(), inner.indices.end());
    return out;
}

void lower_factor(const Context& ctx, const ExprPtr& f, CompTerm& t) {
    switch (f->kind) {
        case ExprKind::Tensor:
            if (f->head_wildcard)
                throw Error::eval("pattern head '" + f->name + "?' outside a rule");
            t.factors.push_back(CompFactor{f->name, f->indices});
            return;
        case ExprKind::Derivative:
            t.factors.push_back(lower_derivative(f));
            return;
        case ExprKind::Number:
        case ExprKind::Scalar:
        case ExprKind::Power:
        case ExprKind::Sum:
        case ExprKind::Product:
            t.coeff *= eval_scalar(ctx, f);
            return;
        case ExprKind::SqrtNegDet:
            throw Error::eval("\\sqrt{-" + f->name + "} has no direct component value");
        default:
            throw Error::eval("cannot use this expression in a component term");
    }
}

bool match_id(const IdRule& r, const CompFactor& f) {
    if (r.head != f.head || r.slots.size() != f.indices.size()) return false;
    std::map<std::string, int> bound;
    for (size_t k = 0; k < r.slots.size(); ++k) {
        int v = f.indices[k].value;
        const IdSlot& s = r.slots[k];
        if (!s.wildcard) {
            if (s.value != v) return false;
            continue;
        }
        auto it = bound.find(s.name);
        if (it != bound.end()) {
            if (it->second != v) return false;
            continue;
        }
        for (const auto& [name, value] : bound)
            if (value == v) return false;  // distinct wildcards bind distinct values
        bound.emplace(s.name, v);
    }
    return true;
}

std::string poly_piece(const Polynomial& p) {
    return p.terms().size() > 1 ? "(" + p.str() + ")" : p.str();
}

std::string factor_piece(const CompFactor& f) {
    std::string s = f.head + "(";
    for (size_t i = 0; i < f.indices.size(); ++i) {
        if (i) s += ",";
        s += f.indices[i].label();
    }
    return s + ")";
}

// "*"-joined pieces of one term, sign reported separately. A non-unit
// denominator renders as a leading 1/(den) piece, matching the fixed-width
// listing style.
std::string term_pieces(const CompTerm& t, bool& negative) {
    negative = sign(t.coeff.num().leading_coefficient()) < 0;
    Polynomial num = negative ? -t.coeff.num() : t.coeff.num();
    const Polynomial& den = t.coeff.den();
    bool den_trivial = den.is_constant() && den.constant_value() == 1;
    bool num_trivial = num.is_constant() && num.constant_value() == 1;

    std::vector<std::string> pieces;
    if (!den_trivial) pieces.push_back("1/(" + den.str() + ")");
    if (!num_trivial || (den_trivial && t.factors.empty())) pieces.push_back(poly_piece(num));
    for (const CompFactor& f : t.factors) pieces.push_back(factor_piece(f));

    std::string body;
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (i) body += "*";
        body += pieces[i];
    }
    return body;
}

// Indivisible chunks for line filling: " + " and " - " stay whole (also
// inside polynomials), a head never separates from its opening parenthesis,
// everything else breaks per character.
std::vector<std::string> wrap_units(const std::string& body) {
    std::vector<std::string> units;
    size_t i = 0;
    const size_t n = body.size();
    auto word_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
    };
    while (i < n) {
        if (i + 3 <= n && body[i] == ' ' && (body[i + 1] == '+' || body[i + 1] == '-') &&
            body[i + 2] == ' ') {
            units.push_back(body.substr(i, 3));
            i += 3;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(body[i])) != 0) {
            size_t j = i;
            while (j < n && word_char(body[j])) ++j;
            if (j < n && body[j] == '(') {
                units.push_back(body.substr(i, j - i + 1));
                i = j + 1;
                continue;
            }
        }
        units.push_back(body.substr(i, 1));
        ++i;
    }
    return units;
}

}  // namespace

int EpsilonSymbol::sign_of(const std::vector<int>& values) {
    int s = 1;
    for (size_t i = 0; i < values.size(); ++i)
        for (size_t j = i + 1; j < values.size(); ++j) {
            if (values[i] == values[j]) return 0;
            if (values[i] > values[j]) s = -s;
        }
    return s;
}

IdRule make_id_rule(const ExprPtr& lhs, ExprPtr rhs) {
    if (lhs->kind != ExprKind::Tensor)
        throw Error::eval("id left-hand side must be a single tensor");
    IdRule r;
    r.head = lhs->name;
    for (const Index& idx : lhs->indices) {
        IdSlot s;
        if (idx.is_concrete()) {
            s.value = idx.value;
        } else if (idx.wildcard) {
            s.wildcard = true;
            s.name = idx.name;
        } else {
            throw Error::eval("id pattern slots must be concrete values or wildcards like i?");
        }
        r.slots.push_back(std::move(s));
    }
    r.rhs = std::move(rhs);
    return r;
}

RationalFunction eval_scalar(const Context& ctx, const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::Number:
            return RationalFunction(e->number, ctx.scalar_symbols);
        case ExprKind::Scalar:
            if (!ctx.is_symbol(e->name))
                throw Error::eval("undeclared symbol '" + e->name + "' in a component value");
            return RationalFunction::symbol(ctx.scalar_symbols, e->name);
        case ExprKind::Sum: {
            RationalFunction r(Rational(0), ctx.scalar_symbols);
            for (const ExprPtr& a : e->args) r += eval_scalar(ctx, a);
            return r;
        }
        case ExprKind::Product: {
            RationalFunction r(Rational(1), ctx.scalar_symbols);
            for (const ExprPtr& a : e->args) r *= eval_scalar(ctx, a);
            return r;
        }
        case ExprKind::Power:
            return eval_scalar(ctx, e->args[0]).pow(e->exponent);
        default:
            throw Error::eval("expected a scalar value in a component expression");
    }
}

CompExpr lower(const Context& ctx, const ExprPtr& e) {
    if (kind_of(e) == ExprKind::Equation)
        throw Error::eval("the component engine works on expressions, not equations");
    ExprPtr flat = distribute(ctx, e);
    CompExpr out;
    for (const ExprPtr& s : summands(flat)) {
        Term term = split_term(s);
        CompTerm t;
        t.coeff = RationalFunction(term.coeff, ctx.scalar_symbols);
        for (const ExprPtr& f : term.factors) lower_factor(ctx, f, t);
        if (!t.coeff.is_zero()) out.push_back(std::move(t));
    }
    return out;
}

CompExpr collect_terms(CompExpr in) {
    std::map<std::string, CompTerm> acc;
    for (CompTerm& t : in) {
        std::stable_sort(t.factors.begin(), t.factors.end(),
                         [](const CompFactor& x, const CompFactor& y) {
                             return factor_key(x) < factor_key(y);
                         });
        std::string key = term_key(t);
        auto it = acc.find(key);
        if (it == acc.end())
            acc.emplace(std::move(key), std::move(t));
        else
            it->second.coeff += t.coeff;
    }
    CompExpr out;
    for (auto& [key, t] : acc)
        if (!t.coeff.is_zero()) out.push_back(std::move(t));
    return out;
}

CompExpr expand_dummies_serial(const Context& ctx, const CompExpr& in) {
    CompExpr raw;
    for (const CompTerm& t : in) expand_term(ctx, t, raw);
    return collect_terms(std::move(raw));
}

CompExpr expand_dummies(const Context& ctx, const CompExpr& in) {
#ifdef TCAS_HAVE_OPENMP
    std::vector<CompExpr> buckets(in.size());
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(in.size()); ++i) {
        try {
            expand_term(ctx, in[static_cast<size_t>(i)], buckets[static_cast<size_t>(i)]);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    CompExpr raw;
    for (CompExpr& b : buckets)
        raw.insert(raw.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
    return collect_terms(std::move(raw));
#else
    return expand_dummies_serial(ctx, in);
#endif
}

CompExpr contract_epsilon(const Context& ctx, const CompExpr& in) {
    CompExpr out;
    for (const CompTerm& t : in) contract_term(ctx, t, out);
    return collect_terms(std::move(out));
}

CompExpr apply_id_rules(const Context& ctx, const CompExpr& in,
                        const std::vector<IdRule>& rules) {
    std::vector<RationalFunction> values;
    values.reserve(rules.size());
    for (const IdRule& r : rules) values.push_back(eval_scalar(ctx, r.rhs));

    CompExpr out;
    for (const CompTerm& t : in) {
        CompTerm kept;
        kept.coeff = t.coeff;
        for (const CompFactor& f : t.factors) {
            const RationalFunction* hit = nullptr;
            if (all_concrete(f)) {
                for (size_t r = 0; r < rules.size(); ++r)
                    if (match_id(rules[r], f)) {
                        hit = &values[r];
                        break;
                    }
            }
            if (hit)
                kept.coeff *= *hit;
            else
                kept.factors.push_back(f);
            if (kept.coeff.is_zero()) break;
        }
        if (!kept.coeff.is_zero()) out.push_back(std::move(kept));
    }
    return collect_terms(std::move(out));
}

RationalFunction determinant(const Context& ctx, const Matrix4& m) {
    // A scratch declaration state pins i,j,k,l to the 0..3 range no matter
    // what families the caller declared for those names.
    Context scratch;
    scratch.dimension = 4;

    const char* names[4] = {"i", "j", "k", "l"};
    CompTerm seed;
    seed.coeff = RationalFunction(Rational(1), ctx.scalar_symbols);
    CompFactor eps_concrete{EpsilonSymbol::head, {}};
    CompFactor eps_abstract{EpsilonSymbol::head, {}};
    for (int r = 0; r < 4; ++r) {
        eps_concrete.indices.push_back(Index::concrete(r));
        eps_abstract.indices.push_back(Index::abstract(names[r]));
    }
    seed.factors.push_back(std::move(eps_concrete));
    seed.factors.push_back(std::move(eps_abstract));
    for (int r = 0; r < 4; ++r)
        seed.factors.push_back(CompFactor{"g", {Index::concrete(r), Index::abstract(names[r])}});

    CompExpr terms = contract_epsilon(scratch, CompExpr{seed});
    terms = expand_dummies_serial(scratch, terms);

    RationalFunction det(Rational(0), ctx.scalar_symbols);
    for (const CompTerm& t : terms) {
        RationalFunction v = t.coeff;
        for (const CompFactor& f : t.factors)
            v *= m[static_cast<size_t>(f.indices[0].value)][static_cast<size_t>(f.indices[1].value)];
        det += v;
    }
    return det;
}

std::string render_form(const std::string& name, const CompExpr& e, int width) {
    std::string body;
    for (size_t i = 0; i < e.size(); ++i) {
        bool negative = false;
        std::string pieces = term_pieces(e[i], negative);
        if (i == 0)
            body += negative ? " - " + pieces : pieces;
        else
            body += (negative ? " - " : " + ") + pieces;
    }
    if (e.empty()) body = "0";
    body += ";";

    const std::string indent = "   ";
    const size_t budget = width > 11 ? static_cast<size_t>(width - 7) : 4;
    std::string out = name + " =";
    std::string line;
    for (const std::string& unit : wrap_units(body)) {
        if (!line.empty() && line.size() + unit.size() > budget) {
            out += "\n" + indent + line;
            line.clear();
        }
        line += unit;
    }
    out += "\n" + indent + line;
    return out;
}

}  // namespace tcas
