#include "tcas/polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace tcas {

namespace {

void trim(Monomial& m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
}

long degree_of(const Monomial& m) {
    long d = 0;
    for (unsigned e : m) d += e;
    return d;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

// a / b when b divides a, else nullopt.
std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
    if (b.size() > a.size()) {
        for (size_t i = a.size(); i < b.size(); ++i)
            if (b[i] != 0) return std::nullopt;
    }
    Monomial r(a);
    for (size_t i = 0; i < b.size() && i < a.size(); ++i) {
        if (b[i] > a[i]) return std::nullopt;
        r[i] -= b[i];
    }
    trim(r);
    return r;
}

SymbolTablePtr merge_tables(const SymbolTablePtr& a, const SymbolTablePtr& b) {
    if (a && b && a != b)
        throw std::logic_error("polynomials belong to different symbol universes");
    return a ? a : b;
}

}  // namespace

int compare_monomials(const Monomial& a, const Monomial& b) {
    long da = degree_of(a), db = degree_of(b);
    if (da != db) return da > db ? -1 : 1;  // higher degree prints first
    size_t n = std::max(a.size(), b.size());
    for (size_t i = n; i-- > 0;) {
        unsigned ea = i < a.size() ? a[i] : 0;
        unsigned eb = i < b.size() ? b[i] : 0;
        if (ea != eb) return ea > eb ? -1 : 1;  // later symbols dominate
    }
    return 0;
}

Polynomial::Polynomial(Rational c, SymbolTablePtr syms) : syms_(std::move(syms)) {
    if (c != 0) terms_.emplace(Monomial{}, std::move(c));
}

Polynomial Polynomial::symbol(const SymbolTablePtr& syms, int id) {
    if (!syms || id < 0 || id >= syms->size())
        throw std::logic_error("symbol id outside table");
    Polynomial p;
    p.syms_ = syms;
    Monomial m(static_cast<size_t>(id) + 1, 0);
    m.back() = 1;
    p.terms_.emplace(std::move(m), Rational(1));
    return p;
}

Polynomial Polynomial::symbol(const SymbolTablePtr& syms, const std::string& name) {
    if (!syms) throw std::logic_error("symbol requires a table");
    return symbol(syms, syms->intern(name));
}

Polynomial Polynomial::term(const SymbolTablePtr& syms, Monomial m, Rational c) {
    Polynomial p(Rational(0), syms);
    p.insert_term(std::move(m), std::move(c));
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Polynomial::constant_value() const {
    if (terms_.empty()) return Rational(0);
    assert(is_constant());
    return terms_.begin()->second;
}

const Monomial& Polynomial::leading_monomial() const {
    assert(!terms_.empty());
    return terms_.begin()->first;
}

const Rational& Polynomial::leading_coefficient() const {
    assert(!terms_.empty());
    return terms_.begin()->second;
}

long Polynomial::total_degree() const {
    return terms_.empty() ? -1 : degree_of(terms_.begin()->first);
}

long Polynomial::degree_in(int sym) const {
    long d = 0;
    for (const auto& [m, c] : terms_)
        if (static_cast<size_t>(sym) < m.size()) d = std::max(d, long(m[static_cast<size_t>(sym)]));
    return d;
}

std::vector<int> Polynomial::variables() const {
    std::vector<int> out;
    for (const auto& [m, c] : terms_)
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0 && std::find(out.begin(), out.end(), int(i)) == out.end())
                out.push_back(int(i));
    std::sort(out.begin(), out.end());
    return out;
}

void Polynomial::insert_term(Monomial m, Rational c) {
    trim(m);
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        if (c != 0) terms_.emplace(std::move(m), std::move(c));
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial r(*this);
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r(*this);
    r.syms_ = merge_tables(syms_, o.syms_);
    for (const auto& [m, c] : o.terms_) r.insert_term(m, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial r(*this);
    r.syms_ = merge_tables(syms_, o.syms_);
    for (const auto& [m, c] : o.terms_) r.insert_term(m, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r;
    r.syms_ = merge_tables(syms_, o.syms_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) r.insert_term(mono_mul(ma, mb), ca * cb);
    return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
    if (c == 0) return Polynomial(Rational(0), syms_);
    Polynomial r(*this);
    for (auto& [m, coeff] : r.terms_) coeff *= c;
    return r;
}

Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial r(Rational(1), syms_);
    Polynomial base(*this);
    while (e) {
        if (e & 1) r *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return r;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& o) const {
    if (o.is_zero()) return std::nullopt;
    Polynomial q;
    q.syms_ = merge_tables(syms_, o.syms_);
    Polynomial rem(*this);
    rem.syms_ = q.syms_;
    // Leading-term elimination in the frozen order; for an exact quotient the
    // leading monomial of the remainder must stay divisible until it is gone.
    while (!rem.is_zero()) {
        auto m = mono_div(rem.leading_monomial(), o.leading_monomial());
        if (!m) return std::nullopt;
        Rational c = rem.leading_coefficient() / o.leading_coefficient();
        Polynomial t;
        t.syms_ = q.syms_;
        t.terms_.emplace(*m, c);
        q += t;
        rem -= t * o;
    }
    return q;
}

std::optional<Polynomial> Polynomial::sqrt_exact() const {
    if (is_zero()) return Polynomial(Rational(0), syms_);
    // Root of the leading term first, then peel matching leading terms off the
    // residual: with r = p - q^2, the next root term is lt(r) / (2 lt(q)).
    const Rational& lc = leading_coefficient();
    if (sign(lc) < 0) return std::nullopt;
    Rational lc_root;
    {
        Rational num, den;
        if (mpz_perfect_square_p(lc.get_num_mpz_t()) == 0) return std::nullopt;
        if (mpz_perfect_square_p(lc.get_den_mpz_t()) == 0) return std::nullopt;
        mpz_sqrt(num.get_num_mpz_t(), lc.get_num_mpz_t());
        mpz_sqrt(den.get_num_mpz_t(), lc.get_den_mpz_t());
        lc_root = num / den;
    }
    Monomial lm = leading_monomial();
    Monomial half(lm);
    for (auto& e : half) {
        if (e % 2) return std::nullopt;
        e /= 2;
    }
    Polynomial q;
    q.syms_ = syms_;
    q.terms_.emplace(half, lc_root);
    Polynomial rem = *this - q * q;
    Polynomial two_lead;
    two_lead.syms_ = syms_;
    two_lead.terms_.emplace(half, 2 * lc_root);
    size_t guard = terms_.size() * terms_.size() + 16;
    while (!rem.is_zero()) {
        if (guard-- == 0) return std::nullopt;
        auto m = mono_div(rem.leading_monomial(), half);
        if (!m) return std::nullopt;
        if (compare_monomials(*m, half) < 0) return std::nullopt;  // would not decrease
        Polynomial t;
        t.syms_ = syms_;
        t.terms_.emplace(*m, rem.leading_coefficient() / two_lead.leading_coefficient());
        Polynomial next = q + t;
        rem = *this - next * next;
        q = std::move(next);
    }
    return q;
}

Rational Polynomial::content() const {
    if (is_zero()) return Rational(0);
    // gcd of numerators over lcm of denominators, signed like the leader.
    mpz_class num_gcd(0), den_lcm(1);
    for (const auto& [m, c] : terms_) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Rational content(num_gcd, den_lcm);
    content.canonicalize();
    if (sign(leading_coefficient()) < 0) content = -content;
    return content;
}

Polynomial Polynomial::primitive_part() const {
    if (is_zero()) return *this;
    return *this * Rational(1 / content());
}

Rational Polynomial::eval(const std::map<int, Rational>& values) const {
    Rational acc(0);
    for (const auto& [m, c] : terms_) {
        Rational t(c);
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            auto it = values.find(int(i));
            if (it == values.end())
                throw std::domain_error("no value for symbol '" +
                                        (syms_ ? syms_->name(int(i)) : std::to_string(i)) + "'");
            t *= pow_rational(it->second, m[i]);
        }
        acc += t;
    }
    return acc;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational a = abs(c);
        if (first) {
            if (sign(c) < 0) out += "- ";
            first = false;
        } else {
            out += sign(c) < 0 ? " - " : " + ";
        }
        std::string mono;
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += syms_ ? syms_->name(int(i)) : "x" + std::to_string(i);
            if (m[i] > 1) mono += "^" + std::to_string(m[i]);
        }
        if (mono.empty()) {
            out += to_string(a);
        } else {
            if (a != 1) out += to_string(a) + "*";
            out += mono;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// GCD: contents split off recursively, primitive parts handled by a
// subresultant polynomial remainder sequence in one chosen variable.

namespace {

// Dense univariate view in variable x; coefficients are polynomials in the
// remaining variables. coeffs[i] multiplies x^i.
struct UniPoly {
    std::vector<Polynomial> coeffs;

    long degree() const {
        for (size_t i = coeffs.size(); i-- > 0;)
            if (!coeffs[i].is_zero()) return long(i);
        return -1;
    }
    const Polynomial& lc() const { return coeffs[static_cast<size_t>(degree())]; }
    bool is_zero() const { return degree() < 0; }
    void shrink() { coeffs.resize(static_cast<size_t>(degree() + 1)); }
};

UniPoly to_univariate(const Polynomial& p, int x, const SymbolTablePtr& syms) {
    UniPoly u;
    u.coeffs.assign(static_cast<size_t>(p.degree_in(x) + 1), Polynomial(Rational(0), syms));
    for (const auto& [m, c] : p.terms()) {
        unsigned e = static_cast<size_t>(x) < m.size() ? m[static_cast<size_t>(x)] : 0;
        Monomial rest(m);
        if (static_cast<size_t>(x) < rest.size()) rest[static_cast<size_t>(x)] = 0;
        u.coeffs[e] += Polynomial::term(syms, std::move(rest), c);
    }
    return u;
}

Polynomial from_univariate(const UniPoly& u, int x, const SymbolTablePtr& syms) {
    Polynomial xp = Polynomial::symbol(syms, x);
    Polynomial acc(Rational(0), syms);
    Polynomial xpow(Rational(1), syms);
    for (size_t i = 0; i < u.coeffs.size(); ++i) {
        if (!u.coeffs[i].is_zero()) acc += u.coeffs[i] * xpow;
        if (i + 1 < u.coeffs.size()) xpow *= xp;
    }
    return acc;
}

// Pseudo-remainder: lc(B)^(degA-degB+1) * A mod B, computed by repeated
// leading-term elimination.
UniPoly pseudo_rem(UniPoly A, const UniPoly& B) {
    long db = B.degree();
    assert(db >= 0);
    long da = A.degree();
    if (da < db) {
        // prem multiplies by lc(B)^(da-db+1) <= 0 times; by convention scale 1
        return A;
    }
    const Polynomial& bl = B.lc();
    long steps = da - db + 1;
    while (A.degree() >= db && steps > 0) {
        long d = A.degree();
        Polynomial al = A.lc();
        for (auto& c : A.coeffs) c *= bl;
        for (long i = 0; i <= db; ++i)
            A.coeffs[static_cast<size_t>(d - db + i)] -= al * B.coeffs[static_cast<size_t>(i)];
        A.shrink();
        --steps;
    }
    // Keep the classical scaling even when elimination finished early.
    for (; steps > 0; --steps)
        for (auto& c : A.coeffs) c *= bl;
    return A;
}

UniPoly divide_coeffs_exact(const UniPoly& u, const Polynomial& d) {
    UniPoly r;
    r.coeffs.reserve(u.coeffs.size());
    for (const auto& c : u.coeffs) {
        auto q = c.divide_exact(d);
        if (!q) throw std::logic_error("subresultant scaling did not divide exactly");
        r.coeffs.push_back(std::move(*q));
    }
    return r;
}

}  // namespace

Polynomial Polynomial::gcd(const Polynomial& a, const Polynomial& b) {
    SymbolTablePtr syms = merge_tables(a.syms_, b.syms_);
    if (a.is_zero()) return b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    if (a.is_constant() || b.is_constant()) return Polynomial(Rational(1), syms);

    // Main variable: the lowest-id symbol occurring in both; when the
    // supports are disjoint the primitive parts are coprime.
    std::vector<int> va = a.variables(), vb = b.variables();
    int x = -1;
    for (int v : va)
        if (std::find(vb.begin(), vb.end(), v) != vb.end()) {
            x = v;
            break;
        }
    if (x < 0) return Polynomial(Rational(1), syms);

    UniPoly A = to_univariate(a, x, syms), B = to_univariate(b, x, syms);

    // Contents w.r.t. x are polynomials in the remaining variables.
    auto content_x = [&](const UniPoly& u) {
        Polynomial c(Rational(0), syms);
        for (const auto& coeff : u.coeffs)
            if (!coeff.is_zero()) c = gcd(c, coeff);
        return c;
    };
    Polynomial ca = content_x(A), cb = content_x(B);
    Polynomial cont = gcd(ca, cb);
    A = divide_coeffs_exact(A, ca);
    B = divide_coeffs_exact(B, cb);

    if (A.degree() < B.degree()) std::swap(A, B);

    // Subresultant PRS (Collins/Brown): divisors g*h^delta keep coefficient
    // growth polynomial while staying exact.
    Polynomial g(Rational(1), syms), h(Rational(1), syms);
    while (true) {
        long delta = A.degree() - B.degree();
        UniPoly R = pseudo_rem(A, B);
        if (R.is_zero()) break;
        if (R.degree() == 0) {
            // Coprime in x: only the content survives.
            return cont.primitive_part();
        }
        A = B;
        Polynomial divisor = g * h.pow(static_cast<unsigned>(delta));
        B = divide_coeffs_exact(R, divisor);
        g = A.lc();
        if (delta > 0) {
            Polynomial num = g.pow(static_cast<unsigned>(delta));
            auto q = delta == 1 ? num : num.divide_exact(h.pow(static_cast<unsigned>(delta - 1)));
            if (!q) throw std::logic_error("subresultant h update did not divide exactly");
            h = *q;
        }
    }

    Polynomial pp = from_univariate(B, x, syms);
    // Make primitive in x, then overall.
    UniPoly Bu = to_univariate(pp, x, syms);
    Polynomial bc = content_x(Bu);
    auto reduced = pp.divide_exact(bc);
    if (!reduced) throw std::logic_error("gcd content removal did not divide exactly");
    return (cont * *reduced).primitive_part();
}

}  // namespace tcas
