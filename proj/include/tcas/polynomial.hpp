#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcas/rational.hpp"
#include "tcas/symbols.hpp"

namespace tcas {

// Exponent vector indexed by symbol id, trailing zeros trimmed.
using Monomial = std::vector<unsigned>;

// Frozen monomial order used everywhere a polynomial is printed or a leading
// term is taken: higher total degree first; among equal degrees,
// lexicographic on exponents read from the highest symbol id down (i.e. the
// most recently declared symbol is the most significant). With symbols
// declared "a,b" this prints  b^2 - 2*a*b + a^2.
int compare_monomials(const Monomial& a, const Monomial& b);

struct MonomialBefore {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return compare_monomials(a, b) < 0;
    }
};

// Multivariate polynomial with exact rational coefficients. The term map is
// kept in the frozen order, so iteration yields print order directly.
class Polynomial {
  public:
    using TermMap = std::map<Monomial, Rational, MonomialBefore>;

    Polynomial() = default;
    explicit Polynomial(Rational c, SymbolTablePtr syms = nullptr);
    static Polynomial symbol(const SymbolTablePtr& syms, int id);
    static Polynomial symbol(const SymbolTablePtr& syms, const std::string& name);
    static Polynomial term(const SymbolTablePtr& syms, Monomial m, Rational c);

    const TermMap& terms() const { return terms_; }
    const SymbolTablePtr& symbols() const { return syms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Requires is_constant().
    Rational constant_value() const;

    // Leading term w.r.t. the frozen order. Requires !is_zero().
    const Monomial& leading_monomial() const;
    const Rational& leading_coefficient() const;

    long total_degree() const;
    long degree_in(int sym) const;
    // Symbol ids with a nonzero exponent somewhere.
    std::vector<int> variables() const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
    Polynomial operator*(const Rational& c) const;
    Polynomial pow(unsigned e) const;

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // Exact division; nullopt when o does not divide *this.
    std::optional<Polynomial> divide_exact(const Polynomial& o) const;

    // Exact square root; nullopt when *this is not a perfect square.
    std::optional<Polynomial> sqrt_exact() const;

    // Rational content c such that *this / c has coprime integer coefficients
    // and a positive leading coefficient. content(0) = 0.
    Rational content() const;
    Polynomial primitive_part() const;

    // GCD, normalized to primitive with positive leading coefficient;
    // gcd(0,0) = 0, and any nonzero constant input gives 1.
    static Polynomial gcd(const Polynomial& a, const Polynomial& b);

    // Evaluate with values[id] for every variable that occurs; throws
    // std::domain_error when a variable has no value.
    Rational eval(const std::map<int, Rational>& values) const;

    // Listing-style text: terms in the frozen order, " + "/" - " separators,
    // symbols inside a monomial in declaration order, e.g. "b^2 - 2*a*b + a^2".
    std::string str() const;

  private:
    void insert_term(Monomial m, Rational c);
    SymbolTablePtr syms_;
    TermMap terms_;
    friend class RationalFunction;
};

Polynomial operator*(const Rational& c, const Polynomial& p);

}  // namespace tcas
