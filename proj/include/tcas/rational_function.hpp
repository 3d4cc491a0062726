#pragma once

#include <map>
#include <string>

#include "tcas/polynomial.hpp"

namespace tcas {

// Quotient of expanded polynomials, kept normalized as a class invariant:
// gcd(num, den) = 1 and the denominator's leading coefficient (frozen
// monomial order) is positive. The zero function is 0/1.
class RationalFunction {
  public:
    RationalFunction() : num_(), den_(Rational(1)) {}
    explicit RationalFunction(Rational c, SymbolTablePtr syms = nullptr)
        : num_(std::move(c), syms), den_(Rational(1), syms) {}
    explicit RationalFunction(Polynomial p);
    // Normalizes; throws std::domain_error on a zero denominator.
    RationalFunction(Polynomial num, Polynomial den);

    static RationalFunction symbol(const SymbolTablePtr& syms, const std::string& name) {
        return RationalFunction(Polynomial::symbol(syms, name));
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const;

    RationalFunction operator-() const;
    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    // Throws std::domain_error on division by zero.
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }
    RationalFunction pow(long e) const;

    // Mathematical equality by cross-multiplication; independent of any
    // normalization the operands may or may not share.
    static bool equal(const RationalFunction& a, const RationalFunction& b);
    // Structural equality of the normalized forms.
    bool operator==(const RationalFunction& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    // Throws std::domain_error at poles and for unbound symbols.
    Rational eval(const std::map<int, Rational>& values) const;

    // Exact square root when both num and den are perfect squares (result
    // normalized with the same invariant); nullopt otherwise.
    std::optional<RationalFunction> sqrt_exact() const;

    // "num" when den = 1, otherwise "num/den" with parentheses as needed,
    // e.g. "(r - a)/r".
    std::string str() const;

  private:
    void normalize();
    Polynomial num_, den_;
};

}  // namespace tcas
