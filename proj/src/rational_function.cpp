#include "tcas/rational_function.hpp"

#include <stdexcept>

namespace tcas {

RationalFunction::RationalFunction(Polynomial p)
    : num_(std::move(p)), den_(Rational(1), num_.symbols()) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    normalize();
}

void RationalFunction::normalize() {
    if (den_.is_zero()) throw std::domain_error("zero denominator");
    if (num_.is_zero()) {
        den_ = Polynomial(Rational(1), den_.symbols());
        return;
    }
    Polynomial g = Polynomial::gcd(num_, den_);
    if (!(g.is_constant() && g.constant_value() == 1)) {
        auto n = num_.divide_exact(g);
        auto d = den_.divide_exact(g);
        if (!n || !d) throw std::logic_error("gcd does not divide its arguments");
        num_ = std::move(*n);
        den_ = std::move(*d);
    }
    // Scale so the denominator is integer-primitive with a positive leader;
    // this is what keeps (b - a) and (r - a) style denominators positive.
    Rational c = den_.content();
    num_ = num_ * Rational(1 / c);
    den_ = den_ * Rational(1 / c);
}

bool RationalFunction::is_one() const {
    return num_.is_constant() && den_.is_constant() && !num_.is_zero() &&
           num_.constant_value() == den_.constant_value();
}

Rational RationalFunction::constant_value() const {
    return num_.constant_value() / den_.constant_value();
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r(*this);
    r.num_ = -r.num_;
    return r;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    if (o.is_zero()) throw std::domain_error("division by zero");
    return RationalFunction(num_ * o.den_, den_ * o.num_);
}

RationalFunction RationalFunction::pow(long e) const {
    if (e == 0) return RationalFunction(Rational(1), num_.symbols());
    if (e < 0) {
        if (is_zero()) throw std::domain_error("0 raised to negative power");
        return RationalFunction(den_.pow(static_cast<unsigned>(-e)),
                                num_.pow(static_cast<unsigned>(-e)));
    }
    return RationalFunction(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
}

bool RationalFunction::equal(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
}

Rational RationalFunction::eval(const std::map<int, Rational>& values) const {
    Rational d = den_.eval(values);
    if (d == 0) throw std::domain_error("evaluation at a pole");
    return num_.eval(values) / d;
}

std::optional<RationalFunction> RationalFunction::sqrt_exact() const {
    auto n = num_.sqrt_exact();
    if (!n) return std::nullopt;
    auto d = den_.sqrt_exact();
    if (!d) return std::nullopt;
    return RationalFunction(std::move(*n), std::move(*d));
}

std::string RationalFunction::str() const {
    bool den_one = den_.is_constant() && den_.constant_value() == 1;
    if (den_one) return num_.str();
    std::string n = num_.str();
    if (num_.terms().size() > 1) n = "(" + n + ")";
    std::string d = den_.str();
    bool simple_den = den_.terms().size() == 1 && den_.leading_coefficient() == 1 &&
                      den_.total_degree() == 1;
    if (!simple_den) d = "(" + d + ")";
    return n + "/" + d;
}

}  // namespace tcas
