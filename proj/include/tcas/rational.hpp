#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace tcas {

// Exact rational number. GMP keeps values canonical (reduced, positive
// denominator), so equality is plain comparison.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline int sign(const Rational& r) { return sgn(r); }

// r^e with integer e; e < 0 requires r != 0.
inline Rational pow_rational(const Rational& r, long e) {
    if (e == 0) return Rational(1);
    if (r == 0 && e < 0) throw std::domain_error("0 raised to negative power");
    unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
    Rational out;
    mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(r.get_mpq_t()), n);
    mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(r.get_mpq_t()), n);
    return e < 0 ? Rational(1 / out) : out;
}

// "p" or "p/q"; also accepts a leading sign.
std::optional<Rational> parse_rational(const std::string& text);

std::string to_string(const Rational& r);

double to_double(const Rational& r);

}  // namespace tcas
