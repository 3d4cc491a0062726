#include "tcas/rational.hpp"

#include <cctype>

namespace tcas {

std::optional<Rational> parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) return std::nullopt;
    bool neg = false;
    size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') neg = s[pos++] == '-';
    auto digits = [&](std::string& out) {
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) out += s[pos++];
        return pos > start;
    };
    std::string num, den = "1";
    if (!digits(num)) return std::nullopt;
    if (pos < s.size()) {
        if (s[pos] != '/') return std::nullopt;
        ++pos;
        den.clear();
        if (!digits(den) || pos != s.size()) return std::nullopt;
    }
    Rational r;
    if (mpq_set_str(r.get_mpq_t(), (num + "/" + den).c_str(), 10) != 0) return std::nullopt;
    if (r.get_den() == 0) return std::nullopt;
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
    return is_integer(r) ? r.get_num().get_str() : r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

}  // namespace tcas
