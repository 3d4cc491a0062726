#include "tcas/render.hpp"

#include <sstream>

#include "tcas/error.hpp"

namespace tcas {

namespace {

struct Unit {
    std::string sep;   // "", " + ", " - ", " = "
    std::string text;  // one term (or equation side marker)
};

std::string plain_expr(const ExprPtr& e);

std::string index_group_text(const std::vector<Index>& idxs, size_t begin, size_t end) {
    std::string out = "{";
    for (size_t i = begin; i < end; ++i) {
        if (i > begin) out += " ";
        out += idxs[i].label();
    }
    return out + "}";
}

std::string plain_tensor(const Expr& t) {
    std::string out = t.name;
    if (t.head_wildcard) out += "?";
    if (t.call_syntax) {
        out += "(";
        for (size_t i = 0; i < t.indices.size(); ++i) {
            if (i) out += ",";
            out += t.indices[i].label();
        }
        return out + ")";
    }
    size_t i = 0;
    while (i < t.indices.size()) {
        size_t j = i;
        while (j < t.indices.size() && t.indices[j].variance == t.indices[i].variance) ++j;
        out += t.indices[i].variance == Variance::Covariant ? "_" : "^";
        out += index_group_text(t.indices, i, j);
        i = j;
    }
    return out;
}

std::string plain_factor(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::Number:
            return to_string(e->number);
        case ExprKind::Scalar:
            return e->name;
        case ExprKind::Tensor:
            return plain_tensor(*e);
        case ExprKind::Derivative:
            return e->name + "_{" + e->indices[0].label() + "}{" + plain_expr(e->args[0]) + "}";
        case ExprKind::SqrtNegDet:
            return "\\sqrt{-" + e->name + "}";
        case ExprKind::Power: {
            const ExprPtr& base = e->args[0];
            bool parens = base->kind == ExprKind::Sum || base->kind == ExprKind::Product ||
                          base->kind == ExprKind::Derivative ||
                          (base->kind == ExprKind::Tensor && !base->call_syntax);
            std::string b = parens ? "(" + plain_expr(base) + ")" : plain_factor(base);
            long n = e->exponent < 0 ? -e->exponent : e->exponent;
            std::string head = b + "^" + std::to_string(n);
            return e->exponent < 0 ? "1/" + head : head;  // standalone reciprocal
        }
        case ExprKind::Sum:
        case ExprKind::Product:
            return "(" + plain_expr(e) + ")";
        case ExprKind::Equation:
            throw Error::eval("equation used as a subexpression");
    }
    return {};
}

// One term: coefficient magnitude plus factors in stored order; reciprocal
// power factors render as "/ base^n" so products like 4 \pi / c read back
// identically.
std::string plain_term(const Term& t) {
    Rational mag = abs(t.coeff);
    if (t.factors.empty()) return to_string(mag);
    std::string out;
    if (mag != 1) out = to_string(mag);
    for (const auto& f : t.factors) {
        if (f->kind == ExprKind::Power && f->exponent < 0) {
            const ExprPtr& base = f->args[0];
            bool parens = base->kind == ExprKind::Sum || base->kind == ExprKind::Product ||
                          base->kind == ExprKind::Derivative ||
                          (base->kind == ExprKind::Tensor && !base->call_syntax);
            std::string b = parens ? "(" + plain_expr(base) + ")" : plain_factor(base);
            if (f->exponent != -1) b += "^" + std::to_string(-f->exponent);
            if (out.empty())
                out = "1/" + b;
            else
                out += " / " + b;
        } else {
            if (!out.empty()) out += " ";
            out += plain_factor(f);
        }
    }
    return out;
}

std::string plain_expr(const ExprPtr& e) {
    if (e->kind == ExprKind::Equation)
        return plain_expr(e->args[0]) + " = " + plain_expr(e->args[1]);
    std::string out;
    bool first = true;
    for (const auto& s : summands(e)) {
        Term t = split_term(s);
        std::string body = plain_term(t);
        if (first) {
            out += sign(t.coeff) < 0 ? "-" + body : body;
            first = false;
        } else {
            out += sign(t.coeff) < 0 ? " - " + body : " + " + body;
        }
    }
    return out;
}

// --- LaTeX ------------------------------------------------------------------

std::string latex_expr(const ExprPtr& e);

std::string latex_tensor(const Expr& t) {
    if (t.call_syntax) return plain_tensor(t);
    std::string out = "{" + t.name + (t.head_wildcard ? "?" : "") + "}";
    size_t i = 0;
    while (i < t.indices.size()) {
        size_t j = i;
        while (j < t.indices.size() && t.indices[j].variance == t.indices[i].variance) ++j;
        out += t.indices[i].variance == Variance::Covariant ? "_" : "^";
        out += index_group_text(t.indices, i, j);
        i = j;
    }
    return out;
}

std::string latex_factor(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::Number: {
            if (is_integer(e->number)) return to_string(e->number);
            return "\\frac{" + e->number.get_num().get_str() + "}{" +
                   e->number.get_den().get_str() + "}";
        }
        case ExprKind::Scalar:
            return e->name;
        case ExprKind::Tensor:
            return latex_tensor(*e);
        case ExprKind::Derivative: {
            const ExprPtr& arg = e->args[0];
            std::string body = latex_expr(arg);
            if (arg->kind == ExprKind::Product || arg->kind == ExprKind::Sum)
                body = "(" + body + ")";
            return "{" + e->name + "}_{" + e->indices[0].label() + "}{" + body + "}";
        }
        case ExprKind::SqrtNegDet:
            return "\\sqrt{-" + e->name + "}";
        case ExprKind::Power: {
            const ExprPtr& base = e->args[0];
            if (base->kind == ExprKind::SqrtNegDet && e->exponent == -1)
                return "\\frac{1}{" + latex_factor(base) + "}";
            std::string b = base->kind == ExprKind::Sum || base->kind == ExprKind::Product
                                ? "(" + latex_expr(base) + ")"
                                : latex_factor(base);
            return "{" + b + "}^{" + std::to_string(e->exponent) + "}";
        }
        case ExprKind::Sum:
        case ExprKind::Product:
            return "(" + latex_expr(e) + ")";
        case ExprKind::Equation:
            throw Error::eval("equation used as a subexpression");
    }
    return {};
}

std::string latex_term(const Term& t) {
    Rational mag = abs(t.coeff);
    if (t.factors.empty()) return latex_factor(make_number(mag));
    std::string out;
    if (mag != 1) out = latex_factor(make_number(mag));
    for (const auto& f : t.factors) {
        if (!out.empty()) out += " ";
        out += latex_factor(f);
    }
    return out;
}

std::string latex_expr(const ExprPtr& e) {
    if (e->kind == ExprKind::Equation)
        return latex_expr(e->args[0]) + " = " + latex_expr(e->args[1]);
    std::string out;
    bool first = true;
    for (const auto& s : summands(e)) {
        Term t = split_term(s);
        std::string body = latex_term(t);
        if (first) {
            out += sign(t.coeff) < 0 ? "-" + body : body;
            first = false;
        } else {
            out += sign(t.coeff) < 0 ? " - " + body : " + " + body;
        }
    }
    return out;
}

// --- wrapping ---------------------------------------------------------------

// Breaks the flat rendition at " + " / " - " / " = " seams (outside any
// bracket) when a line would overflow; continuation lines are indented four
// spaces and start with the operator. A single oversized unit is hard-split.
std::string wrap(const std::string& flat, int width) {
    std::vector<Unit> units;
    int depth = 0;
    std::string cur;
    std::string pending_sep;
    size_t i = 0;
    while (i < flat.size()) {
        char c = flat[i];
        if (c == '(' || c == '{') ++depth;
        if (c == ')' || c == '}') --depth;
        if (depth == 0 && c == ' ' && i + 2 < flat.size() &&
            (flat[i + 1] == '+' || flat[i + 1] == '-' || flat[i + 1] == '=') &&
            flat[i + 2] == ' ') {
            units.push_back({pending_sep, cur});
            pending_sep = flat.substr(i, 3);
            cur.clear();
            i += 3;
            continue;
        }
        cur += c;
        ++i;
    }
    units.push_back({pending_sep, cur});

    std::string out;
    std::string line;
    auto flush = [&]() {
        if (!out.empty()) out += "\n";
        out += line;
        line.clear();
    };
    for (size_t u = 0; u < units.size(); ++u) {
        std::string piece = units[u].sep + units[u].text;
        if (!line.empty() && line.size() + piece.size() > static_cast<size_t>(width)) {
            flush();
            // Operator opens the continuation line: "+ term". A unit is never
            // split internally (that could cut a \name token), so a single
            // long unit may overflow the width.
            std::string sep = units[u].sep;
            if (!sep.empty()) sep = sep.substr(1);
            line = "    " + sep + units[u].text;
        } else {
            line += piece;
        }
    }
    flush();
    return out;
}

}  // namespace

std::string render(const ExprPtr& e, const RenderOptions& opts) {
    if (opts.width < 20) throw Error::eval("render width below 20");
    std::string flat =
        opts.format == RenderFormat::Plain ? plain_expr(e) : latex_expr(e);
    return wrap(flat, opts.width);
}

}  // namespace tcas
