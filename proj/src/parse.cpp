#include "tcas/parse.hpp"

#include <cctype>

#include "tcas/error.hpp"

namespace tcas {

namespace {

bool name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::vector<Token> lex(const std::string& text, int line_offset) {
    std::vector<Token> out;
    int line = line_offset, col = 1;
    char prev_raw = '\n';
    size_t i = 0;
    auto push = [&](Token::Type t, std::string s, long v = 0) {
        Token tok;
        tok.type = t;
        tok.text = std::move(s);
        tok.value = v;
        tok.line = line;
        tok.col = col - static_cast<int>(tok.text.size());
        out.push_back(std::move(tok));
    };
    auto advance = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        prev_raw = c;
        ++i;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(c);
            continue;
        }
        if (c == '#' && (prev_raw == ' ' || prev_raw == '\t' || prev_raw == '\n')) {
            while (i < text.size() && text[i] != '\n') advance(text[i]);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            int start_col = col;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                digits += text[i];
                advance(text[i]);
            }
            try {
                long v = std::stol(digits);
                Token tok;
                tok.type = Token::Type::Int;
                tok.text = digits;
                tok.value = v;
                tok.line = line;
                tok.col = start_col;
                out.push_back(std::move(tok));
            } catch (const std::exception&) {
                throw Error::parse("integer literal too large: " + digits, line, start_col);
            }
            continue;
        }
        if (c == '\\' || name_start(c)) {
            std::string name;
            int start_col = col;
            if (c == '\\') {
                name += c;
                advance(c);
                if (i >= text.size() || !name_start(text[i]))
                    throw Error::parse("lone backslash", line, start_col);
            }
            while (i < text.size() && name_char(text[i])) {
                name += text[i];
                advance(text[i]);
            }
            // Builtin epsilon/delta heads keep their trailing underscore.
            if (i + 1 < text.size() && text[i] == '_' && text[i + 1] == '(') {
                name += '_';
                advance('_');
            }
            Token tok;
            tok.type = Token::Type::Name;
            tok.text = name;
            tok.line = line;
            tok.col = start_col;
            out.push_back(std::move(tok));
            continue;
        }
        auto two = [&](char a, char b) {
            return c == a && i + 1 < text.size() && text[i + 1] == b;
        };
        if (two(':', '=')) {
            advance(':');
            advance('=');
            push(Token::Type::ColonEquals, ":=");
            continue;
        }
        if (two(':', ':')) {
            advance(':');
            advance(':');
            push(Token::Type::DoubleColon, "::");
            continue;
        }
        if (two('-', '>')) {
            advance('-');
            advance('>');
            push(Token::Type::Arrow, "->");
            continue;
        }
        Token::Type t;
        switch (c) {
            case '{': t = Token::Type::LBrace; break;
            case '}': t = Token::Type::RBrace; break;
            case '(': t = Token::Type::LParen; break;
            case ')': t = Token::Type::RParen; break;
            case '_': t = Token::Type::Underscore; break;
            case '^': t = Token::Type::Caret; break;
            case '+': t = Token::Type::Plus; break;
            case '-': t = Token::Type::Minus; break;
            case '*': t = Token::Type::Star; break;
            case '/': t = Token::Type::Slash; break;
            case ',': t = Token::Type::Comma; break;
            case ';': t = Token::Type::Semicolon; break;
            case '.': t = Token::Type::Dot; break;
            case '?': t = Token::Type::Question; break;
            case '!': t = Token::Type::Bang; break;
            case '@': t = Token::Type::At; break;
            case '=': t = Token::Type::Equals; break;
            case ':': t = Token::Type::Colon; break;
            case '#': t = Token::Type::Hash; break;
            default:
                throw Error::parse(std::string("unexpected character '") + c + "'", line, col);
        }
        advance(c);
        push(t, std::string(1, c));
        continue;
    }
    Token end;
    end.type = Token::Type::End;
    end.line = line;
    end.col = col;
    out.push_back(std::move(end));
    return out;
}

const Token& TokenStream::peek(size_t ahead) const {
    size_t idx = pos_ + ahead;
    if (idx >= tokens_.size()) idx = tokens_.size() - 1;
    return tokens_[idx];
}

Token TokenStream::get() {
    Token t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
}

Token TokenStream::expect(Token::Type type, const std::string& what) {
    if (peek().type != type) fail("expected " + what);
    return get();
}

bool TokenStream::accept(Token::Type type) {
    if (peek().type != type) return false;
    get();
    return true;
}

void TokenStream::fail(const std::string& message) const {
    const Token& t = peek();
    std::string found = t.type == Token::Type::End ? "end of input" : "'" + t.text + "'";
    throw Error::parse(message + ", found " + found, t.line, t.col);
}

// ---------------------------------------------------------------------------

namespace {

using TT = Token::Type;

class ExprParser {
  public:
    ExprParser(const Context& ctx, TokenStream& ts) : ctx_(ctx), ts_(ts) {}

    ExprPtr parse(bool allow_equation) {
        ExprPtr e = parse_sum();
        if (allow_equation && ts_.accept(TT::Equals)) {
            ExprPtr rhs = parse_sum();
            e = make_equation(std::move(e), std::move(rhs));
        }
        return e;
    }

    ExprPtr parse_sum() {
        std::vector<ExprPtr> terms;
        bool neg = false;
        if (!ts_.accept(TT::Plus) && ts_.accept(TT::Minus)) neg = true;
        ExprPtr t = parse_product();
        terms.push_back(neg ? negate(std::move(t)) : std::move(t));
        while (true) {
            if (ts_.accept(TT::Plus)) {
                terms.push_back(parse_product());
            } else if (ts_.accept(TT::Minus)) {
                terms.push_back(negate(parse_product()));
            } else {
                break;
            }
        }
        return make_sum(std::move(terms));
    }

  private:
    bool starts_factor() const {
        switch (ts_.peek().type) {
            case TT::Name:
            case TT::Int:
            case TT::LParen:
            case TT::LBrace:
                return true;
            default:
                return false;
        }
    }

    ExprPtr parse_product() {
        std::vector<ExprPtr> factors;
        factors.push_back(parse_powered());
        while (true) {
            if (ts_.accept(TT::Star)) {
                factors.push_back(parse_powered());
            } else if (ts_.accept(TT::Slash)) {
                factors.push_back(make_power(parse_powered(), -1));
            } else if (starts_factor()) {
                factors.push_back(parse_powered());
            } else {
                break;
            }
        }
        return make_product(std::move(factors));
    }

    long parse_exponent() {
        long sign = 1;
        if (ts_.accept(TT::LBrace)) {
            if (ts_.accept(TT::Minus)) sign = -1;
            Token n = ts_.expect(TT::Int, "integer exponent");
            ts_.expect(TT::RBrace, "'}' after exponent");
            return sign * n.value;
        }
        if (ts_.accept(TT::Minus)) sign = -1;
        Token n = ts_.expect(TT::Int, "integer exponent");
        return sign * n.value;
    }

    ExprPtr parse_powered() {
        ExprPtr f = parse_factor();
        while (ts_.accept(TT::Caret)) f = make_power(std::move(f), parse_exponent());
        return f;
    }

    Index parse_index_item(Variance v) {
        const Token& t = ts_.peek();
        if (t.type == TT::Int) {
            ts_.get();
            return Index::concrete(static_cast<int>(t.value), v);
        }
        if (t.type == TT::Name) {
            std::string name = ts_.get().text;
            if (ts_.accept(TT::Question)) return Index::pattern(std::move(name));
            return Index::abstract(std::move(name), v);
        }
        ts_.fail("expected an index");
    }

    // "^{-2}" and "^{3}" are exponents; any other braced caret content is a
    // contravariant index group.
    bool caret_is_exponent() const {
        if (ts_.peek().type != TT::Caret) return false;
        if (ts_.peek(1).type == TT::Int || ts_.peek(1).type == TT::Minus) return true;
        if (ts_.peek(1).type != TT::LBrace) return false;
        if (ts_.peek(2).type == TT::Int) return ts_.peek(3).type == TT::RBrace;
        if (ts_.peek(2).type == TT::Minus)
            return ts_.peek(3).type == TT::Int && ts_.peek(4).type == TT::RBrace;
        return false;
    }

    bool starts_index_group() const {
        return ts_.peek().type == TT::Underscore ||
               (ts_.peek().type == TT::Caret && !caret_is_exponent());
    }

    std::vector<Index> parse_index_groups() {
        std::vector<Index> idxs;
        while (starts_index_group()) {
            Variance v = ts_.get().type == TT::Underscore ? Variance::Covariant
                                                          : Variance::Contravariant;
            ts_.expect(TT::LBrace, "'{' opening an index group");
            while (!ts_.accept(TT::RBrace)) {
                idxs.push_back(parse_index_item(v));
                ts_.accept(TT::Comma);  // commas between indices are tolerated
            }
        }
        return idxs;
    }

    ExprPtr parse_derivative(const std::string& op) {
        if (!ts_.accept(TT::Underscore))
            ts_.fail("derivative operator '" + op + "' needs _{index}");
        Index idx;
        if (ts_.accept(TT::LBrace)) {
            idx = parse_index_item(Variance::Covariant);
            ts_.expect(TT::RBrace, "'}' after derivative index");
        } else {
            idx = parse_index_item(Variance::Covariant);
        }
        ExprPtr arg = parse_powered();
        return make_derivative(op, std::move(idx), std::move(arg));
    }

    ExprPtr parse_factor() {
        const Token& t = ts_.peek();
        switch (t.type) {
            case TT::Int: {
                long v = ts_.get().value;
                return make_number(v);
            }
            case TT::LParen: {
                ts_.get();
                ExprPtr e = parse_sum();
                ts_.expect(TT::RParen, "')'");
                return e;
            }
            case TT::LBrace: {
                ts_.get();
                ExprPtr e = parse_sum();
                ts_.expect(TT::RBrace, "'}'");
                return e;
            }
            case TT::Name:
                break;
            default:
                ts_.fail("expected an expression");
        }
        std::string name = ts_.get().text;
        if (name == "\\sqrt") {
            ts_.expect(TT::LBrace, "'{' after \\sqrt");
            ts_.expect(TT::Minus, "'-' inside \\sqrt{-...}");
            Token metric = ts_.expect(TT::Name, "metric name inside \\sqrt{-...}");
            ts_.expect(TT::RBrace, "'}' closing \\sqrt");
            return make_sqrt_neg_det(metric.text);
        }
        if (ctx_.is_derivative(name)) return parse_derivative(name);
        bool wildcard = ts_.accept(TT::Question);
        if (ts_.peek().type == TT::LParen && ctx_.is_component_tensor(name)) {
            ts_.get();
            std::vector<Index> idxs;
            if (!ts_.accept(TT::RParen)) {
                idxs.push_back(parse_index_item(Variance::Covariant));
                while (ts_.accept(TT::Comma))
                    idxs.push_back(parse_index_item(Variance::Covariant));
                ts_.expect(TT::RParen, "')' closing component tensor");
            }
            return make_tensor(std::move(name), std::move(idxs), wildcard, true);
        }
        if (starts_index_group()) {
            std::vector<Index> idxs = parse_index_groups();
            return make_tensor(std::move(name), std::move(idxs), wildcard, false);
        }
        if (wildcard) ts_.fail("wildcard head '" + name + "?' needs indices");
        return make_scalar(std::move(name));
    }

    const Context& ctx_;
    TokenStream& ts_;
};

}  // namespace

ExprPtr parse_expression(const Context& ctx, TokenStream& ts, bool allow_equation) {
    ExprParser p(ctx, ts);
    return p.parse(allow_equation);
}

ExprPtr parse_expression(const Context& ctx, const std::string& text, int line_offset,
                         bool allow_equation) {
    TokenStream ts(text, line_offset);
    ExprPtr e = parse_expression(ctx, ts, allow_equation);
    if (!ts.at_end()) ts.fail("trailing input after expression");
    return e;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int> parse_int_list(TokenStream& ts) {
    std::vector<int> out;
    ts.expect(TT::LBrace, "'{'");
    out.push_back(static_cast<int>(ts.expect(TT::Int, "integer").value));
    while (ts.accept(TT::Comma))
        out.push_back(static_cast<int>(ts.expect(TT::Int, "integer").value));
    ts.expect(TT::RBrace, "'}'");
    return out;
}

void parse_family_declaration(Context& ctx, TokenStream& ts) {
    ts.expect(TT::LBrace, "'{'");
    std::vector<std::string> members;
    members.push_back(ts.expect(TT::Name, "index name").text);
    while (ts.accept(TT::Comma)) members.push_back(ts.expect(TT::Name, "index name").text);
    ts.expect(TT::RBrace, "'}'");
    ts.expect(TT::DoubleColon, "'::'");
    Token prop = ts.expect(TT::Name, "property name");
    if (prop.text != "Indices") ts.fail("unknown index-list property '" + prop.text + "'");
    ts.expect(TT::LParen, "'('");
    IndexFamily fam;
    fam.members = std::move(members);
    fam.name = ts.expect(TT::Name, "family name").text;
    if (ts.accept(TT::Comma)) {
        Token key = ts.expect(TT::Name, "'range'");
        if (key.text != "range") ts.fail("unknown Indices argument '" + key.text + "'");
        ts.expect(TT::Equals, "'='");
        fam.range_lo = static_cast<int>(ts.expect(TT::Int, "range start").value);
        ts.expect(TT::Dot, "'..'");
        ts.expect(TT::Dot, "'..'");
        fam.range_hi = static_cast<int>(ts.expect(TT::Int, "range end").value);
    }
    ts.expect(TT::RParen, "')'");
    ctx.declare_family(std::move(fam));
}

}  // namespace

void parse_declaration(Context& ctx, TokenStream& ts) {
    if (ts.peek().type == TT::LBrace) {
        parse_family_declaration(ctx, ts);
        return;
    }
    std::string head = ts.expect(TT::Name, "declared name").text;
    // Derivative declaration: op_{#}::PartialDerivative / ::Derivative
    if (ts.peek().type == TT::Underscore && ts.peek(1).type == TT::LBrace &&
        ts.peek(2).type == TT::Hash) {
        ts.get();
        ts.get();
        ts.get();
        ts.expect(TT::RBrace, "'}'");
        ts.expect(TT::DoubleColon, "'::'");
        Token prop = ts.expect(TT::Name, "derivative property");
        if (prop.text == "PartialDerivative") {
            ctx.declare_derivative(head, DerivativeKind::Partial);
        } else if (prop.text == "Derivative") {
            ctx.declare_derivative(head, DerivativeKind::Covariant);
        } else {
            ts.fail("unknown derivative property '" + prop.text + "'");
        }
        return;
    }
    // Tensor symmetry declaration: count the slots of the written pattern.
    int nslots = 0;
    while (ts.peek().type == TT::Underscore || ts.peek().type == TT::Caret) {
        ts.get();
        if (ts.accept(TT::LBrace)) {
            while (!ts.accept(TT::RBrace)) {
                Token n = ts.get();
                if (n.type != TT::Name && n.type != TT::Int) ts.fail("expected an index");
                ++nslots;
                ts.accept(TT::Comma);
            }
        } else {
            Token n = ts.get();
            if (n.type != TT::Name && n.type != TT::Int) ts.fail("expected an index");
            ++nslots;
        }
    }
    ts.expect(TT::DoubleColon, "'::'");
    Token prop = ts.expect(TT::Name, "property name");
    SymmetryDecl decl;
    if (prop.text == "AntiSymmetric" || prop.text == "Symmetric") {
        SymmetryGroup group;
        group.antisymmetric = prop.text == "AntiSymmetric";
        for (int s = 0; s < nslots; ++s) group.slots.push_back(s);
        if (nslots < 2) ts.fail("symmetry declaration needs at least two slots");
        decl.groups.push_back(std::move(group));
    } else if (prop.text == "TableauSymmetry") {
        ts.expect(TT::LParen, "'('");
        Token key = ts.expect(TT::Name, "'shape'");
        if (key.text != "shape") ts.fail("expected shape={...}");
        ts.expect(TT::Equals, "'='");
        std::vector<int> shape = parse_int_list(ts);
        ts.expect(TT::Comma, "','");
        key = ts.expect(TT::Name, "'indices'");
        if (key.text != "indices") ts.fail("expected indices={...}");
        ts.expect(TT::Equals, "'='");
        std::vector<int> which = parse_int_list(ts);
        ts.expect(TT::RParen, "')'");
        if (shape.size() != 1)
            ts.fail("only single-row tableau shapes are supported");
        if (static_cast<size_t>(shape[0]) != which.size())
            ts.fail("tableau shape does not match its index count");
        SymmetryGroup group;
        group.antisymmetric = false;
        for (int s : which) {
            if (s < 0 || s >= nslots) ts.fail("tableau slot out of range");
            group.slots.push_back(s);
        }
        decl.groups.push_back(std::move(group));
    } else {
        ts.fail("unknown property '" + prop.text + "'");
    }
    ctx.declare_symmetry(head, std::move(decl));
}

}  // namespace tcas
