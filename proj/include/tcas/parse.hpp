#pragma once

#include <string>
#include <vector>

#include "tcas/context.hpp"
#include "tcas/expr.hpp"

namespace tcas {

struct Token {
    enum class Type {
        Name,
        Int,
        LBrace,
        RBrace,
        LParen,
        RParen,
        Underscore,
        Caret,
        Plus,
        Minus,
        Star,
        Slash,
        Comma,
        Semicolon,
        Dot,
        Question,
        Bang,
        At,
        Equals,
        Arrow,        // ->
        ColonEquals,  // :=
        DoubleColon,  // ::
        Colon,
        Hash,
        End,
    };
    Type type = Type::End;
    std::string text;
    long value = 0;
    int line = 1, col = 1;
};

// Tokenizes; a '#' preceded by whitespace (or at line start) begins a
// comment running to end of line, while '#' elsewhere is the placeholder
// token used by derivative declarations. Throws Error::parse on bad input.
std::vector<Token> lex(const std::string& text, int line_offset = 1);

class TokenStream {
  public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}
    explicit TokenStream(const std::string& text, int line_offset = 1)
        : tokens_(lex(text, line_offset)) {}

    const Token& peek(size_t ahead = 0) const;
    Token get();
    bool at_end() const { return peek().type == Token::Type::End; }
    Token expect(Token::Type type, const std::string& what);
    bool accept(Token::Type type);
    [[noreturn]] void fail(const std::string& message) const;

  private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;
};

// Parses a full expression statement body (no terminator). With
// allow_equation, a top-level "lhs = rhs" produces an Equation node.
ExprPtr parse_expression(const Context& ctx, const std::string& text, int line_offset = 1,
                         bool allow_equation = true);
ExprPtr parse_expression(const Context& ctx, TokenStream& ts, bool allow_equation = true);

// Parses one property declaration (the part before the terminator) and
// applies it to the context:
//   {\alpha,\beta}::Indices(vector)          index family (optional range=lo..hi)
//   \partial_{#}::PartialDerivative          derivative operators
//   \nabla_{#}::Derivative
//   F_{\alpha \beta}::AntiSymmetric          slot symmetries
//   h^{\alpha \beta}::Symmetric
//   \Gamma^{\alpha}_{\beta \gamma}::TableauSymmetry(shape={2}, indices={1,2})
void parse_declaration(Context& ctx, TokenStream& ts);

}  // namespace tcas
