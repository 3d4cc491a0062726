#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcas/context.hpp"
#include "tcas/error.hpp"
#include "tcas/parse.hpp"
#include "tcas/render.hpp"

using namespace tcas;

namespace {

Context abstract_context() {
    Context ctx;
    TokenStream d1("{\\alpha,\\beta,\\gamma,\\delta}::Indices(vector)");
    parse_declaration(ctx, d1);
    TokenStream d2("\\partial_{#}::PartialDerivative");
    parse_declaration(ctx, d2);
    TokenStream d3("\\nabla_{#}::Derivative");
    parse_declaration(ctx, d3);
    return ctx;
}

Context component_context() {
    Context ctx;
    ctx.declare_component_tensor("g");
    ctx.extend_family("indices", {"i", "j", "k", "l"}, false);
    return ctx;
}

std::string round_trip(const Context& ctx, const std::string& text) {
    return render(parse_expression(ctx, text));
}

}  // namespace

TEST_CASE("declarations land in the context") {
    Context ctx = abstract_context();
    CHECK(ctx.family_of("\\alpha") != nullptr);
    CHECK(ctx.family_of("\\alpha")->name == "vector");
    CHECK(ctx.family_of("\\alpha")->members.size() == 4);
    CHECK(ctx.is_strict("\\beta"));
    CHECK(ctx.is_derivative("\\partial"));
    CHECK(ctx.is_derivative("\\nabla"));
    CHECK(ctx.derivatives().at("\\partial") == DerivativeKind::Partial);
    CHECK(ctx.derivatives().at("\\nabla") == DerivativeKind::Covariant);
    CHECK(ctx.range_of("\\alpha") == std::pair<int, int>(0, 3));

    TokenStream anti("F_{\\alpha \\beta}::AntiSymmetric");
    parse_declaration(ctx, anti);
    const SymmetryDecl* f = ctx.symmetry_of("F");
    REQUIRE(f != nullptr);
    REQUIRE(f->groups.size() == 1);
    CHECK(f->groups[0].antisymmetric);
    CHECK(f->groups[0].slots == std::vector<int>{0, 1});

    TokenStream tab("\\Gamma^{\\alpha}_{\\beta \\gamma}::TableauSymmetry(shape={2}, indices={1,2})");
    parse_declaration(ctx, tab);
    const SymmetryDecl* gamma = ctx.symmetry_of("\\Gamma");
    REQUIRE(gamma != nullptr);
    REQUIRE(gamma->groups.size() == 1);
    CHECK_FALSE(gamma->groups[0].antisymmetric);
    CHECK(gamma->groups[0].slots == std::vector<int>{1, 2});
}

TEST_CASE("range declarations") {
    Context ctx;
    TokenStream d("{i,j,k}::Indices(space, range=1..3)");
    parse_declaration(ctx, d);
    CHECK(ctx.range_of("i") == std::pair<int, int>(1, 3));
    CHECK(ctx.range_of("zz") == std::pair<int, int>(0, 3));  // falls back to dimension
}

TEST_CASE("plain rendering is stable under reparsing") {
    Context ctx = abstract_context();
    for (const std::string text : {
             "\\partial_{\\alpha}{F_{\\beta \\gamma}} - \\partial_{\\beta}{F_{\\alpha \\gamma}}"
             " + \\partial_{\\gamma}{F_{\\alpha \\beta}}",
             "F_{\\beta \\delta} \\Gamma^{\\delta}_{\\gamma \\alpha}",
             "4 \\pi / c",
             "1/\\sqrt{-g} \\partial_{\\alpha}{\\sqrt{-g} h^{\\alpha \\beta}}",
             "b^2/(b - a)^2",
             "2 - x + y",
             "h^{\\alpha \\beta} - g^{\\alpha \\gamma} g^{\\beta \\delta} f_{\\gamma \\delta}",
         }) {
        ExprPtr once = parse_expression(ctx, text);
        std::string rendered = render(once);
        ExprPtr twice = parse_expression(ctx, rendered);
        CAPTURE(text);
        CAPTURE(rendered);
        CHECK(structural_equal(once, twice));
        // Idempotence: render(parse(render(e))) == render(e).
        CHECK(render(twice) == rendered);
    }
}

TEST_CASE("rendering matches the frozen plain format") {
    Context ctx = abstract_context();
    CHECK(round_trip(ctx, "\\partial_{\\alpha}{F_{\\beta \\gamma}}") ==
          "\\partial_{\\alpha}{F_{\\beta \\gamma}}");
    CHECK(round_trip(ctx, "F_{\\beta\\delta}\\Gamma^{\\delta}_{\\gamma\\alpha}") ==
          "F_{\\beta \\delta} \\Gamma^{\\delta}_{\\gamma \\alpha}");
    CHECK(round_trip(ctx, "4 \\pi/c") == "4 \\pi / c");
    CHECK(round_trip(ctx, "1/\\sqrt{-g}") == "1/\\sqrt{-g}");
    CHECK(round_trip(ctx, "-b^2/(b-a)^2") == "-b^2 / (b - a)^2");
    CHECK(round_trip(ctx, "x - 2 y + 3") == "x - 2 y + 3");
}

TEST_CASE("component tensor calls need their declaration") {
    Context ctx = component_context();
    ExprPtr e = parse_expression(ctx, "e_(0,1,2,3) * e_(i,j,k,l) * g(0,i)");
    const auto fs = summands(e);
    REQUIRE(fs.size() == 1);
    Term t = split_term(e);
    REQUIRE(t.factors.size() == 3);
    CHECK(t.factors[0]->name == "e_");
    CHECK(t.factors[0]->call_syntax);
    CHECK(t.factors[2]->name == "g");
    CHECK(t.factors[2]->indices[0].is_concrete());
    CHECK(t.factors[2]->indices[1].name == "i");
    CHECK(render(e) == "e_(0,1,2,3) e_(i,j,k,l) g(0,i)");
}

TEST_CASE("wildcard heads and wildcard indices") {
    Context ctx = abstract_context();
    ExprPtr p = parse_expression(ctx, "A?_{\\alpha \\beta}");
    CHECK(p->kind == ExprKind::Tensor);
    CHECK(p->head_wildcard);
    CHECK(p->name == "A");
    CHECK(render(p) == "A?_{\\alpha \\beta}");

    Context comp = component_context();
    ExprPtr q = parse_expression(comp, "g(i?,j?)");
    CHECK(q->indices[0].wildcard);
    CHECK(q->indices[1].wildcard);
    CHECK(render(q) == "g(i?,j?)");
}

TEST_CASE("factories keep products and sums flat") {
    Context ctx = abstract_context();
    ExprPtr e = parse_expression(ctx, "(2 x) (3 y)");
    Term t = split_term(e);
    CHECK(t.coeff == 6);
    REQUIRE(t.factors.size() == 2);
    CHECK(t.factors[0]->kind == ExprKind::Scalar);
    for (const auto& f : summands(parse_expression(ctx, "x + (y + z)")))
        CHECK(f->kind != ExprKind::Sum);
    CHECK(parse_expression(ctx, "x + 0")->kind == ExprKind::Scalar);
    CHECK(parse_expression(ctx, "0 + 0")->kind == ExprKind::Number);
    // Power collapse and numeric evaluation.
    CHECK(parse_expression(ctx, "(x^2)^3")->exponent == 6);
    CHECK(parse_expression(ctx, "2^3")->number == 8);
    CHECK(parse_expression(ctx, "2^-2")->number == make_rational(1, 4));
}

TEST_CASE("equations parse at the top level only") {
    Context ctx = abstract_context();
    ExprPtr eq = parse_expression(ctx, "\\nabla_{\\alpha} h^{\\alpha \\beta} = j^{\\beta} 4 \\pi / c");
    REQUIRE(eq->kind == ExprKind::Equation);
    CHECK(render(eq) ==
          "\\nabla_{\\alpha}{h^{\\alpha \\beta}} = 4 j^{\\beta} \\pi / c");
    auto free = free_indices(eq);
    REQUIRE(free.size() == 1);
    CHECK(free[0].name == "\\beta");
    CHECK(free[0].variance == Variance::Contravariant);
}

TEST_CASE("free indices: dummies cancel, imbined sums fail") {
    Context ctx = abstract_context();
    auto free = free_indices(parse_expression(ctx, "\\nabla_{\\gamma} A?_{\\alpha \\beta}"));
    REQUIRE(free.size() == 3);
    CHECK(free[0].name == "\\alpha");
    CHECK(free[2].name == "\\gamma");

    auto dummy = free_indices(
        parse_expression(ctx, "F_{\\beta \\delta} \\Gamma^{\\delta}_{\\gamma \\alpha}"));
    REQUIRE(dummy.size() == 3);  // delta pairs away
    CHECK(dummy[0].name == "\\alpha");
    CHECK(dummy[1].name == "\\beta");
    CHECK(dummy[2].name == "\\gamma");

    CHECK(free_indices(parse_expression(ctx, "e_(0,1,2,3)")).empty());

    CHECK_THROWS_AS(free_indices(parse_expression(ctx, "F_{\\alpha \\beta} + F_{\\beta \\gamma}")),
                    Error);
    CHECK_THROWS_AS(
        free_indices(parse_expression(ctx, "F_{\\alpha \\alpha} G_{\\alpha \\beta}")), Error);
    CHECK_THROWS_AS(
        free_indices(parse_expression(ctx, "F_{\\alpha \\beta} = F_{\\beta \\gamma}")), Error);
}

TEST_CASE("free indices flow through derivatives and powers") {
    Context ctx = abstract_context();
    // Dummy pair spanning the operator index and the argument.
    CHECK(free_indices(parse_expression(ctx, "\\nabla_{\\alpha} h^{\\alpha \\beta}")).size() == 1);
    // Dummies inside a power base stay internal; free indices are an error.
    CHECK(free_indices(parse_expression(ctx, "(x^{\\alpha} y_{\\alpha})^2")).empty());
    CHECK_THROWS_AS(free_indices(parse_expression(ctx, "(x^{\\alpha})^2")), Error);
}

TEST_CASE("parse errors carry positions") {
    Context ctx = abstract_context();
    try {
        parse_expression(ctx, "F_{\\alpha\n  + G");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == Error::Kind::Parse);
        CHECK(e.line() == 2);
    }
    try {
        parse_expression(ctx, "x %");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == Error::Kind::Parse);
        CHECK(e.line() == 1);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(parse_expression(ctx, "x + "), Error);
    CHECK_THROWS_AS(parse_expression(ctx, "A? + x"), Error);
}

TEST_CASE("comments are stripped outside placeholder position") {
    Context ctx = abstract_context();
    ExprPtr e = parse_expression(ctx, "x + y # trailing note");
    CHECK(e->kind == ExprKind::Sum);
    // '#' straight after '{' is the declaration placeholder, not a comment.
    Context fresh;
    TokenStream d("\\partial_{#}::PartialDerivative");
    parse_declaration(fresh, d);
    CHECK(fresh.is_derivative("\\partial"));
}

TEST_CASE("width wrapping breaks between terms") {
    Context ctx = abstract_context();
    ExprPtr e = parse_expression(
        ctx,
        "\\partial_{\\alpha}{F_{\\beta \\gamma}} - \\partial_{\\beta}{F_{\\alpha \\gamma}} + "
        "\\partial_{\\gamma}{F_{\\alpha \\beta}}");
    RenderOptions narrow{RenderFormat::Plain, 40};
    std::string wrapped = render(e, narrow);
    CHECK(wrapped ==
          "\\partial_{\\alpha}{F_{\\beta \\gamma}}\n"
          "    - \\partial_{\\beta}{F_{\\alpha \\gamma}}\n"
          "    + \\partial_{\\gamma}{F_{\\alpha \\beta}}");
    // Reparse across line breaks.
    CHECK(structural_equal(parse_expression(ctx, wrapped), e));
    RenderOptions wide{RenderFormat::Plain, 120};
    CHECK(render(e, wide).find('\n') == std::string::npos);
    RenderOptions bad{RenderFormat::Plain, 10};
    CHECK_THROWS_AS(render(e, bad), Error);
}

TEST_CASE("latex format") {
    Context ctx = abstract_context();
    RenderOptions latex{RenderFormat::Latex, 200};
    CHECK(render(parse_expression(ctx, "\\partial_{\\alpha}{F_{\\beta \\gamma}}"), latex) ==
          "{\\partial}_{\\alpha}{{F}_{\\beta \\gamma}}");
    CHECK(render(parse_expression(ctx, "1/\\sqrt{-g} \\partial_{\\alpha}{\\sqrt{-g} h^{\\alpha \\beta}}"),
                 latex) ==
          "\\frac{1}{\\sqrt{-g}} {\\partial}_{\\alpha}{(\\sqrt{-g} {h}^{\\alpha \\beta})}");
    CHECK(render(parse_expression(ctx, "x/2"), latex) == "\\frac{1}{2} x");
}

TEST_CASE("structural equality is deep") {
    Context ctx = abstract_context();
    ExprPtr a = parse_expression(ctx, "F_{\\alpha \\beta} + x");
    ExprPtr b = parse_expression(ctx, "F_{\\alpha \\beta} + x");
    ExprPtr c = parse_expression(ctx, "F_{\\alpha \\beta} + y");
    ExprPtr d = parse_expression(ctx, "F_{\\beta \\alpha} + x");
    CHECK(structural_equal(a, b));
    CHECK_FALSE(structural_equal(a, c));
    CHECK_FALSE(structural_equal(a, d));
}
