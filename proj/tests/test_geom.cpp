#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tcas/comp.hpp"
#include "tcas/context.hpp"
#include "tcas/error.hpp"
#include "tcas/geom.hpp"
#include "tcas/parse.hpp"

using namespace tcas;

namespace {

RationalFunction rf(const Context& ctx, long v) {
    return RationalFunction(Rational(v), ctx.scalar_symbols);
}

RationalFunction rf(const Context& ctx, const Rational& v) {
    return RationalFunction(v, ctx.scalar_symbols);
}

// Scalar value of an expression string under the context's symbol table.
RationalFunction value_of(const Context& ctx, const std::string& text) {
    return eval_scalar(ctx, parse_expression(ctx, text));
}

Context cloak_context() {
    Context ctx;
    ctx.declare_symbol("a");
    ctx.declare_symbol("b");
    return ctx;
}

RationalFunction sym(const Context& ctx, const std::string& name) {
    return RationalFunction::symbol(ctx.scalar_symbols, name);
}

bool is_identity3(const Matrix3& m) {
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j) {
            RationalFunction want{Rational(i == j ? 1 : 0)};
            if (!RationalFunction::equal(m[i][j], want)) return false;
        }
    return true;
}

// Collapses a fully-substituted component expression to its scalar value.
RationalFunction comp_value(const Context& ctx, const CompExpr& e) {
    REQUIRE(e.size() <= 1);
    if (e.empty()) return rf(ctx, 0);
    REQUIRE(e[0].factors.empty());
    return e[0].coeff;
}

}  // namespace

TEST_CASE("flat metric is a fixpoint of the medium map") {
    Context ctx;
    Metric4 eta = Metric4::minkowski();

    CHECK(is_identity3(plebanski_epsilon(ctx, eta)));
    CHECK(is_identity3(plebanski_mu(ctx, eta)));

    // Symbolic fields pass through unchanged.
    for (const char* name : {"E1", "E2", "E3", "H1", "H2", "H3"}) ctx.declare_symbol(name);
    Vector3 E{sym(ctx, "E1"), sym(ctx, "E2"), sym(ctx, "E3")};
    Vector3 H{sym(ctx, "H1"), sym(ctx, "H2"), sym(ctx, "H3")};
    Vector3 D = displacement_field(ctx, eta, E, H);
    Vector3 B = magnetic_field(ctx, eta, E, H);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(D[i] == E[i]);
        CHECK(B[i] == H[i]);
    }

    MediumParameters m = medium_parameters(ctx, eta);
    for (size_t i = 0; i < 3; ++i) CHECK(m.magnetoelectric[i].is_zero());
}

TEST_CASE("field tensors are antisymmetric with the fixed component placement") {
    Context ctx;
    for (const char* name : {"E1", "E2", "E3", "B1", "B2", "B3", "D1", "D2", "D3",
                             "H1", "H2", "H3"})
        ctx.declare_symbol(name);
    Vector3 E{sym(ctx, "E1"), sym(ctx, "E2"), sym(ctx, "E3")};
    Vector3 B{sym(ctx, "B1"), sym(ctx, "B2"), sym(ctx, "B3")};
    Vector3 D{sym(ctx, "D1"), sym(ctx, "D2"), sym(ctx, "D3")};
    Vector3 H{sym(ctx, "H1"), sym(ctx, "H2"), sym(ctx, "H3")};

    FieldTensors ft = field_tensors(E, B, D, H);
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) {
            CHECK(ft.F_lower[i][j] == -ft.F_lower[j][i]);
            CHECK(ft.H_upper[i][j] == -ft.H_upper[j][i]);
        }

    CHECK(ft.F_lower[0][1] == E[0]);
    CHECK(ft.F_lower[0][3] == E[2]);
    CHECK(ft.F_lower[1][2] == -B[2]);
    CHECK(ft.F_lower[1][3] == B[1]);
    CHECK(ft.F_lower[2][3] == -B[0]);
    CHECK(ft.H_upper[1][0] == D[0]);
    CHECK(ft.H_upper[3][0] == D[2]);
    CHECK(ft.H_upper[1][2] == -H[2]);
    CHECK(ft.H_upper[1][3] == H[1]);
    CHECK(ft.H_upper[2][3] == -H[0]);
}

TEST_CASE("inverse agrees with Gauss-Jordan elimination on random matrices") {
    Context ctx;
    std::mt19937 rng(61520);
    int done = 0;
    while (done < 20) {
        Matrix4 m = oracles::random_matrix4(rng);
        oracles::Mat4Q q;
        for (size_t i = 0; i < 4; ++i)
            for (size_t j = 0; j < 4; ++j) q[i][j] = m[i][j].constant_value();
        auto expect = oracles::invert4(q);
        if (!expect) continue;  // singular draw
        Matrix4 inv = inverse4(ctx, m);
        for (size_t i = 0; i < 4; ++i)
            for (size_t j = 0; j < 4; ++j)
                CHECK(inv[i][j].constant_value() == (*expect)[i][j]);
        // Round trip back to the identity.
        Matrix4 prod = oracles::matmul(m, inv);
        for (size_t i = 0; i < 4; ++i)
            for (size_t j = 0; j < 4; ++j)
                CHECK(RationalFunction::equal(prod[i][j], rf(ctx, i == j ? 1 : 0)));
        ++done;
    }

    Matrix4 singular{};
    for (size_t j = 0; j < 4; ++j) {
        singular[0][j] = rf(ctx, static_cast<long>(j) + 1);
        singular[1][j] = singular[0][j];
        singular[2][j] = rf(ctx, 1);
        singular[3][j] = rf(ctx, static_cast<long>(j));
    }
    CHECK_THROWS_WITH_AS(inverse4(ctx, singular), "error: cannot invert a singular matrix",
                         Error);
}

TEST_CASE("cylindrical cloak metric, determinant, and permittivity") {
    Context ctx = cloak_context();
    RationalFunction a = sym(ctx, "a"), b = sym(ctx, "b");
    Metric4 g = cylindrical_cloak_metric(ctx, a, b);

    CHECK(g.coordinate_names == std::array<std::string, 4>{"t", "r", "phi", "z"});
    RationalFunction r = sym(ctx, "r");
    RationalFunction c = b / (b - a);
    RationalFunction f = c * (r - a);
    CHECK(g.entries[0][0] == rf(ctx, 1));
    CHECK(g.entries[1][1] == -(c * c));
    CHECK(g.entries[2][2] == -(f * f));
    CHECK(g.entries[3][3] == rf(ctx, -1));
    CHECK(g.entries[0][1].is_zero());

    CHECK(determinant(ctx, g.entries) == -(c * c * c * c * (r - a) * (r - a)));
    CHECK(sqrt_neg_det(ctx, g) == c * f);

    Matrix3 eps = plebanski_epsilon(ctx, g);
    CHECK(RationalFunction::equal(eps[0][0], f / c));
    CHECK(RationalFunction::equal(eps[1][1], c / f));
    CHECK(RationalFunction::equal(eps[2][2], c * f));
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j)
            if (i != j) CHECK(eps[i][j].is_zero());

    // The permittivity and permeability expressions coincide entrywise.
    Matrix3 mu = plebanski_mu(ctx, g);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j) CHECK(eps[i][j] == mu[i][j]);

    // Degenerate shell a = 0 is the flat cylindrical metric.
    Context flat_ctx;
    Metric4 flat = cylindrical_cloak_metric(flat_ctx, rf(flat_ctx, 0), rf(flat_ctx, 3));
    RationalFunction fr = sym(flat_ctx, "r");
    CHECK(flat.entries[0][0] == rf(flat_ctx, 1));
    CHECK(flat.entries[1][1] == rf(flat_ctx, -1));
    CHECK(flat.entries[2][2] == -(fr * fr));
    CHECK(flat.entries[3][3] == rf(flat_ctx, -1));
}

TEST_CASE("simplified cylindrical slice reproduces the script's determinant value") {
    Context ctx = cloak_context();
    Metric4 g = Metric4::diagonal(
        {rf(ctx, 1), value_of(ctx, "- b^2/(b-a)^2"), rf(ctx, -1), rf(ctx, -1)});
    CHECK(RationalFunction::equal(determinant(ctx, g.entries), value_of(ctx, "- b^2/(b-a)^2")));

    Matrix3 eps = plebanski_epsilon(ctx, g);
    CHECK(RationalFunction::equal(eps[0][0], value_of(ctx, "(b-a)/b")));
    CHECK(RationalFunction::equal(eps[1][1], value_of(ctx, "b/(b-a)")));
    CHECK(RationalFunction::equal(eps[2][2], value_of(ctx, "b/(b-a)")));
}

TEST_CASE("spherical cloak metric and its square root") {
    Context ctx = cloak_context();
    RationalFunction a = sym(ctx, "a"), b = sym(ctx, "b");
    Metric4 g = spherical_cloak_metric(ctx, a, b);

    CHECK(g.coordinate_names == std::array<std::string, 4>{"t", "r", "theta", "phi"});
    RationalFunction r = sym(ctx, "r"), s = sym(ctx, "s");
    RationalFunction c = b / (b - a);
    RationalFunction f = c * (r - a);
    CHECK(g.entries[1][1] == -(c * c));
    CHECK(g.entries[2][2] == -(f * f));
    CHECK(g.entries[3][3] == -(f * f * s * s));
    CHECK(sqrt_neg_det(ctx, g) == c * f * f * s);

    Context flat_ctx;
    Metric4 flat = spherical_cloak_metric(flat_ctx, rf(flat_ctx, 0), rf(flat_ctx, 2));
    RationalFunction fr = sym(flat_ctx, "r"), fs = sym(flat_ctx, "s");
    CHECK(flat.entries[1][1] == rf(flat_ctx, -1));
    CHECK(flat.entries[2][2] == -(fr * fr));
    CHECK(flat.entries[3][3] == -(fr * fr * fs * fs));
}

TEST_CASE("cloak parameters match the published medium values") {
    Context ctx = cloak_context();
    RationalFunction a = sym(ctx, "a"), b = sym(ctx, "b");

    DiagonalMedium cyl = cloak_parameters(ctx, CloakGeometry::Cylindrical, a, b);
    CHECK(cyl.axis_labels() == std::array<std::string, 3>{"r", "phi", "z"});
    CHECK(cyl.eps[0].str() == "(r - a)/r");
    CHECK(cyl.eps[1].str() == "r/(r - a)");
    CHECK(RationalFunction::equal(cyl.eps[0], value_of(ctx, "(r-a)/r")));
    CHECK(RationalFunction::equal(cyl.eps[1], value_of(ctx, "r/(r-a)")));
    CHECK(RationalFunction::equal(cyl.eps[2], value_of(ctx, "b^2*(r-a)/((b-a)^2*r)")));
    for (size_t i = 0; i < 3; ++i) CHECK(cyl.mu[i] == cyl.eps[i]);

    Context sctx = cloak_context();
    RationalFunction sa = sym(sctx, "a"), sb = sym(sctx, "b");
    DiagonalMedium sph = cloak_parameters(sctx, CloakGeometry::Spherical, sa, sb);
    CHECK(sph.axis_labels() == std::array<std::string, 3>{"r", "theta", "phi"});
    CHECK(RationalFunction::equal(sph.eps[0], value_of(sctx, "(r-a)^2*b/(r^2*(b-a))")));
    CHECK(RationalFunction::equal(sph.eps[1], value_of(sctx, "b/(b-a)")));
    CHECK(RationalFunction::equal(sph.eps[2], value_of(sctx, "b/(b-a)")));
    CHECK(sph.eps[1] == sph.eps[2]);
}

TEST_CASE("cloak parameters are positive across the shell") {
    Context ctx;
    RationalFunction a = rf(ctx, 1), b = rf(ctx, 3);
    DiagonalMedium cyl = cloak_parameters(ctx, CloakGeometry::Cylindrical, a, b);
    DiagonalMedium sph = cloak_parameters(ctx, CloakGeometry::Spherical, a, b);

    int rid = ctx.scalar_symbols->find("r");
    int sid = ctx.scalar_symbols->find("s");
    REQUIRE(rid >= 0);
    REQUIRE(sid >= 0);
    for (int k = 1; k <= 10; ++k) {
        std::map<int, Rational> at{{rid, Rational(1) + Rational(2 * k, 11)},
                                   {sid, Rational(3, 5)}};
        for (size_t i = 0; i < 3; ++i) {
            CHECK(sign(cyl.eps[i].eval(at)) > 0);
            CHECK(sign(sph.eps[i].eval(at)) > 0);
        }
    }
}

TEST_CASE("cloak parameters agree with a concrete-point matrix pipeline") {
    const long points[3][3] = {{1, 3, 2}, {1, 4, 2}, {2, 5, 3}};
    const Rational sin_theta(3, 5);
    for (const auto& p : points) {
        Context ctx = cloak_context();
        RationalFunction a = sym(ctx, "a"), b = sym(ctx, "b");
        for (bool spherical : {false, true}) {
            DiagonalMedium med = cloak_parameters(
                ctx, spherical ? CloakGeometry::Spherical : CloakGeometry::Cylindrical, a, b);
            std::map<int, Rational> at{{ctx.scalar_symbols->find("a"), Rational(p[0])},
                                       {ctx.scalar_symbols->find("b"), Rational(p[1])},
                                       {ctx.scalar_symbols->find("r"), Rational(p[2])}};
            if (int sid = ctx.scalar_symbols->find("s"); sid >= 0)
                at.emplace(sid, sin_theta);
            auto expect = oracles::cloak_params_point(spherical, Rational(p[0]), Rational(p[1]),
                                                      Rational(p[2]), sin_theta);
            REQUIRE(expect.has_value());
            for (size_t i = 0; i < 3; ++i) CHECK(med.eps[i].eval(at) == (*expect)[i]);
        }
    }
}

TEST_CASE("fields derived from the tensor relation match the closed formulas") {
    std::mt19937 rng(90211);
    auto nonzero = [&] {
        Rational v;
        do {
            v = oracles::random_rational(rng);
        } while (v == 0);
        return v;
    };

    for (int trial = 0; trial < 20; ++trial) {
        Context ctx;
        IndexFamily fam;
        fam.name = "spatial";
        fam.members = {"p", "q"};
        fam.strict_variance = false;
        fam.range_lo = 0;
        fam.range_hi = 3;
        ctx.declare_family(fam);
        ctx.declare_component_tensor("gi");
        ctx.declare_component_tensor("F");

        // Diagonal-plus-one-offdiagonal metric whose -det is q^2 by
        // construction, so the square root stays rational.
        Rational d0 = nonzero(), d2 = nonzero(), d3 = nonzero();
        Rational s = nonzero(), qv = nonzero();
        Rational d1 = (s * s - qv * qv / (d2 * d3)) / d0;
        if (d1 == 0) continue;
        Metric4 g;
        g.entries[0][0] = rf(ctx, d0);
        g.entries[1][1] = rf(ctx, d1);
        g.entries[2][2] = rf(ctx, d2);
        g.entries[3][3] = rf(ctx, d3);
        g.entries[0][1] = g.entries[1][0] = rf(ctx, s);
        CHECK(RationalFunction::equal(-determinant(ctx, g.entries), rf(ctx, qv * qv)));

        Vector3 E{rf(ctx, oracles::random_rational(rng)), rf(ctx, oracles::random_rational(rng)),
                  rf(ctx, oracles::random_rational(rng))};
        Vector3 B{rf(ctx, oracles::random_rational(rng)), rf(ctx, oracles::random_rational(rng)),
                  rf(ctx, oracles::random_rational(rng))};
        Matrix4 F = field_f_lower(E, B);
        Matrix4 inv = inverse4(ctx, g.entries);
        RationalFunction w = sqrt_neg_det(ctx, g);

        // Component tables for the inverse metric and the field tensor.
        std::vector<IdRule> rules;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                std::string ij = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
                rules.push_back(make_id_rule(
                    parse_expression(ctx, "gi" + ij),
                    parse_expression(ctx, to_string(inv[static_cast<size_t>(i)]
                                                       [static_cast<size_t>(j)]
                                                           .constant_value()))));
                rules.push_back(make_id_rule(
                    parse_expression(ctx, "F" + ij),
                    parse_expression(ctx, to_string(F[static_cast<size_t>(i)]
                                                     [static_cast<size_t>(j)]
                                                         .constant_value()))));
            }

        // H^{ab} = w gi(a,p) gi(b,q) F(p,q), expanded component by component.
        auto relation = [&](int aa, int bb) {
            std::string src = "gi(" + std::to_string(aa) + ",p) * gi(" + std::to_string(bb) +
                              ",q) * F(p,q)";
            CompExpr e = lower(ctx, parse_expression(ctx, src));
            e = expand_dummies(ctx, e);
            e = apply_id_rules(ctx, e, rules);
            e = collect_terms(std::move(e));
            return w * comp_value(ctx, e);
        };

        Vector3 D_read{relation(1, 0), relation(2, 0), relation(3, 0)};
        Vector3 H_read{-relation(2, 3), relation(1, 3), -relation(1, 2)};

        Vector3 D_lib = displacement_field(ctx, g, E, H_read);
        Vector3 B_lib = magnetic_field(ctx, g, E, H_read);
        for (size_t i = 0; i < 3; ++i) {
            CHECK(RationalFunction::equal(D_lib[i], D_read[i]));
            CHECK(RationalFunction::equal(B_lib[i], B[i]));
        }

        // Coupling coefficients read straight off the metric.
        MediumParameters med = medium_parameters(ctx, g);
        CHECK(RationalFunction::equal(med.magnetoelectric[0], rf(ctx, s / d0)));
        CHECK(med.magnetoelectric[1].is_zero());
        CHECK(med.magnetoelectric[2].is_zero());
    }
}

TEST_CASE("block-diagonal metrics have no magnetoelectric coupling") {
    Context ctx;
    ctx.declare_symbol("E1");
    Metric4 g = Metric4::diagonal({rf(ctx, 1), rf(ctx, Rational(-9, 4)), rf(ctx, -1),
                                   rf(ctx, Rational(-1, 4))});
    Matrix3 eps = plebanski_epsilon(ctx, g);
    Vector3 E{sym(ctx, "E1"), rf(ctx, 0), rf(ctx, 0)};
    Vector3 H{rf(ctx, 0), rf(ctx, 0), rf(ctx, 0)};
    Vector3 D = displacement_field(ctx, g, E, H);
    for (size_t i = 0; i < 3; ++i)
        CHECK(RationalFunction::equal(D[i], eps[i][0] * E[0]));
}

TEST_CASE("malformed metrics are rejected with diagnostics") {
    Context ctx;
    Metric4 eta = Metric4::minkowski();

    Metric4 asym = eta;
    asym.entries[0][1] = rf(ctx, 1);
    CHECK_THROWS_WITH_AS(plebanski_epsilon(ctx, asym),
                         "error: metric is not symmetric in entries (0,1)", Error);

    Metric4 sing = Metric4::diagonal({rf(ctx, 1), rf(ctx, 0), rf(ctx, -1), rf(ctx, -1)});
    CHECK_THROWS_WITH_AS(plebanski_epsilon(ctx, sing), "error: metric is singular", Error);

    Metric4 timeless = Metric4::diagonal({rf(ctx, 0), rf(ctx, 1), rf(ctx, 1), rf(ctx, 1)});
    timeless.entries[0][1] = timeless.entries[1][0] = rf(ctx, 1);
    timeless.entries[1][1] = rf(ctx, 0);
    CHECK_THROWS_WITH_AS(plebanski_epsilon(ctx, timeless), "error: metric has g_00 = 0",
                         Error);

    Context dctx;
    dctx.declare_symbol("d");
    Metric4 odd = Metric4::diagonal({rf(dctx, 1), -sym(dctx, "d"), rf(dctx, -1), rf(dctx, -1)});
    CHECK_THROWS_WITH_AS(sqrt_neg_det(dctx, odd),
                         "error: sqrt(-det g) is not an exact rational function: d", Error);

    Context cctx = cloak_context();
    CHECK_THROWS_WITH_AS(cylindrical_cloak_metric(cctx, rf(cctx, 3), rf(cctx, 2)),
                         "error: cloak shell requires a < b (got a = 3, b = 2)", Error);
    RationalFunction same = sym(cctx, "a");
    CHECK_THROWS_WITH_AS(spherical_cloak_metric(cctx, same, same),
                         "error: cloak shell requires a < b", Error);

    Matrix3 eye{};
    for (size_t i = 0; i < 3; ++i) eye[i][i] = rf(ctx, 1);
    Matrix3 skew = eye;
    skew[0][1] = rf(ctx, 2);
    CHECK_THROWS_WITH_AS(physical_parameters(skew, eye, CloakGeometry::Cylindrical),
                         "error: physical parameters require diagonal matrices", Error);
}
