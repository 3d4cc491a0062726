#include "tcas/geom.hpp"

#include <utility>

#include "tcas/error.hpp"

namespace tcas {

namespace {

RationalFunction rf_const(const Context& ctx, long v) {
    return RationalFunction(Rational(v), ctx.scalar_symbols);
}

// 3x3 determinant of the submatrix picked out by `rows` x `cols`.
RationalFunction det3(const Matrix4& m, const std::array<int, 3>& rows,
                      const std::array<int, 3>& cols) {
    auto e = [&](int r, int c) -> const RationalFunction& {
        return m[static_cast<size_t>(rows[static_cast<size_t>(r)])]
                [static_cast<size_t>(cols[static_cast<size_t>(c)])];
    };
    return e(0, 0) * e(1, 1) * e(2, 2) + e(0, 1) * e(1, 2) * e(2, 0) +
           e(0, 2) * e(1, 0) * e(2, 1) - e(0, 2) * e(1, 1) * e(2, 0) -
           e(0, 0) * e(1, 2) * e(2, 1) - e(0, 1) * e(1, 0) * e(2, 2);
}

// Common prefactor -(sqrt(-g)/g_00) of the permittivity and field formulas.
RationalFunction medium_prefactor(const Context& ctx, const Metric4& g) {
    return -(sqrt_neg_det(ctx, g) / g.entries[0][0]);
}

Matrix3 geometrized_permittivity(const Context& ctx, const Metric4& g) {
    validate(ctx, g);
    Matrix4 inv = inverse4(ctx, g.entries);
    RationalFunction factor = medium_prefactor(ctx, g);
    Matrix3 eps;
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j) eps[i][j] = factor * inv[i + 1][j + 1];
    return eps;
}

// Shared body of displacement_field/magnetic_field: the two formulas differ
// only in which field the inverse-metric block acts on and in the sign of
// the eps^{ijk} g_{j0} coupling.
Vector3 field_map(const Context& ctx, const Metric4& g, const Vector3& direct,
                  const Vector3& coupled, int coupling_sign) {
    validate(ctx, g);
    Matrix4 inv = inverse4(ctx, g.entries);
    RationalFunction factor = medium_prefactor(ctx, g);
    Vector3 out;
    for (int i = 0; i < 3; ++i) {
        RationalFunction v = rf_const(ctx, 0);
        for (int j = 0; j < 3; ++j)
            v += factor * inv[static_cast<size_t>(i) + 1][static_cast<size_t>(j) + 1] *
                 direct[static_cast<size_t>(j)];
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                int sgn = coupling_sign * EpsilonSymbol::sign_of({i, j, k});
                if (sgn == 0) continue;
                v += rf_const(ctx, sgn) * g.entries[static_cast<size_t>(j) + 1][0] *
                     coupled[static_cast<size_t>(k)] / g.entries[0][0];
            }
        }
        out[static_cast<size_t>(i)] = std::move(v);
    }
    return out;
}

RationalFunction intern_symbol(Context& ctx, const std::string& name) {
    ctx.declare_symbol(name);
    return RationalFunction::symbol(ctx.scalar_symbols, name);
}

void check_shell(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_constant() && b.is_constant() &&
        a.constant_value() >= b.constant_value())
        throw Error::eval("cloak shell requires a < b (got a = " + a.str() +
                          ", b = " + b.str() + ")");
    if ((b - a).is_zero()) throw Error::eval("cloak shell requires a < b");
}

}  // namespace

Metric4 Metric4::minkowski() {
    Metric4 g;
    for (size_t i = 0; i < 4; ++i)
        g.entries[i][i] = RationalFunction(Rational(i == 0 ? 1 : -1));
    return g;
}

Metric4 Metric4::diagonal(const std::array<RationalFunction, 4>& d) {
    Metric4 g;
    for (size_t i = 0; i < 4; ++i) g.entries[i][i] = d[i];
    return g;
}

void validate(const Context& ctx, const Metric4& g) {
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = i + 1; j < 4; ++j)
            if (!RationalFunction::equal(g.entries[i][j], g.entries[j][i]))
                throw Error::eval("metric is not symmetric in entries (" + std::to_string(i) +
                                  "," + std::to_string(j) + ")");
    if (determinant(ctx, g.entries).is_zero()) throw Error::eval("metric is singular");
    if (g.entries[0][0].is_zero()) throw Error::eval("metric has g_00 = 0");
}

Matrix4 inverse4(const Context& ctx, const Matrix4& m) {
    RationalFunction det = determinant(ctx, m);
    if (det.is_zero()) throw Error::eval("cannot invert a singular matrix");
    Matrix4 inv;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            // Adjugate: entry (i,j) is the cofactor of (j,i).
            std::array<int, 3> rows{}, cols{};
            int rr = 0, cc = 0;
            for (int r = 0; r < 4; ++r)
                if (r != j) rows[static_cast<size_t>(rr++)] = r;
            for (int c = 0; c < 4; ++c)
                if (c != i) cols[static_cast<size_t>(cc++)] = c;
            RationalFunction cof = det3(m, rows, cols);
            if ((i + j) % 2 == 1) cof = -cof;
            inv[static_cast<size_t>(i)][static_cast<size_t>(j)] = cof / det;
        }
    }
    return inv;
}

RationalFunction sqrt_neg_det(const Context& ctx, const Metric4& g) {
    RationalFunction neg = -determinant(ctx, g.entries);
    if (auto root = neg.sqrt_exact()) return *root;
    throw Error::eval("sqrt(-det g) is not an exact rational function: " + neg.str());
}

Matrix4 field_f_lower(const Vector3& E, const Vector3& B) {
    Matrix4 F{};
    F[0][1] = E[0];
    F[0][2] = E[1];
    F[0][3] = E[2];
    F[1][2] = -B[2];
    F[1][3] = B[1];
    F[2][3] = -B[0];
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < i; ++j) F[i][j] = -F[j][i];
    return F;
}

Matrix4 field_h_upper(const Vector3& D, const Vector3& H) {
    Matrix4 M{};
    M[0][1] = -D[0];
    M[0][2] = -D[1];
    M[0][3] = -D[2];
    M[1][2] = -H[2];
    M[1][3] = H[1];
    M[2][3] = -H[0];
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < i; ++j) M[i][j] = -M[j][i];
    return M;
}

FieldTensors field_tensors(const Vector3& E, const Vector3& B, const Vector3& D,
                           const Vector3& H) {
    return FieldTensors{field_f_lower(E, B), field_h_upper(D, H)};
}

Matrix3 plebanski_epsilon(const Context& ctx, const Metric4& g) {
    return geometrized_permittivity(ctx, g);
}

Matrix3 plebanski_mu(const Context& ctx, const Metric4& g) {
    return geometrized_permittivity(ctx, g);
}

MediumParameters medium_parameters(const Context& ctx, const Metric4& g) {
    MediumParameters m;
    m.epsilon = plebanski_epsilon(ctx, g);
    m.mu = plebanski_mu(ctx, g);
    for (size_t j = 0; j < 3; ++j)
        m.magnetoelectric[j] = g.entries[j + 1][0] / g.entries[0][0];
    return m;
}

Vector3 displacement_field(const Context& ctx, const Metric4& g, const Vector3& E,
                           const Vector3& H) {
    return field_map(ctx, g, E, H, +1);
}

Vector3 magnetic_field(const Context& ctx, const Metric4& g, const Vector3& E,
                       const Vector3& H) {
    return field_map(ctx, g, H, E, -1);
}

std::array<std::string, 3> DiagonalMedium::axis_labels() const {
    if (geometry == CloakGeometry::Cylindrical) return {"r", "phi", "z"};
    return {"r", "theta", "phi"};
}

Metric4 cylindrical_cloak_metric(Context& ctx, const RationalFunction& a,
                                 const RationalFunction& b) {
    check_shell(a, b);
    RationalFunction r = intern_symbol(ctx, "r");
    RationalFunction c = b / (b - a);
    RationalFunction shifted = r - a;
    Metric4 g;
    g.coordinate_names = {"t", "r", "phi", "z"};
    g.entries[0][0] = rf_const(ctx, 1);
    g.entries[1][1] = -(c * c);
    g.entries[2][2] = -(c * c * shifted * shifted);
    g.entries[3][3] = rf_const(ctx, -1);
    return g;
}

Metric4 spherical_cloak_metric(Context& ctx, const RationalFunction& a,
                               const RationalFunction& b) {
    check_shell(a, b);
    RationalFunction r = intern_symbol(ctx, "r");
    RationalFunction s = intern_symbol(ctx, "s");
    RationalFunction c = b / (b - a);
    RationalFunction radial = c * (r - a);
    Metric4 g;
    g.coordinate_names = {"t", "r", "theta", "phi"};
    g.entries[0][0] = rf_const(ctx, 1);
    g.entries[1][1] = -(c * c);
    g.entries[2][2] = -(radial * radial);
    g.entries[3][3] = -(radial * radial * s * s);
    return g;
}

DiagonalMedium physical_parameters(const Matrix3& eps, const Matrix3& gamma,
                                   CloakGeometry geometry) {
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j)
            if (i != j && (!eps[i][j].is_zero() || !gamma[i][j].is_zero()))
                throw Error::eval("physical parameters require diagonal matrices");
    RationalFunction det_gamma = gamma[0][0] * gamma[1][1] * gamma[2][2];
    auto root = det_gamma.sqrt_exact();
    if (!root)
        throw Error::eval("sqrt(det gamma) is not an exact rational function: " +
                          det_gamma.str());
    DiagonalMedium out;
    out.geometry = geometry;
    for (size_t i = 0; i < 3; ++i) {
        out.eps[i] = eps[i][i] * gamma[i][i] / *root;
        out.mu[i] = out.eps[i];
    }
    return out;
}

DiagonalMedium cloak_parameters(Context& ctx, CloakGeometry geometry,
                                const RationalFunction& a, const RationalFunction& b) {
    Metric4 g = geometry == CloakGeometry::Cylindrical
                    ? cylindrical_cloak_metric(ctx, a, b)
                    : spherical_cloak_metric(ctx, a, b);
    Matrix3 eps = plebanski_epsilon(ctx, g);
    RationalFunction r = RationalFunction::symbol(ctx.scalar_symbols, "r");
    Matrix3 gamma{};
    gamma[0][0] = rf_const(ctx, 1);
    gamma[1][1] = r * r;
    if (geometry == CloakGeometry::Cylindrical) {
        gamma[2][2] = rf_const(ctx, 1);
    } else {
        RationalFunction s = RationalFunction::symbol(ctx.scalar_symbols, "s");
        gamma[2][2] = r * r * s * s;
    }
    return physical_parameters(eps, gamma, geometry);
}

}  // namespace tcas
