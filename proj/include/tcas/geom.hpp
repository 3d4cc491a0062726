#pragma once

#include <array>
#include <string>

#include "tcas/comp.hpp"
#include "tcas/context.hpp"
#include "tcas/rational_function.hpp"

namespace tcas {

// Maxwell geometrization layer: the map from a 4-metric to effective medium
// parameters, the fixed field-tensor component layouts, and the cloak
// metrics for cylindrical/spherical geometries.

using Vector3 = std::array<RationalFunction, 3>;
using Matrix3 = std::array<std::array<RationalFunction, 3>, 3>;

// Symmetric 4-metric with signature (+,-,-,-); index 0 is time.
struct Metric4 {
    Matrix4 entries{};
    std::array<std::string, 4> coordinate_names{"t", "x", "y", "z"};

    static Metric4 minkowski();
    static Metric4 diagonal(const std::array<RationalFunction, 4>& d);
};

// Checks symmetry, invertibility (determinant nonzero), and g_00 != 0.
// Throws Error::eval naming the violated condition.
void validate(const Context& ctx, const Metric4& g);

// Inverse of a 4x4 matrix through the adjugate, with the determinant taken
// from the epsilon-formula path. Errors when the determinant vanishes.
Matrix4 inverse4(const Context& ctx, const Matrix4& m);

// Exact square root of -det(g); errors with the offending expression when
// the root is not a rational function.
RationalFunction sqrt_neg_det(const Context& ctx, const Metric4& g);

// Field tensors in the fixed component layout:
//
//            |  0    E_1   E_2   E_3 |            |  0   -D^1  -D^2  -D^3 |
//   F     =  | -E_1   0   -B^3   B^2 |   H     =  | D^1   0    -H_3   H_2 |
//    lower   | -E_2  B^3    0   -B^1 |    upper   | D^2   H_3    0   -H_1 |
//            | -E_3 -B^2   B^1    0  |            | D^3  -H_2   H_1    0  |
struct FieldTensors {
    Matrix4 F_lower;
    Matrix4 H_upper;
};

Matrix4 field_f_lower(const Vector3& E, const Vector3& B);
Matrix4 field_h_upper(const Vector3& D, const Vector3& H);
FieldTensors field_tensors(const Vector3& E, const Vector3& B, const Vector3& D,
                           const Vector3& H);

// Effective medium of a metric: the geometrized permittivities and the
// magnetoelectric coupling coefficients w_j = g_{j0}/g_00 multiplying the
// eps^{ijk} w_j H_k (resp. E_k) cross terms.
struct MediumParameters {
    Matrix3 epsilon;
    Matrix3 mu;
    Vector3 magnetoelectric;
};

// eps^{ij} = -(sqrt(-g)/g_00) g^{ij} over the spatial block of the inverse
// metric; mu^{ij} is the identical expression.
Matrix3 plebanski_epsilon(const Context& ctx, const Metric4& g);
Matrix3 plebanski_mu(const Context& ctx, const Metric4& g);
MediumParameters medium_parameters(const Context& ctx, const Metric4& g);

// D^i = -(sqrt(-g)/g_00) g^{ij} E_j + (1/g_00) eps^{ijk} g_{j0} H_k
Vector3 displacement_field(const Context& ctx, const Metric4& g, const Vector3& E,
                           const Vector3& H);
// B^i = -(sqrt(-g)/g_00) g^{ij} H_j - (1/g_00) eps^{ijk} g_{j0} E_k
Vector3 magnetic_field(const Context& ctx, const Metric4& g, const Vector3& E,
                       const Vector3& H);

enum class CloakGeometry { Cylindrical, Spherical };

// Orthonormal-frame medium parameters of a diagonal medium, in coordinate
// order: (r, phi, z) for cylindrical, (r, theta, phi) for spherical.
struct DiagonalMedium {
    CloakGeometry geometry = CloakGeometry::Cylindrical;
    std::array<RationalFunction, 3> eps;
    std::array<RationalFunction, 3> mu;

    std::array<std::string, 3> axis_labels() const;
};

// Pull-back of the flat cylindrical metric diag(1, r'^2, 1) through
// r' = (b/(b-a))(r-a): diag(1, -c^2, -c^2 (r-a)^2, -1) with c = b/(b-a),
// coordinates (t, r, phi, z). The radial symbol r is interned in ctx.
// Errors when a and b are both numeric with a >= b.
Metric4 cylindrical_cloak_metric(Context& ctx, const RationalFunction& a,
                                 const RationalFunction& b);

// Spherical counterpart through r' = c (r-a), with an opaque atom s for
// sin(theta): diag(1, -c^2, -c^2 (r-a)^2, -c^2 (r-a)^2 s^2), coordinates
// (t, r, theta, phi).
Metric4 spherical_cloak_metric(Context& ctx, const RationalFunction& a,
                               const RationalFunction& b);

// Orthonormal-frame parameters of a diagonal geometrized medium against a
// diagonal flat background gamma: parameter i = eps^{ii} gamma_ii /
// sqrt(det gamma). Errors on non-diagonal input.
DiagonalMedium physical_parameters(const Matrix3& eps, const Matrix3& gamma,
                                   CloakGeometry geometry);

// Cloak metric -> Plebanski map -> physical parameters against the flat
// background diag(1, r^2, 1) (cylindrical) or diag(1, r^2, r^2 s^2)
// (spherical).
DiagonalMedium cloak_parameters(Context& ctx, CloakGeometry geometry,
                                const RationalFunction& a, const RationalFunction& b);

}  // namespace tcas
