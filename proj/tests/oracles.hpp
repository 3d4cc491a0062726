#pragma once

// Independent reference implementations used to pin expected values in
// tests. These deliberately avoid the library's own algorithms: everything
// is computed by the most direct textbook method available, so agreement is
// meaningful evidence rather than a tautology.

#include <array>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "tcas/comp.hpp"
#include "tcas/rational.hpp"
#include "tcas/rational_function.hpp"

namespace oracles {

// Parity of an integer permutation by explicit inversion counting.
inline int parity(const std::vector<int>& p) {
    int s = 1;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

// Textbook determinant: signed sum over all 24 permutations of S4.
inline tcas::RationalFunction det4(const tcas::Matrix4& m) {
    std::vector<int> p{0, 1, 2, 3};
    tcas::RationalFunction det{tcas::Rational(0)};
    do {
        tcas::RationalFunction prod{tcas::Rational(parity(p))};
        for (size_t r = 0; r < 4; ++r) prod *= m[r][static_cast<size_t>(p[r])];
        det += prod;
    } while (std::next_permutation(p.begin(), p.end()));
    return det;
}

inline tcas::Rational random_rational(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 7);
    return tcas::make_rational(num(rng), den(rng));
}

inline tcas::Matrix4 random_matrix4(std::mt19937& rng) {
    tcas::Matrix4 m;
    for (auto& row : m)
        for (auto& cell : row) cell = tcas::RationalFunction(random_rational(rng));
    return m;
}

// --- plain-rational matrix algebra (no polynomial machinery) ---------------

using Mat4Q = std::array<std::array<tcas::Rational, 4>, 4>;

inline tcas::Rational det4q(const Mat4Q& m) {
    std::vector<int> p{0, 1, 2, 3};
    tcas::Rational det(0);
    do {
        tcas::Rational prod(parity(p));
        for (size_t r = 0; r < 4; ++r) prod *= m[r][static_cast<size_t>(p[r])];
        det += prod;
    } while (std::next_permutation(p.begin(), p.end()));
    return det;
}

// Gauss-Jordan elimination with row pivoting; nullopt on a singular input.
inline std::optional<Mat4Q> invert4(Mat4Q m) {
    Mat4Q inv{};
    for (size_t i = 0; i < 4; ++i) inv[i][i] = 1;
    for (size_t col = 0; col < 4; ++col) {
        size_t pivot = 4;
        for (size_t r = col; r < 4; ++r)
            if (m[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot == 4) return std::nullopt;
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        tcas::Rational p = m[col][col];
        for (size_t c = 0; c < 4; ++c) {
            m[col][c] /= p;
            inv[col][c] /= p;
        }
        for (size_t r = 0; r < 4; ++r) {
            if (r == col || m[r][col] == 0) continue;
            tcas::Rational f = m[r][col];
            for (size_t c = 0; c < 4; ++c) {
                m[r][c] -= f * m[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

inline std::optional<tcas::Rational> sqrt_rational(const tcas::Rational& q) {
    if (sgn(q) < 0) return std::nullopt;
    mpz_class num = q.get_num(), den = q.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return std::nullopt;
    if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    tcas::Rational out(rn, rd);
    out.canonicalize();
    return out;
}

// Cloak medium parameters at one concrete point, by rational matrix algebra
// alone: the radial stretch is measured as a finite-difference quotient
// (exact, the map is affine in r), then pulled-back metric -> Gauss-Jordan
// inverse -> permutation-sum determinant -> medium formula.
inline std::optional<std::array<tcas::Rational, 3>> cloak_params_point(
    bool spherical, const tcas::Rational& a, const tcas::Rational& b,
    const tcas::Rational& r, const tcas::Rational& s) {
    tcas::Rational h(1, 128);
    auto radial = [&](const tcas::Rational& x) { return tcas::Rational(b * (x - a) / (b - a)); };
    tcas::Rational slope = (radial(r + h) - radial(r)) / h;
    tcas::Rational rp = radial(r);
    std::array<tcas::Rational, 3> prime_diag = {
        tcas::Rational(1), tcas::Rational(rp * rp),
        spherical ? tcas::Rational(rp * rp * s * s) : tcas::Rational(1)};
    std::array<tcas::Rational, 3> pulled = {tcas::Rational(slope * slope * prime_diag[0]),
                                            prime_diag[1], prime_diag[2]};
    Mat4Q g{};
    g[0][0] = 1;
    for (size_t i = 0; i < 3; ++i) g[i + 1][i + 1] = -pulled[i];
    auto root = sqrt_rational(-det4q(g));
    if (!root) return std::nullopt;
    auto ginv = invert4(g);
    if (!ginv) return std::nullopt;
    std::array<tcas::Rational, 3> flat = {tcas::Rational(1), tcas::Rational(r * r),
                                          spherical ? tcas::Rational(r * r * s * s)
                                                    : tcas::Rational(1)};
    auto flat_root = sqrt_rational(tcas::Rational(flat[0] * flat[1] * flat[2]));
    if (!flat_root) return std::nullopt;
    std::array<tcas::Rational, 3> out;
    for (size_t i = 0; i < 3; ++i) {
        tcas::Rational eps = -(*root / g[0][0]) * (*ginv)[i + 1][i + 1];
        out[i] = eps * flat[i] / *flat_root;
    }
    return out;
}

inline tcas::Matrix4 matmul(const tcas::Matrix4& a, const tcas::Matrix4& b) {
    tcas::Matrix4 c;
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) {
            tcas::RationalFunction s{tcas::Rational(0)};
            for (size_t k = 0; k < 4; ++k) s += a[i][k] * b[k][j];
            c[i][j] = s;
        }
    return c;
}

}  // namespace oracles
