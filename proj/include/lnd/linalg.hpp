// Exact linear algebra over the rationals: reduced row echelon form, rank,
// nullspace, determinant and inverse for the small dense systems the
// pipeline solves.
#pragma once

#include "lnd/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace lnd {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;

inline QMat q_identity(std::size_t n) {
    QMat m(n, QVec(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = Rational(1);
    return m;
}

inline QMat q_mul(const QMat& a, const QMat& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMat r(n, QVec(m, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Rational s(0);
            for (std::size_t t = 0; t < k; ++t) s += a[i][t] * b[t][j];
            r[i][j] = s;
        }
    return r;
}

// In-place reduced row echelon form; returns (rank, pivot columns).
inline std::pair<std::size_t, std::vector<std::size_t>> rref(QMat& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return {0, pivots};
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rational inv = m[r][c].inverse();
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return {r, pivots};
}

inline std::size_t rank(QMat m) { return rref(m).first; }

// Basis of { v : m v = 0 }, one row per basis vector.
inline QMat nullspace(QMat m) {
    if (m.empty()) return {};
    std::size_t cols = m[0].size();
    auto [rk, pivots] = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    QMat basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        QVec v(cols, Rational(0));
        v[free] = Rational(1);
        for (std::size_t i = 0; i < rk; ++i) v[pivots[i]] = -m[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

inline Rational determinant(QMat m) {
    std::size_t n = m.size();
    Rational det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c].is_zero()) ++p;
        if (p == n) return Rational(0);
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        Rational inv = m[c][c].inverse();
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c].is_zero()) continue;
            Rational f = m[i][c] * inv;
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

inline std::optional<QMat> inverse(const QMat& a) {
    std::size_t n = a.size();
    QMat aug(n, QVec(2 * n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = Rational(1);
    }
    auto [rk, pivots] = rref(aug);
    if (rk != n) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i)
        if (pivots[i] != i) return std::nullopt;
    QMat inv(n, QVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

}  // namespace lnd
