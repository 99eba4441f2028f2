#pragma once

#include <sepdist/scalar.hpp>

#include <map>
#include <optional>
#include <vector>

namespace sepdist {

using ExactVector = std::vector<ExactScalar>;
using ExactMatrix = std::vector<ExactVector>;

inline std::size_t cols_of(const ExactMatrix& a) { return a.empty() ? 0 : a.front().size(); }

inline void check_rectangular(const ExactMatrix& a) {
    for (auto& r : a)
        if (r.size() != cols_of(a)) throw std::invalid_argument("ragged matrix");
}

/**
 * @brief Reduced row echelon form in place. Pivots are the first nonzero
 * entry of each column scan, so results are deterministic.
 */
inline std::vector<std::size_t> rref(ExactMatrix& a) {
    check_rectangular(a);
    std::vector<std::size_t> pivots;
    std::size_t rows = a.size(), cols = cols_of(a), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        ExactScalar inv = ExactScalar(1) / a[r][c];
        for (auto& v : a[r]) v *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            ExactScalar f = a[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    a.resize(r);
    return pivots;
}

inline std::size_t exact_rank(ExactMatrix a) { return rref(a).size(); }

/**
 * @brief Right kernel basis. Each vector is scaled so its first nonzero
 * entry is 1.
 */
inline std::vector<ExactVector> exact_nullspace(ExactMatrix a, std::size_t cols) {
    if (!a.empty() && cols_of(a) != cols) throw std::invalid_argument("column count mismatch");
    auto piv = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : piv) is_pivot[p] = true;
    std::vector<ExactVector> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        ExactVector v(cols);
        v[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][f];
        for (auto& x : v)
            if (!x.is_zero()) {
                ExactScalar s = ExactScalar(1) / x;
                for (auto& y : v) y *= s;
                break;
            }
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::vector<ExactVector> exact_nullspace(const ExactMatrix& a) { return exact_nullspace(a, cols_of(a)); }

/** @brief Row-reduced basis of the span of the given vectors. */
inline std::vector<ExactVector> span_basis(const std::vector<ExactVector>& vs) {
    ExactMatrix a = vs;
    rref(a);
    return a;
}

/** @brief Determinant of a square matrix by exact elimination. */
inline ExactScalar exact_determinant(ExactMatrix a) {
    std::size_t n = a.size();
    for (auto& r : a)
        if (r.size() != n) throw std::invalid_argument("determinant of non-square matrix");
    ExactScalar det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c].is_zero()) ++p;
        if (p == n) return ExactScalar();
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        ExactScalar inv = ExactScalar(1) / a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c].is_zero()) continue;
            ExactScalar f = a[i][c] * inv;
            for (std::size_t j = c; j < n; ++j)
                if (!a[c][j].is_zero()) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

/**
 * @brief Particular solution of A x = rhs with the listed free variables fixed.
 *
 * Unlisted non-pivot variables are set to zero. Returns nothing if the
 * system is inconsistent.
 */
inline std::optional<ExactVector> exact_solve(const ExactMatrix& a, const ExactVector& rhs,
                                              const std::map<std::size_t, ExactScalar>& fixed = {}) {
    check_rectangular(a);
    if (rhs.size() != a.size()) throw std::invalid_argument("rhs length mismatch");
    std::size_t cols = cols_of(a);
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < cols; ++c)
        if (!fixed.count(c)) free_cols.push_back(c);
    for (auto& [c, v] : fixed)
        if (c >= cols) throw std::invalid_argument("fixed variable out of range");
    ExactMatrix aug(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        ExactScalar b = rhs[r];
        for (auto& [c, v] : fixed) b -= a[r][c] * v;
        for (auto c : free_cols) aug[r].push_back(a[r][c]);
        aug[r].push_back(b);
    }
    std::size_t n = free_cols.size();
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == n) return std::nullopt;
    ExactVector x(cols);
    for (auto& [c, v] : fixed) x[c] = v;
    for (std::size_t r = 0; r < piv.size(); ++r) x[free_cols[piv[r]]] = aug[r][n];
    return x;
}

inline ExactVector mat_vec(const ExactMatrix& a, const ExactVector& x) {
    ExactVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != x.size()) throw std::invalid_argument("matrix-vector mismatch");
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!a[i][j].is_zero() && !x[j].is_zero()) r[i] += a[i][j] * x[j];
    }
    return r;
}

inline bool is_zero_vector(const ExactVector& v) {
    for (auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

/** @brief True when span(a) == span(b). */
inline bool same_span(const std::vector<ExactVector>& a, const std::vector<ExactVector>& b) {
    std::size_t ra = exact_rank(a), rb = exact_rank(b);
    if (ra != rb) return false;
    ExactMatrix both = a;
    both.insert(both.end(), b.begin(), b.end());
    return exact_rank(both) == ra;
}

}  // namespace sepdist
