#pragma once

#include <sepdist/distribution.hpp>

#include <numeric>

namespace sepdist {

/** @brief Index of the unique positive entry when m is elementary, else nothing. */
inline std::optional<std::size_t> elementary_index(const MultiIndex& m) {
    std::optional<std::size_t> a;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) return std::nullopt;
        if (m[i] > 0) {
            if (a) return std::nullopt;
            a = i;
        }
    }
    return a;
}

inline bool is_elementary(const MultiIndex& m, std::size_t alpha) {
    auto a = elementary_index(m);
    return a && *a == alpha;
}

inline void require_elementary(const MultiIndex& m, std::size_t alpha) {
    if (!is_elementary(m, alpha)) throw std::invalid_argument("vector is not alpha-elementary: " + m.str());
}

/** @brief Integral of z^p conj(z)^q dz ^ d conj(z) over the unit disc. */
inline SymbolicScalar disc_monomial_integral(int p, int q) {
    if (p < 0 || q < 0) throw std::invalid_argument("negative exponent");
    if (p != q) return {};
    return {ExactScalar(-1) / ExactScalar(p + 1), 1};
}

/**
 * @brief Integral of x^K dx_i ^ dx_j over the holomorphic-antiholomorphic
 * disc bounded by the m-loop, as a multiple of y^{K+e_i+e_j}.
 */
inline SymbolicScalar elementary_disc_integral(const MultiIndex& k, std::size_t i, std::size_t j, const MultiIndex& m,
                                               std::size_t alpha) {
    if (i >= j) throw std::invalid_argument("need i < j");
    require_elementary(m, alpha);
    if (alpha != i && alpha != j) return {};
    MultiIndex kij = k.shifted(i, 1).shifted(j, 1);
    if (m.dot(kij) != 0) return {};
    ExactScalar c = alpha == i ? ExactScalar(m[j]) : ExactScalar(-m[i]);
    return {c / ExactScalar(k[alpha] + 1), 1};
}

/** @brief Coefficients a_L of the return map rho(y) = sum_L a_L y^L, keyed by L. */
using ReturnSeries = std::map<MultiIndex, std::vector<SymbolicScalar>>;

inline ReturnSeries return_series(const std::vector<TwoForm>& dw, const MultiIndex& m, std::size_t alpha, int order) {
    require_elementary(m, alpha);
    ReturnSeries s;
    for (std::size_t n = 0; n < dw.size(); ++n)
        dw[n].for_each_term([&](const MultiIndex& k, std::size_t i, std::size_t j, const ExactScalar& c) {
            MultiIndex l = k.shifted(i, 1).shifted(j, 1);
            if (l.degree() > order) return;
            SymbolicScalar v = elementary_disc_integral(k, i, j, m, alpha);
            if (v.is_zero()) return;
            auto [it, fresh] = s.try_emplace(l, std::vector<SymbolicScalar>(dw.size()));
            it->second[n] += v * c;
        });
    for (auto it = s.begin(); it != s.end();) {
        bool zero = std::all_of(it->second.begin(), it->second.end(), [](auto& v) { return v.is_zero(); });
        it = zero ? s.erase(it) : std::next(it);
    }
    return s;
}

inline CVector evaluate_series(const ReturnSeries& s, const CVector& y, std::size_t N) {
    CVector r(N, 0.0);
    for (auto& [l, a] : s) {
        Complex mono = 1.0;
        for (std::size_t i = 0; i < y.size(); ++i) mono *= std::pow(y[i], l[i]);
        for (std::size_t n = 0; n < N; ++n) r[n] += a[n].lower() * mono;
    }
    return r;
}

/**
 * @brief Member of M(L, alpha): x^{L-e_i-e_j} dx_i ^ dx_j with alpha in {i, j}.
 */
struct MonomialDescriptor {
    MultiIndex K;
    std::size_t i{0}, j{0};
    bool laurent{false};
};

inline std::vector<MonomialDescriptor> monomial_family(const MultiIndex& l, std::size_t alpha) {
    std::vector<MonomialDescriptor> r;
    for (std::size_t b = 0; b < l.size(); ++b) {
        if (b == alpha) continue;
        std::size_t i = std::min(b, alpha), j = std::max(b, alpha);
        MultiIndex k = l.shifted(i, -1).shifted(j, -1);
        r.push_back({k, i, j, !k.nonnegative()});
    }
    return r;
}

/** @brief lambda(L, m) = (2 pi i / l_alpha)(-m_1..-m_{alpha-1}, m_{alpha+1}..m_M). */
inline std::vector<SymbolicScalar> lambda_vector(const MultiIndex& l, const MultiIndex& m, std::size_t alpha) {
    require_elementary(m, alpha);
    if (l[alpha] == 0) throw std::invalid_argument("l_alpha must be nonzero");
    if (m.dot(l) != 0) throw std::invalid_argument("m . L must vanish");
    std::vector<SymbolicScalar> r;
    ExactScalar eta = ExactScalar(1) / ExactScalar(l[alpha]);
    for (std::size_t b = 0; b < l.size(); ++b) {
        if (b == alpha) continue;
        r.emplace_back(eta * ExactScalar(b < alpha ? -m[b] : m[b]), 1);
    }
    return r;
}

inline void require_basis_hypothesis(const MultiIndex& l, std::size_t alpha) {
    if (!l.nonnegative() || alpha >= l.size() || l[alpha] <= 0) throw std::invalid_argument("need l_alpha > 0");
    for (std::size_t b = 0; b < l.size(); ++b)
        if (b != alpha && l[b] > 0) return;
    throw std::invalid_argument("need another positive coordinate");
}

/**
 * @brief M-1 independent alpha-elementary vectors orthogonal to L.
 *
 * Off-alpha parts are the Vandermonde rows (1, j, j^2, ...), j = 1..M-1,
 * scaled by the least factor making m_j = m'_j . L / l_alpha integral.
 */
inline std::vector<MultiIndex> elementary_basis_for(const MultiIndex& l, std::size_t alpha) {
    require_basis_hypothesis(l, alpha);
    std::size_t M = l.size();
    std::vector<MultiIndex> r;
    for (long j = 1; j < long(M); ++j) {
        std::vector<long> v;
        long p = 1, dot = 0;
        for (std::size_t b = 0; b < M; ++b) {
            if (b == alpha) {
                v.push_back(0);
                continue;
            }
            v.push_back(p);
            dot += p * l[b];
            p *= j;
        }
        long la = l[alpha];
        long scale = la / std::gcd(dot, la);
        MultiIndex m(M);
        for (std::size_t b = 0; b < M; ++b) m[b] = int(-scale * v[b]);
        m[alpha] = int(scale * dot / la);
        r.push_back(m);
    }
    return r;
}

/** @brief Matrix [lambda_i(L, m_j)] divided by 2 pi i, rows indexed by j. */
inline ExactMatrix lambda_matrix(const MultiIndex& l, std::size_t alpha, const std::vector<MultiIndex>& basis) {
    ExactMatrix a;
    for (auto& m : basis) {
        ExactVector row;
        for (auto& v : lambda_vector(l, m, alpha)) row.push_back(v.exact());
        a.push_back(row);
    }
    return a;
}

/**
 * @brief Solve a_L(m_j) = sum_i lambda_i(L, m_j) c_i for the C^N coefficients
 * of the members of M(L, alpha), in monomial_family order.
 */
inline std::vector<ExactVector> recover_coefficients(const std::vector<std::vector<SymbolicScalar>>& a_values,
                                                     const MultiIndex& l, std::size_t alpha,
                                                     const std::vector<MultiIndex>& basis) {
    if (a_values.size() != basis.size() || basis.size() + 1 != l.size())
        throw std::invalid_argument("need M-1 return values and basis vectors");
    ExactMatrix lam = lambda_matrix(l, alpha, basis);
    if (exact_determinant(lam).is_zero()) throw std::invalid_argument("singular lambda matrix");
    std::size_t N = a_values.front().size();
    std::vector<ExactVector> coeffs(basis.size(), ExactVector(N));
    for (std::size_t n = 0; n < N; ++n) {
        ExactVector rhs;
        for (auto& a : a_values) {
            if (!a.at(n).is_zero() && a[n].pi_power() != 1) throw std::invalid_argument("return values must carry 2 pi i");
            rhs.push_back(a[n].exact());
        }
        auto x = exact_solve(lam, rhs);
        for (std::size_t i = 0; i < basis.size(); ++i) coeffs[i][n] = (*x)[i];
    }
    return coeffs;
}

}  // namespace sepdist
