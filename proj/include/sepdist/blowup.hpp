#pragma once

#include <sepdist/distribution.hpp>

#include <set>

namespace sepdist {

/**
 * @brief Coefficients theta_L^{ij} of pi^* d omega for the chart
 * pi(t) = (t_1, t_1 t_2, ..., t_1 t_M).
 */
struct BlowupEntry {
    ExactVector theta;
    /// l_1 >= l_2 + ... + l_M
    bool witness{false};
};

struct BlowupTable {
    std::size_t M{0}, N{0};
    std::map<CoefficientKey, BlowupEntry> entries;

    ExactVector get(const MultiIndex& l, std::size_t i, std::size_t j) const {
        if (i > j) {
            ExactVector v = get(l, j, i);
            for (auto& x : v) x = -x;
            return v;
        }
        auto it = entries.find({l, i, j});
        return it == entries.end() ? ExactVector(N) : it->second.theta;
    }
    std::vector<ExactVector> vectors() const {
        std::vector<ExactVector> r;
        for (auto& [k, e] : entries) r.push_back(e.theta);
        return r;
    }
};

/** @brief (|K|+2, k_2, ..., k_M) */
inline MultiIndex phi(const MultiIndex& k) {
    MultiIndex r = k;
    r[0] = k.degree() + 2;
    return r;
}

/** @brief (|K|+1, k_2, .., k_i + 1, .., k_M); for i = 0 no coordinate is raised. */
inline MultiIndex phi_i(const MultiIndex& k, std::size_t i) {
    MultiIndex r = k;
    r[0] = k.degree() + 1;
    if (i > 0) r[i] += 1;
    return r;
}

/** @brief Inverse of phi_i, or nothing when the preimage has a negative entry. */
inline std::optional<MultiIndex> phi_i_inverse(const MultiIndex& l, std::size_t i) {
    MultiIndex k = l;
    if (i > 0) k[i] -= 1;
    int rest = 0;
    for (std::size_t b = 1; b < l.size(); ++b) rest += k[b];
    k[0] = l[0] - 1 - rest;
    if (!k.nonnegative()) return std::nullopt;
    return k;
}

inline BlowupTable blowup_coefficients(const CoefficientTable& c, std::size_t M) {
    BlowupTable t{M, c.N, {}};
    auto add = [&](const MultiIndex& l, std::size_t i, std::size_t j, const ExactVector& v, int sign) {
        auto [it, fresh] = t.entries.try_emplace({l, i, j}, BlowupEntry{ExactVector(c.N), false});
        for (std::size_t n = 0; n < c.N; ++n) it->second.theta[n] += sign > 0 ? v[n] : -v[n];
    };
    for (auto& [key, v] : c.entries) {
        auto& [k, i, j] = key;
        if (i == 0) {
            add(phi_i(k, 0), 0, j, v, +1);
        } else {
            add(phi(k), i, j, v, +1);
            add(phi_i(k, i), 0, j, v, +1);
            add(phi_i(k, j), 0, i, v, -1);
        }
    }
    for (auto it = t.entries.begin(); it != t.entries.end();) {
        if (is_zero_vector(it->second.theta)) {
            it = t.entries.erase(it);
            continue;
        }
        const MultiIndex& l = std::get<0>(it->first);
        it->second.witness = 2 * l[0] >= l.degree();
        ++it;
    }
    return t;
}

/** @brief The pullback map pi as polynomials in t. */
inline std::vector<SparsePoly> blowup_chart(std::size_t M) {
    std::vector<SparsePoly> p;
    p.push_back(SparsePoly::variable(M, 0));
    for (std::size_t i = 1; i < M; ++i) p.push_back(SparsePoly::variable(M, 0) * SparsePoly::variable(M, i));
    return p;
}

/**
 * @brief Recover c_K^{ij} from theta by the inverse relations
 * c_K^{ij} = theta^{ij}_{phi(K)} for 1 < i < j and
 * c_K^{1j} = theta^{1j}_{phi_1(K)} - sum_{i != 1, j} theta^{ij}_{phi(phi_i^{-1}(phi_1(K)))}.
 */
inline CoefficientTable blowup_inverse(const BlowupTable& t) {
    CoefficientTable c{t.N, {}};
    std::set<std::pair<MultiIndex, std::size_t>> candidates;
    for (auto& [key, e] : t.entries) {
        auto& [l, i, j] = key;
        if (i == 0) {
            candidates.insert({l, j});
            continue;
        }
        MultiIndex k = l;
        k[0] = l[0] - 2 - (l.degree() - l[0]);
        if (!k.nonnegative()) continue;
        c.entries[{k, i, j}] = e.theta;
        candidates.insert({phi_i(k, i), j});
        candidates.insert({phi_i(k, j), i});
    }
    for (auto& [l, j] : candidates) {
        auto k = phi_i_inverse(l, 0);
        if (!k) continue;
        ExactVector v = t.get(l, 0, j);
        for (std::size_t a = 1; a < t.M; ++a) {
            if (a == j) continue;
            auto kp = phi_i_inverse(l, a);
            if (!kp) continue;
            ExactVector w = t.get(phi(*kp), a, j);
            for (std::size_t n = 0; n < t.N; ++n) v[n] -= w[n];
        }
        if (!is_zero_vector(v)) c.entries[{*k, 0, j}] = v;
    }
    return c;
}

inline ExactScalar binomial(long n, long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), (unsigned long)n, (unsigned long)k);
    return ExactScalar(Rational(r));
}

/**
 * @brief Theta^{ij}_L(tau) = sum_k theta^{ij}_{L + k e_M} C(l_M + k, l_M) tau^k,
 * the coefficient after the shift t_M = s_M + tau. Entry k of the result is
 * the C^N coefficient of tau^k.
 */
inline std::vector<ExactVector> shifted_coefficient(const BlowupTable& t, const MultiIndex& l, std::size_t i,
                                                    std::size_t j) {
    std::size_t last = t.M - 1;
    std::vector<ExactVector> poly;
    for (auto& [key, e] : t.entries) {
        auto& [lp, a, b] = key;
        if (!((a == i && b == j) || (a == j && b == i))) continue;
        bool match = true;
        for (std::size_t q = 0; q < last; ++q) match = match && lp[q] == l[q];
        if (!match || lp[last] < l[last]) continue;
        long k = lp[last] - l[last];
        if (poly.size() <= std::size_t(k)) poly.resize(std::size_t(k) + 1, ExactVector(t.N));
        ExactScalar f = binomial(lp[last], l[last]);
        if (a != i) f = -f;
        for (std::size_t n = 0; n < t.N; ++n) poly[std::size_t(k)][n] += f * e.theta[n];
    }
    return poly;
}

inline ExactVector evaluate_shifted(const std::vector<ExactVector>& poly, const ExactScalar& tau, std::size_t N) {
    ExactVector r(N);
    ExactScalar p(1);
    for (auto& c : poly) {
        for (std::size_t n = 0; n < N; ++n) r[n] += c[n] * p;
        p *= tau;
    }
    return r;
}

/**
 * @brief Monomial theta_L t^L dt_i ^ dt_j of pi^* d omega.
 */
struct SpanningMonomial {
    MultiIndex L;
    std::size_t i{0}, j{0};
    ExactVector theta;
};

/**
 * @brief Greedy choice, by increasing |L|, of monomials whose theta vectors
 * span span(theta) = W_D.
 */
inline std::vector<SpanningMonomial> spanning_monomials(const BlowupTable& t) {
    std::vector<std::pair<CoefficientKey, const BlowupEntry*>> order;
    for (auto& [k, e] : t.entries) order.emplace_back(k, &e);
    std::stable_sort(order.begin(), order.end(), [](auto& a, auto& b) {
        return std::get<0>(a.first).degree() < std::get<0>(b.first).degree();
    });
    std::size_t target = exact_rank(t.vectors());
    std::vector<SpanningMonomial> chosen;
    std::vector<ExactVector> span;
    for (auto& [key, e] : order) {
        if (chosen.size() == target) break;
        span.push_back(e->theta);
        if (exact_rank(span) == chosen.size() + 1) {
            chosen.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), e->theta});
        } else {
            span.pop_back();
        }
    }
    return chosen;
}

}  // namespace sepdist
