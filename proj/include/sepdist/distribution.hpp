#pragma once

#include <sepdist/forms.hpp>
#include <sepdist/linalg.hpp>

#include <tuple>

namespace sepdist {

/**
 * @brief Distribution on C^M x C^N cut out by dz_j = omega_j(x), j = 1..N.
 */
struct SeparatedDistribution {
    std::size_t M{0};
    std::size_t N{0};
    std::vector<OneForm> omega;

    SeparatedDistribution() = default;
    SeparatedDistribution(std::size_t m, std::vector<OneForm> w) : M(m), N(w.size()), omega(std::move(w)) {
        if (M < 2) throw std::invalid_argument("need M >= 2");
        if (N < 1) throw std::invalid_argument("need N >= 1");
        for (auto& f : omega) {
            if (f.dim() != M) throw std::invalid_argument("1-form dimension mismatch");
            for (auto& p : f.coeffs)
                if (!p.is_polynomial()) throw std::invalid_argument("negative exponent in distribution");
        }
    }

    int max_degree() const {
        int d = 0;
        for (auto& f : omega) d = std::max(d, f.degree());
        return d;
    }

    std::vector<TwoForm> d_omega() const {
        std::vector<TwoForm> r;
        for (auto& f : omega) r.push_back(exterior_derivative(f));
        return r;
    }
};

using CoefficientKey = std::tuple<MultiIndex, std::size_t, std::size_t>;

/**
 * @brief c_K^{ij} in C^N, the x^K dx_i ^ dx_j coefficients of (d omega_1, ..., d omega_N).
 */
struct CoefficientTable {
    std::size_t N{0};
    std::map<CoefficientKey, ExactVector> entries;

    std::vector<ExactVector> vectors() const {
        std::vector<ExactVector> r;
        for (auto& [k, v] : entries) r.push_back(v);
        return r;
    }
};

inline CoefficientTable coefficient_table(const std::vector<TwoForm>& dw) {
    CoefficientTable t{dw.size(), {}};
    for (std::size_t n = 0; n < dw.size(); ++n)
        dw[n].for_each_term([&](const MultiIndex& k, std::size_t i, std::size_t j, const ExactScalar& c) {
            auto [it, fresh] = t.entries.try_emplace({k, i, j}, ExactVector(dw.size()));
            it->second[n] = c;
        });
    return t;
}

inline CoefficientTable coefficient_table(const SeparatedDistribution& d) { return coefficient_table(d.d_omega()); }

struct WdKappa {
    std::vector<ExactVector> basis;
    std::size_t kappa{0};
};

/** @brief W_D = span of the coefficient vectors and kappa = N - dim W_D. */
inline WdKappa wd_and_kappa(const CoefficientTable& t) {
    auto b = span_basis(t.vectors());
    std::size_t k = t.N - b.size();
    return {std::move(b), k};
}

struct FirstIntegralData {
    std::size_t kappa{0};
    std::vector<ExactVector> wd_basis;
    /// rows T_1..T_kappa with ker T = W_D
    std::vector<ExactVector> T;
    /// primitives g_j on C^M with d g_j = T_j . omega
    std::vector<SparsePoly> g;
    /// h_j = T_j(z) - g_j(x) on C^{M+N}, x first
    std::vector<SparsePoly> H;
};

inline std::vector<std::size_t> iota_map(std::size_t n, std::size_t offset = 0) {
    std::vector<std::size_t> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = i + offset;
    return m;
}

inline FirstIntegralData first_integrals(const SeparatedDistribution& d) {
    auto t = coefficient_table(d);
    auto [basis, kappa] = wd_and_kappa(t);
    FirstIntegralData r;
    r.kappa = kappa;
    r.wd_basis = basis;
    r.T = basis.empty() ? std::vector<ExactVector>() : exact_nullspace(basis, d.N);
    if (basis.empty())
        for (std::size_t j = 0; j < d.N; ++j) {
            ExactVector e(d.N);
            e[j] = 1;
            r.T.push_back(e);
        }
    if (r.T.size() != kappa) throw std::logic_error("annihilator rank mismatch");
    std::size_t nv = d.M + d.N;
    for (auto& row : r.T) {
        OneForm combo(d.M);
        for (std::size_t n = 0; n < d.N; ++n)
            if (!row[n].is_zero()) combo = combo + row[n] * d.omega[n];
        SparsePoly g = poincare_primitive(combo);
        SparsePoly h(nv);
        for (std::size_t n = 0; n < d.N; ++n) h.add_term(MultiIndex::unit(nv, d.M + n), row[n]);
        h -= g.embed(nv, iota_map(d.M));
        r.g.push_back(std::move(g));
        r.H.push_back(std::move(h));
    }
    return r;
}

/** @brief X_i^D = d/dx_i + sum_j omega_j(d/dx_i) d/dz_j on C^{M+N}. */
inline PolyVectorField coordinate_lift(const SeparatedDistribution& d, std::size_t i) {
    std::size_t nv = d.M + d.N;
    auto xmap = iota_map(d.M);
    std::vector<SparsePoly> c(nv, SparsePoly(nv));
    c[i] = SparsePoly::constant(nv, ExactScalar(1));
    for (std::size_t n = 0; n < d.N; ++n) c[d.M + n] = d.omega[n][i].embed(nv, xmap);
    return PolyVectorField(std::move(c));
}

/** @brief True when p/q is constant along every field tangent to D. */
inline bool is_first_integral(const SeparatedDistribution& d, const SparsePoly& p, const SparsePoly& q) {
    if (q.is_zero()) throw std::invalid_argument("zero denominator");
    if (p.nvars() != d.M + d.N || q.nvars() != d.M + d.N) throw std::invalid_argument("first integral arity");
    for (std::size_t i = 0; i < d.M; ++i) {
        auto x = coordinate_lift(d, i);
        if (!(x.apply(p) * q - p * x.apply(q)).is_zero()) return false;
    }
    return true;
}

/**
 * @brief Span at the origin of the z-parts of iterated brackets of the
 * coordinate lifts, nested up to the given depth.
 */
inline std::vector<ExactVector> bracket_span(const SeparatedDistribution& d, int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be positive");
    std::size_t nv = d.M + d.N;
    std::vector<PolyVectorField> lifts;
    for (std::size_t i = 0; i < d.M; ++i) lifts.push_back(coordinate_lift(d, i));
    std::vector<PolyVectorField> level, all;
    auto push_unique = [](std::vector<PolyVectorField>& v, PolyVectorField f) {
        if (f.is_zero()) return;
        for (auto& g : v)
            if (g == f) return;
        v.push_back(std::move(f));
    };
    for (std::size_t i = 0; i < d.M; ++i)
        for (std::size_t j = i + 1; j < d.M; ++j) push_unique(level, lie_bracket(lifts[i], lifts[j]));
    for (auto& f : level) all.push_back(f);
    for (int k = 2; k <= depth; ++k) {
        std::vector<PolyVectorField> next;
        for (auto& f : level)
            for (auto& x : lifts) push_unique(next, lie_bracket(x, f));
        for (auto& f : next) all.push_back(f);
        level = std::move(next);
    }
    std::vector<ExactVector> vals;
    MultiIndex origin(nv);
    for (auto& f : all) {
        ExactVector v(d.N);
        for (std::size_t n = 0; n < d.N; ++n) v[n] = f[d.M + n].coeff(origin);
        if (!is_zero_vector(v)) vals.push_back(v);
    }
    return span_basis(vals);
}

}  // namespace sepdist
