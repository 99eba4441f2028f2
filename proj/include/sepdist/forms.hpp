#pragma once

#include <sepdist/poly.hpp>

#include <map>
#include <utility>
#include <vector>

namespace sepdist {

/**
 * @brief Polynomial 1-form sum_i w_i dx_i on C^M.
 */
struct OneForm {
    std::vector<SparsePoly> coeffs;

    OneForm() = default;
    explicit OneForm(std::size_t m) : coeffs(m, SparsePoly(m)) {}
    explicit OneForm(std::vector<SparsePoly> c) : coeffs(std::move(c)) {
        for (auto& p : coeffs)
            if (p.nvars() != coeffs.size()) throw std::invalid_argument("1-form coefficient arity mismatch");
    }

    std::size_t dim() const { return coeffs.size(); }
    const SparsePoly& operator[](std::size_t i) const { return coeffs.at(i); }
    SparsePoly& operator[](std::size_t i) { return coeffs.at(i); }

    int degree() const {
        int d = -1;
        for (auto& p : coeffs) d = std::max(d, p.degree());
        return d;
    }
    bool is_zero() const {
        for (auto& p : coeffs)
            if (!p.is_zero()) return false;
        return true;
    }

    friend OneForm operator+(OneForm a, const OneForm& b) {
        for (std::size_t i = 0; i < a.dim(); ++i) a.coeffs[i] += b.coeffs.at(i);
        return a;
    }
    friend OneForm operator*(const ExactScalar& s, OneForm a) {
        for (auto& p : a.coeffs) p *= s;
        return a;
    }
    friend bool operator==(const OneForm& a, const OneForm& b) { return a.coeffs == b.coeffs; }
};

/**
 * @brief Polynomial 2-form sum_{i<j} f_ij dx_i ^ dx_j on C^M.
 *
 * Keys always satisfy i < j and zero coefficients are dropped.
 */
class TwoForm {
public:
    using Key = std::pair<std::size_t, std::size_t>;

    TwoForm() = default;
    explicit TwoForm(std::size_t m) : dim_(m) {}

    std::size_t dim() const { return dim_; }
    const std::map<Key, SparsePoly>& components() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    /** @brief Add f dx_i ^ dx_j, reordering with a sign when i > j. */
    void add(std::size_t i, std::size_t j, const SparsePoly& f) {
        if (i >= dim_ || j >= dim_ || f.nvars() != dim_) throw std::invalid_argument("2-form index out of range");
        if (i == j || f.is_zero()) return;
        if (i > j) {
            add(j, i, -f);
            return;
        }
        auto [it, fresh] = comps_.try_emplace({i, j}, f);
        if (!fresh) {
            it->second += f;
            if (it->second.is_zero()) comps_.erase(it);
        }
    }
    void add(const MultiIndex& k, std::size_t i, std::size_t j, const ExactScalar& c) {
        add(i, j, SparsePoly::monomial(k, c));
    }

    SparsePoly component(std::size_t i, std::size_t j) const {
        if (i == j) return SparsePoly(dim_);
        if (i > j) return -component(j, i);
        auto it = comps_.find({i, j});
        return it == comps_.end() ? SparsePoly(dim_) : it->second;
    }
    ExactScalar coefficient(const MultiIndex& k, std::size_t i, std::size_t j) const {
        return component(i, j).coeff(k);
    }

    /** @brief Enumerate (K, i, j, c) over all stored monomials. */
    template <class F>
    void for_each_term(F&& f) const {
        for (auto& [key, p] : comps_)
            for (auto& [k, c] : p.terms()) f(k, key.first, key.second, c);
    }

    friend bool operator==(const TwoForm& a, const TwoForm& b) { return a.dim_ == b.dim_ && a.comps_ == b.comps_; }
    friend TwoForm operator+(TwoForm a, const TwoForm& b) {
        for (auto& [key, p] : b.comps_) a.add(key.first, key.second, p);
        return a;
    }
    friend TwoForm operator*(const ExactScalar& s, TwoForm a) {
        TwoForm r(a.dim_);
        for (auto& [key, p] : a.comps_) r.add(key.first, key.second, p * s);
        return r;
    }

private:
    std::size_t dim_{0};
    std::map<Key, SparsePoly> comps_;
};

inline TwoForm exterior_derivative(const OneForm& w) {
    std::size_t m = w.dim();
    TwoForm r(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) r.add(i, j, w[j].derivative(i) - w[i].derivative(j));
    return r;
}

inline bool is_closed(const OneForm& w) { return exterior_derivative(w).is_zero(); }

/** @brief Primitive g with dg = w, by the radial homotopy from the origin. */
inline SparsePoly poincare_primitive(const OneForm& w) {
    if (!is_closed(w)) throw std::invalid_argument("form is not closed");
    std::size_t m = w.dim();
    SparsePoly g(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!w[i].is_polynomial()) throw std::invalid_argument("primitive of a Laurent form");
        for (auto& [k, c] : w[i].terms()) g.add_term(k.shifted(i, 1), c / ExactScalar(k.degree() + 1));
    }
    return g;
}

/** @brief Pullback of a 1-form by phi : C^{M'} -> C^M given by polynomial components. */
inline OneForm pullback_one_form(const OneForm& w, const std::vector<SparsePoly>& phi) {
    if (phi.size() != w.dim()) throw std::invalid_argument("pullback arity mismatch");
    std::size_t n = phi.empty() ? 0 : phi.front().nvars();
    OneForm r(n);
    for (std::size_t i = 0; i < w.dim(); ++i) {
        if (w[i].is_zero()) continue;
        SparsePoly wi = poly_substitute(w[i], phi);
        for (std::size_t a = 0; a < n; ++a) r[a] += wi * phi[i].derivative(a);
    }
    return r;
}

inline TwoForm pullback_two_form(const TwoForm& eta, const std::vector<SparsePoly>& phi) {
    if (phi.size() != eta.dim()) throw std::invalid_argument("pullback arity mismatch");
    std::size_t n = phi.empty() ? 0 : phi.front().nvars();
    std::vector<std::vector<SparsePoly>> jac(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i)
        for (std::size_t a = 0; a < n; ++a) jac[i].push_back(phi[i].derivative(a));
    TwoForm r(n);
    for (auto& [key, f] : eta.components()) {
        auto [i, j] = key;
        SparsePoly fp = poly_substitute(f, phi);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                SparsePoly minor = jac[i][a] * jac[j][b] - jac[i][b] * jac[j][a];
                if (!minor.is_zero()) r.add(a, b, fp * minor);
            }
    }
    return r;
}

/**
 * @brief Polynomial vector field sum_i X_i d/dx_i.
 */
struct PolyVectorField {
    std::vector<SparsePoly> comps;

    PolyVectorField() = default;
    explicit PolyVectorField(std::vector<SparsePoly> c) : comps(std::move(c)) {
        for (auto& p : comps)
            if (p.nvars() != comps.size()) throw std::invalid_argument("vector field arity mismatch");
    }

    std::size_t dim() const { return comps.size(); }
    const SparsePoly& operator[](std::size_t i) const { return comps.at(i); }

    /** @brief Lie derivative X(f). */
    SparsePoly apply(const SparsePoly& f) const {
        SparsePoly r(f.nvars());
        for (std::size_t i = 0; i < comps.size(); ++i)
            if (!comps[i].is_zero()) r += comps[i] * f.derivative(i);
        return r;
    }

    bool is_zero() const {
        for (auto& p : comps)
            if (!p.is_zero()) return false;
        return true;
    }

    std::vector<Complex> evaluate(const std::vector<Complex>& x) const {
        std::vector<Complex> r;
        for (auto& p : comps) r.push_back(p.evaluate(x));
        return r;
    }

    friend bool operator==(const PolyVectorField& a, const PolyVectorField& b) { return a.comps == b.comps; }
};

inline PolyVectorField lie_bracket(const PolyVectorField& a, const PolyVectorField& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("bracket arity mismatch");
    std::vector<SparsePoly> c;
    for (std::size_t i = 0; i < a.dim(); ++i) c.push_back(a.apply(b[i]) - b.apply(a[i]));
    return PolyVectorField(std::move(c));
}

inline SparsePoly contract(const OneForm& w, const std::vector<SparsePoly>& x) {
    if (x.size() != w.dim()) throw std::invalid_argument("contraction arity mismatch");
    SparsePoly r(w.dim() ? w[0].nvars() : 0);
    for (std::size_t i = 0; i < w.dim(); ++i)
        if (!w[i].is_zero() && !x[i].is_zero()) r += w[i] * x[i];
    return r;
}

inline SparsePoly contract(const OneForm& w, const PolyVectorField& x) { return contract(w, x.comps); }

}  // namespace sepdist
