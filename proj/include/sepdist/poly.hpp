#pragma once

#include <sepdist/scalar.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

namespace sepdist {

/**
 * @brief Exponent vector. Negative entries are allowed for Laurent monomials.
 */
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t n) : e_(n, 0) {}
    MultiIndex(std::initializer_list<int> v) : e_(v) {}
    explicit MultiIndex(std::vector<int> v) : e_(std::move(v)) {}

    static MultiIndex unit(std::size_t n, std::size_t i) {
        MultiIndex m(n);
        m.e_.at(i) = 1;
        return m;
    }

    std::size_t size() const { return e_.size(); }
    int operator[](std::size_t i) const { return e_[i]; }
    int& operator[](std::size_t i) { return e_[i]; }
    const std::vector<int>& data() const { return e_; }

    int degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }
    bool nonnegative() const {
        return std::all_of(e_.begin(), e_.end(), [](int v) { return v >= 0; });
    }

    long dot(const MultiIndex& o) const {
        check(o);
        long s = 0;
        for (std::size_t i = 0; i < e_.size(); ++i) s += long(e_[i]) * o.e_[i];
        return s;
    }

    MultiIndex shifted(std::size_t i, int by) const {
        MultiIndex r = *this;
        r.e_.at(i) += by;
        return r;
    }

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
        a.check(b);
        MultiIndex r = a;
        for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] += b.e_[i];
        return r;
    }
    friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
        a.check(b);
        MultiIndex r = a;
        for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] -= b.e_[i];
        return r;
    }
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

    std::string str() const {
        std::ostringstream os;
        os << "(";
        for (std::size_t i = 0; i < e_.size(); ++i) os << (i ? "," : "") << e_[i];
        os << ")";
        return os.str();
    }

private:
    void check(const MultiIndex& o) const {
        if (o.e_.size() != e_.size()) throw std::invalid_argument("multi-index arity mismatch");
    }
    std::vector<int> e_;
};

/**
 * @brief Sparse (Laurent) polynomial over Q(i) in a fixed number of variables.
 *
 * Zero coefficients are never stored.
 */
class SparsePoly {
public:
    using Terms = std::map<MultiIndex, ExactScalar>;

    SparsePoly() = default;
    explicit SparsePoly(std::size_t nvars) : nvars_(nvars) {}

    static SparsePoly constant(std::size_t nvars, const ExactScalar& c) {
        SparsePoly p(nvars);
        p.add_term(MultiIndex(nvars), c);
        return p;
    }
    static SparsePoly monomial(const MultiIndex& k, const ExactScalar& c) {
        SparsePoly p(k.size());
        p.add_term(k, c);
        return p;
    }
    static SparsePoly variable(std::size_t nvars, std::size_t i) {
        return monomial(MultiIndex::unit(nvars, i), ExactScalar(1));
    }

    std::size_t nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    ExactScalar coeff(const MultiIndex& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? ExactScalar() : it->second;
    }

    void add_term(const MultiIndex& k, const ExactScalar& c) {
        if (k.size() != nvars_) throw std::invalid_argument("monomial arity mismatch");
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    int degree() const {
        int d = -1;
        for (auto& [k, c] : terms_) d = std::max(d, k.degree());
        return d;
    }
    bool is_polynomial() const {
        return std::all_of(terms_.begin(), terms_.end(), [](auto& t) { return t.first.nonnegative(); });
    }

    SparsePoly& operator+=(const SparsePoly& o) {
        check(o);
        for (auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    SparsePoly& operator-=(const SparsePoly& o) {
        check(o);
        for (auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    SparsePoly& operator*=(const ExactScalar& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }
    friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
    friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
    friend SparsePoly operator-(SparsePoly a) { return a *= ExactScalar(-1); }
    friend SparsePoly operator*(SparsePoly a, const ExactScalar& s) { return a *= s; }
    friend SparsePoly operator*(const ExactScalar& s, SparsePoly a) { return a *= s; }
    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
        a.check(b);
        SparsePoly r(a.nvars_);
        for (auto& [ka, ca] : a.terms_)
            for (auto& [kb, cb] : b.terms_) r.add_term(ka + kb, ca * cb);
        return r;
    }
    SparsePoly& operator*=(const SparsePoly& o) { return *this = *this * o; }

    friend bool operator==(const SparsePoly& a, const SparsePoly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    SparsePoly pow(unsigned e) const {
        SparsePoly r = constant(nvars_, ExactScalar(1)), b = *this;
        while (e) {
            if (e & 1u) r *= b;
            e >>= 1;
            if (e) b *= b;
        }
        return r;
    }

    /** @brief Partial derivative with respect to variable i. */
    SparsePoly derivative(std::size_t i) const {
        SparsePoly r(nvars_);
        for (auto& [k, c] : terms_)
            if (k[i] != 0) r.add_term(k.shifted(i, -1), c * ExactScalar(k[i]));
        return r;
    }

    /** @brief Multiply by the monomial x^k. */
    SparsePoly shifted(const MultiIndex& k) const {
        SparsePoly r(nvars_);
        for (auto& [m, c] : terms_) r.terms_.emplace(m + k, c);
        return r;
    }

    /** @brief Embed into more variables; variable i goes to position map[i]. */
    SparsePoly embed(std::size_t nvars, const std::vector<std::size_t>& map) const {
        if (map.size() != nvars_) throw std::invalid_argument("embed map arity mismatch");
        SparsePoly r(nvars);
        for (auto& [k, c] : terms_) {
            MultiIndex m(nvars);
            for (std::size_t i = 0; i < nvars_; ++i) m[map[i]] += k[i];
            r.add_term(m, c);
        }
        return r;
    }

    /** @brief Keep terms with total degree at most d. */
    SparsePoly truncated(int d) const {
        SparsePoly r(nvars_);
        for (auto& [k, c] : terms_)
            if (k.degree() <= d) r.terms_.emplace(k, c);
        return r;
    }

    ExactScalar evaluate(const std::vector<ExactScalar>& x) const {
        if (x.size() != nvars_) throw std::invalid_argument("evaluation arity mismatch");
        ExactScalar s;
        for (auto& [k, c] : terms_) {
            ExactScalar t = c;
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (k[i] >= 0) {
                    t *= x[i].pow(unsigned(k[i]));
                } else {
                    if (x[i].is_zero()) throw std::domain_error("Laurent monomial at zero");
                    t /= x[i].pow(unsigned(-k[i]));
                }
            }
            s += t;
        }
        return s;
    }

    Complex evaluate(const std::vector<Complex>& x) const {
        if (x.size() != nvars_) throw std::invalid_argument("evaluation arity mismatch");
        Complex s = 0.0;
        for (auto& [k, c] : terms_) {
            Complex t = c.to_complex();
            for (std::size_t i = 0; i < nvars_; ++i)
                if (k[i] != 0) t *= std::pow(x[i], k[i]);
            s += t;
        }
        return s;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [k, c] : terms_) {
            os << (first ? "" : " + ") << "(" << c << ")";
            for (std::size_t i = 0; i < nvars_; ++i)
                if (k[i]) os << "*x" << i + 1 << (k[i] != 1 ? "^" + std::to_string(k[i]) : "");
            first = false;
        }
        return os.str();
    }

private:
    void check(const SparsePoly& o) const {
        if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial arity mismatch");
    }
    std::size_t nvars_{0};
    Terms terms_;
};

/**
 * @brief Compose p with x_i -> images[i]. Exponents of p must be nonnegative.
 */
inline SparsePoly poly_substitute(const SparsePoly& p, const std::vector<SparsePoly>& images) {
    if (images.size() != p.nvars()) throw std::invalid_argument("substitution arity mismatch");
    if (images.empty()) return p;
    std::size_t n = images.front().nvars();
    for (auto& q : images)
        if (q.nvars() != n) throw std::invalid_argument("substitution images disagree in arity");
    std::vector<std::vector<SparsePoly>> powers(images.size());
    auto power = [&](std::size_t i, int e) -> const SparsePoly& {
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(SparsePoly::constant(n, ExactScalar(1)));
        while (int(cache.size()) <= e) cache.push_back(cache.back() * images[i]);
        return cache[std::size_t(e)];
    };
    SparsePoly r(n);
    for (auto& [k, c] : p.terms()) {
        if (!k.nonnegative()) throw std::domain_error("cannot substitute into Laurent monomial");
        SparsePoly t = SparsePoly::constant(n, c);
        for (std::size_t i = 0; i < k.size(); ++i)
            if (k[i] > 0) t *= power(i, k[i]);
        r += t;
    }
    return r;
}

/**
 * @brief Exact division by a nonzero polynomial using lex-leading terms.
 *
 * Returns the quotient when divisor | p, nothing otherwise.
 */
inline std::optional<SparsePoly> poly_divide_exact(const SparsePoly& p, const SparsePoly& divisor) {
    if (divisor.is_zero()) throw std::domain_error("division by zero polynomial");
    auto lead = std::prev(divisor.terms().end());
    SparsePoly rem = p, quo(p.nvars());
    while (!rem.is_zero()) {
        auto top = std::prev(rem.terms().end());
        MultiIndex shift = top->first - lead->first;
        if (!shift.nonnegative()) return std::nullopt;
        ExactScalar c = top->second / lead->second;
        quo.add_term(shift, c);
        rem -= divisor.shifted(shift) * c;
    }
    return quo;
}

/**
 * @brief Numeric copy of a polynomial for fast repeated evaluation.
 */
class NumericPoly {
public:
    NumericPoly() = default;
    explicit NumericPoly(const SparsePoly& p) : nvars_(p.nvars()) {
        for (auto& [k, c] : p.terms()) terms_.push_back({c.to_complex(), k.data()});
    }
    Complex operator()(const Complex* x) const {
        Complex s = 0.0;
        for (auto& t : terms_) {
            Complex v = t.c;
            for (std::size_t i = 0; i < nvars_; ++i) {
                int e = t.k[i];
                if (e == 0) continue;
                Complex b = e > 0 ? x[i] : 1.0 / x[i];
                for (int a = std::abs(e); a > 0; --a) v *= b;
            }
            s += v;
        }
        return s;
    }
    Complex operator()(const std::vector<Complex>& x) const { return (*this)(x.data()); }

    /** @brief Sum of |c| r^|K|, a bound for |p| on the polydisc of radius r. */
    double bound(double r) const {
        double s = 0;
        for (auto& t : terms_) s += std::abs(t.c) * std::pow(r, std::accumulate(t.k.begin(), t.k.end(), 0));
        return s;
    }

private:
    struct Term {
        Complex c;
        std::vector<int> k;
    };
    std::size_t nvars_{0};
    std::vector<Term> terms_;
};

/**
 * @brief c + sum_j a_j / (u - b_j), a rational function of one variable.
 */
struct RationalFn1 {
    ExactScalar constant;
    std::vector<ExactScalar> poles;
    std::vector<ExactScalar> residues;

    ExactScalar evaluate(const ExactScalar& u) const {
        ExactScalar s = constant;
        for (std::size_t j = 0; j < poles.size(); ++j) {
            ExactScalar d = u - poles[j];
            if (d.is_zero()) throw std::domain_error("evaluation at a pole");
            s += residues[j] / d;
        }
        return s;
    }
    Complex evaluate(Complex u) const {
        Complex s = constant.to_complex();
        for (std::size_t j = 0; j < poles.size(); ++j) s += residues[j].to_complex() / (u - poles[j].to_complex());
        return s;
    }
};

}  // namespace sepdist
