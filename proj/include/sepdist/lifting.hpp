#pragma once

#include <sepdist/distribution.hpp>
#include <sepdist/quadrature.hpp>

#include <functional>

namespace sepdist {

/**
 * @brief Vector field on C^M lifted to C^M x C^N so that it is tangent to D.
 */
struct LiftedField {
    PolyVectorField base;
    std::vector<SparsePoly> z;

    std::size_t M() const { return base.dim(); }
    std::size_t N() const { return z.size(); }

    /** @brief The same field as a polynomial field on C^{M+N}, x first. */
    PolyVectorField full() const {
        std::size_t nv = M() + N();
        auto xmap = iota_map(M());
        std::vector<SparsePoly> c;
        for (auto& p : base.comps) c.push_back(p.embed(nv, xmap));
        for (auto& p : z) c.push_back(p.embed(nv, xmap));
        return PolyVectorField(std::move(c));
    }
};

inline LiftedField lift_vector_field(const SeparatedDistribution& d, const PolyVectorField& x) {
    if (x.dim() != d.M) throw std::invalid_argument("field dimension mismatch");
    LiftedField r{x, {}};
    for (auto& w : d.omega) r.z.push_back(contract(w, x));
    return r;
}

/** @brief True when dz_j - omega_j vanishes on the field for every j. */
inline bool is_tangent(const SeparatedDistribution& d, const LiftedField& f) {
    if (f.M() != d.M || f.N() != d.N) return false;
    for (std::size_t n = 0; n < d.N; ++n)
        if (!(f.z[n] - contract(d.omega[n], f.base)).is_zero()) return false;
    return true;
}

/** @brief dz = sum_j (y_j dx_j - x_j dy_j) on C^{2m+1}, coordinates (x_1, y_1, ..., x_m, y_m, z). */
inline SeparatedDistribution contact_distribution(std::size_t m) {
    if (m == 0) throw std::invalid_argument("need m >= 1");
    std::size_t M = 2 * m;
    OneForm w(M);
    for (std::size_t j = 0; j < m; ++j) {
        w[2 * j] += SparsePoly::variable(M, 2 * j + 1);
        w[2 * j + 1] -= SparsePoly::variable(M, 2 * j);
    }
    return SeparatedDistribution(M, {w});
}

/**
 * @brief Z_j = A(x_j, y_j) d/dx_j + B(x_j, y_j) d/dy_j + (y_j A - x_j B) d/dz
 * for a Legendrian Z = A d/dx + B d/dy + (yA - xB) d/dz on C^3.
 */
inline std::vector<LiftedField> legendrian_product(const LiftedField& z3, std::size_t m) {
    if (z3.M() != 2 || z3.N() != 1 || !is_tangent(contact_distribution(1), z3))
        throw std::invalid_argument("input is not Legendrian for dz = y dx - x dy");
    std::size_t M = 2 * m;
    std::vector<LiftedField> r;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<std::size_t> map{2 * j, 2 * j + 1};
        SparsePoly a = z3.base[0].embed(M, map), b = z3.base[1].embed(M, map);
        std::vector<SparsePoly> c(M, SparsePoly(M));
        c[2 * j] = a;
        c[2 * j + 1] = b;
        SparsePoly zc = SparsePoly::variable(M, 2 * j + 1) * a - SparsePoly::variable(M, 2 * j) * b;
        r.push_back({PolyVectorField(std::move(c)), {zc}});
    }
    return r;
}

/**
 * @brief Piece of a path, parametrised on [0, 1], with its complex velocity.
 */
struct PathSegment {
    std::function<CVector(double)> point;
    std::function<CVector(double)> velocity;
};

class PiecewisePath {
public:
    PiecewisePath() = default;
    explicit PiecewisePath(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    const std::vector<PathSegment>& segments() const { return segs_; }

    PiecewisePath& append(PathSegment s) {
        segs_.push_back(std::move(s));
        return *this;
    }
    PiecewisePath& append(const PiecewisePath& p) {
        if (p.dim_ != dim_) throw std::invalid_argument("path dimension mismatch");
        for (auto& s : p.segs_) segs_.push_back(s);
        return *this;
    }

    CVector start() const { return segs_.front().point(0.0); }
    CVector end() const { return segs_.back().point(1.0); }

    PiecewisePath reversed() const {
        PiecewisePath r(dim_);
        for (auto it = segs_.rbegin(); it != segs_.rend(); ++it) {
            auto p = it->point;
            auto v = it->velocity;
            r.segs_.push_back({[p](double t) { return p(1.0 - t); },
                               [v](double t) {
                                   CVector w = v(1.0 - t);
                                   for (auto& c : w) c = -c;
                                   return w;
                               }});
        }
        return r;
    }

    double length() const {
        double s = 0;
        for (auto& seg : segs_) {
            auto f = [&](double t) { return CVector{Complex(norm2(seg.velocity(t)), 0.0)}; };
            s += integrate_vector(f, 0.0, 1.0, 1, 1e-10, 1e-10)[0].real();
        }
        return s;
    }

    /** @brief Largest coordinate modulus over a fixed sampling of each segment. */
    double max_modulus(int samples = 256) const {
        double m = 0;
        for (auto& seg : segs_)
            for (int k = 0; k <= samples; ++k)
                for (auto& c : seg.point(double(k) / samples)) m = std::max(m, std::abs(c));
        return m;
    }

    bool is_closed(double tol = 1e-12) const {
        CVector a = start(), b = end();
        for (std::size_t i = 0; i < dim_; ++i)
            if (std::abs(a[i] - b[i]) > tol) return false;
        return true;
    }

    static double norm2(const CVector& v) {
        double s = 0;
        for (auto& c : v) s += std::norm(c);
        return std::sqrt(s);
    }

    static PiecewisePath line(const CVector& a, const CVector& b) {
        PiecewisePath p(a.size());
        CVector d(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) d[i] = b[i] - a[i];
        p.segs_.push_back({[a, d](double t) {
                               CVector r(a.size());
                               for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * d[i];
                               return r;
                           },
                           [d](double) { return d; }});
        return p;
    }

    /** @brief The m-loop zeta -> (y_i zeta^{m_i}), zeta = e^{2 pi i t}. */
    static PiecewisePath m_loop(const CVector& y, const std::vector<int>& m) {
        if (y.size() != m.size()) throw std::invalid_argument("m-loop arity mismatch");
        PiecewisePath p(y.size());
        p.segs_.push_back({[y, m](double t) {
                               CVector r(y.size());
                               for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[i] * std::exp(two_pi_i * double(m[i]) * t);
                               return r;
                           },
                           [y, m](double t) {
                               CVector r(y.size());
                               for (std::size_t i = 0; i < y.size(); ++i)
                                   r[i] = two_pi_i * double(m[i]) * y[i] * std::exp(two_pi_i * double(m[i]) * t);
                               return r;
                           }});
        return p;
    }

    /** @brief base -> y along a line, the m-loop at y, and back. */
    static PiecewisePath conjugated_m_loop(const CVector& base, const CVector& y, const std::vector<int>& m) {
        PiecewisePath p = line(base, y);
        p.append(m_loop(y, m));
        p.append(line(y, base));
        return p;
    }

private:
    std::size_t dim_{0};
    std::vector<PathSegment> segs_;
};

struct GuardViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * @brief Admissibility data for lifting: the path stays in the polydisc of
 * radius `polydisc`, and |z0| + K l(path) < fiber_radius where K bounds the
 * operator norm of omega on that polydisc.
 */
struct LiftGuard {
    double polydisc{1.0};
    double fiber_radius{10.0};
};

/** @brief Sum over every term of |c| r^|K|, an upper bound for |omega| on the polydisc. */
inline double omega_bound(const SeparatedDistribution& d, double r) {
    double s = 0;
    for (auto& w : d.omega)
        for (auto& p : w.coeffs) s += NumericPoly(p).bound(r);
    return s;
}

struct LiftResult {
    CVector z_end;
    CVector displacement;
    double length{0};
};

/**
 * @brief Numeric copy of omega for repeated line integrals.
 */
class CompiledOmega {
public:
    CompiledOmega() = default;
    explicit CompiledOmega(const SeparatedDistribution& d) : M_(d.M), N_(d.N) {
        for (auto& w : d.omega) {
            std::vector<NumericPoly> row;
            for (auto& p : w.coeffs) row.emplace_back(p);
            rows_.push_back(std::move(row));
        }
    }
    std::size_t N() const { return N_; }

    /** @brief omega(gamma) . gamma' */
    CVector pair(const CVector& x, const CVector& v) const {
        CVector r(N_, 0.0);
        for (std::size_t n = 0; n < N_; ++n)
            for (std::size_t i = 0; i < M_; ++i)
                if (v[i] != 0.0) r[n] += rows_[n][i](x) * v[i];
        return r;
    }

    CVector integrate(const PiecewisePath& path, double abs_tol = 1e-13) const {
        CVector total(N_, 0.0);
        for (auto& seg : path.segments()) {
            auto f = [&](double t) { return pair(seg.point(t), seg.velocity(t)); };
            auto part = integrate_vector(f, 0.0, 1.0, N_, abs_tol, 1e-13);
            for (std::size_t n = 0; n < N_; ++n) total[n] += part[n];
        }
        return total;
    }

private:
    std::size_t M_{0}, N_{0};
    std::vector<std::vector<NumericPoly>> rows_;
};

/**
 * @brief Lift of a path starting at z0: the fiber coordinate moves by the
 * line integral of omega along the path.
 */
inline LiftResult lift_loop(const CompiledOmega& w, double bound, const PiecewisePath& path, const CVector& z0,
                            const LiftGuard& guard) {
    if (z0.size() != w.N()) throw std::invalid_argument("fiber point dimension mismatch");
    if (path.max_modulus() > guard.polydisc) throw GuardViolation("path leaves the polydisc");
    double len = path.length();
    if (PiecewisePath::norm2(z0) + bound * len >= guard.fiber_radius)
        throw GuardViolation("|z0| + K l(path) exceeds the fiber radius");
    LiftResult r;
    r.length = len;
    r.displacement = w.integrate(path);
    r.z_end = z0;
    for (std::size_t n = 0; n < z0.size(); ++n) r.z_end[n] += r.displacement[n];
    return r;
}

inline LiftResult lift_loop(const SeparatedDistribution& d, const PiecewisePath& path, const CVector& z0,
                            const LiftGuard& guard) {
    return lift_loop(CompiledOmega(d), omega_bound(d, guard.polydisc), path, z0, guard);
}

}  // namespace sepdist
