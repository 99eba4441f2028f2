#pragma once

#include <sepdist/scalar.hpp>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <stdexcept>
#include <vector>

namespace sepdist {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class F>
void gk15(F& f, double a, double b, std::size_t dim, CVector& kron, double& err) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& x = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    kron.assign(dim, 0.0);
    CVector gauss(dim, 0.0);
    CVector f0 = f(c);
    for (std::size_t d = 0; d < dim; ++d) {
        kron[d] = f0[d] * wk[0];
        gauss[d] = f0[d] * wg[0];
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        CVector fp = f(c + h * x[i]), fm = f(c - h * x[i]);
        for (std::size_t d = 0; d < dim; ++d) {
            Complex s = fp[d] + fm[d];
            kron[d] += s * wk[i];
            if (i % 2 == 0) gauss[d] += s * wg[i / 2];
        }
    }
    err = 0;
    for (std::size_t d = 0; d < dim; ++d) {
        kron[d] *= h;
        gauss[d] *= h;
        err = std::max(err, std::abs(kron[d] - gauss[d]));
    }
}

template <class F>
void adapt(F& f, double a, double b, std::size_t dim, double abs_tol, double rel_tol, int depth, CVector& acc) {
    CVector k;
    double err;
    gk15(f, a, b, dim, k, err);
    double scale = 0;
    for (auto& v : k) scale = std::max(scale, std::abs(v));
    if (err <= std::max(abs_tol, rel_tol * scale)) {
        for (std::size_t d = 0; d < dim; ++d) acc[d] += k[d];
        return;
    }
    if (depth == 0) throw QuadratureError("quadrature did not converge");
    double m = 0.5 * (a + b);
    adapt(f, a, m, dim, abs_tol / 2, rel_tol, depth - 1, acc);
    adapt(f, m, b, dim, abs_tol / 2, rel_tol, depth - 1, acc);
}

}  // namespace detail

/**
 * @brief Adaptive Gauss-Kronrod (7,15) integral of a C^dim valued function.
 *
 * A subinterval is accepted once |K15 - G7| is below abs_tol (split in half
 * with each bisection) or below rel_tol times the local estimate.
 */
template <class F>
CVector integrate_vector(F f, double a, double b, std::size_t dim, double abs_tol = 1e-13, double rel_tol = 1e-13,
                         int max_depth = 40) {
    CVector acc(dim, 0.0);
    detail::adapt(f, a, b, dim, abs_tol, rel_tol, max_depth, acc);
    return acc;
}

}  // namespace sepdist
