#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepdist {

using Rational = mpq_class;
using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/** @brief Parse "p/q" or "p" into a canonical rational. */
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational");
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

/** @brief num/den in lowest terms; gmpxx leaves two-argument construction unreduced. */
inline Rational make_rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) {
    return r.get_str();
}

/**
 * @brief Element of Q(i), the Gaussian rationals.
 */
class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(long v) : re_(v) {}
    ExactScalar(Rational re) : re_(std::move(re)) {}
    ExactScalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    static ExactScalar I() { return {Rational(0), Rational(1)}; }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    ExactScalar conj() const { return {re_, -im_}; }
    Rational norm2() const { return re_ * re_ + im_ * im_; }

    ExactScalar operator-() const { return {-re_, -im_}; }

    ExactScalar& operator+=(const ExactScalar& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    ExactScalar& operator-=(const ExactScalar& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    ExactScalar& operator*=(const ExactScalar& o) {
        if (sgn(im_) == 0 && sgn(o.im_) == 0) {
            re_ *= o.re_;
            return *this;
        }
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    ExactScalar& operator/=(const ExactScalar& o) {
        if (o.is_zero()) throw std::domain_error("division by zero");
        if (sgn(o.im_) == 0) {
            re_ /= o.re_;
            im_ /= o.re_;
            return *this;
        }
        Rational n = o.norm2();
        Rational r = (re_ * o.re_ + im_ * o.im_) / n;
        Rational i = (im_ * o.re_ - re_ * o.im_) / n;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }

    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
    friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

    ExactScalar pow(unsigned e) const {
        ExactScalar r(1), b = *this;
        while (e) {
            if (e & 1u) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

    std::string str() const {
        if (sgn(im_) == 0) return to_string(re_);
        return to_string(re_) + (sgn(im_) < 0 ? "-" : "+") + to_string(abs(im_)) + "i";
    }

    friend std::ostream& operator<<(std::ostream& os, const ExactScalar& s) { return os << s.str(); }

private:
    Rational re_{0};
    Rational im_{0};
};

inline const Complex two_pi_i{0.0, 2.0 * std::numbers::pi};

/**
 * @brief Exact value times (2*pi*i)^pi_power.
 *
 * Sums are only defined between operands with matching powers; a zero
 * operand adopts the power of the other.
 */
class SymbolicScalar {
public:
    SymbolicScalar() = default;
    SymbolicScalar(ExactScalar exact, int pi_power = 0) : exact_(std::move(exact)), pi_power_(pi_power) {
        if (pi_power < 0) throw std::invalid_argument("negative pi power");
    }

    const ExactScalar& exact() const { return exact_; }
    int pi_power() const { return pi_power_; }
    bool is_zero() const { return exact_.is_zero(); }

    SymbolicScalar& operator+=(const SymbolicScalar& o) {
        if (o.is_zero()) return *this;
        if (is_zero()) return *this = o;
        if (o.pi_power_ != pi_power_) throw std::invalid_argument("mixed pi powers in sum");
        exact_ += o.exact_;
        return *this;
    }
    friend SymbolicScalar operator+(SymbolicScalar a, const SymbolicScalar& b) { return a += b; }
    friend SymbolicScalar operator-(const SymbolicScalar& a) { return {-a.exact_, a.pi_power_}; }
    friend SymbolicScalar operator-(const SymbolicScalar& a, const SymbolicScalar& b) { return a + (-b); }
    friend SymbolicScalar operator*(const SymbolicScalar& a, const SymbolicScalar& b) {
        return {a.exact_ * b.exact_, a.pi_power_ + b.pi_power_};
    }
    friend SymbolicScalar operator*(const SymbolicScalar& a, const ExactScalar& b) {
        return {a.exact_ * b, a.pi_power_};
    }
    friend bool operator==(const SymbolicScalar& a, const SymbolicScalar& b) {
        if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
        return a.pi_power_ == b.pi_power_ && a.exact_ == b.exact_;
    }

    Complex lower() const {
        Complex f = 1.0;
        for (int k = 0; k < pi_power_; ++k) f *= two_pi_i;
        return exact_.to_complex() * f;
    }

    std::string str() const {
        if (pi_power_ == 0) return exact_.str();
        return "(" + exact_.str() + ")*(2*pi*i)^" + std::to_string(pi_power_);
    }

private:
    ExactScalar exact_;
    int pi_power_{0};
};

/** @brief Rational within 10^-digits of sqrt(n), from an integer square root. */
inline Rational sqrt_rational(unsigned long n, unsigned digits = 32) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    mpz_class v = mpz_class(n) * scale * scale;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), v.get_mpz_t());
    Rational q(root, scale);
    q.canonicalize();
    return q;
}

}  // namespace sepdist
