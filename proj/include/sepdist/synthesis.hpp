#pragma once

#include <sepdist/blowup.hpp>
#include <sepdist/lifting.hpp>
#include <sepdist/returns.hpp>

#include <random>
#include <set>

namespace sepdist {

struct SynthesisError : std::runtime_error {
    std::string stage;
    SynthesisError(std::string st, const std::string& what) : std::runtime_error(st + ": " + what), stage(std::move(st)) {}
};

/**
 * @brief Elementary vectors used as linear parts at the chosen singular points.
 */
struct LambdaSet {
    std::vector<MultiIndex> vectors;
    std::vector<std::size_t> alpha;
    /// for each spanning monomial, indices into vectors
    std::vector<std::vector<std::size_t>> per_monomial;
};

inline LambdaSet build_lambda_set(const std::vector<SpanningMonomial>& mons) {
    LambdaSet s;
    for (auto& mon : mons) {
        MultiIndex lij = mon.L.shifted(mon.i, 1).shifted(mon.j, 1);
        auto basis = elementary_basis_for(lij, mon.i);
        if (exact_determinant(lambda_matrix(lij, mon.i, basis)).is_zero())
            throw SynthesisError("lambda-basis rank", "singular lambda matrix for L = " + lij.str());
        std::vector<std::size_t> idx;
        for (auto& m : basis) {
            auto it = std::find(s.vectors.begin(), s.vectors.end(), m);
            if (it == s.vectors.end()) {
                s.vectors.push_back(m);
                s.alpha.push_back(mon.i);
                idx.push_back(s.vectors.size() - 1);
            } else {
                idx.push_back(std::size_t(it - s.vectors.begin()));
            }
        }
        s.per_monomial.push_back(idx);
    }
    return s;
}

/**
 * @brief Pole positions T in the t_M line with the elementary vector used at each.
 */
struct TLambda {
    ExactVector T;
    std::vector<MultiIndex> lambda;
};

/** @brief d + 1 distinct values per vector of the set: T = 1, 2, 3, ... */
inline TLambda choose_T_lambda(const LambdaSet& s, int d) {
    TLambda r;
    long next = 1;
    for (auto& m : s.vectors)
        for (int q = 0; q <= d; ++q) {
            r.T.push_back(ExactScalar(next++));
            r.lambda.push_back(m);
        }
    return r;
}

/**
 * @brief Parameters of the real basis mu_1..mu_{2(M-1)}.
 *
 * mu_{2c-1} = real_odd e_c + i s (1 + [c != 1] e_c) and
 * mu_{2c} = real_even e_c + i s 1, with s = imag_scale and 1 the all-ones vector.
 */
struct MuShape {
    Rational imag_scale;
    Rational real_odd;
    Rational real_even;

    /// (i, 1 + i, sqrt2 i + sqrt3 (1 + i)) for M = 2
    static MuShape unit() { return {Rational(1), Rational(0), Rational(1)}; }
    /// small imaginary parts and well spread real parts, so short words are dense
    static MuShape fine() { return {make_rational(1, 500), make_rational(381966, 1000000), make_rational(236068, 1000000)}; }
};

struct MuData {
    /// (M-1) x (2(M-1)+1)
    ExactMatrix mu;
    /// the last column uses rational approximations of square roots
    bool approximated{true};
};

inline const std::vector<unsigned long>& small_primes() {
    static const std::vector<unsigned long> p{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    return p;
}

inline MuData generate_mu(std::size_t M, const MuShape& shape = MuShape::fine()) {
    if (M < 2) throw std::invalid_argument("need M >= 2");
    std::size_t m = M - 1, n = 2 * m + 1;
    if (2 * m > small_primes().size()) throw std::invalid_argument("M too large for the prime table");
    if (shape.real_even == 0 || shape.real_even == shape.real_odd || shape.imag_scale <= 0)
        throw std::invalid_argument("degenerate mu shape");
    MuData d;
    d.mu.assign(m, ExactVector(n));
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t r = 0; r < m; ++r) {
            Rational odd_im = shape.imag_scale * (1 + ((c != 0 && r == c) ? 1 : 0));
            d.mu[r][2 * c] = ExactScalar(r == c ? shape.real_odd : Rational(0), odd_im);
            d.mu[r][2 * c + 1] = ExactScalar(r == c ? shape.real_even : Rational(0), shape.imag_scale);
        }
    }
    for (std::size_t k = 0; k < 2 * m; ++k) {
        ExactScalar x(sqrt_rational(small_primes()[k]));
        for (std::size_t r = 0; r < m; ++r) d.mu[r][n - 1] += x * d.mu[r][k];
    }
    return d;
}

/** @brief Rows (l, alpha), l < m, alpha < k: entry -1/(b_j - b_l)^{alpha+1} off the diagonal block. */
inline ExactMatrix build_F(const ExactVector& b, std::size_t m, int k) {
    ExactMatrix f;
    for (std::size_t l = 0; l < m; ++l) {
        std::vector<ExactScalar> inv(b.size());
        for (std::size_t j = 0; j < b.size(); ++j)
            if (j != l) inv[j] = ExactScalar(1) / (b[j] - b[l]);
        for (int a = 0; a < k; ++a) {
            ExactVector row(b.size());
            for (std::size_t j = 0; j < b.size(); ++j)
                if (j != l) row[j] = -inv[j].pow(unsigned(a + 1));
            f.push_back(row);
        }
    }
    return f;
}

inline ExactMatrix select_columns(const ExactMatrix& a, const std::vector<std::size_t>& cols) {
    ExactMatrix r;
    for (auto& row : a) {
        ExactVector v;
        for (auto c : cols) v.push_back(row[c]);
        r.push_back(v);
    }
    return r;
}

struct BCertificate {
    bool minors_ok{false};
    std::size_t minors_checked{0};
    /// every km x km minor off the first m columns was checked
    bool exhaustive{false};
    bool j1_ok{false};
    unsigned attempts{0};
};

struct BChoice {
    ExactVector b;
    BCertificate cert;
};

inline std::size_t binomial_count(std::size_t n, std::size_t k) {
    long double r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r > 1e18 ? std::size_t(-1) : std::size_t(r + 0.5);
}

/** @brief J1: a row of ones over the last km+1 columns of F. */
inline ExactMatrix build_J1(const ExactMatrix& f, std::size_t nb, std::size_t km) {
    std::vector<std::size_t> cols;
    for (std::size_t j = nb - km - 1; j < nb; ++j) cols.push_back(j);
    ExactMatrix j1{ExactVector(km + 1, ExactScalar(1))};
    for (auto& row : select_columns(f, cols)) j1.push_back(row);
    return j1;
}

inline BCertificate certify_b(const ExactVector& b, std::size_t m, std::size_t km, int k,
                              std::size_t exhaustive_cap = 5000) {
    BCertificate c;
    std::size_t nb = b.size();
    ExactMatrix f = build_F(b, m, k);
    std::size_t free_cols = nb - m;
    std::vector<std::vector<std::size_t>> subsets;
    if (km > 0 && binomial_count(free_cols, km) <= exhaustive_cap) {
        c.exhaustive = true;
        std::vector<bool> pick(free_cols, false);
        std::fill(pick.end() - long(km), pick.end(), true);
        do {
            std::vector<std::size_t> cols;
            for (std::size_t q = 0; q < free_cols; ++q)
                if (pick[q]) cols.push_back(m + q);
            subsets.push_back(cols);
        } while (std::next_permutation(pick.begin(), pick.end()));
    } else if (km > 0) {
        for (std::size_t skip = nb - km - 1; skip < nb; ++skip) {
            std::vector<std::size_t> cols;
            for (std::size_t j = nb - km - 1; j < nb; ++j)
                if (j != skip) cols.push_back(j);
            subsets.push_back(cols);
        }
    }
    c.minors_ok = true;
    for (auto& cols : subsets) {
        ++c.minors_checked;
        if (exact_determinant(select_columns(f, cols)).is_zero()) {
            c.minors_ok = false;
            break;
        }
    }
    c.j1_ok = !exact_determinant(build_J1(f, nb, km)).is_zero();
    return c;
}

/**
 * @brief Pole set b with b_1..b_m = T and random rationals after, certified
 * by nonvanishing minors of F and of J1.
 */
inline BChoice choose_b(const ExactVector& T, std::size_t n, int k, std::uint64_t seed, unsigned max_attempts = 32) {
    std::size_t m = T.size(), km = std::size_t(k) * m;
    std::size_t nb = (std::size_t(k) + 1) * m + n + 1;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num(-10000, 10000), den(1, 10000);
    const Rational min_gap(1, 4), max_abs(16);
    for (unsigned attempt = 1; attempt <= max_attempts; ++attempt) {
        ExactVector b = T;
        while (b.size() < nb) {
            Rational v(num(rng), den(rng));
            v.canonicalize();
            if (abs(v) > max_abs) continue;
            bool ok = true;
            for (auto& x : b) ok = ok && abs(x.re() - v) >= min_gap;
            if (ok) b.emplace_back(v);
        }
        BCertificate c = certify_b(b, m, km, k);
        c.attempts = attempt;
        if (c.minors_ok && c.j1_ok) return {b, c};
    }
    throw SynthesisError("minor vanishing", "no admissible pole set found");
}

inline std::size_t pole_count(std::size_t m, std::size_t n, int k) { return (std::size_t(k) + 1) * m + n + 1; }

/**
 * @brief Direction theta with Re(theta) > 0 and Re(theta z) < 0 for all z,
 * i.e. a line through 0 separating 1 from the points.
 *
 * Scans 360 rational directions; when none works and all points lie in one
 * open half plane, builds theta = eps -+ i exactly.
 */
inline std::optional<ExactScalar> separating_direction(const std::vector<ExactScalar>& pts) {
    auto test = [&](const ExactScalar& th) {
        if (sgn(th.re()) <= 0) return false;
        for (auto& z : pts)
            if (sgn((th * z).re()) >= 0) return false;
        return true;
    };
    for (int a = 0; a < 360; ++a) {
        double ang = 2.0 * std::numbers::pi * a / 360.0;
        ExactScalar th(make_rational(std::lround(std::cos(ang) * 1e9), 1000000000L),
                       make_rational(std::lround(std::sin(ang) * 1e9), 1000000000L));
        if (test(th)) return th;
    }
    int side = 0;
    for (auto& z : pts) {
        int s = sgn(z.im());
        if (s == 0 || (side != 0 && s != side)) return std::nullopt;
        side = s;
    }
    Rational eps(1);
    for (auto& z : pts)
        if (sgn(z.re()) > 0) eps = std::min(eps, Rational(abs(z.im()) / z.re()));
    eps /= 2;
    ExactScalar th(eps, Rational(side > 0 ? 1 : -1));
    if (test(th)) return th;
    return std::nullopt;
}

struct SeparationWitness {
    /// pole column, or npos for the nu-tilde set
    std::size_t column{std::size_t(-1)};
    ExactScalar theta;
};

struct NuData {
    /// (M-1) x N_b residues
    ExactMatrix nu;
    /// spanning vector of ker G
    ExactVector kernel;
    Rational s;
    ExactVector nu_tilde;
    std::vector<SeparationWitness> witnesses;
};

inline ExactVector nu_tilde_of(const ExactMatrix& nu) {
    ExactVector t;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        ExactScalar v(i == 0 ? -1 : 1);
        for (auto& x : nu[i]) v -= x;
        t.push_back(v);
    }
    return t;
}

inline std::vector<ExactScalar> partial_sums(const std::vector<ExactScalar>& col) {
    std::vector<ExactScalar> r{col[0]};
    for (std::size_t i = 1; i < col.size(); ++i) r.push_back(col[0] + col[i]);
    return r;
}

/**
 * @brief Residues nu solving F nu_i = 0, with the first m+n entries
 * prescribed by the linear parts and mu, and the last km+1 entries pushed
 * along ker G until all sign and separation conditions hold.
 */
inline NuData solve_nu(const ExactVector& b, std::size_t m, std::size_t n, int k, const std::vector<MultiIndex>& lambda,
                       const ExactMatrix& mu) {
    std::size_t Mm1 = mu.size(), nb = b.size(), km = std::size_t(k) * m;
    if (nb != pole_count(m, n, k) || lambda.size() != m) throw std::invalid_argument("solve_nu size mismatch");
    ExactMatrix f = build_F(b, m, k);
    std::vector<std::size_t> ucols, vcols;
    for (std::size_t j = 0; j < m + n; ++j) ucols.push_back(j);
    for (std::size_t j = m + n; j < nb; ++j) vcols.push_back(j);
    ExactMatrix fu = select_columns(f, ucols), g = select_columns(f, vcols);

    ExactVector v0(km + 1, ExactScalar(1));
    if (km > 0) {
        auto ker = exact_nullspace(g, km + 1);
        if (ker.size() != 1) throw SynthesisError("kernel search failure", "ker G is not a line");
        v0 = ker[0];
    }
    const std::vector<ExactScalar> multipliers{ExactScalar::I(),       ExactScalar(1),
                                               ExactScalar(1, 1),      ExactScalar(1, -1),
                                               ExactScalar(2, 1),      ExactScalar(1, 2)};
    ExactVector kern;
    for (auto& c : multipliers) {
        ExactVector cand;
        ExactScalar sum;
        bool ok = true;
        for (auto& x : v0) {
            cand.push_back(c * x);
            sum += cand.back();
            ok = ok && sgn(cand.back().im()) != 0;
        }
        if (ok && sgn(sum.im()) != 0) {
            kern = cand;
            break;
        }
    }
    if (kern.empty()) throw SynthesisError("kernel search failure", "no kernel vector with nonreal entries and sum");

    std::vector<ExactVector> base(Mm1);
    std::vector<ExactVector> u(Mm1);
    for (std::size_t i = 0; i < Mm1; ++i) {
        for (std::size_t l = 0; l < m; ++l)
            u[i].push_back(ExactScalar(lambda[l][i]) / ExactScalar(lambda[l][lambda[l].size() - 1]));
        for (std::size_t j = 0; j < n; ++j) u[i].push_back(mu[i][j]);
        ExactVector rhs = mat_vec(fu, u[i]);
        for (auto& x : rhs) x = -x;
        if (km > 0) {
            auto sol = exact_solve(g, rhs, {{km, ExactScalar()}});
            if (!sol) throw SynthesisError("kernel search failure", "F(u, v) = 0 has no solution");
            base[i] = *sol;
        } else {
            base[i] = ExactVector(1);
        }
    }

    Rational s(1);
    for (int iter = 0; iter < 256; ++iter, s *= 2) {
        NuData d;
        d.kernel = kern;
        d.s = s;
        d.nu.assign(Mm1, ExactVector());
        for (std::size_t i = 0; i < Mm1; ++i) {
            d.nu[i] = u[i];
            for (std::size_t q = 0; q <= km; ++q) d.nu[i].push_back(base[i][q] + ExactScalar(s) * kern[q]);
        }
        bool ok = true;
        for (std::size_t j = 0; j < nb && ok; ++j)
            for (std::size_t i = 0; i < Mm1 && ok; ++i) ok = !d.nu[i][j].is_zero();
        for (std::size_t q = 0; q <= km && ok; ++q)
            for (std::size_t i = 0; i < Mm1 && ok; ++i) ok = sgn(d.nu[i][m + n + q].im()) == sgn(kern[q].im());
        d.nu_tilde = nu_tilde_of(d.nu);
        int side = sgn(d.nu_tilde[0].im());
        for (auto& t : d.nu_tilde) ok = ok && side != 0 && sgn(t.im()) == side;
        for (std::size_t j = m; j < nb && ok; ++j) {
            std::vector<ExactScalar> col;
            for (std::size_t i = 0; i < Mm1; ++i) col.push_back(d.nu[i][j]);
            auto th = separating_direction(partial_sums(col));
            if (!th) ok = false;
            else d.witnesses.push_back({j, *th});
        }
        if (ok) {
            auto th = separating_direction(partial_sums(d.nu_tilde));
            if (!th) ok = false;
            else d.witnesses.push_back({std::size_t(-1), *th});
        }
        if (ok) return d;
    }
    throw SynthesisError("kernel search failure", "sign conditions never held");
}

/**
 * @brief Y = sum_i A_i(t_M) t_i d/dt_i + d/dt_M, A_i(u) = sum_j nu_ij / (u - b_j).
 */
struct FoliationY {
    ExactVector b;
    ExactMatrix nu;

    std::size_t M() const { return nu.size() + 1; }
    RationalFn1 A(std::size_t i) const { return {ExactScalar(), b, nu.at(i)}; }

    /** @brief dt/dtau at t, numerically. */
    CVector evaluate(const CVector& t) const {
        CVector r(M());
        for (std::size_t i = 0; i + 1 < M(); ++i) r[i] = A(i).evaluate(t.back()) * t[i];
        r.back() = 1.0;
        return r;
    }
};

inline FoliationY build_Y(const ExactVector& b, const ExactMatrix& nu) {
    for (auto& row : nu)
        if (row.size() != b.size()) throw std::invalid_argument("nu row length must match b");
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j)
            if (b[i] == b[j]) throw std::invalid_argument("poles must be distinct");
    return {b, nu};
}

struct LinearizationCertificate {
    bool ok{false};
    /// c[i][alpha]
    std::vector<ExactVector> c;
    /// diag(nu_1l, ..., nu_{M-1,l}, 1)
    ExactVector linear_part;
};

/** @brief c_{il alpha} = -sum_{j != l} nu_ij / (b_j - b_l)^{alpha+1}, all zero for alpha < k. */
inline LinearizationCertificate verify_linearization(const FoliationY& y, std::size_t l, int k) {
    LinearizationCertificate r;
    r.ok = true;
    for (std::size_t i = 0; i + 1 < y.M(); ++i) {
        ExactVector ci;
        for (int a = 0; a < k; ++a) {
            ExactScalar s;
            for (std::size_t j = 0; j < y.b.size(); ++j)
                if (j != l) s -= y.nu[i][j] / (y.b[j] - y.b[l]).pow(unsigned(a + 1));
            r.ok = r.ok && s.is_zero();
            ci.push_back(s);
        }
        r.c.push_back(ci);
        r.linear_part.push_back(y.nu[i][l]);
    }
    r.linear_part.emplace_back(1);
    return r;
}

struct BlowDown {
    PolyVectorField X;
    std::vector<SparsePoly> S_factors;
    SparsePoly S;
};

/**
 * @brief Homogeneous field X on C^M with pi_* Y proportional to X, and its
 * invariant hypersurface S = x_1 ... x_{M-1} prod_j (x_M - b_j x_1).
 */
inline BlowDown blow_down(const FoliationY& y) {
    std::size_t M = y.M(), nb = y.b.size();
    SparsePoly x1 = SparsePoly::variable(M, 0), xm = SparsePoly::variable(M, M - 1);
    std::vector<SparsePoly> lin;
    for (auto& bj : y.b) lin.push_back(xm - x1 * bj);
    std::vector<SparsePoly> prefix{SparsePoly::constant(M, 1)}, suffix(nb + 1, SparsePoly::constant(M, 1));
    for (std::size_t j = 0; j < nb; ++j) prefix.push_back(prefix.back() * lin[j]);
    for (std::size_t j = nb; j-- > 0;) suffix[j] = suffix[j + 1] * lin[j];
    SparsePoly P = prefix[nb];
    std::vector<SparsePoly> Q(M - 1, SparsePoly(M));
    for (std::size_t j = 0; j < nb; ++j) {
        SparsePoly others = prefix[j] * suffix[j + 1];
        for (std::size_t i = 0; i + 1 < M; ++i) Q[i] += others * y.nu[i][j];
    }
    std::vector<SparsePoly> c(M, SparsePoly(M));
    c[0] = Q[0] * x1;
    for (std::size_t i = 1; i + 1 < M; ++i) c[i] = (Q[0] + Q[i]) * SparsePoly::variable(M, i);
    c[M - 1] = Q[0] * xm + P;
    BlowDown r{PolyVectorField(std::move(c)), {}, SparsePoly(M)};
    for (std::size_t i = 0; i + 1 < M; ++i) r.S_factors.push_back(SparsePoly::variable(M, i));
    for (auto& f : lin) r.S_factors.push_back(f);
    r.S = SparsePoly::constant(M, 1);
    for (auto& f : r.S_factors) r.S *= f;
    return r;
}

/** @brief X(f) is divisible by f. */
inline bool is_invariant(const PolyVectorField& x, const SparsePoly& f) {
    return poly_divide_exact(x.apply(f), f).has_value();
}

struct SynthesisOptions {
    std::optional<int> k;
    std::uint64_t seed{1};
    MuShape mu_shape{MuShape::fine()};
};

struct Certificates {
    bool truncation{false};
    bool lambda_rank{false};
    bool minors{false};
    bool j1{false};
    bool nu_solves{false};
    bool nu_nonzero{false};
    bool separation{false};
    bool linearization{false};
    bool s_invariant{false};
    bool z_tangent{false};

    bool all() const {
        return truncation && lambda_rank && minors && j1 && nu_solves && nu_nonzero && separation && linearization &&
               s_invariant && z_tangent;
    }
};

struct SynthesisResult {
    SeparatedDistribution d;
    std::vector<SpanningMonomial> monomials;
    int degree{0};
    int k{0};
    LambdaSet lambda_set;
    TLambda tl;
    MuData mu;
    BChoice b;
    NuData nu;
    FoliationY Y;
    BlowDown down;
    LiftedField Z;
    Certificates certs;
    std::vector<std::string> warnings;
};

/** @brief Check F nu_i = 0 for every row of nu. */
inline bool nu_solves_F(const ExactVector& b, std::size_t m, int k, const ExactMatrix& nu) {
    ExactMatrix f = build_F(b, m, k);
    for (auto& row : nu)
        if (!is_zero_vector(mat_vec(f, row))) return false;
    return true;
}

inline SynthesisResult synthesize_Z(const SeparatedDistribution& d, const SynthesisOptions& opt = {}) {
    SynthesisResult r;
    r.d = d;
    auto table = coefficient_table(d);
    auto blow = blowup_coefficients(table, d.M);
    r.certs.truncation = std::all_of(blow.entries.begin(), blow.entries.end(), [](auto& e) { return e.second.witness; });
    r.monomials = spanning_monomials(blow);
    if (r.monomials.empty()) r.warnings.push_back("W_D = {0}: omega is closed and the density claim is vacuous");
    if (wd_and_kappa(table).kappa > 0) r.warnings.push_back("kappa > 0: returns stay inside level sets of H_D");
    r.degree = 0;
    for (auto& mon : r.monomials) r.degree = std::max(r.degree, mon.L.degree());
    r.k = opt.k.value_or(r.degree + 1);
    if (r.k < 1) throw std::invalid_argument("k must be positive");

    r.lambda_set = build_lambda_set(r.monomials);
    r.certs.lambda_rank = true;
    r.tl = choose_T_lambda(r.lambda_set, r.degree);
    std::size_t m = r.tl.T.size();
    r.mu = generate_mu(d.M, opt.mu_shape);
    std::size_t n = r.mu.mu.front().size();
    r.b = choose_b(r.tl.T, n, r.k, opt.seed);
    r.certs.minors = r.b.cert.minors_ok;
    r.certs.j1 = r.b.cert.j1_ok;
    r.nu = solve_nu(r.b.b, m, n, r.k, r.tl.lambda, r.mu.mu);
    r.certs.nu_solves = nu_solves_F(r.b.b, m, r.k, r.nu.nu);
    r.certs.nu_nonzero = true;
    for (auto& row : r.nu.nu)
        for (auto& x : row) r.certs.nu_nonzero = r.certs.nu_nonzero && !x.is_zero();
    r.certs.separation = r.nu.witnesses.size() == r.b.b.size() - m + 1;
    r.Y = build_Y(r.b.b, r.nu.nu);
    r.certs.linearization = true;
    for (std::size_t l = 0; l < m; ++l)
        if (!verify_linearization(r.Y, l, r.k).ok) throw SynthesisError("linearization failure", "pole " + std::to_string(l));
    r.down = blow_down(r.Y);
    r.certs.s_invariant = true;
    for (auto& f : r.down.S_factors) r.certs.s_invariant = r.certs.s_invariant && is_invariant(r.down.X, f);
    r.Z = lift_vector_field(d, r.down.X);
    r.certs.z_tangent = is_tangent(d, r.Z);
    return r;
}

/**
 * @brief Serializable content of a synthesis run; everything verify needs.
 */
struct SynthesisRecord {
    SeparatedDistribution d;
    std::uint64_t seed{1};
    int k{0};
    int degree{0};
    ExactVector T;
    std::vector<MultiIndex> lambda;
    ExactMatrix mu;
    bool mu_approximated{true};
    ExactVector b;
    BCertificate b_cert;
    ExactMatrix nu;
    ExactVector kernel;
    Rational s;
    std::vector<SeparationWitness> witnesses;
    PolyVectorField X;
    std::vector<SparsePoly> S_factors;
    SparsePoly S;
    LiftedField Z;
    Certificates certs;
    std::vector<std::string> warnings;
};

inline SynthesisRecord record_of(const SynthesisResult& r, std::uint64_t seed) {
    return {r.d,        seed,         r.k,        r.degree,   r.tl.T,         r.tl.lambda, r.mu.mu,
            r.mu.approximated, r.b.b, r.b.cert, r.nu.nu, r.nu.kernel, r.nu.s,      r.nu.witnesses,
            r.down.X,   r.down.S_factors, r.down.S, r.Z,      r.certs,        r.warnings};
}

inline bool witness_valid(const ExactScalar& theta, const std::vector<ExactScalar>& pts) {
    if (sgn(theta.re()) <= 0) return false;
    for (auto& z : pts)
        if (sgn((theta * z).re()) >= 0) return false;
    return true;
}

struct CheckResult {
    std::string name;
    bool pass{false};
    std::string detail;
};

/** @brief Recompute every certificate from the stored data alone. */
inline std::vector<CheckResult> recheck(const SynthesisRecord& r) {
    std::vector<CheckResult> out;
    auto add = [&](std::string n, bool ok, std::string detail = {}) { out.push_back({std::move(n), ok, std::move(detail)}); };
    std::size_t m = r.T.size(), Mm1 = r.nu.size(), nb = r.b.size();
    bool shapes = Mm1 + 1 == r.d.M && r.lambda.size() == m && r.mu.size() == Mm1 && r.k >= 1;
    for (auto& row : r.nu) shapes = shapes && row.size() == nb;
    for (auto& row : r.mu) shapes = shapes && row.size() == r.mu.front().size();
    std::size_t n = shapes ? r.mu.front().size() : 0;
    shapes = shapes && nb == pole_count(m, n, r.k);
    for (std::size_t l = 0; shapes && l < m; ++l) shapes = r.b[l] == r.T[l];
    add("shapes", shapes);
    if (!shapes) return out;

    auto blow = blowup_coefficients(coefficient_table(r.d), r.d.M);
    add("truncation", std::all_of(blow.entries.begin(), blow.entries.end(), [](auto& e) { return e.second.witness; }));

    bool distinct = true;
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t j = i + 1; j < nb; ++j) distinct = distinct && r.b[i] != r.b[j];
    add("poles_distinct", distinct);
    if (!distinct) return out;

    auto bc = certify_b(r.b, m, std::size_t(r.k) * m, r.k);
    add("minors", bc.minors_ok, std::to_string(bc.minors_checked) + (bc.exhaustive ? " minors, all" : " minors, v-block"));
    add("j1", bc.j1_ok);

    bool block = true;
    for (std::size_t i = 0; i < Mm1; ++i) {
        for (std::size_t l = 0; l < m; ++l)
            block = block && r.nu[i][l] == ExactScalar(r.lambda[l][i]) / ExactScalar(r.lambda[l][r.d.M - 1]);
        for (std::size_t j = 0; j < n; ++j) block = block && r.nu[i][m + j] == r.mu[i][j];
    }
    add("prescribed_block", block);
    add("nu_solves", nu_solves_F(r.b, m, r.k, r.nu));
    bool nonzero = true;
    for (auto& row : r.nu)
        for (auto& x : row) nonzero = nonzero && !x.is_zero();
    add("nu_nonzero", nonzero);

    ExactVector tilde = nu_tilde_of(r.nu);
    int side = sgn(tilde[0].im());
    bool tilde_ok = side != 0;
    for (auto& t : tilde) tilde_ok = tilde_ok && sgn(t.im()) == side;
    std::set<std::size_t> covered;
    bool sep = true;
    for (auto& w : r.witnesses) {
        std::vector<ExactScalar> col;
        if (w.column == std::size_t(-1)) {
            col = tilde;
        } else if (w.column >= m && w.column < nb) {
            for (std::size_t i = 0; i < Mm1; ++i) col.push_back(r.nu[i][w.column]);
        } else {
            sep = false;
            continue;
        }
        sep = sep && witness_valid(w.theta, partial_sums(col));
        covered.insert(w.column);
    }
    sep = sep && covered.size() == nb - m + 1;
    add("separation", sep && tilde_ok);

    FoliationY y = build_Y(r.b, r.nu);
    bool lin = true;
    for (std::size_t l = 0; l < m; ++l) lin = lin && verify_linearization(y, l, r.k).ok;
    add("linearization", lin);

    auto down = blow_down(y);
    add("blow_down", down.X == r.X);
    bool inv = !r.S_factors.empty();
    SparsePoly prod = SparsePoly::constant(r.d.M, 1);
    for (auto& f : r.S_factors) {
        inv = inv && f.nvars() == r.d.M && is_invariant(r.X, f);
        if (f.nvars() == r.d.M) prod *= f;
    }
    add("s_invariant", inv && prod == r.S);
    add("z_tangent", r.Z.base == r.X && is_tangent(r.d, r.Z));
    return out;
}

}  // namespace sepdist
