#pragma once

#include <sepdist/synthesis.hpp>

#include <boost/numeric/odeint.hpp>

#include <chrono>
#include <deque>
#include <unordered_set>

namespace sepdist {

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegratorTolerance {
    double abs{1e-12};
    double rel{1e-10};
    double max_step{0.05};
};

/**
 * @brief Settings of the return simulation: fiber base point, guard radius,
 * density grid and loop budget.
 */
struct SimConfig {
    IntegratorTolerance tol;
    /// base point in C^M
    CVector p;
    /// initial fiber point in C^N, zero when empty
    CVector z0;
    /// guard radius r in |z| + K l < r
    double fiber_radius{20.0};
    /// polydisc declared for the guard bound K
    double polydisc{1.0};
    double eps{0.05};
    /// radius of the fiber disc covered by the density grid
    double radius{0.2};
    std::size_t budget{10000};
    std::uint64_t seed{1};
};

using State = std::vector<Complex>;

/**
 * @brief Solve dt_i/ds = A_i(tau(s)) tau'(s) t_i, s in [0, 1], along a path tau
 * in the t_M line.
 */
inline State transport(const FoliationY& y, const std::function<Complex(double)>& tau,
                       const std::function<Complex(double)>& dtau, State z, const IntegratorTolerance& tol = {}) {
    namespace ode = boost::numeric::odeint;
    std::size_t n = y.M() - 1;
    if (z.size() != n) throw std::invalid_argument("fiber point dimension mismatch");
    CVector poles;
    std::vector<CVector> res(n);
    for (auto& b : y.b) poles.push_back(b.to_complex());
    for (std::size_t i = 0; i < n; ++i)
        for (auto& v : y.nu[i]) res[i].push_back(v.to_complex());
    CVector inv(poles.size());
    auto rhs = [&](const State& x, State& dx, double s) {
        Complex u = tau(s), du = dtau(s);
        for (std::size_t j = 0; j < poles.size(); ++j) inv[j] = 1.0 / (u - poles[j]);
        dx.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            Complex a = 0.0;
            for (std::size_t j = 0; j < poles.size(); ++j) a += res[i][j] * inv[j];
            dx[i] = a * du * x[i];
        }
    };
    auto stepper = ode::make_controlled(tol.abs, tol.rel, tol.max_step, ode::runge_kutta_dopri5<State>());
    std::size_t steps = 0;
    try {
        steps = ode::integrate_adaptive(stepper, rhs, z, 0.0, 1.0, tol.max_step / 4);
    } catch (const ode::step_adjustment_error& e) {
        throw IntegrationError(std::string("step failure: ") + e.what());
    }
    if (steps > 1000000) throw IntegrationError("too many steps");
    for (auto& c : z)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw IntegrationError("non-finite state");
    return z;
}

/** @brief Half the smallest distance between poles. */
inline double pole_radius(const FoliationY& y) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < y.b.size(); ++i)
        for (std::size_t j = i + 1; j < y.b.size(); ++j) g = std::min(g, std::abs(y.b[i].to_complex() - y.b[j].to_complex()));
    return std::isfinite(g) ? g / 2 : 0.5;
}

/** @brief Base of the holonomy loop around b_j, t_M = b_j + r. */
inline Complex holonomy_base(const FoliationY& y, std::size_t j) { return y.b.at(j).to_complex() + pole_radius(y); }

/**
 * @brief Holonomy of the circle of radius pole_radius around b_j, based at
 * holonomy_base; orientation -1 runs it backwards.
 */
inline State holonomy_numeric(const FoliationY& y, std::size_t j, const State& z, int orientation = 1,
                              const IntegratorTolerance& tol = {}) {
    Complex c = y.b.at(j).to_complex();
    double r = pole_radius(y);
    double o = orientation >= 0 ? 1.0 : -1.0;
    auto tau = [=](double s) { return c + r * std::exp(o * two_pi_i * s); };
    auto dtau = [=](double s) { return o * two_pi_i * r * std::exp(o * two_pi_i * s); };
    return transport(y, tau, dtau, z, tol);
}

/** @brief (z_i e^{2 pi i nu_ij}) */
inline State holonomy_closed_form(const FoliationY& y, std::size_t j, const State& z) {
    State r(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) r[i] = z[i] * std::exp(two_pi_i * y.nu.at(i).at(j).to_complex());
    return r;
}

/** @brief |pi(z, a)| with pi(t) = (t_1, t_1 t_2, ..., t_1 t_M). */
inline double blowup_norm(const State& z, Complex a) {
    double s = std::norm(z[0]);
    for (std::size_t i = 1; i < z.size(); ++i) s += std::norm(z[0] * z[i]);
    s += std::norm(z[0] * a);
    return std::sqrt(s);
}

struct ContractionReport {
    /// max over columns of e^{-2 pi Im nu_1j} and e^{-2 pi Im(nu_1j + nu_ij)}
    double delta{0};
    double max_ratio{0};
    std::size_t samples{0};
    bool pass{false};
};

/**
 * @brief Measure |g_j(z)| / |z| for the holonomies g_j of the given columns
 * against the bound delta.
 */
inline ContractionReport contraction_check(const FoliationY& y, const std::vector<std::size_t>& columns,
                                           std::size_t samples, std::uint64_t seed = 1,
                                           const IntegratorTolerance& tol = {}) {
    ContractionReport r;
    r.samples = samples;
    for (auto j : columns) {
        Complex n1 = y.nu[0][j].to_complex();
        r.delta = std::max(r.delta, std::exp(-2 * std::numbers::pi * n1.imag()));
        for (std::size_t i = 1; i < y.nu.size(); ++i)
            r.delta = std::max(r.delta, std::exp(-2 * std::numbers::pi * (n1 + y.nu[i][j].to_complex()).imag()));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::size_t n = y.M() - 1;
    for (std::size_t s = 0; s < samples; ++s) {
        std::size_t j = columns[s % columns.size()];
        State z(n);
        for (auto& c : z) c = Complex(u(rng), u(rng));
        Complex a = holonomy_base(y, j);
        State g = holonomy_numeric(y, j, z, 1, tol);
        r.max_ratio = std::max(r.max_ratio, blowup_norm(g, a) / blowup_norm(z, a));
    }
    r.pass = r.delta < 1 && r.max_ratio <= r.delta * (1 + 1e-8);
    return r;
}

/**
 * @brief Loop in a leaf of X near the singular point (0, b_l) of Y.
 *
 * In the chart t_M = b_l + s_M the leaf through the m-loop of the linear
 * part, m = lambda(b_l), is t_i = s_i exp(h_il(s_M)) with
 * h_il(s) = sum_{j != l} nu_ij log(1 - s/(b_j - b_l)); the loop is its image
 * under pi, zeta = e^{2 pi i t}.
 */
inline PiecewisePath leaf_loop(const FoliationY& y, std::size_t l, const MultiIndex& m, const CVector& s) {
    std::size_t M = y.M();
    if (m.size() != M || s.size() != M) throw std::invalid_argument("leaf loop arity mismatch");
    Complex bl = y.b.at(l).to_complex();
    std::vector<Complex> c;
    std::vector<CVector> nu(M - 1);
    for (std::size_t j = 0; j < y.b.size(); ++j) c.push_back(y.b[j].to_complex() - bl);
    for (std::size_t i = 0; i + 1 < M; ++i)
        for (auto& v : y.nu[i]) nu[i].push_back(v.to_complex());
    struct Eval {
        CVector x, dx;
    };
    auto eval = [=](double t) {
        Complex zeta = std::exp(two_pi_i * t);
        Complex sm = s[M - 1] * std::pow(zeta, m[M - 1]);
        Complex dsm = two_pi_i * double(m[M - 1]) * sm;
        CVector tt(M), dt(M);
        for (std::size_t i = 0; i + 1 < M; ++i) {
            Complex h = 0.0, g = 0.0;
            for (std::size_t j = 0; j < c.size(); ++j) {
                if (j == l) continue;
                h += nu[i][j] * std::log(1.0 - sm / c[j]);
                g += nu[i][j] / (sm - c[j]);
            }
            tt[i] = s[i] * std::pow(zeta, m[i]) * std::exp(h);
            dt[i] = tt[i] * (two_pi_i * double(m[i]) + g * dsm);
        }
        tt[M - 1] = bl + sm;
        dt[M - 1] = dsm;
        Eval e{CVector(M), CVector(M)};
        e.x[0] = tt[0];
        e.dx[0] = dt[0];
        for (std::size_t i = 1; i < M; ++i) {
            e.x[i] = tt[0] * tt[i];
            e.dx[i] = dt[0] * tt[i] + tt[0] * dt[i];
        }
        return e;
    };
    PiecewisePath p(M);
    p.append({[eval](double t) { return eval(t).x; }, [eval](double t) { return eval(t).dx; }});
    return p;
}

/** @brief base -> loop start along a line, the loop, and back. */
inline PiecewisePath conjugate_loop(const CVector& base, const PiecewisePath& loop) {
    PiecewisePath p = PiecewisePath::line(base, loop.start());
    p.append(loop);
    p.append(PiecewisePath::line(loop.end(), base));
    return p;
}

struct Generator {
    std::string name;
    PiecewisePath path;
};

/**
 * @brief Leaf loops around the tangency-normalized poles, two phases of s_M
 * per pole, with the remaining scale calibrated to a displacement of about
 * `step`. Falls back to conjugated m-loops when the synthesis has no T poles.
 */
inline std::vector<Generator> leaf_generators(const SeparatedDistribution& d, const FoliationY& y,
                                              const std::vector<MultiIndex>& lambda, const CVector& base,
                                              double step = 0.03) {
    std::vector<Generator> gens;
    std::size_t M = d.M;
    CompiledOmega w(d);
    double gap = 2 * pole_radius(y);
    for (std::size_t l = 0; l < lambda.size(); ++l) {
        const MultiIndex& m = lambda[l];
        double target = step / (1.0 + 0.17 * double(l));
        for (int phase = 0; phase < 2; ++phase) {
            Complex sm = std::min(0.06, gap / 4) * std::exp(Complex(0.0, phase * std::numbers::pi / 2));
            auto disp = [&](double c) {
                CVector s(M, c);
                s[M - 1] = sm;
                return PiecewisePath::norm2(w.integrate(leaf_loop(y, l, m, s)));
            };
            double c0 = 0.1, d0 = disp(c0), d1 = disp(c0 / 2);
            if (d0 < 1e-14 || d1 < 1e-14) continue;
            double q = std::log2(d0 / d1);
            if (!(q > 0.1)) continue;
            double c = c0 * std::pow(target / d0, 1.0 / q);
            CVector s(M, c);
            s[M - 1] = sm;
            gens.push_back({"leaf(" + std::to_string(l) + "," + std::to_string(phase) + ")",
                            conjugate_loop(base, leaf_loop(y, l, m, s))});
        }
    }
    if (gens.empty()) {
        for (std::size_t i = 0; i < M; ++i) {
            std::vector<int> m(M, -1);
            m[i] = 1;
            CVector y(M, 0.1);
            gens.push_back({"mloop(" + std::to_string(i) + ")", PiecewisePath::conjugated_m_loop(base, y, m)});
        }
    }
    return gens;
}

inline std::vector<Generator> leaf_generators(const SynthesisResult& res, const CVector& base, double step = 0.03) {
    return leaf_generators(res.d, res.Y, res.tl.lambda, base, step);
}

/** @brief A point with coordinates 0.05 (1 + 0.37 i), nudged until no factor of S vanishes there. */
inline CVector default_base_point(const std::vector<SparsePoly>& s_factors, std::size_t M) {
    for (int tries = 0; tries < 100; ++tries) {
        CVector p(M);
        for (std::size_t i = 0; i < M; ++i) p[i] = 0.05 * (1 + 0.37 * double(i)) * (1 + 0.013 * tries * double(i));
        bool ok = true;
        for (auto& f : s_factors) ok = ok && std::abs(f.evaluate(p)) > 1e-6;
        if (ok) return p;
    }
    throw std::logic_error("no base point off S");
}

struct ReturnRecord {
    /// signed generator indices, +g+1 or -(g+1)
    std::vector<int> word;
    CVector z;
    CVector displacement;
};

struct ReturnRun {
    std::vector<ReturnRecord> records;
    std::vector<CVector> generator_displacements;
    std::size_t guard_skipped{0};
    /// largest distance of a generator displacement from W_D, relative to 1 + |d|
    double max_residual{0};
};

/** @brief Orthonormal basis of span(vs) for the Hermitian product. */
inline std::vector<CVector> orthonormal_basis(const std::vector<CVector>& vs) {
    std::vector<CVector> q;
    for (auto v : vs) {
        for (auto& e : q) {
            Complex dot = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) dot += std::conj(e[i]) * v[i];
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * e[i];
        }
        double n = PiecewisePath::norm2(v);
        if (n < 1e-12) continue;
        for (auto& c : v) c /= n;
        q.push_back(v);
    }
    return q;
}

inline std::vector<CVector> wd_numeric(const SeparatedDistribution& d) {
    std::vector<CVector> r;
    for (auto& v : wd_and_kappa(coefficient_table(d)).basis) {
        CVector c;
        for (auto& x : v) c.push_back(x.to_complex());
        r.push_back(c);
    }
    return orthonormal_basis(r);
}

inline double projection_residual(const std::vector<CVector>& q, const CVector& v) {
    CVector r = v;
    for (auto& e : q) {
        Complex dot = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) dot += std::conj(e[i]) * v[i];
        for (std::size_t i = 0; i < v.size(); ++i) r[i] -= dot * e[i];
    }
    return PiecewisePath::norm2(r);
}

/**
 * @brief Breadth-first enumeration of words in the generators and their
 * inverses, lifted from the fiber point z0 over the base point.
 *
 * The lift of a loop moves z by its own integral of omega, so each generator
 * is integrated once; the guard |z| + K l(gamma) < r is checked at every
 * step and violating steps are skipped. Endpoints are deduplicated.
 */
inline ReturnRun accumulate_returns(const SeparatedDistribution& d, const std::vector<Generator>& gens,
                                    const SimConfig& cfg) {
    ReturnRun run;
    CVector z0 = cfg.z0.empty() ? CVector(d.N, 0.0) : cfg.z0;
    if (z0.size() != d.N) throw std::invalid_argument("fiber point dimension mismatch");
    CompiledOmega w(d);
    double bound = omega_bound(d, cfg.polydisc);
    auto q = wd_numeric(d);
    std::vector<double> len;
    for (auto& g : gens) {
        if (g.path.max_modulus() > cfg.polydisc) throw GuardViolation("generator " + g.name + " leaves the polydisc");
        auto disp = w.integrate(g.path);
        run.generator_displacements.push_back(disp);
        len.push_back(g.path.length());
        run.max_residual =
            std::max(run.max_residual, projection_residual(q, disp) / (1 + PiecewisePath::norm2(disp)));
    }
    auto key = [](const CVector& z) {
        std::string k;
        for (auto& c : z)
            k += std::to_string(std::llround(c.real() * 1e9)) + "," + std::to_string(std::llround(c.imag() * 1e9)) + ";";
        return k;
    };
    std::unordered_set<std::string> seen{key(z0)};
    std::deque<std::size_t> queue{0};
    run.records.push_back({{}, z0, CVector(d.N, 0.0)});
    while (!queue.empty() && run.records.size() < cfg.budget) {
        std::size_t at = queue.front();
        queue.pop_front();
        for (std::size_t g = 0; g < gens.size() && run.records.size() < cfg.budget; ++g)
            for (int sign : {1, -1}) {
                if (run.records.size() >= cfg.budget) break;
                const ReturnRecord& cur = run.records[at];
                if (PiecewisePath::norm2(cur.z) + bound * len[g] >= cfg.fiber_radius) {
                    ++run.guard_skipped;
                    continue;
                }
                CVector z = cur.z;
                for (std::size_t n = 0; n < d.N; ++n) z[n] += double(sign) * run.generator_displacements[g][n];
                if (!seen.insert(key(z)).second) continue;
                ReturnRecord rec{cur.word, z, CVector(d.N)};
                rec.word.push_back(sign * int(g + 1));
                for (std::size_t n = 0; n < d.N; ++n) rec.displacement[n] = z[n] - z0[n];
                run.records.push_back(std::move(rec));
                queue.push_back(run.records.size() - 1);
            }
    }
    return run;
}

struct DensityReport {
    double fraction{0};
    std::size_t cells_hit{0};
    std::size_t cells_total{0};
    std::size_t records{0};
    /// real dimension of the grid
    std::size_t dimension{0};
    double seconds{0};
};

/**
 * @brief Coverage of the eps-grid on the disc of radius cfg.radius around z0
 * in the real coordinates of an orthonormal basis of W_D (all of C^N when
 * W_D = 0). A cell counts when its center lies in the disc.
 */
inline DensityReport density_report(const SeparatedDistribution& d, const std::vector<ReturnRecord>& records,
                                    const SimConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    DensityReport r;
    r.records = records.size();
    auto q = wd_numeric(d);
    if (q.empty())
        for (std::size_t n = 0; n < d.N; ++n) {
            CVector e(d.N, 0.0);
            e[n] = 1.0;
            q.push_back(e);
        }
    std::size_t dim = 2 * q.size();
    r.dimension = dim;
    long half = long(std::ceil(cfg.radius / cfg.eps));
    double per_axis = double(2 * half);
    if (std::pow(per_axis, double(dim)) > 1e6) throw std::invalid_argument("density grid exceeds 10^6 cells");
    auto coords = [&](const CVector& v) {
        std::vector<double> c;
        for (auto& e : q) {
            Complex dot = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) dot += std::conj(e[i]) * v[i];
            c.push_back(dot.real());
            c.push_back(dot.imag());
        }
        return c;
    };
    std::vector<long> idx(dim, -half);
    std::set<std::vector<long>> inside;
    while (true) {
        double rr = 0;
        for (auto i : idx) rr += std::pow((double(i) + 0.5) * cfg.eps, 2);
        if (rr <= cfg.radius * cfg.radius) inside.insert(idx);
        std::size_t a = 0;
        while (a < dim && ++idx[a] == half) idx[a++] = -half;
        if (a == dim) break;
    }
    std::set<std::vector<long>> hit;
    for (auto& rec : records) {
        auto c = coords(rec.displacement);
        std::vector<long> cell;
        for (auto x : c) cell.push_back(long(std::floor(x / cfg.eps)));
        if (inside.count(cell)) hit.insert(cell);
    }
    r.cells_total = inside.size();
    r.cells_hit = hit.size();
    r.fraction = r.cells_total ? double(r.cells_hit) / double(r.cells_total) : 0.0;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

struct ProbeResult {
    std::vector<int> exponents;
    double error{std::numeric_limits<double>::infinity()};
    int length{0};
};

/**
 * @brief Exponent vector k with sum |k_j| <= word_bound minimizing
 * |prod_j lambda_j^{k_j} - target|, componentwise products in (C*)^n.
 */
inline ProbeResult subgroup_density_probe(const std::vector<CVector>& multipliers, const CVector& target,
                                          int word_bound) {
    std::size_t g = multipliers.size();
    if (g == 0) throw std::invalid_argument("no multipliers");
    std::size_t dim = target.size();
    std::vector<CVector> logs;
    for (auto& m : multipliers) {
        if (m.size() != dim) throw std::invalid_argument("multiplier dimension mismatch");
        CVector l;
        for (auto& c : m) {
            if (c == 0.0) throw std::invalid_argument("zero multiplier");
            l.push_back(std::log(c));
        }
        logs.push_back(l);
    }
    ProbeResult best;
    std::vector<int> k(g, 0);
    CVector acc(dim, 0.0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
        if (j == g) {
            double e = 0;
            for (std::size_t i = 0; i < dim; ++i) e += std::norm(std::exp(acc[i]) - target[i]);
            e = std::sqrt(e);
            int len = 0;
            for (auto x : k) len += std::abs(x);
            if (e < best.error - 1e-15 || (std::abs(e - best.error) <= 1e-15 && len < best.length)) {
                best.error = e;
                best.exponents = k;
                best.length = len;
            }
            return;
        }
        for (int v = -left; v <= left; ++v) {
            k[j] = v;
            for (std::size_t i = 0; i < dim; ++i) acc[i] += double(v) * logs[j][i];
            rec(j + 1, left - std::abs(v));
            for (std::size_t i = 0; i < dim; ++i) acc[i] -= double(v) * logs[j][i];
        }
        k[j] = 0;
    };
    rec(0, word_bound);
    return best;
}

/** @brief e^{2 pi i mu_j} as points of (C*)^{M-1}, one per column. */
inline std::vector<CVector> mu_multipliers(const ExactMatrix& mu) {
    std::vector<CVector> r(mu.front().size());
    for (auto& row : mu)
        for (std::size_t j = 0; j < row.size(); ++j) r[j].push_back(std::exp(two_pi_i * row[j].to_complex()));
    return r;
}

}  // namespace sepdist
