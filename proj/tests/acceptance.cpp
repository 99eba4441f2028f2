// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

using namespace sepdist;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool all_ok = true;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    all_ok = all_ok && pass;
    std::printf("%s %2d %-28s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

/** @brief X_i^D(h) = dh/dx_i + sum_n omega_n[i] dh/dz_n, built term by term. */
SparsePoly apply_lift(const SeparatedDistribution& d, std::size_t i, const SparsePoly& h) {
    std::size_t nv = d.M + d.N;
    SparsePoly r = h.derivative(i);
    for (std::size_t n = 0; n < d.N; ++n) {
        SparsePoly w(nv);
        for (auto& [k, c] : d.omega[n][i].terms()) {
            std::vector<int> e(nv, 0);
            for (std::size_t a = 0; a < d.M; ++a) e[a] = k[a];
            w.add_term(MultiIndex(e), c);
        }
        r += w * h.derivative(d.M + n);
    }
    return r;
}

/** @brief Span of the coefficient vectors of d omega, read off partial derivatives. */
std::vector<ExactVector> dw_span(const SeparatedDistribution& d) {
    std::map<std::tuple<MultiIndex, std::size_t, std::size_t>, ExactVector> c;
    for (std::size_t n = 0; n < d.N; ++n)
        for (std::size_t i = 0; i < d.M; ++i)
            for (std::size_t j = i + 1; j < d.M; ++j) {
                SparsePoly f = d.omega[n][j].derivative(i) - d.omega[n][i].derivative(j);
                for (auto& [k, a] : f.terms()) {
                    auto [it, fresh] = c.try_emplace({k, i, j}, ExactVector(d.N));
                    it->second[n] = a;
                }
            }
    std::vector<ExactVector> vs;
    for (auto& [k, v] : c) vs.push_back(v);
    return span_basis(vs);
}

void criterion_first_integrals() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(1001);
    bool ok = true;
    std::size_t rows = 0;
    for (int t = 0; t < 100; ++t) {
        auto d = oracle::random_distribution(rng, 4, 3, 4, 3);
        auto fi = first_integrals(d);
        ok = ok && fi.kappa + exact_rank(dw_span(d)) == d.N;
        for (auto& h : fi.H) {
            ++rows;
            for (std::size_t i = 0; i < d.M; ++i) ok = ok && apply_lift(d, i, h).is_zero();
        }
    }
    double s = seconds_since(t0);
    report(1, "first_integral_identity", ok && s < 60, std::to_string(rows) + " H rows, " + fmt("%.1f s", s));
}

void criterion_stokes() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(2002);
    double worst = 0;
    for (int t = 0; t < 50; ++t) {
        auto d = oracle::random_distribution(rng, 3, 2, 4, 3);
        std::uniform_int_distribution<std::size_t> pa(0, d.M - 1);
        std::uniform_int_distribution<int> mag(1, 4);
        std::uniform_real_distribution<double> rad(0.02, 0.1), ang(0, 2 * std::numbers::pi);
        std::size_t alpha = pa(rng);
        MultiIndex m(d.M);
        for (std::size_t i = 0; i < d.M; ++i) m[i] = i == alpha ? mag(rng) : -mag(rng);
        CVector y(d.M);
        for (auto& c : y) c = std::polar(rad(rng), ang(rng));
        auto lift = lift_loop(d, PiecewisePath::m_loop(y, m.data()), CVector(d.N, 0.0), LiftGuard{1.0, 1e6});
        auto series = evaluate_series(return_series(d.d_omega(), m, alpha, 10), y, d.N);
        double err = oracle::distance(lift.displacement, series) / (1 + oracle::norm(lift.displacement));
        worst = std::max(worst, err);
    }
    double s = seconds_since(t0);
    report(2, "stokes_return_equivalence", worst <= 1e-8 && s < 120, fmt("max rel err %.2e", worst) + fmt(", %.1f s", s));
}

void criterion_vanishing() {
    auto t0 = Clock::now();
    bool ok = true;
    std::size_t series = 0, nonresonant = 0;
    for (std::size_t M = 2; M <= 3; ++M) {
        // every monomial 1-form x^K dx_c with |K| + 1 <= 8
        std::vector<MultiIndex> ks;
        std::vector<int> e(M, 0);
        std::function<void(std::size_t, int)> gen = [&](std::size_t i, int left) {
            if (i == M) {
                ks.emplace_back(e);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                e[i] = v;
                gen(i + 1, left - v);
            }
            e[i] = 0;
        };
        gen(0, 7);
        std::vector<MultiIndex> ms;
        for (std::size_t alpha = 0; alpha < M; ++alpha) {
            std::vector<int> v(M);
            std::function<void(std::size_t)> rec = [&](std::size_t i) {
                if (i == M) {
                    ms.emplace_back(v);
                    return;
                }
                for (int a = 1; a <= 4; ++a) {
                    v[i] = i == alpha ? a : -a;
                    rec(i + 1);
                }
            };
            rec(0);
        }
        for (auto& k : ks)
            for (std::size_t c = 0; c < M; ++c) {
                OneForm w(M);
                w[c] = SparsePoly::monomial(k, ExactScalar(1));
                SeparatedDistribution d(M, {w});
                auto dw = d.d_omega();
                for (auto& m : ms) {
                    std::size_t alpha = *elementary_index(m);
                    auto s = return_series(dw, m, alpha, 8);
                    ++series;
                    auto direct = oracle::direct_omega_series(d, m);
                    ok = ok && s.size() == direct.size();
                    for (auto& [l, a] : s) {
                        ok = ok && m.dot(l) == 0 && direct.count(l) && a[0].pi_power() == 1 &&
                             a[0].exact() == direct.at(l)[0];
                    }
                    MultiIndex l = k.shifted(c, 1);
                    if (m.dot(l) != 0) {
                        ++nonresonant;
                        ok = ok && !s.count(l);
                    }
                }
            }
    }
    report(3, "vanishing_law", ok,
           std::to_string(series) + " series, " + std::to_string(nonresonant) + " nonresonant, " +
               fmt("%.1f s", seconds_since(t0)));
}

void criterion_lambda() {
    std::mt19937_64 rng(4004);
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
        std::uniform_int_distribution<std::size_t> mm(2, 6);
        std::size_t M = mm(rng);
        std::uniform_int_distribution<std::size_t> pa(0, M - 1), pb(0, M - 2);
        std::uniform_int_distribution<int> e(0, 5);
        std::size_t alpha = pa(rng);
        MultiIndex l(M);
        for (std::size_t i = 0; i < M; ++i) l[i] = e(rng);
        l[alpha] = std::max(l[alpha], 1);
        std::size_t beta = pb(rng);
        if (beta >= alpha) ++beta;
        l[beta] = std::max(l[beta], 1);
        auto basis = elementary_basis_for(l, alpha);
        for (auto& m : basis) ok = ok && is_elementary(m, alpha) && m.dot(l) == 0;
        ok = ok && basis.size() + 1 == M && !oracle::leibniz_det(lambda_matrix(l, alpha, basis)).is_zero();
    }
    report(4, "lambda_matrix_invertible", ok, "100 seeded (L, alpha)");
}

struct ContactRun {
    SynthesisResult res;
    double seconds{0};
};

void criterion_certificates(const ContactRun& run) {
    const auto& r = run.res;
    bool ok = r.certs.all();
    std::size_t m = r.tl.T.size();
    // F(nu_i) = 0 and c_{il alpha} = 0 by direct summation
    for (std::size_t i = 0; i + 1 < r.d.M; ++i)
        for (std::size_t l = 0; l < m; ++l)
            for (int a = 0; a < r.k; ++a) {
                ExactScalar s;
                for (std::size_t j = 0; j < r.b.b.size(); ++j)
                    if (j != l) s += r.nu.nu[i][j] / (r.b.b[j] - r.b.b[l]).pow(unsigned(a + 1));
                ok = ok && s.is_zero();
            }
    for (auto& row : r.nu.nu)
        for (auto& x : row) ok = ok && !x.is_zero();
    for (auto& w : r.nu.witnesses) {
        std::vector<ExactScalar> col;
        if (w.column == std::size_t(-1)) col = r.nu.nu_tilde;
        else
            for (auto& row : r.nu.nu) col.push_back(row[w.column]);
        std::vector<ExactScalar> pts{col[0]};
        for (std::size_t i = 1; i < col.size(); ++i) pts.push_back(col[0] + col[i]);
        ok = ok && sgn(w.theta.re()) > 0;
        for (auto& z : pts) ok = ok && sgn((w.theta * z).re()) < 0;
    }
    ok = ok && r.nu.witnesses.size() == r.b.b.size() - m + 1;
    auto f = build_F(r.b.b, m, r.k);
    std::vector<std::size_t> last;
    for (std::size_t j = r.b.b.size() - std::size_t(r.k) * m; j < r.b.b.size(); ++j) last.push_back(j);
    ok = ok && !oracle::leibniz_det(select_columns(f, last)).is_zero();
    ok = ok && !oracle::leibniz_det(build_J1(f, r.b.b.size(), std::size_t(r.k) * m)).is_zero();
    for (auto& fac : r.down.S_factors) ok = ok && poly_divide_exact(r.down.X.apply(fac), fac).has_value();
    for (std::size_t n = 0; n < r.d.N; ++n) {
        SparsePoly t = r.Z.z[n];
        for (std::size_t i = 0; i < r.d.M; ++i) t -= r.d.omega[n][i] * r.Z.base[i];
        ok = ok && t.is_zero();
    }
    for (auto& c : recheck(record_of(r, 1))) ok = ok && c.pass;
    report(5, "contact_certificates", ok && run.seconds < 300,
           "k = " + std::to_string(r.k) + ", " + std::to_string(r.b.b.size()) + " poles, deg X = " +
               std::to_string(r.down.X.comps[0].degree()) + fmt(", %.2f s", run.seconds));
}

void criterion_holonomy(const ContactRun& run) {
    const auto& y = run.res.Y;
    double worst = 0;
    std::size_t used = 0;
    CVector z{Complex(0.3, -0.2)};
    for (std::size_t j = 0; j < y.b.size(); ++j) {
        bool small = true;
        for (auto& row : y.nu) small = small && std::abs(row[j].to_complex()) <= 2;
        if (!small) continue;
        ++used;
        auto num = holonomy_numeric(y, j, z), cf = holonomy_closed_form(y, j, z);
        for (std::size_t i = 0; i < z.size(); ++i) worst = std::max(worst, std::abs(num[i] - cf[i]) / std::abs(cf[i]));
    }
    report(6, "holonomy_closed_form", used > 0 && worst <= 1e-6,
           std::to_string(used) + " of " + std::to_string(y.b.size()) + " poles, " + fmt("max rel err %.2e", worst));
}

void criterion_contraction(const ContactRun& run) {
    auto t0 = Clock::now();
    const auto& r = run.res;
    std::size_t m = r.tl.T.size(), n = r.mu.mu.front().size();
    std::vector<std::size_t> cols;
    for (std::size_t j = m; j < m + n; ++j) cols.push_back(j);
    auto c = contraction_check(r.Y, cols, 1000, 7);
    report(7, "contraction", c.pass,
           fmt("delta %.6f", c.delta) + fmt(", max ratio %.6f", c.max_ratio) + fmt(", %.1f s", seconds_since(t0)));
}

void criterion_brackets() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(8008);
    bool ok = true;
    for (int t = 0; t < 50; ++t) {
        auto d = oracle::random_distribution(rng, 4, 3, 3, 3);
        int depth = std::max(1, d.max_degree());
        ok = ok && same_span(bracket_span(d, depth), dw_span(d));
    }
    report(8, "bracket_span_equals_wd", ok, fmt("50 distributions, %.1f s", seconds_since(t0)));
}

void criterion_density(const ContactRun& run) {
    auto t0 = Clock::now();
    const auto& r = run.res;
    SimConfig cfg;
    cfg.eps = 0.05;
    cfg.radius = 0.2;
    cfg.budget = 10000;
    cfg.p = default_base_point(r.down.S_factors, r.d.M);
    auto gens = leaf_generators(r, cfg.p);
    auto ret = accumulate_returns(r.d, gens, cfg);
    auto rep = density_report(r.d, ret.records, cfg);
    double s = seconds_since(t0);
    report(9, "desk_scale_density", rep.fraction >= 0.9 && s < 600,
           fmt("coverage %.3f", rep.fraction) + " (" + std::to_string(rep.cells_hit) + "/" +
               std::to_string(rep.cells_total) + " cells, " + std::to_string(ret.records.size()) + " records, " +
               std::to_string(gens.size()) + " loops)" + fmt(", %.1f s", s));
}

void criterion_legendrian(const ContactRun& run) {
    std::vector<LiftedField> inputs{run.res.Z};
    SparsePoly x = SparsePoly::variable(2, 0), y = SparsePoly::variable(2, 1);
    inputs.push_back(lift_vector_field(contact_distribution(1), PolyVectorField(std::vector<SparsePoly>{x * x + y, x * y - SparsePoly::constant(2, ExactScalar(1))})));
    bool ok = true;
    for (auto& z3 : inputs)
        for (std::size_t m = 1; m <= 3; ++m) {
            auto zs = legendrian_product(z3, m);
            std::size_t M = 2 * m;
            for (auto& z : zs) {
                SparsePoly c = z.z[0];
                for (std::size_t j = 0; j < m; ++j) {
                    c -= SparsePoly::variable(M, 2 * j + 1) * z.base[2 * j];
                    c += SparsePoly::variable(M, 2 * j) * z.base[2 * j + 1];
                }
                ok = ok && c.is_zero();
            }
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = a + 1; b < m; ++b) {
                    auto fa = zs[a].full(), fb = zs[b].full();
                    for (std::size_t i = 0; i <= M; ++i) ok = ok && (fa.apply(fb[i]) - fb.apply(fa[i])).is_zero();
                }
        }
    report(10, "legendrian_product", ok, "m = 1, 2, 3 for two Legendrian fields");
}

void criterion_probe(const ContactRun& run) {
    auto t0 = Clock::now();
    auto mult = mu_multipliers(run.res.mu.mu);
    std::mt19937_64 rng(1111);
    std::uniform_real_distribution<double> rad(0.5, 1.0), ang(0, 2 * std::numbers::pi);
    double worst = 0;
    int longest = 0;
    for (int t = 0; t < 20; ++t) {
        CVector target(mult.front().size());
        for (auto& c : target) c = std::polar(rad(rng), ang(rng));
        auto p = subgroup_density_probe(mult, target, 60);
        worst = std::max(worst, p.error);
        longest = std::max(longest, p.length);
    }
    report(11, "subgroup_density_probe", worst < 0.01 && longest <= 60,
           fmt("max err %.4f", worst) + ", longest word " + std::to_string(longest) + fmt(", %.1f s", seconds_since(t0)));
}

}  // namespace

int main() {
    try {
        criterion_first_integrals();
        criterion_stokes();
        criterion_vanishing();
        criterion_lambda();
        auto t0 = Clock::now();
        ContactRun run{synthesize_Z(oracle::load("contact3.json")), 0};
        run.seconds = seconds_since(t0);
        criterion_certificates(run);
        criterion_holonomy(run);
        criterion_contraction(run);
        criterion_brackets();
        criterion_density(run);
        criterion_legendrian(run);
        criterion_probe(run);
    } catch (const std::exception& e) {
        std::printf("FAIL    aborted: %s\n", e.what());
        return 1;
    }
    return all_ok ? 0 : 1;
}
