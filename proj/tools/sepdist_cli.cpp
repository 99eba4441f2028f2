// Command line front end: analyze, synthesize, simulate, verify.

#include <sepdist/io.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace sepdist;

namespace {

enum Exit { kOk = 0, kParse = 2, kSynthesis = 3, kGuard = 4, kVerify = 5 };

void emit(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << j.dump(2) << "\n";
}

int cmd_analyze(const std::string& path, const std::string& out) {
    auto d = distribution_from_json(read_json_file(path));
    emit(to_json(analyze(d)), out);
    return kOk;
}

int cmd_synthesize(const std::string& path, std::uint64_t seed, std::optional<int> k, const std::string& out) {
    auto d = distribution_from_json(read_json_file(path));
    SynthesisOptions opt;
    opt.seed = seed;
    opt.k = k;
    auto res = synthesize_Z(d, opt);
    for (auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    emit(to_json(record_of(res, seed)), out);
    return res.certs.all() ? kOk : kSynthesis;
}

int cmd_simulate(const std::string& path, const std::string& result_path, std::size_t budget, double eps, double tol,
                 double radius, const std::string& out) {
    auto d = distribution_from_json(read_json_file(path));
    auto rec = synthesis_from_json(read_json_file(result_path));
    if (distribution_to_json(d) != distribution_to_json(rec.d))
        throw ParseError("the synthesis result was computed for another distribution");
    SimConfig cfg;
    cfg.budget = budget;
    cfg.eps = eps;
    cfg.radius = radius;
    cfg.tol.abs = tol;
    FoliationY y = build_Y(rec.b, rec.nu);
    cfg.p = default_base_point(rec.S_factors, d.M);
    auto gens = leaf_generators(d, y, rec.lambda, cfg.p);
    auto run = accumulate_returns(d, gens, cfg);
    auto rep = density_report(d, run.records, cfg);
    json j = to_json(rep);
    j["guard_skipped"] = run.guard_skipped;
    j["generators"] = gens.size();
    j["max_residual"] = run.max_residual;
    emit(j, out);
    std::string csv = out.empty() ? std::string() : std::filesystem::path(out).replace_extension(".csv").string();
    if (!csv.empty()) {
        std::ofstream f(csv);
        write_returns_csv(f, run.records);
    } else {
        write_returns_csv(std::cerr, run.records);
    }
    if (run.records.size() <= 1 && run.guard_skipped > 0) return kGuard;
    return kOk;
}

int report_checks(const std::vector<CheckResult>& checks) {
    bool ok = true;
    for (auto& c : checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
        ok = ok && c.pass;
    }
    return ok ? kOk : kVerify;
}

std::vector<CheckResult> distribution_checks(const SeparatedDistribution& d) {
    std::vector<CheckResult> out;
    auto rep = analyze(d);
    out.push_back({"first_integrals", rep.certificates["first_integrals"], "kappa = " + std::to_string(rep.kappa)});
    bool lifts = true;
    for (std::size_t i = 0; i < d.M; ++i) {
        PolyVectorField e(std::vector<SparsePoly>(d.M, SparsePoly(d.M)));
        e.comps[i] = SparsePoly::constant(d.M, 1);
        lifts = lifts && is_tangent(d, lift_vector_field(d, e));
    }
    out.push_back({"lift_tangency", lifts, {}});
    int depth = std::max(1, d.max_degree());
    out.push_back({"bracket_span", same_span(bracket_span(d, depth), rep.wd_basis), {}});
    json j = to_json(rep);
    out.push_back({"report_round_trip", to_json(report_from_json(j)) == j, {}});
    json dj = distribution_to_json(d);
    out.push_back({"distribution_round_trip", distribution_to_json(distribution_from_json(dj)) == dj, {}});
    return out;
}

int cmd_verify(const std::string& path) {
    json j = read_json_file(path);
    if (j.contains("distribution")) {
        auto rec = synthesis_from_json(j);
        auto checks = recheck(rec);
        checks.push_back({"round_trip", to_json(synthesis_from_json(to_json(rec))) == to_json(rec), {}});
        return report_checks(checks);
    }
    return report_checks(distribution_checks(distribution_from_json(j)));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Separated-variable distributions: first integrals, synthesis of Legendrian fields, returns"};
    app.require_subcommand(1);
    std::string path, result_path, out;
    std::uint64_t seed = 1;
    int k = 0;
    std::size_t budget = 10000;
    double eps = 0.05, tol = 1e-12, radius = 0.2;

    auto* an = app.add_subcommand("analyze", "kappa, W_D and H_D of a distribution");
    an->add_option("path", path, "distribution JSON")->required();
    an->add_option("--out", out, "output file");

    auto* sy = app.add_subcommand("synthesize", "Legendrian field Z with certificates");
    sy->add_option("path", path, "distribution JSON")->required();
    sy->add_option("--seed", seed, "pole sampling seed");
    auto* kopt = sy->add_option("--k", k, "tangency order, default d + 1")->check(CLI::PositiveNumber);
    sy->add_option("--out", out, "output file");

    auto* si = app.add_subcommand("simulate", "returns of leaf loops and grid coverage");
    si->add_option("path", path, "distribution JSON")->required();
    si->add_option("result", result_path, "synthesis result JSON")->required();
    si->add_option("--budget", budget, "number of return records")->check(CLI::PositiveNumber);
    si->add_option("--eps", eps, "grid resolution")->check(CLI::PositiveNumber);
    si->add_option("--tol", tol, "integrator absolute tolerance")->check(CLI::PositiveNumber);
    si->add_option("--radius", radius, "fiber disc radius")->check(CLI::PositiveNumber);
    si->add_option("--out", out, "report JSON; the CSV goes next to it");

    auto* ve = app.add_subcommand("verify", "recheck a distribution or a synthesis result");
    ve->add_option("path", path, "distribution or synthesis result JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kParse;
    }

    try {
        if (an->parsed()) return cmd_analyze(path, out);
        if (sy->parsed()) return cmd_synthesize(path, seed, kopt->count() ? std::optional<int>(k) : std::nullopt, out);
        if (si->parsed()) return cmd_simulate(path, result_path, budget, eps, tol, radius, out);
        if (ve->parsed()) return cmd_verify(path);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const SynthesisError& e) {
        std::cerr << "synthesis failed at " << e.stage << ": " << e.what() << "\n";
        return kSynthesis;
    } catch (const GuardViolation& e) {
        std::cerr << "guard violation: " << e.what() << "\n";
        return kGuard;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kParse;
    }
    return kOk;
}
