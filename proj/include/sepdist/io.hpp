#pragma once

#include <sepdist/dynamics.hpp>

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace sepdist {

using nlohmann::json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace io_detail {

inline const json& at(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline Rational rational(const json& j) {
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw ParseError("rationals must be \"p/q\" strings");
}

inline long integer(const json& j, const char* what) {
    if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
    return j.get<long>();
}

inline const json& array(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    return j;
}

}  // namespace io_detail

inline json to_json(const ExactScalar& s) { return {{"re", to_string(s.re())}, {"im", to_string(s.im())}}; }

inline ExactScalar scalar_from_json(const json& j) {
    using namespace io_detail;
    return ExactScalar(rational(at(j, "re")), j.contains("im") ? rational(j.at("im")) : Rational(0));
}

inline json to_json(const ExactVector& v) {
    json a = json::array();
    for (auto& x : v) a.push_back(to_json(x));
    return a;
}

inline ExactVector vector_from_json(const json& j) {
    ExactVector v;
    for (auto& x : io_detail::array(j, "vector")) v.push_back(scalar_from_json(x));
    return v;
}

inline json to_json(const ExactMatrix& m) {
    json a = json::array();
    for (auto& r : m) a.push_back(to_json(r));
    return a;
}

inline ExactMatrix matrix_from_json(const json& j) {
    ExactMatrix m;
    for (auto& r : io_detail::array(j, "matrix")) m.push_back(vector_from_json(r));
    return m;
}

inline json to_json(const MultiIndex& k) { return k.data(); }

inline MultiIndex multi_index_from_json(const json& j, std::size_t n) {
    std::vector<int> v;
    for (auto& x : io_detail::array(j, "K")) v.push_back(int(io_detail::integer(x, "exponent")));
    if (v.size() != n) throw ParseError("exponent vector has wrong length");
    return MultiIndex(v);
}

/** @brief Polynomial as a list of {"re", "im", "K"} terms. */
inline json to_json(const SparsePoly& p) {
    json a = json::array();
    for (auto& [k, c] : p.terms()) {
        json t = to_json(c);
        t["K"] = to_json(k);
        a.push_back(t);
    }
    return a;
}

inline SparsePoly poly_from_json(const json& j, std::size_t nvars) {
    SparsePoly p(nvars);
    for (auto& t : io_detail::array(j, "polynomial")) p.add_term(multi_index_from_json(io_detail::at(t, "K"), nvars), scalar_from_json(t));
    return p;
}

inline json to_json(const PolyVectorField& x) {
    json a = json::array();
    for (auto& p : x.comps) a.push_back(to_json(p));
    return a;
}

inline PolyVectorField field_from_json(const json& j, std::size_t nvars) {
    std::vector<SparsePoly> c;
    for (auto& p : io_detail::array(j, "vector field")) c.push_back(poly_from_json(p, nvars));
    if (c.size() != nvars) throw ParseError("vector field has wrong arity");
    return PolyVectorField(std::move(c));
}

/** @brief {"M", "N", "omega": [[{"re", "im", "K", "dx"}]]}, dx counted from 1. */
inline json distribution_to_json(const SeparatedDistribution& d) {
    json omega = json::array();
    for (auto& w : d.omega) {
        json terms = json::array();
        for (std::size_t i = 0; i < d.M; ++i)
            for (auto& [k, c] : w[i].terms()) {
                json t = to_json(c);
                t["K"] = to_json(k);
                t["dx"] = i + 1;
                terms.push_back(t);
            }
        omega.push_back(terms);
    }
    return {{"M", d.M}, {"N", d.N}, {"omega", omega}};
}

inline SeparatedDistribution distribution_from_json(const json& j) {
    using namespace io_detail;
    long M = integer(at(j, "M"), "M"), N = integer(at(j, "N"), "N");
    if (M < 2 || N < 1) throw ParseError("need M >= 2 and N >= 1");
    const json& omega = array(at(j, "omega"), "omega");
    if (omega.size() != std::size_t(N)) throw ParseError("omega must list N forms");
    std::vector<OneForm> forms;
    for (auto& terms : omega) {
        OneForm w{std::size_t(M)};
        for (auto& t : array(terms, "form")) {
            long dx = integer(at(t, "dx"), "dx");
            if (dx < 1 || dx > M) throw ParseError("dx must lie in 1..M");
            MultiIndex k = multi_index_from_json(at(t, "K"), std::size_t(M));
            if (!k.nonnegative()) throw ParseError("exponents must be nonnegative");
            w[std::size_t(dx - 1)].add_term(k, scalar_from_json(t));
        }
        forms.push_back(std::move(w));
    }
    return SeparatedDistribution(std::size_t(M), std::move(forms));
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline json to_json(const DensityReport& r) {
    return {{"fraction", r.fraction}, {"cells_hit", r.cells_hit}, {"cells_total", r.cells_total},
            {"records", r.records},   {"dimension", r.dimension}, {"seconds", r.seconds}};
}

inline DensityReport density_from_json(const json& j) {
    using io_detail::at;
    DensityReport r;
    r.fraction = at(j, "fraction").get<double>();
    r.cells_hit = at(j, "cells_hit").get<std::size_t>();
    r.cells_total = at(j, "cells_total").get<std::size_t>();
    r.records = at(j, "records").get<std::size_t>();
    r.dimension = at(j, "dimension").get<std::size_t>();
    r.seconds = at(j, "seconds").get<double>();
    return r;
}

/**
 * @brief Output of analyze: kappa, W_D, the rows T and primitives g of H_D,
 * named checks and an optional density report.
 */
struct AnalysisReport {
    std::size_t M{0}, N{0};
    std::size_t kappa{0};
    std::vector<ExactVector> wd_basis;
    std::vector<ExactVector> T;
    std::vector<SparsePoly> g;
    std::vector<SparsePoly> H;
    std::map<std::string, bool> certificates;
    std::optional<DensityReport> density;
};

inline AnalysisReport analyze(const SeparatedDistribution& d) {
    auto fi = first_integrals(d);
    AnalysisReport r{d.M, d.N, fi.kappa, fi.wd_basis, fi.T, fi.g, fi.H, {}, std::nullopt};
    bool ok = true;
    for (auto& h : fi.H) ok = ok && is_first_integral(d, h, SparsePoly::constant(d.M + d.N, 1));
    r.certificates["first_integrals"] = ok;
    return r;
}

inline json to_json(const AnalysisReport& r) {
    json j{{"M", r.M}, {"N", r.N}, {"kappa", r.kappa}, {"wd_basis", to_json(r.wd_basis)}, {"T", to_json(r.T)}};
    json g = json::array(), h = json::array();
    for (auto& p : r.g) g.push_back(to_json(p));
    for (auto& p : r.H) h.push_back(to_json(p));
    j["g"] = g;
    j["H"] = h;
    j["certificates"] = r.certificates;
    if (r.density) j["density"] = to_json(*r.density);
    return j;
}

inline AnalysisReport report_from_json(const json& j) {
    using namespace io_detail;
    AnalysisReport r;
    r.M = std::size_t(integer(at(j, "M"), "M"));
    r.N = std::size_t(integer(at(j, "N"), "N"));
    r.kappa = std::size_t(integer(at(j, "kappa"), "kappa"));
    r.wd_basis = matrix_from_json(at(j, "wd_basis"));
    r.T = matrix_from_json(at(j, "T"));
    for (auto& p : array(at(j, "g"), "g")) r.g.push_back(poly_from_json(p, r.M));
    for (auto& p : array(at(j, "H"), "H")) r.H.push_back(poly_from_json(p, r.M + r.N));
    for (auto& [k, v] : at(j, "certificates").items()) r.certificates[k] = v.get<bool>();
    if (j.contains("density")) r.density = density_from_json(j.at("density"));
    return r;
}

inline json to_json(const Certificates& c) {
    return {{"truncation", c.truncation}, {"lambda_rank", c.lambda_rank}, {"minors", c.minors},
            {"j1", c.j1},                 {"nu_solves", c.nu_solves},     {"nu_nonzero", c.nu_nonzero},
            {"separation", c.separation}, {"linearization", c.linearization}, {"s_invariant", c.s_invariant},
            {"z_tangent", c.z_tangent}};
}

inline Certificates certificates_from_json(const json& j) {
    using io_detail::at;
    Certificates c;
    c.truncation = at(j, "truncation").get<bool>();
    c.lambda_rank = at(j, "lambda_rank").get<bool>();
    c.minors = at(j, "minors").get<bool>();
    c.j1 = at(j, "j1").get<bool>();
    c.nu_solves = at(j, "nu_solves").get<bool>();
    c.nu_nonzero = at(j, "nu_nonzero").get<bool>();
    c.separation = at(j, "separation").get<bool>();
    c.linearization = at(j, "linearization").get<bool>();
    c.s_invariant = at(j, "s_invariant").get<bool>();
    c.z_tangent = at(j, "z_tangent").get<bool>();
    return c;
}

inline json to_json(const SynthesisRecord& r) {
    json lambda = json::array();
    for (auto& m : r.lambda) lambda.push_back(to_json(m));
    json wit = json::array();
    for (auto& w : r.witnesses)
        wit.push_back({{"column", w.column == std::size_t(-1) ? -1L : long(w.column)}, {"theta", to_json(w.theta)}});
    json factors = json::array();
    for (auto& f : r.S_factors) factors.push_back(to_json(f));
    json zc = json::array();
    for (auto& p : r.Z.z) zc.push_back(to_json(p));
    return {{"distribution", distribution_to_json(r.d)},
            {"seed", r.seed},
            {"k", r.k},
            {"degree", r.degree},
            {"T", to_json(r.T)},
            {"lambda", lambda},
            {"mu", to_json(r.mu)},
            {"mu_approximated", r.mu_approximated},
            {"b", to_json(r.b)},
            {"b_certificate",
             {{"minors_ok", r.b_cert.minors_ok},
              {"minors_checked", r.b_cert.minors_checked},
              {"exhaustive", r.b_cert.exhaustive},
              {"j1_ok", r.b_cert.j1_ok},
              {"attempts", r.b_cert.attempts}}},
            {"nu", to_json(r.nu)},
            {"kernel", to_json(r.kernel)},
            {"s", to_string(r.s)},
            {"witnesses", wit},
            {"X", to_json(r.X)},
            {"S_factors", factors},
            {"S", to_json(r.S)},
            {"Z", {{"base", to_json(r.Z.base)}, {"z", zc}}},
            {"certificates", to_json(r.certs)},
            {"warnings", r.warnings}};
}

inline SynthesisRecord synthesis_from_json(const json& j) {
    using namespace io_detail;
    SynthesisRecord r;
    r.d = distribution_from_json(at(j, "distribution"));
    std::size_t M = r.d.M;
    r.seed = at(j, "seed").get<std::uint64_t>();
    r.k = int(integer(at(j, "k"), "k"));
    r.degree = int(integer(at(j, "degree"), "degree"));
    r.T = vector_from_json(at(j, "T"));
    for (auto& m : array(at(j, "lambda"), "lambda")) r.lambda.push_back(multi_index_from_json(m, M));
    r.mu = matrix_from_json(at(j, "mu"));
    r.mu_approximated = at(j, "mu_approximated").get<bool>();
    r.b = vector_from_json(at(j, "b"));
    const json& bc = at(j, "b_certificate");
    r.b_cert.minors_ok = at(bc, "minors_ok").get<bool>();
    r.b_cert.minors_checked = at(bc, "minors_checked").get<std::size_t>();
    r.b_cert.exhaustive = at(bc, "exhaustive").get<bool>();
    r.b_cert.j1_ok = at(bc, "j1_ok").get<bool>();
    r.b_cert.attempts = at(bc, "attempts").get<unsigned>();
    r.nu = matrix_from_json(at(j, "nu"));
    r.kernel = vector_from_json(at(j, "kernel"));
    r.s = rational(at(j, "s"));
    for (auto& w : array(at(j, "witnesses"), "witnesses")) {
        long c = integer(at(w, "column"), "column");
        r.witnesses.push_back({c < 0 ? std::size_t(-1) : std::size_t(c), scalar_from_json(at(w, "theta"))});
    }
    r.X = field_from_json(at(j, "X"), M);
    for (auto& f : array(at(j, "S_factors"), "S_factors")) r.S_factors.push_back(poly_from_json(f, M));
    r.S = poly_from_json(at(j, "S"), M);
    const json& z = at(j, "Z");
    r.Z.base = field_from_json(at(z, "base"), M);
    for (auto& p : array(at(z, "z"), "Z.z")) r.Z.z.push_back(poly_from_json(p, M));
    r.certs = certificates_from_json(at(j, "certificates"));
    for (auto& w : array(at(j, "warnings"), "warnings")) r.warnings.push_back(w.get<std::string>());
    return r;
}

/** @brief One line per record: word, then re/im of each endpoint coordinate, 17 significant digits. */
inline void write_returns_csv(std::ostream& os, const std::vector<ReturnRecord>& recs) {
    std::size_t n = recs.empty() ? 0 : recs.front().z.size();
    os << "word";
    for (std::size_t i = 0; i < n; ++i) os << ",re_z" << i + 1 << ",im_z" << i + 1;
    os << "\n" << std::setprecision(17);
    for (auto& r : recs) {
        std::string w;
        for (auto g : r.word) w += (w.empty() ? "" : " ") + std::to_string(g);
        os << w;
        for (auto& c : r.z) os << "," << c.real() << "," << c.imag();
        os << "\n";
    }
}

}  // namespace sepdist
