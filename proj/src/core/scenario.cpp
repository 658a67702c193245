#include "indef/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "indef/caratheodory.hpp"
#include "indef/entropy.hpp"
#include "indef/generator.hpp"
#include "indef/szego.hpp"

namespace indef {

using nlohmann::json;

namespace {

constexpr std::array<Experiment, 5> kExperimentOrder = {Experiment::IdentitySuite, Experiment::Interpolation,
                                                        Experiment::EntropyIdentity, Experiment::OuterCheck,
                                                        Experiment::Szego};

// ---- JSON conversions -----------------------------------------------------

json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    fail(ErrorCode::InvalidArgument, "scenario field '" + field + "': " + why);
}

cplx complex_from_json(const json& j, const std::string& field) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        bad_field(field, "expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

ComplexMatrix matrix_from_json(const json& j, int p, const std::string& field) {
    if (!j.is_array() || static_cast<int>(j.size()) != p) bad_field(field, "expected " + std::to_string(p) + " rows");
    ComplexMatrix m(p, p);
    for (int i = 0; i < p; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != p)
            bad_field(field, "row " + std::to_string(i) + " must have " + std::to_string(p) + " entries");
        for (int k = 0; k < p; ++k) m(i, k) = complex_from_json(j[i][k], field);
    }
    return m;
}

json parameter_to_json(const std::optional<Parameter>& param) {
    if (!param) return "psi_i";
    if (const auto* c = std::get_if<ContractionSpec>(&*param)) return json{{"contraction", {{"phi0", matrix_to_json(c->phi0)}}}};
    const auto& h = std::get<HerglotzSpec>(*param);
    json residues = json::array();
    for (const auto& r : h.residues) residues.push_back(matrix_to_json(r));
    return json{{"herglotz",
                 {{"B", matrix_to_json(h.B)},
                  {"C", matrix_to_json(h.C)},
                  {"D", matrix_to_json(h.imag_offset)},
                  {"poles", h.poles},
                  {"residues", residues}}}};
}

std::optional<Parameter> parameter_from_json(const json& j, int p) {
    if (j.is_string()) {
        if (j.get<std::string>() == "psi_i") return std::nullopt;
        bad_field("parameter", "unknown name " + j.get<std::string>());
    }
    if (j.contains("contraction")) {
        ContractionSpec c;
        c.phi0 = matrix_from_json(j["contraction"].at("phi0"), p, "parameter.contraction.phi0");
        return Parameter(c);
    }
    if (j.contains("herglotz")) {
        const json& h = j["herglotz"];
        HerglotzSpec psi;
        const ComplexMatrix zero = ComplexMatrix::Zero(p, p);
        psi.B = h.contains("B") ? matrix_from_json(h["B"], p, "parameter.herglotz.B") : zero;
        psi.C = h.contains("C") ? matrix_from_json(h["C"], p, "parameter.herglotz.C") : zero;
        psi.imag_offset = h.contains("D") ? matrix_from_json(h["D"], p, "parameter.herglotz.D") : zero;
        if (h.contains("poles")) psi.poles = h["poles"].get<std::vector<double>>();
        if (h.contains("residues"))
            for (const json& r : h["residues"]) psi.residues.push_back(matrix_from_json(r, p, "parameter.herglotz.residues"));
        if (psi.poles.size() != psi.residues.size()) bad_field("parameter.herglotz", "poles and residues differ in length");
        return Parameter(psi);
    }
    bad_field("parameter", "expected \"psi_i\", {\"herglotz\": ...} or {\"contraction\": ...}");
}

json tolerances_to_json(const Tolerances& t) {
    return json{{"displacement", t.displacement},
                {"j_unitarity", t.j_unitarity},
                {"frame_identity", t.frame_identity},
                {"interpolation", t.interpolation},
                {"entropy_identity", t.entropy_identity},
                {"contractive_agreement", t.contractive_agreement},
                {"outer", t.outer},
                {"bridge", t.bridge},
                {"exact_ratio", t.exact_ratio},
                {"quadrature", t.quadrature},
                {"conv", t.conv}};
}

Tolerances tolerances_from_json(const json& j) {
    Tolerances t;
    if (!j.is_object()) bad_field("tolerances", "expected an object");
    auto read = [&j](const char* key, double& slot) {
        if (!j.contains(key)) return;
        if (!j[key].is_number() || !(j[key].get<double>() > 0.0)) bad_field(std::string("tolerances.") + key, "must be positive");
        slot = j[key].get<double>();
    };
    read("displacement", t.displacement);
    read("j_unitarity", t.j_unitarity);
    read("frame_identity", t.frame_identity);
    read("interpolation", t.interpolation);
    read("entropy_identity", t.entropy_identity);
    read("contractive_agreement", t.contractive_agreement);
    read("outer", t.outer);
    read("bridge", t.bridge);
    read("exact_ratio", t.exact_ratio);
    read("quadrature", t.quadrature);
    read("conv", t.conv);
    for (const auto& item : j.items())
        if (!tolerances_to_json(Tolerances{}).contains(item.key())) bad_field("tolerances." + item.key(), "unknown tolerance");
    return t;
}


json scenario_to_json(const Scenario& s) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["p"] = s.p;
    j["n"] = s.n;
    if (s.instance) {
        json blocks = json::array();
        for (const auto& b : s.instance->blocks) blocks.push_back(matrix_to_json(b));
        j["instance"] = {{"explicit", {{"blocks", blocks}, {"nu", matrix_to_json(s.instance->nu)}}}};
    } else {
        j["instance"] = {{"generator", {{"kappa_target", s.kappa_target}, {"spectrum_margin", s.spectrum_margin}}}};
    }
    j["parameter"] = parameter_to_json(s.parameter);
    j["mode"] = s.contractive ? "contractive" : "pair";
    json experiments = json::array();
    for (Experiment e : s.experiments) experiments.push_back(std::string(experiment_name(e)));
    j["experiments"] = experiments;
    j["tolerances"] = tolerances_to_json(s.tolerances);
    j["i_max"] = s.i_max;
    j["extension_depth"] = s.extension_depth;
    j["identity_points"] = s.identity_points;
    j["unitarity_pairs"] = s.unitarity_pairs;
    j["condition_draws"] = s.condition_draws;
    json lt = json::array();
    for (cplx l : s.lambda_tilde) lt.push_back(complex_to_json(l));
    j["lambda_tilde"] = lt;
    j["output_dir"] = s.output_dir;
    return j;
}

int read_int(const json& j, const char* key, int fallback, int lo) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) bad_field(key, "expected an integer");
    const int v = j[key].get<int>();
    if (v < lo) bad_field(key, "must be at least " + std::to_string(lo));
    return v;
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) bad_field("<root>", "expected an object");
    if (!j.contains("schema_version") || j["schema_version"] != kSchemaVersion)
        bad_field("schema_version", "must be " + std::to_string(kSchemaVersion));
    Scenario s;
    if (j.contains("name")) s.name = j["name"].get<std::string>();
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) bad_field("seed", "expected a nonnegative integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    s.p = read_int(j, "p", s.p, 1);
    s.n = read_int(j, "n", s.n, 1);
    if (!j.contains("instance")) bad_field("instance", "missing");
    const json& inst = j["instance"];
    if (inst.contains("generator")) {
        const json& g = inst["generator"];
        s.kappa_target = read_int(g, "kappa_target", 0, 0);
        if (g.contains("spectrum_margin")) s.spectrum_margin = g["spectrum_margin"].get<double>();
        if (s.kappa_target > s.n * s.p - 1) bad_field("instance.generator.kappa_target", "must not exceed n p - 1");
    } else if (inst.contains("explicit")) {
        const json& e = inst["explicit"];
        ToeplitzSpec spec;
        spec.p = s.p;
        spec.n = s.n;
        if (!e.contains("blocks") || !e["blocks"].is_array() || static_cast<int>(e["blocks"].size()) != s.n)
            bad_field("instance.explicit.blocks", "expected n blocks");
        for (const json& b : e["blocks"]) spec.blocks.push_back(matrix_from_json(b, s.p, "instance.explicit.blocks"));
        spec.nu = e.contains("nu") ? matrix_from_json(e["nu"], s.p, "instance.explicit.nu") : ComplexMatrix::Zero(s.p, s.p);
        s.instance = spec;
    } else {
        bad_field("instance", "expected {\"generator\": ...} or {\"explicit\": ...}");
    }
    if (j.contains("parameter")) s.parameter = parameter_from_json(j["parameter"], s.p);
    if (j.contains("mode")) {
        const std::string mode = j["mode"].get<std::string>();
        if (mode != "pair" && mode != "contractive") bad_field("mode", "expected \"pair\" or \"contractive\"");
        s.contractive = mode == "contractive";
    }
    if (!j.contains("experiments") || !j["experiments"].is_array() || j["experiments"].empty())
        bad_field("experiments", "must be a nonempty list");
    std::set<Experiment> seen;
    for (const json& e : j["experiments"]) seen.insert(parse_experiment(e.get<std::string>()));
    for (Experiment e : kExperimentOrder)
        if (seen.count(e)) s.experiments.push_back(e);
    if (j.contains("tolerances")) s.tolerances = tolerances_from_json(j["tolerances"]);
    s.i_max = read_int(j, "i_max", s.i_max, 1);
    s.extension_depth = read_int(j, "extension_depth", s.extension_depth, 0);
    s.identity_points = read_int(j, "identity_points", s.identity_points, 1);
    s.unitarity_pairs = read_int(j, "unitarity_pairs", s.unitarity_pairs, 1);
    s.condition_draws = read_int(j, "condition_draws", s.condition_draws, 1);
    if (j.contains("lambda_tilde")) {
        s.lambda_tilde.clear();
        for (const json& l : j["lambda_tilde"]) {
            const cplx v = complex_from_json(l, "lambda_tilde");
            if (std::abs(v) >= 1.0 - kBoundaryBand) bad_field("lambda_tilde", "points must lie inside the disk");
            s.lambda_tilde.push_back(v);
        }
    }
    if (s.i_max < s.n) bad_field("i_max", "must be at least n");
    if (j.contains("output_dir")) s.output_dir = j["output_dir"].get<std::string>();
    return s;
}

// ---- output helpers -------------------------------------------------------

std::string number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class Csv {
public:
    explicit Csv(std::initializer_list<std::string> header) { row_strings(header); }

    void row_strings(std::initializer_list<std::string> cells) {
        bool first = true;
        for (const auto& c : cells) {
            if (!first) text_ += ',';
            text_ += c;
            first = false;
        }
        text_ += '\n';
    }

    const std::string& text() const { return text_; }

private:
    std::string text_;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    out << text;
    if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

json error_json(const Error& e) {
    return json{{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}};
}

// std::max would drop a NaN residual and let the check pass.
double nan_max(double a, double b) { return std::isnan(a) || std::isnan(b) ? NAN : std::max(a, b); }

json check(double value, double tolerance) {
    return json{{"value", value}, {"tolerance", tolerance}, {"passed", std::isfinite(value) && value <= tolerance}};
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

ComplexMatrix random_hermitian(PortableRng& rng, int p) {
    ComplexMatrix m(p, p);
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < p; ++k) m(i, k) = rng.complex_normal();
    return 0.5 * (m + m.adjoint());
}

cplx random_disk_point(PortableRng& rng, double radius) {
    const double r = radius * std::sqrt(rng.uniform());
    return std::polar(r, 2.0 * kPi * rng.uniform());
}

// ---- the run --------------------------------------------------------------

struct Context {
    const Scenario& sc;
    std::filesystem::path out;
    ToeplitzSpec spec;
    std::shared_ptr<const StructuredTriple> triple;
    Parameter param;
    std::optional<SolutionHandle> handle;
    std::optional<TaylorSeries> series;
    bool cache_hit = false;
    QuadratureOptions quadrature;
};

int extension_order(const Scenario& sc) { return std::max(sc.n + sc.extension_depth, sc.i_max); }

std::string cache_key(const Context& ctx) {
    json key;
    json blocks = json::array();
    for (const auto& b : ctx.spec.blocks) blocks.push_back(matrix_to_json(b));
    key["blocks"] = blocks;
    key["nu"] = matrix_to_json(ctx.spec.nu);
    key["parameter"] = parameter_to_json(ctx.sc.parameter);
    key["mode"] = ctx.sc.contractive ? "contractive" : "pair";
    key["order"] = extension_order(ctx.sc);
    key["version"] = std::string(library_version());
    return key.dump();
}

std::filesystem::path cache_path(const Context& ctx, const std::string& key) {
    char name[40];
    std::snprintf(name, sizeof(name), "extension-%016llx.json", static_cast<unsigned long long>(fnv1a(key)));
    return ctx.out / ".cache" / name;
}

std::optional<TaylorSeries> load_cached_series(const Context& ctx, int p) {
    const std::string key = cache_key(ctx);
    std::ifstream in(cache_path(ctx, key), std::ios::binary);
    if (!in) return std::nullopt;
    try {
        const json j = json::parse(in);
        if (j.at("key").get<std::string>() != key) return std::nullopt;
        TaylorSeries s;
        s.radius = j.at("radius").get<double>();
        s.confirmation_radius = j.at("confirmation_radius").get<double>();
        s.nodes = j.at("nodes").get<int>();
        s.error_estimate = j.at("error_estimate").get<double>();
        for (const json& c : j.at("coeffs")) s.coeffs.push_back(matrix_from_json(c, p, "cache.coeffs"));
        return s;
    } catch (const std::exception&) {
        return std::nullopt;  // stale or damaged cache: recompute
    }
}

void store_cached_series(const Context& ctx, const TaylorSeries& s) {
    const std::string key = cache_key(ctx);
    json j;
    j["key"] = key;
    j["radius"] = s.radius;
    j["confirmation_radius"] = s.confirmation_radius;
    j["nodes"] = s.nodes;
    j["error_estimate"] = s.error_estimate;
    json coeffs = json::array();
    for (const auto& c : s.coeffs) coeffs.push_back(matrix_to_json(c));
    j["coeffs"] = coeffs;
    std::error_code ec;
    std::filesystem::create_directories(ctx.out / ".cache", ec);
    if (ec) fail(ErrorCode::Io, "cannot create cache directory: " + ec.message());
    write_file(cache_path(ctx, key), j.dump());
}

const TaylorSeries& extension_series(Context& ctx) {
    if (ctx.series) return *ctx.series;
    if (auto cached = load_cached_series(ctx, ctx.spec.p)) {
        ctx.series = std::move(cached);
        ctx.cache_hit = true;
        return *ctx.series;
    }
    ctx.series = taylor_coefficients_auto(*ctx.handle, extension_order(ctx.sc));
    store_cached_series(ctx, *ctx.series);
    return *ctx.series;
}

json run_identity_suite(Context& ctx, std::string& csv_text) {
    const Scenario& sc = ctx.sc;
    const Tolerances& tol = sc.tolerances;
    const StructuredTriple& t = *ctx.triple;
    const int p = t.p();
    const int n = t.n();
    PortableRng rng(sc.seed ^ 0x5bd1e9955bd1e995ULL);
    json r;

    r["displacement"] = check(t.displacement_residual(), tol.displacement);

    double unitarity = 0.0;
    for (int k = 0; k < sc.unitarity_pairs; ++k) {
        const cplx z(-3.0 + 6.0 * rng.uniform(), 0.05 + 3.95 * rng.uniform());
        unitarity = nan_max(unitarity, j_unitarity_residual(t, z));
    }
    r["j_unitarity"] = check(unitarity, tol.j_unitarity);

    int agree = 0;
    int admissible = 0;
    for (int k = 0; k < sc.condition_draws; ++k) {
        const ComplexMatrix c = random_hermitian(rng, p);
        const ComplexMatrix g = random_hermitian(rng, p);
        const ComplexMatrix d = g * g / p + 0.05 * identity(p);
        try {
            const DegeneracyReport rep = degeneracy_conditions(t, Parameter(HerglotzSpec::constant(c + kI * d)));
            if (rep.row_condition == rep.frame_condition) ++agree;
            if (rep.admissible()) ++admissible;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InconsistentConditions) throw;
        }
    }
    r["conditions"] = {{"draws", sc.condition_draws},
                       {"agreements", agree},
                       {"admissible", admissible},
                       {"passed", agree == sc.condition_draws}};

    double shifted_det = 0.0;
    double resolvent = 0.0;
    for (int k = 0; k < sc.identity_points; ++k) {
        const cplx lambda = random_disk_point(rng, 0.95);
        const cplx closed = shifted_adjoint_det_closed_form(p, n, lambda);
        shifted_det = nan_max(shifted_det, std::abs(shifted_adjoint_det(t, lambda) - closed) / std::abs(closed));
        const cplx z = cayley(lambda);
        try {
            const ComplexMatrix closed_col = resolvent_closed_form(p, n, z);
            resolvent = nan_max(resolvent, (resolvent_column(t, z) - closed_col).norm() / closed_col.norm());
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Internal) throw;
            resolvent = std::numeric_limits<double>::infinity();
        }
    }
    r["shifted_adjoint_det"] = check(shifted_det, tol.frame_identity);
    r["resolvent"] = check(resolvent, tol.frame_identity);

    const DiskZeros zeros = q_tilde_zeros(*ctx.handle);
    r["zero_bound"] = {{"distinct", zeros.distinct_count},
                       {"total", zeros.total_count},
                       {"bound", t.kappa() + 1},
                       {"boundary_band", zeros.boundary_band_count},
                       {"passed", zeros.distinct_count <= t.kappa() + 1 && zeros.boundary_band_count == 0}};

    Csv csv({"check", "value", "tolerance", "passed"});
    for (const char* name : {"displacement", "j_unitarity", "shifted_adjoint_det", "resolvent"})
        csv.row_strings({name, number(r[name]["value"].get<double>()), number(r[name]["tolerance"].get<double>()),
                         r[name]["passed"].get<bool>() ? "1" : "0"});
    csv.row_strings({"conditions", std::to_string(agree), std::to_string(sc.condition_draws),
                     r["conditions"]["passed"].get<bool>() ? "1" : "0"});
    csv.row_strings({"zero_bound", std::to_string(zeros.distinct_count), std::to_string(t.kappa() + 1),
                     r["zero_bound"]["passed"].get<bool>() ? "1" : "0"});
    csv_text = csv.text();

    bool ok = true;
    for (const auto& item : r.items()) ok = ok && item.value()["passed"].get<bool>();
    r["passed"] = ok;
    return r;
}

json run_interpolation(Context& ctx, std::string& csv_text) {
    const Scenario& sc = ctx.sc;
    const TaylorSeries& series = extension_series(ctx);
    const ExtensionReport rep = verify_extension(ctx.spec, series, sc.extension_depth, ctx.triple->kappa());
    json r;
    double worst = 0.0;
    for (double m : rep.match_residuals) worst = nan_max(worst, m);
    r["coefficient_match"] = check(worst, sc.tolerances.interpolation);
    r["extraction_radius"] = rep.extraction_radius;
    r["extraction_error"] = rep.extraction_error;
    r["sizes"] = rep.sizes;
    r["kappas"] = rep.kappas;
    r["expected_kappa"] = rep.expected_kappa;
    r["stopped_early"] = rep.stopped_early;
    if (rep.stopped_early) r["stop_reason"] = rep.stop_reason;
    bool kappas_ok = static_cast<int>(rep.kappas.size()) == sc.extension_depth + 1;
    for (int k : rep.kappas) kappas_ok = kappas_ok && k == rep.expected_kappa;
    r["negative_index_preserved"] = kappas_ok;
    r["passed"] = kappas_ok && r["coefficient_match"]["passed"].get<bool>();

    Csv csv({"i", "re_lambda", "im_lambda", "kappa"});
    for (std::size_t k = 0; k < rep.sizes.size(); ++k) {
        const cplx v = rep.dets[k].value();
        csv.row_strings({std::to_string(rep.sizes[k]), number(v.real()), number(v.imag()), std::to_string(rep.kappas[k])});
    }
    csv_text = csv.text();
    return r;
}

json zeros_json(const DiskZeros& z) {
    json list = json::array();
    for (const auto& d : z.zeros)
        list.push_back({{"lambda", complex_to_json(d.lambda)}, {"multiplicity", d.multiplicity}, {"residual", d.residual}});
    return json{{"zeros", list},
                {"total", z.total_count},
                {"distinct", z.distinct_count},
                {"search_radius", z.search_radius},
                {"boundary_band", z.boundary_band_count}};
}

json run_entropy_identity(Context& ctx, Csv& csv) {
    const Scenario& sc = ctx.sc;
    const SolutionHandle pair(ctx.triple, ctx.param, SolutionMode::Pair);
    const SolutionHandle contr(ctx.triple, ctx.param, SolutionMode::Contractive);
    const DiskZeros zt = q_tilde_zeros(pair);
    const DiskZeros zh = q_hat_zeros(contr);
    json r;
    r["zeros_q_tilde"] = zeros_json(zt);
    r["zeros_q_hat"] = zeros_json(zh);
    json points = json::array();
    bool ok = true;
    for (cplx lt : sc.lambda_tilde) {
        const EntropyIdentityReport e = entropy_identity_check(pair, lt, zt, zh, ctx.quadrature);
        json pt;
        pt["lambda_tilde"] = complex_to_json(lt);
        pt["e_star_phi"] = e.e_star_phi;
        pt["e_star_psi"] = e.e_star_psi;
        pt["ln_q_tilde"] = e.ln_q_tilde;
        pt["ln_b_tilde"] = e.ln_b_tilde;
        pt["e_phi_hat"] = e.e_phi_hat;
        pt["e_hat"] = e.e_hat;
        pt["ln_q_hat"] = e.ln_q_hat;
        pt["ln_b_hat"] = e.ln_b_hat;
        pt["quadrature_error"] = e.quadrature_error;
        pt["pair"] = check(e.residual_pair, sc.tolerances.entropy_identity);
        pt["contractive"] = check(e.residual_contractive, sc.tolerances.entropy_identity);
        pt["agreement"] = check(e.agreement, sc.tolerances.contractive_agreement);
        for (const char* q : {"pair", "contractive", "agreement"}) {
            ok = ok && pt[q]["passed"].get<bool>();
            csv.row_strings({"entropy_identity", number(lt.real()), number(lt.imag()), q, number(pt[q]["value"].get<double>()),
                             number(pt[q]["tolerance"].get<double>()), pt[q]["passed"].get<bool>() ? "1" : "0"});
        }
        points.push_back(pt);
    }
    r["points"] = points;
    r["passed"] = ok;
    return r;
}

json run_outer_check(Context& ctx, Csv& csv) {
    const Scenario& sc = ctx.sc;
    const SolutionHandle pair(ctx.triple, ctx.param, SolutionMode::Pair);
    const DiskZeros zt = q_tilde_zeros(pair);
    auto q = [&pair](cplx l) { return q_tilde(pair, l); };
    json points = json::array();
    bool ok = true;
    for (cplx lt : sc.lambda_tilde) {
        const OuterCheck o = outer_poisson_check(q, zt, lt, ctx.quadrature);
        json pt;
        pt["lambda_tilde"] = complex_to_json(lt);
        pt["direct"] = o.direct;
        pt["poisson"] = o.poisson;
        pt["residual"] = check(o.residual, sc.tolerances.outer);
        ok = ok && pt["residual"]["passed"].get<bool>();
        csv.row_strings({"outer_check", number(lt.real()), number(lt.imag()), "residual", number(o.residual),
                         number(sc.tolerances.outer), pt["residual"]["passed"].get<bool>() ? "1" : "0"});
        points.push_back(pt);
    }
    return json{{"points", points}, {"passed", ok}};
}

json run_szego(Context& ctx, std::string& csv_text) {
    const Scenario& sc = ctx.sc;
    const Tolerances& tol = sc.tolerances;
    const ToeplitzSpec ext = build_extension(ctx.spec, extension_series(ctx), extension_order(sc));
    SzegoOptions options;
    options.tol_conv = tol.conv;
    options.quadrature = ctx.quadrature;
    const SzegoReport rep = szego_experiment(ctx.spec, ext, *ctx.handle, sc.i_max, options);
    const SzegoPrediction& pr = rep.prediction;

    json r;
    r["kappa"] = rep.kappa;
    r["i_max"] = rep.i_max;
    r["checkpoints"] = rep.checkpoints;
    json cp_errors = json::array();
    for (int c : rep.checkpoints) cp_errors.push_back(rep.relative_errors[c - 1]);
    r["checkpoint_errors"] = cp_errors;
    r["noise_floors"] = rep.noise_floors;
    r["final_error"] = check(rep.relative_errors.empty() ? NAN : rep.relative_errors.back(), tol.conv);
    r["monotone"] = rep.monotone;
    r["converged"] = rep.converged;
    r["sign_pattern"] = rep.sign_pattern;
    r["truncated"] = rep.truncated;
    if (rep.truncated) r["truncation_reason"] = rep.truncation_reason;
    r["max_ratio_imag"] = rep.max_ratio_imag;
    // Sections with cond(S(i)) eps above the tolerance are held to their
    // roundoff level instead.
    r["bridge"] = {{"value", rep.bridge.max_residual},
                   {"tolerance", tol.bridge},
                   {"roundoff_limited", rep.bridge.roundoff_limited(tol.bridge)},
                   {"passed", rep.bridge.passes(tol.bridge)}};
    r["bridge_skipped"] = rep.bridge.skipped;
    r["zeros"] = zeros_json(rep.zeros);
    r["prediction"] = {{"e_star_phi", pr.e_star_phi},
                       {"e_star_psi", pr.e_star_psi},
                       {"q_tilde_zero", complex_to_json(pr.q_tilde_zero)},
                       {"blaschke_correction", pr.blaschke_correction},
                       {"classical", pr.classical},
                       {"nonclassical", pr.nonclassical},
                       {"via_q_tilde", pr.via_q_tilde},
                       {"integral_form", pr.integral_form},
                       {"classical_symbol", pr.classical_symbol}};
    r["forms_agreement"] = check(pr.forms_agreement, tol.entropy_identity);
    const double via_q = std::abs(pr.via_q_tilde - pr.nonclassical) / pr.nonclassical;
    r["via_q_tilde_agreement"] = check(via_q, tol.entropy_identity);
    bool correction_ok;
    if (rep.kappa == 0) {
        const double classical = std::abs(pr.nonclassical - pr.classical_symbol) / pr.nonclassical;
        r["classical_agreement"] = check(classical, tol.entropy_identity);
        correction_ok = pr.blaschke_correction == 1.0 && r["classical_agreement"]["passed"].get<bool>();
    } else {
        correction_ok = pr.blaschke_correction > 1.0;
    }
    r["correction_consistent"] = correction_ok;

    // Toeplitz data of the parameter alone: exact ratios when psi is constant.
    const HerglotzSpec& psi = ctx.handle->herglotz();
    bool parameter_ok = true;
    if (psi.is_constant()) {
        const ToeplitzSpec breve = parameter_toeplitz(psi, sc.i_max);
        const DeterminantSequence seq = determinant_sequence(breve, sc.i_max);
        double worst = seq.truncated ? std::numeric_limits<double>::infinity() : 0.0;
        for (cplx v : seq.ratios()) worst = nan_max(worst, std::abs(v - pr.classical) / pr.classical);
        r["parameter_ratios"] = check(worst, tol.exact_ratio);
        parameter_ok = r["parameter_ratios"]["passed"].get<bool>();
    } else {
        r["parameter_ratios"] = "not applicable: psi is not constant";
    }

    r["passed"] = rep.converged && rep.sign_pattern && correction_ok && parameter_ok &&
                  r["bridge"]["passed"].get<bool>() && r["forms_agreement"]["passed"].get<bool>() &&
                  r["via_q_tilde_agreement"]["passed"].get<bool>();

    Csv csv({"i", "ratio", "predicted_nonclassical", "rel_error"});
    for (std::size_t k = 0; k < rep.ratios.size(); ++k)
        csv.row_strings({std::to_string(rep.sizes[k]), number(rep.ratios[k]), number(pr.nonclassical),
                         number(rep.relative_errors[k])});
    csv_text = csv.text();
    return r;
}

}  // namespace

std::string_view experiment_name(Experiment e) {
    switch (e) {
        case Experiment::IdentitySuite: return "identity_suite";
        case Experiment::Interpolation: return "interpolation";
        case Experiment::EntropyIdentity: return "entropy_identity";
        case Experiment::OuterCheck: return "outer_check";
        case Experiment::Szego: return "szego";
    }
    return "unknown";
}

Experiment parse_experiment(std::string_view name) {
    for (Experiment e : kExperimentOrder)
        if (experiment_name(e) == name) return e;
    bad_field("experiments", "unknown experiment " + std::string(name));
}

void set_tolerance(Tolerances& t, std::string_view key, double value) {
    json j = tolerances_to_json(t);
    if (!j.contains(std::string(key))) bad_field("tolerances." + std::string(key), "unknown tolerance");
    j[std::string(key)] = value;
    t = tolerances_from_json(j);
}

std::string_view library_version() { return INDEF_VERSION; }

Scenario parse_scenario(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("scenario is not valid JSON: ") + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("scenario has a malformed field: ") + e.what());
    }
}

std::string dump_scenario(const Scenario& scenario) { return scenario_to_json(scenario).dump(2) + "\n"; }

Scenario generated_scenario(std::uint64_t seed, int p, int n, int kappa_target) {
    Scenario s;
    s.name = "generated-seed-" + std::to_string(seed);
    s.seed = seed;
    s.p = p;
    s.n = n;
    s.kappa_target = kappa_target;
    s.experiments.assign(kExperimentOrder.begin(), kExperimentOrder.end());
    return s;
}

RunResult run_scenario(const Scenario& sc, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create " + out_dir.string() + ": " + ec.message());

    Context ctx{sc, out_dir, {}, nullptr, Parameter(HerglotzSpec::constant(kI * identity(sc.p))), std::nullopt,
                std::nullopt, false, {}};
    ctx.quadrature.tolerance = sc.tolerances.quadrature;

    json report;
    report["schema_version"] = kSchemaVersion;
    report["version"] = std::string(library_version());
    report["scenario"] = scenario_to_json(sc);
    report["tolerances"] = tolerances_to_json(sc.tolerances);

    bool instance_ok = true;
    try {
        if (sc.instance) {
            ctx.spec = *sc.instance;
        } else {
            GeneratorOptions g;
            g.spectrum_margin = sc.spectrum_margin;
            const GeneratedInstance gen = generate_instance(sc.seed, sc.p, sc.n, sc.kappa_target, g);
            ctx.spec = gen.spec;
            report["instance"]["attempts"] = gen.attempts;
        }
        if (sc.parameter) ctx.param = *sc.parameter;
        ctx.triple = std::make_shared<const StructuredTriple>(ctx.spec);
        ctx.handle.emplace(ctx.triple, ctx.param, sc.contractive ? SolutionMode::Contractive : SolutionMode::Pair);
        const InertiaSummary in = inertia(ctx.triple->S());
        report["instance"]["kappa"] = ctx.triple->kappa();
        report["instance"]["min_abs_eigenvalue"] = in.min_abs;
        report["instance"]["max_abs_eigenvalue"] = in.norm;
        json blocks = json::array();
        for (const auto& b : ctx.spec.blocks) blocks.push_back(matrix_to_json(b));
        report["instance"]["blocks"] = blocks;
        report["instance"]["nu"] = matrix_to_json(ctx.spec.nu);
        const DegeneracyReport& cond = ctx.handle->conditions();
        report["instance"]["det_row_condition"] = complex_to_json(cond.det_row_condition);
        report["instance"]["det_frame_condition"] = complex_to_json(cond.det_frame_condition);
    } catch (const Error& e) {
        instance_ok = false;
        report["instance"]["error"] = error_json(e);
    }

    RunResult result;
    bool all = instance_ok;
    Csv entropy_csv({"experiment", "lambda_re", "lambda_im", "quantity", "value", "tolerance", "passed"});
    bool entropy_rows = false;
    for (Experiment e : sc.experiments) {
        const std::string name(experiment_name(e));
        if (!instance_ok) {
            report["experiments"][name] = {{"passed", false}, {"skipped", "instance unavailable"}};
            continue;
        }
        std::string csv_text;
        std::string csv_name;
        json r;
        try {
            switch (e) {
                case Experiment::IdentitySuite:
                    r = run_identity_suite(ctx, csv_text);
                    csv_name = "identity_suite.csv";
                    break;
                case Experiment::Interpolation:
                    r = run_interpolation(ctx, csv_text);
                    csv_name = "interpolation.csv";
                    break;
                case Experiment::EntropyIdentity:
                    r = run_entropy_identity(ctx, entropy_csv);
                    entropy_rows = true;
                    break;
                case Experiment::OuterCheck:
                    r = run_outer_check(ctx, entropy_csv);
                    entropy_rows = true;
                    break;
                case Experiment::Szego:
                    r = run_szego(ctx, csv_text);
                    csv_name = "szego.csv";
                    break;
            }
        } catch (const Error& err) {
            if (err.code() == ErrorCode::Io) throw;
            r = {{"passed", false}, {"error", error_json(err)}};
            csv_name.clear();
        }
        all = all && r["passed"].get<bool>();
        report["experiments"][name] = r;
        if (!csv_name.empty()) {
            write_file(out_dir / csv_name, csv_text);
            result.files.push_back(out_dir / csv_name);
        }
    }
    if (entropy_rows) {
        write_file(out_dir / "entropy.csv", entropy_csv.text());
        result.files.push_back(out_dir / "entropy.csv");
    }
    report["passed"] = all;
    result.passed = all;
    result.cache_hit = ctx.cache_hit;
    result.report_json = report.dump(2) + "\n";
    write_file(out_dir / "report.json", result.report_json);
    result.files.insert(result.files.begin(), out_dir / "report.json");
    return result;
}

}  // namespace indef
