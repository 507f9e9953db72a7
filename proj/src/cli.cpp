#include "polylearn/cli.hpp"

#include "polylearn/datagen.hpp"
#include "polylearn/geometry.hpp"
#include "polylearn/kolp.hpp"
#include "polylearn/learner.hpp"
#include "polylearn/matrix_io.hpp"
#include "polylearn/oracles.hpp"
#include "polylearn/random.hpp"
#include "polylearn/rsh.hpp"
#include "polylearn/softhull.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace polylearn::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json columns_json(const PointMatrix& W) {
    json a = json::array();
    for (std::size_t j = 0; j < W.count(); ++j) a.push_back(to_json(W.col(j)));
    return a;
}

json hypotheses_json(const std::vector<learner::Hypothesis>& hs) {
    json a = json::array();
    for (const auto& h : hs) a.push_back({{"name", h.name}, {"held", h.held}, {"detail", h.detail}});
    return a;
}

json constants_json(const TheoryConstants& c) {
    return {{"c", c.c}, {"cprime", c.c_prime}, {"c0", c.c0}};
}

// Infinite or NaN values serialize as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Options {
    std::uint64_t seed = 0;
    std::string out;
    std::string constants_spec;
    std::size_t threads = 1;

    // gen
    std::string kind = "two-gaussian";
    std::size_t d = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    double w0 = 0.1;
    double noise = 1.0;
    double v_norm = 10.0;
    double delta_target = 0.5;
    double scale = 1.0;
    double cluster_spread = 0.0;

    // fixtures
    std::size_t sphere_k = 16;

    // algorithm inputs
    std::string vertices;
    std::string point;
    std::string points;
    std::string data;
    std::string truth;
    std::string manifest;
    std::string instance_dir;
    std::string oracle = "exact";
    std::string estimates;
    std::string q_out;
    double epsilon = 0.0;
    double epsilon3 = 0.0;
    double delta = 0.0;
    double fraction_scale = 1.0;
    std::optional<double> sigma0;
    std::size_t m = 0;
    std::size_t trials = 100000;
    std::size_t queries = 0;
    bool sqrt_rule = false;
    bool prefix_curve = false;

    TheoryConstants constants;
};

class Stopwatch {
public:
    explicit Stopwatch(json& timings) : timings_(timings) {}

    template <class F>
    auto operator()(const char* stage, F&& body) {
        const auto start = std::chrono::steady_clock::now();
        auto result = body();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        timings_.push_back({{"stage", stage}, {"seconds", s}});
        return result;
    }

private:
    json& timings_;
};

json make_report(const std::string& command, const Options& o, json config) {
    config["seed"] = o.seed;
    config["threads"] = o.threads;
    config["constants"] = constants_json(o.constants);
    return {{"tool", kToolName},
            {"version", kVersion},
            {"command", command},
            {"seed", o.seed},
            {"config", std::move(config)},
            {"timings", json::array()},
            {"hypotheses", json::array()},
            {"warnings", json::array()},
            {"result", json::object()}};
}

void emit(const json& report, const Options& o, std::ostream& out) {
    const std::string text = report.dump(2) + "\n";
    if (o.out.empty()) {
        out << text;
    } else {
        io::write_text_atomic(o.out, text);
    }
}

void add_warnings(json& report, const std::vector<std::string>& ws) {
    for (const auto& w : ws) report["warnings"].push_back(w);
}

VPolytope load_polytope(const std::string& path) {
    if (path.empty()) throw InvalidArgument("--vertices is required");
    return VPolytope(io::read_matrix(path));
}

Vector load_point(const std::string& path, std::size_t d) {
    if (path.empty()) throw InvalidArgument("--point is required");
    const PointMatrix p = io::read_matrix(path);
    if (p.count() != 1) throw InvalidArgument("--point file must hold exactly one column");
    require_same_dim(p.dim(), d, "--point");
    return p.col(0);
}

std::unique_ptr<oracles::OptOracle> make_oracle(const Options& o, const VPolytope& K) {
    if (o.oracle == "exact") return std::make_unique<oracles::ExactOracle>(K);
    if (o.oracle == "noisy") return std::make_unique<oracles::NoisyOracle>(K, o.epsilon, o.seed);
    throw InvalidArgument("--oracle must be 'exact' or 'noisy'");
}

json instance_manifest(const datagen::LkpInstance& inst, const std::string& kind, const Options& o) {
    json clusters = json::array();
    for (const auto& c : inst.cluster_sets) clusters.push_back(c.size());
    return {{"tool", kToolName},      {"version", kVersion},          {"kind", kind},
            {"d", inst.d()},           {"k", inst.k()},                {"n", inst.n()},
            {"w0", inst.w0},           {"sigma0", inst.sigma0},        {"seed", inst.seed},
            {"noise_scale", o.noise},  {"diameter", inst.M.diameter()}, {"cluster_sizes", clusters},
            {"files", {"A.mat", "P.mat", "M.mat"}}};
}

int cmd_gen(const Options& o, std::ostream& out) {
    if (o.out.empty()) throw InvalidArgument("gen: --out directory is required");
    const fs::path dir(o.out);
    fs::create_directories(dir);
    json manifest;
    if (o.kind == "polytope") {
        if (o.d == 0 || o.k == 0) throw InvalidArgument("gen polytope: --d and --k are required");
        const auto sample = datagen::gen_well_separated_polytope(o.d, o.k, o.delta_target, o.seed, o.scale);
        io::write_matrix(dir / "M.mat", sample.polytope.vertices());
        manifest = {{"tool", kToolName},           {"version", kVersion},  {"kind", "polytope"},
                    {"d", o.d},                     {"k", o.k},             {"seed", o.seed},
                    {"delta_target", o.delta_target}, {"scale", o.scale},  {"separation", sample.separation},
                    {"attempts", sample.attempts},  {"diameter", sample.polytope.diameter()},
                    {"files", {"M.mat"}}};
    } else {
        datagen::LkpInstance inst = [&] {
            if (o.kind == "two-gaussian") {
                if (o.d == 0 || o.n == 0) throw InvalidArgument("gen two-gaussian: --d and --n are required");
                return datagen::gen_two_gaussian_mixture(o.d, o.n, o.v_norm, o.seed);
            }
            if (o.kind == "lkp") {
                if (o.n == 0) throw InvalidArgument("gen lkp: --n is required");
                VPolytope M = [&] {
                    if (!o.vertices.empty()) return load_polytope(o.vertices);
                    if (o.d == 0 || o.k == 0) {
                        throw InvalidArgument("gen lkp: give --vertices or both --d and --k");
                    }
                    return datagen::gen_well_separated_polytope(o.d, o.k, o.delta_target, o.seed, o.scale).polytope;
                }();
                datagen::LkpOptions lo;
                lo.cluster_spread = o.cluster_spread;
                return datagen::gen_lkp(M, o.n, o.w0, o.noise, o.seed, lo);
            }
            throw InvalidArgument("gen: --kind must be two-gaussian, lkp or polytope");
        }();
        io::write_matrix(dir / "A.mat", inst.A);
        io::write_matrix(dir / "P.mat", inst.P);
        io::write_matrix(dir / "M.mat", inst.M.vertices());
        manifest = instance_manifest(inst, o.kind, o);
        if (o.kind == "two-gaussian") manifest["v_norm"] = o.v_norm;
    }
    io::write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    out << "wrote " << dir.string() << "\n";
    return kOk;
}

int cmd_fixtures(const Options& o, std::ostream& out) {
    if (o.out.empty()) throw InvalidArgument("fixtures: --out directory is required");
    const fs::path dir(o.out);
    fs::create_directories(dir);
    const std::size_t d = o.d ? o.d : 50;
    json manifest = {{"tool", kToolName}, {"version", kVersion}, {"d", d}, {"sphere_k", o.sphere_k},
                     {"fixtures", json::object()}};
    for (const auto& [name, W] : datagen::fixtures(d, o.sphere_k)) {
        io::write_matrix(dir / (name + ".mat"), W);
        manifest["fixtures"][name] = {{"file", name + ".mat"}, {"dim", W.dim()}, {"count", W.count()}};
    }
    io::write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    out << "wrote " << dir.string() << "\n";
    return kOk;
}

int cmd_rsh(const Options& o, std::ostream& out) {
    const VPolytope K = load_polytope(o.vertices);
    const Vector a = load_point(o.point, K.dim());
    const std::size_t m = o.m ? o.m : K.dim();
    json report = make_report("rsh-estimate", o,
                              {{"vertices", o.vertices}, {"point", o.point}, {"delta", o.delta}, {"m", m},
                               {"trials", o.trials}});
    Stopwatch timed(report["timings"]);
    rsh::RshOptions ro;
    ro.trials = o.trials;
    ro.seed = o.seed;
    ro.threads = o.threads;
    const auto est = timed("estimate", [&] { return rsh::estimate_rsh_probability(K, a, o.delta, m, ro); });
    json quantiles = json::array();
    for (std::size_t i = 0; i < est.quantile_levels.size(); ++i) {
        quantiles.push_back({{"level", est.quantile_levels[i]}, {"normalized_margin", est.normalized_margin_quantiles[i]}});
    }
    report["result"] = {{"trials", est.trials},
                        {"successes", est.successes},
                        {"empirical_probability", est.empirical_probability},
                        {"wilson99", {est.interval.lower, est.interval.upper}},
                        {"margin_threshold_factor", est.margin_threshold_factor},
                        {"theoretical_lower_bound", est.theoretical_lower_bound},
                        {"comparison_mode", est.comparison_mode},
                        {"bound_satisfied", est.bound_satisfied},
                        {"measured_delta", est.measured_delta},
                        {"subspace_dim", est.subspace_dim},
                        {"span_dim", est.span_dim},
                        {"margin_quantiles", quantiles}};
    report["hypotheses"].push_back({{"name", "dist(a, K) >= delta Delta"}, {"held", true},
                                    {"detail", "measured delta " + std::to_string(est.measured_delta)}});
    emit(report, o, out);
    return kOk;
}

int cmd_sep(const Options& o, std::ostream& out) {
    const VPolytope K = load_polytope(o.vertices);
    const Vector a = load_point(o.point, K.dim());
    const std::size_t budget = o.queries ? o.queries : rsh::default_query_budget(K.size(), o.delta);
    json report = make_report("sep-reduce", o,
                              {{"vertices", o.vertices}, {"point", o.point}, {"delta", o.delta},
                               {"oracle", o.oracle}, {"epsilon", o.epsilon}, {"queries", budget}});
    const auto oracle = make_oracle(o, K);
    Stopwatch timed(report["timings"]);
    const auto res = timed("separate", [&] { return rsh::separate_via_opt(a, *oracle, o.delta, budget, o.seed); });
    json result = {{"verdict", res.verdict == rsh::Verdict::Separated ? "separated" : "inside_softened"},
                   {"queries_used", res.queries_used},
                   {"acceptance_threshold", res.threshold}};
    if (res.separator) {
        const double true_margin = rsh::margin(*res.separator, a, K);
        const double required = o.delta * K.diameter() / (20.0 * std::sqrt(static_cast<double>(K.dim())));
        result["separator"] = to_json(*res.separator);
        result["oracle_margin"] = *res.margin;
        result["true_margin"] = true_margin;
        result["required_true_margin"] = required;
        result["verified"] = true_margin >= required;
    }
    report["result"] = result;
    add_warnings(report, res.warnings);
    emit(report, o, out);
    return kOk;
}

json learn_report_json(const learner::LearnReport& r) {
    json j = {{"query_count", r.query_count}, {"epsilon", r.epsilon}};
    if (r.delta) j["delta"] = *r.delta;
    if (r.hausdorff_to_truth) j["hausdorff_to_truth"] = *r.hausdorff_to_truth;
    if (r.per_vertex_error) j["per_vertex_error"] = *r.per_vertex_error;
    if (r.success) j["success"] = *r.success;
    if (r.theory_recommended_m) j["theory_recommended_m"] = number(*r.theory_recommended_m);
    return j;
}

int cmd_learn(const Options& o, bool list, std::ostream& out) {
    const VPolytope K = load_polytope(o.vertices);
    if (o.m == 0) throw InvalidArgument("--m is required");
    const char* name = list ? "list-learn" : "haus-learn";
    json config = {{"vertices", o.vertices}, {"m", o.m}, {"oracle", o.oracle}, {"epsilon", o.epsilon}};
    if (list || o.delta > 0.0) config["delta"] = o.delta;
    json report = make_report(name, o, config);
    const auto oracle = make_oracle(o, K);
    learner::LearnOptions lo;
    lo.probes.seed = o.seed;
    lo.probes.threads = o.threads;
    lo.constants = o.constants;
    if (o.delta > 0.0) lo.delta = o.delta;
    Stopwatch timed(report["timings"]);
    const auto res = timed("learn", [&] {
        return list ? learner::list_learn(*oracle, o.k ? o.k : K.size(), o.delta, o.m, K, lo)
                    : learner::hausdorff_learn(*oracle, o.m, K, lo);
    });
    report["result"] = learn_report_json(res.report);
    report["result"]["answers"] = columns_json(res.probes.answers);
    if (!list && o.prefix_curve) {
        report["result"]["hausdorff_by_prefix"] =
            timed("prefix_curve", [&] { return learner::hausdorff_by_prefix(res.probes, K); });
    }
    report["hypotheses"] = hypotheses_json(res.report.hypotheses);
    add_warnings(report, res.report.warnings);
    emit(report, o, out);
    return kOk;
}

int cmd_softhull(const Options& o, std::ostream& out) {
    if (o.points.empty()) throw InvalidArgument("--points is required");
    const PointMatrix W = io::read_matrix(o.points);
    json config = {{"points", o.points}, {"epsilon", o.epsilon}, {"delta", o.delta}, {"sqrt_rule", o.sqrt_rule}};
    if (!o.sqrt_rule) config["epsilon3"] = o.epsilon3;
    json report = make_report("softhull", o, config);
    Stopwatch timed(report["timings"]);
    const auto res = timed("envelope", [&] {
        return o.sqrt_rule ? softhull::find_soft_envelope_sqrt(W, o.epsilon, o.delta)
                           : softhull::find_soft_envelope(W, {o.epsilon, o.delta, o.epsilon3});
    });
    report["result"] = {{"verdict", res.verdict == softhull::Verdict::Found ? "found" : "no_envelope"},
                        {"Q_indices", res.indices},
                        {"Q", columns_json(res.Q)},
                        {"pruned_count", res.pruned_count},
                        {"candidate_count", res.candidate_count},
                        {"diameter", res.diameter}};
    add_warnings(report, res.warnings);
    if (!o.q_out.empty() && !res.Q.empty()) io::write_matrix(o.q_out, res.Q);
    emit(report, o, out);
    return kOk;
}

int cmd_kolp(const Options& o, std::ostream& out) {
    if (o.data.empty()) throw InvalidArgument("--data is required");
    if (o.k == 0 || o.m == 0) throw InvalidArgument("--k and --m are required");
    const PointMatrix A = io::read_matrix(o.data);
    kolp::KolpOptions ko;
    ko.seed = o.seed;
    ko.threads = o.threads;
    ko.fraction_scale = o.fraction_scale;
    ko.constants = o.constants;
    double w0 = o.w0;
    std::optional<double> sigma0 = o.sigma0;
    if (!o.manifest.empty()) {
        std::ifstream in(o.manifest);
        if (!in) throw Error("cannot open " + o.manifest);
        const json mf = json::parse(in);
        if (!sigma0 && mf.contains("sigma0")) sigma0 = mf["sigma0"].get<double>();
    }
    if (!o.truth.empty()) ko.truth = load_polytope(o.truth);
    ko.sigma0 = sigma0;

    json config = {{"data", o.data}, {"k", o.k}, {"w0", w0}, {"delta", o.delta}, {"m", o.m},
                   {"fraction_scale", o.fraction_scale}, {"truth", o.truth}, {"manifest", o.manifest}};
    config["sigma0"] = sigma0 ? json(*sigma0) : json(nullptr);
    json report = make_report("kolp", o, config);

    const auto res = kolp::kolp_run(A, o.k, w0, o.delta, o.m, ko);
    for (const auto& t : res.timings) report["timings"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
    json attempts = json::array();
    for (const auto& a : res.prune.attempts) {
        attempts.push_back({{"epsilon", a.params.epsilon}, {"delta", a.params.delta}, {"epsilon3", a.params.epsilon3},
                            {"outcome", a.outcome}, {"q_size", a.q_size}, {"candidate_count", a.candidate_count}});
    }
    json result = {{"vertex_estimates", columns_json(res.vertex_estimates)},
                   {"singular_values_top", to_json(res.projection.singular_values.head(
                                               std::min<Eigen::Index>(res.projection.singular_values.size(),
                                                                      static_cast<Eigen::Index>(o.k) + 1)))},
                   {"distinct_answers", learner::unique_columns(res.probe_log.answers).size()},
                   {"envelope_params_used", {{"epsilon", res.envelope_params_used.epsilon},
                                             {"delta", res.envelope_params_used.delta},
                                             {"epsilon3", res.envelope_params_used.epsilon3}}},
                   {"prune_attempts", attempts}};
    if (ko.truth) {
        result["accuracy_bound"] = o.delta * ko.truth->diameter() / 5.0;
        result["per_vertex_error"] = *res.per_vertex_error;
        result["success"] = *res.success;
    }
    report["result"] = result;
    report["hypotheses"] = hypotheses_json(res.hypotheses);
    add_warnings(report, res.warnings);
    if (!o.estimates.empty()) io::write_matrix(o.estimates, res.vertex_estimates);
    emit(report, o, out);
    return kOk;
}

int cmd_audit(const Options& o, std::ostream& out) {
    if (o.kind == "needle") {
        const std::size_t d = o.d ? o.d : 400;
        const std::size_t q = o.queries ? o.queries : d * d;
        json report = make_report("audit-oracle", o, {{"kind", "needle"}, {"d", d}, {"queries", q}});
        Stopwatch timed(report["timings"]);
        oracles::NeedleOracle oracle(d);
        timed("queries", [&] {
            for (std::size_t i = 0; i < q; ++i) {
                Rng rng = stream_rng(o.seed, i);
                oracle.query(unit_vector(rng, d));
            }
            return 0;
        });
        const auto pair = timed("needles", [&] { return oracles::find_consistent_needles(oracle, o.seed + 1); });
        const double eps = oracle.advertised_epsilon();
        bool audits_ok = true;
        for (const Vector* u : {&pair.u1, &pair.u2}) {
            Matrix ends(static_cast<Eigen::Index>(d), 2);
            ends.col(0) = *u;
            ends.col(1) = -*u;
            const VPolytope needle{PointMatrix(ends)};
            for (std::size_t i = 0; i < std::min<std::size_t>(q, 2000); ++i) {
                Rng rng = stream_rng(o.seed, i);
                const Vector v = unit_vector(rng, d);
                audits_ok = audits_ok && oracles::audit_answer(needle, v, Vector::Zero(v.size()), eps, 1e-12).passed;
            }
        }
        const double gap = std::min((pair.u1 - pair.u2).norm(), (pair.u1 + pair.u2).norm());
        report["result"] = {{"query_count", oracle.query_count()},
                            {"correlation_bound", pair.bound},
                            {"max_corr_u1", pair.max_corr_u1},
                            {"max_corr_u2", pair.max_corr_u2},
                            {"candidates_tried", pair.candidates_tried},
                            {"vertex_gap", gap},
                            {"epsilon", eps},
                            {"zero_answers_audit_valid_sampled", audits_ok},
                            {"no_point_near_both_needles", gap > 2.0 * 2.0 / 10.0}};
        emit(report, o, out);
        return kOk;
    }
    if (o.kind == "lkp") {
        if (o.instance_dir.empty()) throw InvalidArgument("audit-oracle lkp: --instance directory is required");
        const fs::path dir(o.instance_dir);
        std::ifstream in(dir / "manifest.json");
        if (!in) throw Error("cannot open " + (dir / "manifest.json").string());
        const json mf = json::parse(in);
        datagen::LkpInstance inst{VPolytope(io::read_matrix(dir / "M.mat")), io::read_matrix(dir / "P.mat"),
                                  io::read_matrix(dir / "A.mat"), mf.at("w0").get<double>(),
                                  mf.at("sigma0").get<double>(), {}, mf.at("seed").get<std::uint64_t>()};
        const double fraction = inst.w0 * o.fraction_scale;
        json report = make_report("audit-oracle", o, {{"kind", "lkp"}, {"instance", o.instance_dir},
                                                      {"fraction", fraction}, {"trials", o.trials}});
        Stopwatch timed(report["timings"]);
        const auto a = timed("audit", [&] { return kolp::audit_projected_oracle(inst, fraction, o.trials, o.seed); });
        const bool disp_ok = std::all_of(a.vertex_displacement.begin(), a.vertex_displacement.end(),
                                         [&](double v) { return v <= a.displacement_bound; });
        report["result"] = {{"epsilon", a.epsilon},
                            {"trials", a.trials},
                            {"passed", a.passed},
                            {"worst_containment_slack", a.worst_containment_slack},
                            {"worst_optimality_slack", a.worst_optimality_slack},
                            {"vertex_displacement", a.vertex_displacement},
                            {"displacement_bound", a.displacement_bound},
                            {"displacement_within_bound", disp_ok},
                            {"latent_residual", a.latent_residual},
                            {"latent_residual_bound", a.latent_residual_bound},
                            {"projected_separation", a.projected_separation}};
        emit(report, o, out);
        return kOk;
    }
    if (o.kind == "noisy" || o.kind == "exact") {
        const VPolytope K = load_polytope(o.vertices);
        Options oo = o;
        oo.oracle = o.kind;
        const auto oracle = make_oracle(oo, K);
        json report = make_report("audit-oracle", o, {{"kind", o.kind}, {"vertices", o.vertices},
                                                      {"epsilon", o.epsilon}, {"trials", o.trials}});
        Stopwatch timed(report["timings"]);
        std::size_t passed = 0;
        double worst_c = -INFINITY, worst_o = INFINITY;
        timed("audit", [&] {
            for (std::size_t t = 0; t < o.trials; ++t) {
                Rng rng = stream_rng(o.seed, t);
                const Vector u = unit_vector(rng, K.dim());
                const auto a = oracles::audit_answer(K, u, oracle->query(u), oracle->advertised_epsilon(), 1e-9);
                passed += a.passed;
                worst_c = std::max(worst_c, a.containment_slack);
                worst_o = std::min(worst_o, a.optimality_slack);
            }
            return 0;
        });
        report["result"] = {{"trials", o.trials}, {"passed", passed}, {"epsilon", oracle->advertised_epsilon()},
                            {"worst_containment_slack", number(worst_c)},
                            {"worst_optimality_slack", number(worst_o)}};
        emit(report, o, out);
        return kOk;
    }
    throw InvalidArgument("audit-oracle: --kind must be needle, lkp, exact or noisy");
}

}  // namespace

TheoryConstants parse_constants(const std::string& spec) {
    TheoryConstants c;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidArgument("--constants: expected name=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw InvalidArgument("--constants: bad value in '" + item + "'");
        }
        if (!(value > 0.0) || !std::isfinite(value)) throw InvalidArgument("--constants: " + key + " must be positive");
        if (key == "c") {
            c.c = value;
        } else if (key == "cprime") {
            c.c_prime = value;
        } else if (key == "c0") {
            c.c0 = value;
        } else {
            throw InvalidArgument("--constants: unknown name '" + key + "' (use c, cprime, c0)");
        }
    }
    return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Learning polytopes from optimization oracles and latent data", kToolName};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Options o;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "RNG seed");
        sub->add_option("--out", o.out, "output path (report file or directory)");
        sub->add_option("--constants", o.constants_spec, "theory constants, e.g. c=20,cprime=100,c0=20");
        sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    };

    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    common(gen);
    gen->add_option("--kind", o.kind, "two-gaussian | lkp | polytope")->check(CLI::IsMember({"two-gaussian", "lkp", "polytope"}));
    gen->add_option("--d", o.d, "ambient dimension");
    gen->add_option("--n", o.n, "number of data points");
    gen->add_option("--k", o.k, "number of vertices");
    gen->add_option("--w0", o.w0, "cluster mass per vertex");
    gen->add_option("--noise", o.noise, "per-entry Gaussian noise scale");
    gen->add_option("--v-norm", o.v_norm, "two-gaussian centre norm");
    gen->add_option("--delta-target", o.delta_target, "minimum well-separation of generated vertices");
    gen->add_option("--scale", o.scale, "vertex coordinate scale");
    gen->add_option("--cluster-spread", o.cluster_spread, "spread of latent cluster points");
    gen->add_option("--vertices", o.vertices, "use these vertices instead of sampling");

    auto* fix = app.add_subcommand("fixtures", "write the deterministic fixtures");
    common(fix);
    fix->add_option("--d", o.d, "ambient dimension of the embedded fixtures (default 50)");
    fix->add_option("--sphere-k", o.sphere_k, "points on the sphere fixture");

    auto* rsh_cmd = app.add_subcommand("rsh-estimate", "estimate the random separating hyperplane probability");
    common(rsh_cmd);
    rsh_cmd->add_option("--vertices", o.vertices, "polytope vertices (.mat)")->required();
    rsh_cmd->add_option("--point", o.point, "point a (.mat, one column)")->required();
    rsh_cmd->add_option("--delta", o.delta, "relative distance of a from K")->required();
    rsh_cmd->add_option("--m", o.m, "Gaussian subspace dimension (default d)");
    rsh_cmd->add_option("--trials", o.trials, "Monte Carlo trials");

    auto* sep = app.add_subcommand("sep-reduce", "separate a point using only an optimization oracle");
    common(sep);
    sep->add_option("--vertices", o.vertices, "polytope vertices (.mat)")->required();
    sep->add_option("--point", o.point, "point a (.mat, one column)")->required();
    sep->add_option("--delta", o.delta, "separation parameter")->required();
    sep->add_option("--queries", o.queries, "query budget (default from k and delta)");
    sep->add_option("--oracle", o.oracle, "exact | noisy");
    sep->add_option("--epsilon", o.epsilon, "noisy oracle accuracy");

    auto* haus = app.add_subcommand("haus-learn", "learn a polytope in Hausdorff distance");
    common(haus);
    haus->add_option("--vertices", o.vertices, "true polytope vertices (.mat)")->required();
    haus->add_option("--m", o.m, "number of probes")->required();
    haus->add_option("--oracle", o.oracle, "exact | noisy");
    haus->add_option("--epsilon", o.epsilon, "noisy oracle accuracy");
    haus->add_option("--delta", o.delta, "target accuracy (optional)");
    haus->add_flag("--prefix-curve", o.prefix_curve, "report Hausdorff distance for every probe prefix");

    auto* list = app.add_subcommand("list-learn", "learn a list of points near every vertex");
    common(list);
    list->add_option("--vertices", o.vertices, "true polytope vertices (.mat)")->required();
    list->add_option("--k", o.k, "number of vertices (default: count in file)");
    list->add_option("--delta", o.delta, "well-separation")->required();
    list->add_option("--m", o.m, "number of probes")->required();
    list->add_option("--oracle", o.oracle, "exact | noisy");
    list->add_option("--epsilon", o.epsilon, "noisy oracle accuracy");

    auto* soft = app.add_subcommand("softhull", "prune a point set to a soft envelope");
    common(soft);
    soft->add_option("--points", o.points, "point set W (.mat)")->required();
    soft->add_option("--epsilon", o.epsilon, "softness")->required();
    soft->add_option("--delta", o.delta, "separation")->required();
    soft->add_option("--epsilon3", o.epsilon3, "far-point radius");
    soft->add_flag("--sqrt", o.sqrt_rule, "use epsilon3 = 4 sqrt(epsilon)");
    soft->add_option("--q-out", o.q_out, "write the selected points (.mat)");

    auto* kolp_cmd = app.add_subcommand("kolp", "recover latent polytope vertices from data");
    common(kolp_cmd);
    kolp_cmd->add_option("--data", o.data, "observed data A (.mat)")->required();
    kolp_cmd->add_option("--k", o.k, "number of vertices")->required();
    kolp_cmd->add_option("--w0", o.w0, "cluster mass per vertex")->required();
    kolp_cmd->add_option("--delta", o.delta, "well-separation")->required();
    kolp_cmd->add_option("--m", o.m, "number of probes")->required();
    kolp_cmd->add_option("--fraction-scale", o.fraction_scale, "smoothing fraction as a multiple of w0");
    kolp_cmd->add_option("--truth", o.truth, "true vertices for error reporting (.mat)");
    kolp_cmd->add_option("--manifest", o.manifest, "generator manifest (supplies sigma0)");
    kolp_cmd->add_option("--sigma0", o.sigma0, "perturbation scale for hypothesis checks");
    kolp_cmd->add_option("--estimates", o.estimates, "write vertex estimates (.mat)");

    auto* audit = app.add_subcommand("audit-oracle", "audit an oracle against its contract");
    common(audit);
    audit->add_option("--kind", o.kind, "needle | lkp | exact | noisy")->required();
    audit->add_option("--d", o.d, "needle dimension (default 400)");
    audit->add_option("--queries", o.queries, "needle queries (default d^2)");
    audit->add_option("--instance", o.instance_dir, "generated LkP instance directory");
    audit->add_option("--fraction-scale", o.fraction_scale, "smoothing fraction as a multiple of w0");
    audit->add_option("--vertices", o.vertices, "polytope vertices for exact/noisy audits (.mat)");
    audit->add_option("--epsilon", o.epsilon, "noisy oracle accuracy");
    audit->add_option("--trials", o.trials, "random directions to audit");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        o.constants = parse_constants(o.constants_spec);
        if (*gen) return cmd_gen(o, out);
        if (*fix) return cmd_fixtures(o, out);
        if (*rsh_cmd) return cmd_rsh(o, out);
        if (*sep) return cmd_sep(o, out);
        if (*haus) return cmd_learn(o, false, out);
        if (*list) return cmd_learn(o, true, out);
        if (*soft) return cmd_softhull(o, out);
        if (*kolp_cmd) return cmd_kolp(o, out);
        if (*audit) return cmd_audit(o, out);
    } catch (const StageError& e) {
        err << "error: stage " << e.stage() << ": " << e.what() << "\n";
        return kStageFailure;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kPrecondition;
    } catch (const PreconditionViolated& e) {
        err << "error: precondition violated: " << e.what() << "\n";
        return kPrecondition;
    } catch (const DimensionMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kPrecondition;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

}  // namespace polylearn::cli
