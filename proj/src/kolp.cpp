#include "polylearn/kolp.hpp"

#include "polylearn/geometry.hpp"
#include "polylearn/oracles.hpp"
#include "polylearn/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

namespace polylearn::kolp {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

template <class F>
auto run_stage(const char* name, std::vector<StageTiming>& timings, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
        auto result = body();
        timings.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
        return result;
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

}  // namespace

SvdProjection svd_project(const PointMatrix& A, std::size_t k) {
    if (A.empty()) throw InvalidArgument("svd_project: A is empty");
    if (k == 0 || k > std::min(A.dim(), A.count())) {
        throw InvalidArgument("svd_project: k = " + std::to_string(k) + " must lie in [1, min(d, n)]");
    }
    Eigen::BDCSVD<Matrix> svd(A.matrix(), Eigen::ComputeThinU);
    SvdProjection out;
    out.singular_values = svd.singularValues();
    out.basis = svd.matrixU().leftCols(static_cast<Eigen::Index>(k));
    for (Eigen::Index j = 0; j < out.basis.cols(); ++j) {
        Eigen::Index pivot = 0;
        out.basis.col(j).cwiseAbs().maxCoeff(&pivot);
        if (out.basis(pivot, j) < 0.0) out.basis.col(j) *= -1.0;
    }
    out.projected = PointMatrix(Matrix(out.basis.transpose() * A.matrix()));
    return out;
}

PruneResult prune_to_k(const PointMatrix& W, std::size_t k, double delta, double diam_hint,
                       const TheoryConstants& constants) {
    if (W.empty()) throw StageError("prune_to_k", "no oracle answers");
    if (k == 0) throw InvalidArgument("prune_to_k: k must be positive");
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("prune_to_k: delta must lie in (0, 1]");
    (void)diam_hint;

    const std::vector<std::size_t> distinct = learner::unique_columns(W);
    if (distinct.size() < k) {
        throw StageError("prune_to_k", "only " + std::to_string(distinct.size()) +
                                           " distinct answers for k = " + std::to_string(k));
    }
    const PointMatrix Wu = W.select(distinct);

    std::vector<softhull::EnvelopeParams> ladder;
    const double delta_p = delta / 4.0;
    {
        const double eps = 32.0 * delta * delta / constants.c;
        ladder.push_back({eps, delta_p, 4.0 * std::sqrt(eps)});
    }
    const double ratio = 0.9 * delta_p / (2.0 + delta_p);
    for (int i = 0; i < 4; ++i) {
        const double eps3 = delta / 20.0 * std::pow(2.0, i);
        const double eps = std::min(eps3 / 2.0, eps3 * ratio * std::pow(4.0, i));
        ladder.push_back({eps, delta_p, eps3});
    }

    PruneResult out;
    for (const auto& params : ladder) {
        const softhull::EnvelopeResult env = softhull::find_soft_envelope(Wu, params);
        PruneAttempt attempt{params, "", env.indices.size(), env.candidate_count};
        if (env.verdict == softhull::Verdict::Found && env.indices.size() == k) {
            attempt.outcome = "found " + std::to_string(k) + " points";
            out.attempts.push_back(attempt);
            out.params_used = params;
            for (std::size_t i : env.indices) out.indices.push_back(distinct[i]);
            out.points = W.select(out.indices);
            for (const auto& w : env.warnings) out.warnings.push_back("envelope: " + w);
            if (out.attempts.size() > 1) {
                out.warnings.push_back("prune_to_k needed " + std::to_string(out.attempts.size()) +
                                       " attempts; see attempt log");
            }
            return out;
        }
        attempt.outcome = env.verdict == softhull::Verdict::Found
                              ? "envelope of size " + std::to_string(env.indices.size()) + " != k"
                              : "no envelope";
        out.attempts.push_back(attempt);
    }

    std::ostringstream msg;
    msg << "no attempt produced exactly " << k << " points;";
    for (const auto& a : out.attempts) {
        msg << " [eps=" << a.params.epsilon << " eps3=" << a.params.epsilon3 << ": " << a.outcome
            << ", |Q''|=" << a.candidate_count << ", |Q|=" << a.q_size << "]";
    }
    // Pairwise separation histogram of the distinct answers, in tenths of the diameter.
    const double diam = geometry::diameter(Wu);
    if (diam > 0.0 && Wu.count() <= 2000) {
        std::vector<std::size_t> hist(10, 0);
        for (std::size_t i = 0; i < Wu.count(); ++i)
            for (std::size_t j = i + 1; j < Wu.count(); ++j) {
                const double r = (Wu.col(i) - Wu.col(j)).norm() / diam;
                ++hist[std::min<std::size_t>(9, static_cast<std::size_t>(r * 10.0))];
            }
        msg << " separation histogram (tenths of diam):";
        for (std::size_t h : hist) msg << ' ' << h;
    }
    throw StageError("prune_to_k", msg.str());
}

KolpOutput kolp_run(const PointMatrix& A, std::size_t k, double w0, double delta, std::size_t m,
                    const KolpOptions& options) {
    if (!(w0 > 0.0 && w0 <= 1.0)) throw InvalidArgument("kolp_run: w0 must lie in (0, 1]");
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("kolp_run: delta must lie in (0, 1]");
    if (m == 0) throw InvalidArgument("kolp_run: m must be positive");
    if (!(options.fraction_scale > 0.0 && options.fraction_scale <= 1.0)) {
        throw InvalidArgument("kolp_run: fraction_scale must lie in (0, 1]");
    }

    KolpOutput out;
    const double c0 = options.constants.c0;
    const double kk = static_cast<double>(k);
    {
        const double lower = k > 1 ? std::sqrt(std::log(kk)) / std::sqrt(c0 * kk) : 0.0;
        out.hypotheses.push_back({"delta >= sqrt(ln k)/sqrt(c0 k)", delta >= lower,
                                  "delta=" + fmt(delta) + " bound=" + fmt(lower)});
    }
    if (options.truth && options.sigma0) {
        const double bound = delta * delta * options.truth->diameter() / (100.0 * c0) * std::sqrt(w0) / std::sqrt(kk);
        out.hypotheses.push_back({"sigma0 <= delta^2 Delta sqrt(w0) / (100 c0 sqrt(k))", *options.sigma0 <= bound,
                                  "sigma0=" + fmt(*options.sigma0) + " bound=" + fmt(bound)});
    }
    for (const auto& h : out.hypotheses) {
        if (!h.held) out.warnings.push_back("kOLP hypothesis " + h.name + " does not hold (" + h.detail + ")");
    }

    out.projection = run_stage("svd", out.timings, [&] { return svd_project(A, k); });

    const double fraction = w0 * options.fraction_scale;
    double reference = options.truth ? options.truth->diameter() : 0.0;
    double advertised = 0.0;
    if (options.truth && options.sigma0 && reference > 0.0) {
        advertised = 10.0 * *options.sigma0 / (std::sqrt(w0) * reference);
    }
    out.probe_log = run_stage("probes", out.timings, [&] {
        const oracles::SubsetSmoothingOracle oracle(out.projection.projected, fraction, advertised,
                                                    reference);
        learner::ProbeOptions po;
        po.seed = options.seed;
        po.threads = options.threads;
        return learner::random_probes(oracle, m, po);
    });

    out.prune = run_stage("prune", out.timings, [&] {
        return prune_to_k(out.probe_log.answers, k, delta, reference, options.constants);
    });
    out.envelope_params_used = out.prune.params_used;
    for (const auto& w : out.prune.warnings) out.warnings.push_back(w);

    out.vertex_estimates = run_stage("lift", out.timings, [&] {
        return PointMatrix(out.projection.lift(out.prune.points.matrix()));
    });

    if (options.truth) {
        const VPolytope& K = *options.truth;
        require_same_dim(K.dim(), A.dim(), "kolp_run truth");
        const Matrix& E = out.vertex_estimates.matrix();
        std::vector<double> errors(K.size());
        std::set<Eigen::Index> nearest;
        for (std::size_t l = 0; l < K.size(); ++l) {
            Eigen::Index best = 0;
            errors[l] = std::sqrt((E.colwise() - K.vertices().col(l)).colwise().squaredNorm().minCoeff(&best));
            nearest.insert(best);
        }
        const double bound = delta * K.diameter() / 5.0;
        out.success = nearest.size() == K.size() &&
                      std::all_of(errors.begin(), errors.end(), [&](double e) { return e <= bound; });
        out.per_vertex_error = std::move(errors);
    }
    return out;
}

ProjectedAudit audit_projected_oracle(const datagen::LkpInstance& instance, double fraction,
                                      std::size_t trials, std::uint64_t seed) {
    const std::size_t k = instance.k();
    const SvdProjection proj = svd_project(instance.A, k);
    const VPolytope K_hat{PointMatrix(proj.coords(instance.M.vertices().matrix()))};
    const double diam = instance.M.diameter();

    ProjectedAudit out;
    out.trials = trials;
    out.epsilon = diam > 0.0 ? 10.0 * instance.sigma0 / (std::sqrt(instance.w0) * diam) : 0.0;
    const oracles::SubsetSmoothingOracle oracle(proj.projected, fraction, out.epsilon, diam);
    const double tol = 1e-9 * std::max(1.0, diam);
    out.worst_containment_slack = -std::numeric_limits<double>::infinity();
    out.worst_optimality_slack = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = stream_rng(seed, t);
        const Vector u = unit_vector(rng, k);
        const Vector x = oracle.query(u);
        const auto audit = oracles::audit_answer(K_hat, u, x, out.epsilon, tol, diam);
        if (audit.passed) ++out.passed;
        out.worst_containment_slack = std::max(out.worst_containment_slack, audit.containment_slack);
        out.worst_optimality_slack = std::min(out.worst_optimality_slack, audit.optimality_slack);
    }

    const Matrix& M = instance.M.vertices().matrix();
    const Matrix M_lift = proj.lift(proj.coords(M));
    for (Eigen::Index l = 0; l < M.cols(); ++l) out.vertex_displacement.push_back((M.col(l) - M_lift.col(l)).norm());
    out.displacement_bound = 5.0 * instance.sigma0 / std::sqrt(instance.w0);

    const Matrix& P = instance.P.matrix();
    out.latent_residual = datagen::spectral_norm(P - proj.lift(proj.coords(P)));
    out.latent_residual_bound = 3.0 * instance.sigma0 * std::sqrt(static_cast<double>(instance.n()));
    out.projected_separation = k >= 2 ? geometry::well_separation(K_hat) : 1.0;
    return out;
}

}  // namespace polylearn::kolp
