#include "polylearn/learner.hpp"

#include "polylearn/geometry.hpp"
#include "polylearn/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

namespace polylearn::learner {

namespace {

Vector draw_direction(Rng& rng, std::size_t d, const std::optional<Matrix>& subspace) {
    if (!subspace) return unit_vector(rng, d);
    const Vector g = unit_vector(rng, static_cast<std::size_t>(subspace->cols()));
    Vector u = *subspace * g;
    return u / u.norm();
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::vector<std::size_t> unique_columns(const PointMatrix& W) {
    std::map<std::vector<double>, std::size_t> seen;
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < W.count(); ++j) {
        const auto c = W.col(j);
        std::vector<double> key(c.data(), c.data() + c.size());
        if (seen.emplace(std::move(key), j).second) keep.push_back(j);
    }
    return keep;
}

ProbeSet random_probes(const oracles::OptOracle& oracle, std::size_t m, const ProbeOptions& options) {
    if (m == 0) throw InvalidArgument("random_probes: m must be positive");
    const std::size_t d = oracle.dim();
    if (options.subspace) {
        const Matrix& B = *options.subspace;
        if (static_cast<std::size_t>(B.rows()) != d || B.cols() < 1) {
            throw DimensionMismatch("random_probes: subspace basis must be d x s with s >= 1");
        }
        const Matrix gram = B.transpose() * B;
        if (!gram.isApprox(Matrix::Identity(B.cols(), B.cols()), 1e-9)) {
            throw InvalidArgument("random_probes: subspace basis is not orthonormal");
        }
    }

    Matrix U(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m));
    Matrix X(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m));
    std::vector<std::string> failures(m);

    const auto run = [&](std::size_t i) {
        Rng rng = stream_rng(options.seed, i);
        const Vector u = draw_direction(rng, d, options.subspace);
        U.col(static_cast<Eigen::Index>(i)) = u;
        try {
            X.col(static_cast<Eigen::Index>(i)) = oracle.query(u);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, m));
    if (workers == 1) {
        for (std::size_t i = 0; i < m; ++i) {
            run(i);
            if (!failures[i].empty()) throw ProbeError(i, failures[i]);
        }
    } else {
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    for (std::size_t i = w; i < m; i += workers) run(i);
                });
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (!failures[i].empty()) throw ProbeError(i, failures[i]);
        }
    }
    return ProbeSet{PointMatrix(std::move(U)), PointMatrix(std::move(X)), options.seed};
}

LearnResult hausdorff_learn(const oracles::OptOracle& oracle, std::size_t m,
                            const std::optional<VPolytope>& truth, const LearnOptions& options) {
    LearnResult out;
    out.probes = random_probes(oracle, m, options.probes);
    LearnReport& rep = out.report;
    rep.query_count = m;
    rep.epsilon = oracle.advertised_epsilon();
    rep.delta = options.delta;

    const double d = static_cast<double>(oracle.dim());
    const double c = options.constants.c;
    if (options.delta) {
        const double delta = *options.delta;
        const bool h1 = delta > c * rep.epsilon * std::sqrt(d);
        const bool h2 = delta > c / std::sqrt(d);
        rep.hypotheses.push_back({"delta > c*eps*sqrt(d)", h1,
                                  "delta=" + fmt(delta) + " c*eps*sqrt(d)=" + fmt(c * rep.epsilon * std::sqrt(d))});
        rep.hypotheses.push_back({"delta > c/sqrt(d)", h2,
                                  "delta=" + fmt(delta) + " c/sqrt(d)=" + fmt(c / std::sqrt(d))});
        for (const auto& h : rep.hypotheses) {
            if (!h.held) rep.warnings.push_back("Hausdorff-learning hypothesis " + h.name + " does not hold (" + h.detail + ")");
        }
        if (truth) {
            rep.theory_recommended_m =
                std::pow(static_cast<double>(truth->size()), 10.0 + c / (delta * delta));
        }
    }

    if (truth) {
        require_same_dim(truth->dim(), oracle.dim(), "hausdorff_learn");
        const PointMatrix hull_points = out.probes.answers.select(unique_columns(out.probes.answers));
        rep.hausdorff_to_truth = geometry::hausdorff(hull_points, truth->vertices(), options.tol);
        if (options.delta) {
            rep.success = *rep.hausdorff_to_truth <= *options.delta * truth->diameter();
        }
    }
    return out;
}

LearnResult list_learn(const oracles::OptOracle& oracle, std::size_t k, double delta, std::size_t m,
                       const std::optional<VPolytope>& truth, const LearnOptions& options) {
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("list_learn: delta must lie in (0, 1]");
    if (truth) {
        require_same_dim(truth->dim(), oracle.dim(), "list_learn");
        if (truth->size() != k) {
            throw InvalidArgument("list_learn: truth has " + std::to_string(truth->size()) +
                                  " vertices, expected k = " + std::to_string(k));
        }
        if (k >= 2) {
            const double sep = geometry::well_separation(*truth, options.tol);
            if (sep < delta - 1e-9) {
                throw PreconditionViolated("list_learn: truth is only " + fmt(sep) +
                                           "-well-separated, below delta = " + fmt(delta));
            }
        }
    }

    LearnResult out;
    out.probes = random_probes(oracle, m, options.probes);
    LearnReport& rep = out.report;
    rep.query_count = m;
    rep.epsilon = oracle.advertised_epsilon();
    rep.delta = delta;

    const double d = static_cast<double>(oracle.dim());
    const double c = options.constants.c;
    const double eps = rep.epsilon;
    rep.hypotheses.push_back({"delta^2 >= c*eps*sqrt(d)", delta * delta >= c * eps * std::sqrt(d),
                              "delta^2=" + fmt(delta * delta) + " c*eps*sqrt(d)=" + fmt(c * eps * std::sqrt(d))});
    rep.hypotheses.push_back({"delta^3 >= c*eps", delta * delta * delta >= c * eps,
                              "delta^3=" + fmt(delta * delta * delta) + " c*eps=" + fmt(c * eps)});
    for (const auto& h : rep.hypotheses) {
        if (!h.held) rep.warnings.push_back("list-learning hypothesis " + h.name + " does not hold (" + h.detail + ")");
    }

    if (truth) {
        const Matrix& X = out.probes.answers.matrix();
        std::vector<double> errors(k);
        for (std::size_t l = 0; l < k; ++l) {
            errors[l] = std::sqrt((X.colwise() - truth->vertices().col(l)).colwise().squaredNorm().minCoeff());
        }
        const double worst = *std::max_element(errors.begin(), errors.end());
        rep.success = worst <= delta * truth->diameter() / 10.0;
        rep.per_vertex_error = std::move(errors);
    }
    return out;
}

std::vector<double> hausdorff_by_prefix(const ProbeSet& probes, const VPolytope& truth, double tol) {
    const PointMatrix& X = probes.answers;
    std::vector<double> out;
    out.reserve(X.count());
    std::vector<std::size_t> distinct;
    std::map<std::vector<double>, bool> seen;
    double last = 0.0;
    for (std::size_t j = 0; j < X.count(); ++j) {
        const auto c = X.col(j);
        const bool is_new = seen.emplace(std::vector<double>(c.data(), c.data() + c.size()), true).second;
        if (is_new) {
            distinct.push_back(j);
            last = geometry::hausdorff(X.select(distinct), truth.vertices(), tol);
        }
        out.push_back(last);
    }
    return out;
}

}  // namespace polylearn::learner
