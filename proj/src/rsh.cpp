#include "polylearn/rsh.hpp"

#include "polylearn/geometry.hpp"
#include "polylearn/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace polylearn::rsh {

namespace {

constexpr std::size_t kBlockSize = 1 << 16;

double quantile(std::vector<double> values, double level) {
    if (values.empty()) return 0.0;
    const auto pos = static_cast<std::size_t>(
        std::clamp(level, 0.0, 1.0) * static_cast<double>(values.size() - 1));
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(pos), values.end());
    return values[pos];
}

}  // namespace

double margin(const Vector& u, const Vector& a, const VPolytope& K) {
    require_same_dim(static_cast<std::size_t>(u.size()), K.dim(), "margin");
    require_same_dim(static_cast<std::size_t>(a.size()), K.dim(), "margin");
    return u.dot(a) - K.support(u);
}

double margin_threshold_factor(std::size_t k, double delta, std::size_t m) {
    if (k <= 1) return 0.0;
    const double root_log = std::sqrt(std::log(static_cast<double>(k)));
    return root_log / (root_log + 4.0 * delta * std::sqrt(static_cast<double>(m)));
}

double theoretical_lower_bound(std::size_t k, double delta) {
    return std::pow(static_cast<double>(k), -10.0 / (delta * delta)) / 40.0;
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

Matrix containing_subspace(const VPolytope& K, const Vector& a, std::size_t m, std::uint64_t seed,
                           std::size_t* span_dim) {
    const std::size_t d = K.dim();
    if (m > d) throw InvalidArgument("containing_subspace: m exceeds the ambient dimension");
    Matrix G(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(K.size() + 1));
    G.leftCols(static_cast<Eigen::Index>(K.size())) = K.vertices().matrix();
    G.col(G.cols() - 1) = a;

    Eigen::JacobiSVD<Matrix> svd(G, Eigen::ComputeThinU);
    const Vector& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-10 * std::max(1.0, sv(0)) : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    if (span_dim) *span_dim = static_cast<std::size_t>(rank);
    if (static_cast<std::size_t>(rank) > m) {
        throw InvalidArgument("containing_subspace: span(K u {a}) has dimension " +
                              std::to_string(rank) + " > m = " + std::to_string(m));
    }

    Matrix B(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m));
    B.leftCols(rank) = svd.matrixU().leftCols(rank);
    Rng rng = stream_rng(seed, 0x5ba5e);
    Eigen::Index filled = rank;
    while (filled < static_cast<Eigen::Index>(m)) {
        Vector v = gaussian_vector(rng, d);
        for (int pass = 0; pass < 2; ++pass) {
            v -= B.leftCols(filled) * (B.leftCols(filled).transpose() * v);
        }
        const double norm = v.norm();
        if (norm < 1e-8) continue;
        B.col(filled++) = v / norm;
    }
    return B;
}

RshEstimate estimate_rsh_probability(const VPolytope& K, const Vector& a, double delta,
                                     std::size_t m, const RshOptions& options) {
    require_same_dim(static_cast<std::size_t>(a.size()), K.dim(), "estimate_rsh_probability");
    require_finite(a, "estimate_rsh_probability");
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw InvalidArgument("estimate_rsh_probability: delta must lie in (0, 1]");
    }
    if (options.trials == 0) throw InvalidArgument("estimate_rsh_probability: trials must be positive");

    const double diam = K.diameter();
    const double dist = geometry::dist_to_hull(a, K.vertices(), 1e-10).distance;
    RshEstimate est;
    est.measured_delta = diam > 0.0 ? dist / diam : 0.0;
    if (dist < delta * diam - options.tol * diam) {
        std::ostringstream msg;
        msg << "estimate_rsh_probability: dist(a, K) / diam(K) = " << est.measured_delta
            << " is below delta = " << delta;
        throw PreconditionViolated(msg.str());
    }

    const Matrix B = containing_subspace(K, a, m, options.seed, &est.span_dim);
    const Vector a_coords = B.transpose() * a;
    const Matrix M_coords = B.transpose() * K.vertices().matrix();

    est.trials = options.trials;
    est.subspace_dim = m;
    est.margin_threshold_factor = margin_threshold_factor(K.size(), delta, m);
    est.theoretical_lower_bound = theoretical_lower_bound(K.size(), delta);
    const double scale = delta * diam * est.margin_threshold_factor;

    const std::size_t blocks = (options.trials + kBlockSize - 1) / kBlockSize;
    std::vector<std::size_t> block_successes(blocks, 0);
    std::vector<double> normalized(options.trials);

    const auto run_block = [&](std::size_t b) {
        Rng rng = stream_rng(options.seed, b);
        std::normal_distribution<double> normal(0.0, 1.0);
        const std::size_t begin = b * kBlockSize;
        const std::size_t end = std::min(options.trials, begin + kBlockSize);
        Vector g(static_cast<Eigen::Index>(m));
        std::size_t hits = 0;
        for (std::size_t t = begin; t < end; ++t) {
            for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
            const double norm = g.norm();
            const double mg = g.dot(a_coords) - (M_coords.transpose() * g).maxCoeff();
            if (mg >= norm * scale) ++hits;
            normalized[t] = norm > 0.0 ? mg / norm : 0.0;
        }
        block_successes[b] = hits;
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, blocks));
    if (workers == 1) {
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t b = w; b < blocks; b += workers) run_block(b);
            });
        }
    }

    for (std::size_t s : block_successes) est.successes += s;
    est.empirical_probability = static_cast<double>(est.successes) / static_cast<double>(est.trials);
    est.interval = wilson_interval(est.successes, est.trials);
    if (est.interval.upper - est.interval.lower < est.theoretical_lower_bound / 2.0) {
        est.comparison_mode = "interval";
        est.bound_satisfied = est.interval.lower >= est.theoretical_lower_bound;
    } else {
        est.comparison_mode = "point";
        est.bound_satisfied = est.empirical_probability >= est.theoretical_lower_bound;
    }
    est.quantile_levels = options.quantile_levels;
    for (double level : options.quantile_levels) {
        est.normalized_margin_quantiles.push_back(quantile(normalized, level));
    }
    return est;
}

std::size_t default_query_budget(std::size_t k, double delta, std::size_t cap) {
    const double raw = 40.0 * std::pow(static_cast<double>(k), 10.0 / (delta * delta)) * std::log(100.0);
    if (!std::isfinite(raw) || raw >= static_cast<double>(cap)) return cap;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw)));
}

SeparationResult separate_via_opt(const Vector& a, const oracles::OptOracle& oracle, double delta,
                                  std::size_t num_queries, std::uint64_t seed) {
    const std::size_t d = oracle.dim();
    require_same_dim(static_cast<std::size_t>(a.size()), d, "separate_via_opt");
    require_finite(a, "separate_via_opt");
    if (num_queries == 0) throw InvalidArgument("separate_via_opt: num_queries must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("separate_via_opt: delta must lie in (0, 1)");

    SeparationResult result;
    const double root_d = std::sqrt(static_cast<double>(d));
    const double eps_limit = delta / (100.0 * root_d);
    if (oracle.advertised_epsilon() > eps_limit) {
        std::ostringstream msg;
        msg << "oracle epsilon " << oracle.advertised_epsilon()
            << " exceeds delta/(100 sqrt d) = " << eps_limit << "; separation guarantee not covered";
        result.warnings.push_back(msg.str());
    }
    result.threshold = delta * oracle.reference_diameter() / (11.0 * root_d);

    Rng rng = stream_rng(seed, 0);
    for (std::size_t q = 0; q < num_queries; ++q) {
        const Vector u = unit_vector(rng, d);
        const Vector x = oracle.query(u);
        result.queries_used = q + 1;
        const double gap = u.dot(a) - u.dot(x);
        if (gap > result.threshold) {
            result.verdict = Verdict::Separated;
            result.separator = u;
            result.margin = gap;
            return result;
        }
    }
    return result;
}

}  // namespace polylearn::rsh
