#pragma once

#include "polylearn/oracles.hpp"
#include "polylearn/point_matrix.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polylearn::rsh {

/// u . a - max_l u . M_l
double margin(const Vector& u, const Vector& a, const VPolytope& K);

/// sqrt(ln k) / (sqrt(ln k) + 4 delta sqrt(m)); zero when k = 1.
double margin_threshold_factor(std::size_t k, double delta, std::size_t m);

/// (1/40) k^(-10 / delta^2)
double theoretical_lower_bound(std::size_t k, double delta);

struct WilsonInterval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Wilson score interval; z = 2.5758 gives 99% coverage.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 2.5758293035489);

struct RshOptions {
    std::size_t trials = 100000;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    /// Quantiles of the normalized margin margin(u)/|u| to report.
    std::vector<double> quantile_levels{0.5, 0.9, 0.99};
    /// Distance-check slack as a fraction of diam(K).
    double tol = 1e-9;
};

struct RshEstimate {
    std::size_t trials = 0;
    std::size_t successes = 0;
    double margin_threshold_factor = 0.0;
    double theoretical_lower_bound = 0.0;
    double empirical_probability = 0.0;
    WilsonInterval interval;
    /// "interval" when the 99% interval is narrow enough to compare its lower
    /// edge against the bound, otherwise "point".
    std::string comparison_mode;
    bool bound_satisfied = false;
    double measured_delta = 0.0;  ///< dist(a, K) / diam(K)
    std::size_t subspace_dim = 0;
    std::size_t span_dim = 0;
    std::vector<double> quantile_levels;
    std::vector<double> normalized_margin_quantiles;
};

/// Monte Carlo estimate of Pr[ margin(u, a, K) >= |u| delta Delta factor ] for
/// u ~ N(0, I_m) in an m-dimensional subspace containing span(K u {a}).
///
/// Throws PreconditionViolated when dist(a, K) < delta * diam(K).
/// Trials are split into fixed-size blocks, each with its own RNG stream,
/// so results do not depend on `threads`.
RshEstimate estimate_rsh_probability(const VPolytope& K, const Vector& a, double delta,
                                     std::size_t m, const RshOptions& options);

/// Orthonormal basis (d x m) containing span(K u {a}), padded with random
/// orthonormal directions.
Matrix containing_subspace(const VPolytope& K, const Vector& a, std::size_t m, std::uint64_t seed,
                           std::size_t* span_dim = nullptr);

enum class Verdict { InsideSoftened, Separated };

struct SeparationResult {
    Verdict verdict = Verdict::InsideSoftened;
    std::optional<Vector> separator;
    /// u . a - u . x(u) for the accepted separator.
    std::optional<double> margin;
    std::size_t queries_used = 0;
    double threshold = 0.0;  ///< delta * Delta / (11 sqrt d)
    std::vector<std::string> warnings;
};

/// Default query budget min(cap, ceil(40 k^(10/delta^2) ln(100))).
std::size_t default_query_budget(std::size_t k, double delta, std::size_t cap = 1'000'000);

/// Separation from optimization: accepts the first random unit u with
/// u . a > u . x(u) + delta Delta / (11 sqrt d).
SeparationResult separate_via_opt(const Vector& a, const oracles::OptOracle& oracle, double delta,
                                  std::size_t num_queries, std::uint64_t seed);

}  // namespace polylearn::rsh
