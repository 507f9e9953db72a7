#pragma once

#include "polylearn/datagen.hpp"
#include "polylearn/learner.hpp"
#include "polylearn/point_matrix.hpp"
#include "polylearn/softhull.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polylearn::kolp {

/// Top-k left singular subspace of A and the coordinates of A in it.
struct SvdProjection {
    Matrix basis;            ///< d x k, orthonormal columns
    PointMatrix projected;   ///< k x n coordinates
    Vector singular_values;  ///< all singular values of A, descending

    /// basis * coords
    Matrix lift(const Matrix& coords) const { return basis * coords; }
    /// basis^T * X
    Matrix coords(const Matrix& X) const { return basis.transpose() * X; }
};

/// Each basis vector is oriented so its largest-magnitude entry (first such
/// index on ties) is positive.
SvdProjection svd_project(const PointMatrix& A, std::size_t k);

struct PruneAttempt {
    softhull::EnvelopeParams params;
    std::string outcome;
    std::size_t q_size = 0;
    std::size_t candidate_count = 0;
};

struct PruneResult {
    PointMatrix points;                ///< exactly k columns
    std::vector<std::size_t> indices;  ///< columns of the input W
    std::vector<PruneAttempt> attempts;
    softhull::EnvelopeParams params_used;
    std::vector<std::string> warnings;
};

/// Reduces oracle answers W to exactly k points via soft-hull pruning.
///
/// Exact duplicate answers are collapsed first. The first attempt uses the
/// list-learning parameters delta' = delta/4, eps' = 32 delta^2 / c,
/// eps3 = 4 sqrt(eps'). If that fails, a ladder of up to four further attempts
/// runs with eps3 = (delta/20) 2^i and eps = min(eps3/2, eps3 r 4^i) where
/// r = 0.9 delta' / (2 + delta'); attempt 0 of the ladder satisfies
/// delta' > max(2 eps/(eps3 - eps), 4 eps3). Every attempt is recorded.
/// Throws StageError("prune_to_k") when no attempt yields k points.
PruneResult prune_to_k(const PointMatrix& W, std::size_t k, double delta, double diam_hint,
                       const TheoryConstants& constants = {});

struct KolpOptions {
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    /// Smoothing fraction as a multiple of w0 (1 = w0, 0.5 = w0/2).
    double fraction_scale = 1.0;
    TheoryConstants constants;
    /// Known truth enables hypothesis checks and error reporting.
    std::optional<VPolytope> truth;
    std::optional<double> sigma0;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct KolpOutput {
    PointMatrix vertex_estimates;  ///< d x k, ambient coordinates
    learner::ProbeSet probe_log;   ///< in SVD coordinates
    softhull::EnvelopeParams envelope_params_used;
    SvdProjection projection;
    PruneResult prune;
    std::vector<learner::Hypothesis> hypotheses;
    std::vector<std::string> warnings;
    std::vector<StageTiming> timings;
    /// With a known truth: per vertex, distance to the nearest estimate.
    std::optional<std::vector<double>> per_vertex_error;
    std::optional<bool> success;  ///< every error <= delta Delta / 5
};

/// SVD projection -> subset smoothing oracle over projected columns -> m
/// random probes in the k-dim subspace -> prune_to_k -> lift to ambient.
KolpOutput kolp_run(const PointMatrix& A, std::size_t k, double w0, double delta, std::size_t m,
                    const KolpOptions& options);

struct ProjectedAudit {
    double epsilon = 0.0;  ///< 10 sigma0 / (sqrt(w0) Delta)
    std::size_t trials = 0;
    std::size_t passed = 0;
    double worst_containment_slack = 0.0;
    double worst_optimality_slack = 0.0;
    std::vector<double> vertex_displacement;  ///< |M_l - proj(M_l)|
    double displacement_bound = 0.0;          ///< 5 sigma0 / sqrt(w0)
    double latent_residual = 0.0;             ///< ||P - proj(P)||
    double latent_residual_bound = 0.0;       ///< 3 sigma0 sqrt(n)
    double projected_separation = 0.0;        ///< well-separation of proj(K)
};

/// Audits the subset smoothing oracle in the SVD subspace against the
/// projection of the true polytope.
ProjectedAudit audit_projected_oracle(const datagen::LkpInstance& instance, double fraction,
                                      std::size_t trials, std::uint64_t seed);

}  // namespace polylearn::kolp
