#pragma once

#include "polylearn/point_matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace polylearn::softhull {

/// Softness (epsilon), separation (delta) and the far-point radius (epsilon3)
/// used when pruning a point cloud to a soft envelope. All radii are
/// fractions of diam(W).
struct EnvelopeParams {
    double epsilon = 0.0;
    double delta = 0.0;
    double epsilon3 = 0.0;

    /// Throws InvalidArgument unless epsilon >= 0, delta in (0, 1], epsilon3 > 0.
    void validate() const;
    /// Warnings for every hypothesis of the uniqueness guarantee that fails:
    /// each value in (0, 1/8), epsilon3 > epsilon, and
    /// delta > max(2 eps / (eps3 - eps), 4 eps3).
    std::vector<std::string> guarantee_warnings() const;
};

/// Default relative slack for strict/soft comparisons (times diam(W)).
inline constexpr double kDefaultTol = 1e-9;

struct SoftMembership {
    bool inside = false;
    std::optional<SimplexCoeffs> witness;
};

/// w in CH(S) + epsilon * diamW * B, i.e. dist(w, CH(S)) <= epsilon * diamW + tol.
/// `tol` here is absolute.
SoftMembership in_soft_hull(const Vector& w, const PointMatrix& S, double epsilon, double diamW,
                            double tol = 1e-12);

/// Every column of W lies in the epsilon-soft hull of T (radius epsilon * diam(W)).
/// `tol` is relative to diam(W).
bool is_env(const PointMatrix& T, const PointMatrix& W, double epsilon, double tol = kDefaultTol);

/// is_env and every t in T has dist(t, CH(T \ {t})) > delta * diam(W) - tol * diam(W).
bool is_eps_delta_env(const PointMatrix& T, const PointMatrix& W, const EnvelopeParams& params,
                      double tol = kDefaultTol);

enum class Verdict { Found, NoEnvelope };

struct EnvelopeResult {
    Verdict verdict = Verdict::NoEnvelope;
    /// Selected columns of W (ascending index); filled for both verdicts so a
    /// failed candidate can be inspected.
    std::vector<std::size_t> indices;
    PointMatrix Q;
    /// Simplex witnesses placing each column of W in the soft hull of Q.
    std::vector<SimplexCoeffs> certificate;
    std::size_t pruned_count = 0;     ///< |Q'|
    std::size_t candidate_count = 0;  ///< |Q''|
    double diameter = 0.0;
    std::vector<std::string> warnings;
};

/// Prunes W to an (epsilon, delta)-envelope candidate and verifies it.
///
/// Q' = points lying in the soft hull of the points at least epsilon3*diam(W)
/// away from them (an empty far set never contains the point); Q'' = W \ Q';
/// Q = greedy scan of Q'' in column order keeping points more than
/// 2*epsilon3*diam(W) from every kept point. Found iff Q passes
/// is_eps_delta_env.
EnvelopeResult find_soft_envelope(const PointMatrix& W, const EnvelopeParams& params,
                                  double tol = kDefaultTol);

/// find_soft_envelope with epsilon3 = 4 sqrt(epsilon). Requires
/// delta > 16 sqrt(epsilon); throws PreconditionViolated otherwise.
EnvelopeResult find_soft_envelope_sqrt(const PointMatrix& W, double epsilon, double delta,
                                       double tol = kDefaultTol);

}  // namespace polylearn::softhull
