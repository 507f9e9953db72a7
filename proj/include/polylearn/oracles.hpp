#pragma once

#include "polylearn/point_matrix.hpp"

#include <cstdint>
#include <memory>
#include <mutex>

namespace polylearn::oracles {

/// Approximate linear optimization oracle over a convex body K.
///
/// query(u) takes a unit vector and returns x(u) with
///   x(u) in K + eps * Delta * B   and   u . x(u) >= max_{y in K} u . y - eps * Delta,
/// where eps = advertised_epsilon() and Delta = reference_diameter().
class OptOracle {
public:
    virtual ~OptOracle() = default;

    virtual Vector query(const Vector& u) const = 0;
    virtual std::size_t dim() const = 0;
    virtual double advertised_epsilon() const = 0;
    virtual double reference_diameter() const = 0;
};

/// Rejects u unless | |u| - 1 | <= 1e-9 and dim matches.
void require_unit(const Vector& u, std::size_t dim, const char* what);

/// Returns the maximizing vertex; lowest index on ties.
class ExactOracle final : public OptOracle {
public:
    explicit ExactOracle(VPolytope K);

    Vector query(const Vector& u) const override;
    std::size_t dim() const override { return K_.dim(); }
    double advertised_epsilon() const override { return 0.0; }
    double reference_diameter() const override { return K_.diameter(); }

    const VPolytope& polytope() const noexcept { return K_; }

private:
    VPolytope K_;
};

/// Exact answer plus a uniform perturbation from the ball of radius eps*Delta.
/// The perturbation is a pure function of (u, seed).
class NoisyOracle final : public OptOracle {
public:
    NoisyOracle(VPolytope K, double epsilon, std::uint64_t seed);

    Vector query(const Vector& u) const override;
    std::size_t dim() const override { return K_.dim(); }
    double advertised_epsilon() const override { return epsilon_; }
    double reference_diameter() const override { return K_.diameter(); }

private:
    VPolytope K_;
    double epsilon_;
    std::uint64_t seed_;
};

/// Mean of the ceil(fraction * n) data columns with the largest u . A_j;
/// ties broken by lowest column index.
///
/// Advertised epsilon and reference diameter are supplied by the caller (they
/// depend on the unknown latent polytope); defaults are 0 and diam(A).
class SubsetSmoothingOracle final : public OptOracle {
public:
    SubsetSmoothingOracle(PointMatrix A, double fraction);
    SubsetSmoothingOracle(PointMatrix A, double fraction, double advertised_epsilon,
                          double reference_diameter);

    Vector query(const Vector& u) const override;
    std::size_t dim() const override { return A_.dim(); }
    double advertised_epsilon() const override { return epsilon_; }
    double reference_diameter() const override { return reference_diameter_; }

    /// Same selection for any nonzero direction (no unit-norm requirement).
    Vector answer_for(const Vector& direction) const;
    /// Selected column indices, ascending.
    std::vector<std::size_t> top_indices(const Vector& direction) const;
    std::size_t subset_size() const noexcept { return subset_size_; }
    const PointMatrix& data() const noexcept { return A_; }

private:
    PointMatrix A_;
    std::size_t subset_size_;
    double epsilon_;
    double reference_diameter_;
};

/// Adversarial oracle that answers the zero vector to every query and logs
/// the queries. Reference diameter is 2 (a needle {l u : l in [-1,1]}) and
/// the advertised epsilon is 8 ln d / sqrt(d).
class NeedleOracle final : public OptOracle {
public:
    explicit NeedleOracle(std::size_t d);

    Vector query(const Vector& u) const override;
    std::size_t dim() const override { return d_; }
    double advertised_epsilon() const override;
    double reference_diameter() const override { return 2.0; }

    std::size_t query_count() const;
    /// Copy of the logged queries as columns.
    Matrix query_log() const;
    /// max_i |u . v_i| over logged queries.
    double max_abs_correlation(const Vector& u) const;

private:
    std::size_t d_;
    mutable std::mutex mutex_;
    mutable std::vector<double> log_;
};

struct NeedlePair {
    Vector u1;
    Vector u2;
    double bound = 0.0;             ///< 4 ln d / sqrt(d)
    double max_corr_u1 = 0.0;
    double max_corr_u2 = 0.0;
    std::size_t candidates_tried = 0;
};

/// Rejection-samples two unit needle directions consistent with every logged
/// query (max_i |u . v_i| <= 4 ln d / sqrt d) with |u1 - u2|, |u1 + u2| >= min_gap.
/// Throws PreconditionViolated after max_candidates draws.
NeedlePair find_consistent_needles(const NeedleOracle& oracle, std::uint64_t seed,
                                   double min_gap = 0.1, std::size_t max_candidates = 10'000'000);

struct OracleAudit {
    double containment_slack = 0.0;  ///< dist(x, K) - eps * Delta
    double optimality_slack = 0.0;   ///< u . x - max_y u . y + eps * Delta
    bool passed = false;
};

/// Checks both clauses of the oracle contract for one answer against a known
/// polytope. Delta defaults to diam(K); pass reference_diameter > 0 to audit
/// against a different scale.
OracleAudit audit_answer(const VPolytope& K, const Vector& u, const Vector& x, double epsilon,
                         double tol, double reference_diameter = -1.0);

}  // namespace polylearn::oracles
