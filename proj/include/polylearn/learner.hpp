#pragma once

#include "polylearn/oracles.hpp"
#include "polylearn/point_matrix.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polylearn::learner {

struct ProbeSet {
    PointMatrix directions;  ///< unit columns u^1..u^m
    PointMatrix answers;     ///< x(u^1)..x(u^m)
    std::uint64_t seed = 0;
};

/// An oracle call failed; index() is the offending probe.
class ProbeError : public Error {
public:
    ProbeError(std::size_t index, const std::string& what)
        : Error("probe " + std::to_string(index) + ": " + what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

struct Hypothesis {
    std::string name;
    bool held = false;
    std::string detail;
};

struct LearnReport {
    std::optional<double> hausdorff_to_truth;
    std::optional<std::vector<double>> per_vertex_error;
    std::optional<bool> success;
    std::size_t query_count = 0;
    double epsilon = 0.0;
    std::optional<double> delta;
    /// Probe count the worst-case analysis asks for (may be +inf).
    std::optional<double> theory_recommended_m;
    std::vector<Hypothesis> hypotheses;
    std::vector<std::string> warnings;
};

struct LearnResult {
    ProbeSet probes;
    LearnReport report;
};

struct ProbeOptions {
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    /// Orthonormal d x s basis; directions are drawn uniformly from its unit sphere.
    std::optional<Matrix> subspace;
};

/// m i.i.d. uniform unit directions, probe i drawn from its own RNG stream,
/// answered by the oracle in order.
ProbeSet random_probes(const oracles::OptOracle& oracle, std::size_t m, const ProbeOptions& options);

struct LearnOptions {
    ProbeOptions probes;
    std::optional<double> delta;
    TheoryConstants constants;
    double tol = 1e-7;
};

/// Random probes plus Haus(CH(answers), truth) when the truth is known.
LearnResult hausdorff_learn(const oracles::OptOracle& oracle, std::size_t m,
                            const std::optional<VPolytope>& truth, const LearnOptions& options);

/// Random probes plus, per true vertex, the distance to the nearest answer.
/// Success iff every vertex is matched within delta * Delta / 10.
/// Throws PreconditionViolated if the truth is not delta-well-separated.
LearnResult list_learn(const oracles::OptOracle& oracle, std::size_t k, double delta, std::size_t m,
                       const std::optional<VPolytope>& truth, const LearnOptions& options);

/// Indices of the first occurrence of each distinct column (exact equality).
std::vector<std::size_t> unique_columns(const PointMatrix& W);

/// Haus(CH(first `prefix` answers), truth) for every prefix length 1..m.
std::vector<double> hausdorff_by_prefix(const ProbeSet& probes, const VPolytope& truth, double tol = 1e-7);

}  // namespace polylearn::learner
