#pragma once

#include "polylearn/point_matrix.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace polylearn::datagen {

/// Latent k-polytope dataset: latent points P in CH(M), observations A, and
/// the index sets C_l of latent points within sigma0/sqrt(w0) of vertex l.
struct LkpInstance {
    VPolytope M;
    PointMatrix P;
    PointMatrix A;
    double w0 = 0.0;
    /// ||P - A|| / sqrt(n), measured (spectral norm).
    double sigma0 = 0.0;
    std::vector<std::vector<std::size_t>> cluster_sets;
    std::uint64_t seed = 0;

    std::size_t k() const { return M.size(); }
    std::size_t n() const { return P.count(); }
    std::size_t d() const { return M.dim(); }
};

/// Names every violated instance invariant; empty when the instance is valid.
std::vector<std::string> check_invariants(const LkpInstance& inst, double tol = 1e-7);

/// Largest singular value via power iteration on E E^T, stopping at
/// `rel_tol` relative change.
double spectral_norm(const Matrix& E, double rel_tol = 1e-10, std::size_t max_iter = 10000);

struct PolytopeSample {
    VPolytope polytope;
    double separation = 0.0;
    std::size_t attempts = 0;
};

/// Rejection-samples k Gaussian points (scaled by `scale`) in R^d until their
/// well-separation reaches delta_target. Throws after 10^4 attempts.
PolytopeSample gen_well_separated_polytope(std::size_t d, std::size_t k, double delta_target,
                                           std::uint64_t seed, double scale = 1.0);

struct LkpOptions {
    /// Latent cluster points are pulled from the vertex toward a random point
    /// of K by a fraction drawn from [0, cluster_spread]; then clamped to the
    /// sigma0/sqrt(w0) ball around the vertex.
    double cluster_spread = 0.0;
};

/// ceil(w0 n) latent points per vertex, the rest Dirichlet(1..1) mixtures,
/// A = P + noise_scale * N(0, 1) i.i.d.; columns randomly permuted.
LkpInstance gen_lkp(const VPolytope& M, std::size_t n, double w0, double noise_scale,
                    std::uint64_t seed, const LkpOptions& options = {});

/// Equal mixture of two standard Gaussians at +v and -v, |v| = v_norm, v a
/// seeded random direction. K is the segment [-v, v], w0 = 1/2.
LkpInstance gen_two_gaussian_mixture(std::size_t d, std::size_t n, double v_norm, std::uint64_t seed);

/// Deterministic named point sets (no RNG):
///   two-cluster, two-rings, square-plus-midpoint, needle-pair,
///   example1-segment, example1-point, example2-sphere, example2-point.
std::map<std::string, PointMatrix> fixtures(std::size_t d = 50, std::size_t sphere_k = 16);

/// Vertices on a 2-sphere of radius 1/2 in coordinates 2..4 of R^d (x_1 = 0),
/// placed on a Fibonacci lattice.
PointMatrix sphere_fixture(std::size_t d, std::size_t k);

}  // namespace polylearn::datagen
