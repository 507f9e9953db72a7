#pragma once

#include "polylearn/point_matrix.hpp"

namespace polylearn::geometry {

/// Result of a distance-to-hull solve.
///
/// `distance` is |S w - x| for the returned witness, so it is an upper bound
/// on the true distance; `gap` is the final Frank-Wolfe duality gap, which
/// bounds |S w - x|^2 - dist^2 from above.
struct HullDistance {
    double distance = 0.0;
    SimplexCoeffs witness;
    double gap = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Euclidean distance from x to CH(S), accurate to tol * diam(S u {x}).
///
/// Solved by Frank-Wolfe with away steps on min |S l - x|^2 over the simplex.
/// Iteration stops once the duality gap drops below (tol * scale)^2 where
/// scale = max_i |S_i - x| (a lower bound on the diameter), or after
/// 50 * count * log(1/tol) iterations.
HullDistance dist_to_hull(const Vector& x, const PointMatrix& S, double tol = 1e-7);

/// Decides dist(x, CH(S)) <= radius + tol * scale without necessarily solving
/// to full accuracy: stops as soon as a feasible point lies inside the radius
/// or the dual bound certifies it lies outside.
bool hull_within(const Vector& x, const PointMatrix& S, double radius, double tol,
                 SimplexCoeffs* witness = nullptr);

/// Haus(CH(P), CH(Q)), evaluated vertex-wise.
double hausdorff(const PointMatrix& P, const PointMatrix& Q, double tol = 1e-7);

/// Exact maximum pairwise distance.
double diameter(const PointMatrix& W);

/// min over vertices v of dist(v, CH(others)) / diam(K). Returns 0 when the
/// diameter is 0.
double well_separation(const VPolytope& K, double tol = 1e-7);

}  // namespace polylearn::geometry
