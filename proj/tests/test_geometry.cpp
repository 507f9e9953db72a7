#include "brute_force.hpp"

#include "polylearn/geometry.hpp"
#include "polylearn/random.hpp"

#include <doctest.h>

using namespace polylearn;
using brute::cols;
using brute::vec;

TEST_CASE("dist_to_hull: member point has zero distance and indicator witness") {
    const PointMatrix S = cols({{0, 0}, {1, 0}, {0, 1}});
    const auto r = geometry::dist_to_hull(S.col(1), S);
    CHECK(r.distance == 0.0);
    CHECK(r.witness.valid());
    CHECK(r.witness.weights(1) == doctest::Approx(1.0));
}

TEST_CASE("dist_to_hull: perpendicular foot on a segment") {
    const auto r = geometry::dist_to_hull(vec({0.5, 1}), cols({{0, 0}, {1, 0}}));
    CHECK(r.distance == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("dist_to_hull: triangle corner against grid oracle") {
    const PointMatrix S = cols({{0, 0}, {1, 0}, {0, 1}});
    const Vector x = vec({1, 1});
    const double grid = brute::simplex_grid_distance(x, S);
    CHECK(grid == doctest::Approx(0.707107).epsilon(1e-4));
    const auto r = geometry::dist_to_hull(x, S);
    CHECK(r.distance == doctest::Approx(grid).epsilon(1e-4));
    CHECK((S.matrix() * r.witness.weights - x).norm() <= r.distance + 1e-7 * std::sqrt(2.0));
}

TEST_CASE("dist_to_hull: rejects bad input") {
    const PointMatrix S = cols({{0, 0}, {1, 0}});
    CHECK_THROWS_AS(geometry::dist_to_hull(vec({0, 0, 0}), S), DimensionMismatch);
    CHECK_THROWS_AS(geometry::dist_to_hull(vec({0, 0}), PointMatrix(2, 0)), InvalidArgument);
    CHECK_THROWS_AS(geometry::dist_to_hull(vec({NAN, 0}), S), InvalidArgument);
    CHECK_THROWS_AS(geometry::dist_to_hull(vec({0, 0}), S, 0.0), InvalidArgument);
}

TEST_CASE("dist_to_hull matches the simplex grid on small random instances") {
    for (std::uint64_t t = 0; t < 12; ++t) {
        Rng rng = stream_rng(11, t);
        const std::size_t d = 1 + t % 3, n = 1 + (t / 3) % 3;
        Matrix S(d, n);
        for (std::size_t j = 0; j < n; ++j) S.col(j) = gaussian_vector(rng, d);
        const Vector x = 1.5 * gaussian_vector(rng, d);
        const PointMatrix P(S);
        const double diam = brute::pairwise_diameter(P.with_column(x));
        const double grid = brute::simplex_grid_distance(x, P);
        const double fw = geometry::dist_to_hull(x, P).distance;
        CHECK(std::abs(grid - fw) <= 2e-3 * diam);
        CHECK(fw <= grid + 1e-7 * diam);
    }
}

TEST_CASE("dist_to_hull is 1-Lipschitz and zero iff the witness reconstructs x") {
    Rng rng = stream_rng(5, 0);
    Matrix S(4, 6);
    for (int j = 0; j < 6; ++j) S.col(j) = gaussian_vector(rng, 4);
    const PointMatrix P(S);
    for (int t = 0; t < 50; ++t) {
        const Vector x = 2.0 * gaussian_vector(rng, 4);
        const Vector x2 = x + 0.3 * gaussian_vector(rng, 4);
        const auto a = geometry::dist_to_hull(x, P);
        const auto b = geometry::dist_to_hull(x2, P);
        CHECK(std::abs(a.distance - b.distance) <= (x - x2).norm() + 1e-6);
        const double recon = (S * a.witness.weights - x).norm();
        CHECK(recon == doctest::Approx(a.distance).epsilon(1e-9));
    }
    Vector w = Vector::Constant(6, 1.0 / 6.0);
    const auto inside = geometry::dist_to_hull(S * w, P);
    CHECK(inside.distance <= 1e-6 * brute::pairwise_diameter(P));
}

TEST_CASE("hull_within agrees with dist_to_hull") {
    Rng rng = stream_rng(8, 0);
    Matrix S(3, 5);
    for (int j = 0; j < 5; ++j) S.col(j) = gaussian_vector(rng, 3);
    const PointMatrix P(S);
    for (int t = 0; t < 40; ++t) {
        const Vector x = 2.0 * gaussian_vector(rng, 3);
        const double dist = geometry::dist_to_hull(x, P, 1e-10).distance;
        CHECK(geometry::hull_within(x, P, dist * 1.01 + 1e-9, 1e-9));
        if (dist > 1e-3) CHECK_FALSE(geometry::hull_within(x, P, dist * 0.99, 1e-9));
    }
}

TEST_CASE("hausdorff examples") {
    const PointMatrix sq = cols({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(geometry::hausdorff(sq, sq) == doctest::Approx(0.0).scale(1e-9));
    CHECK(geometry::hausdorff(cols({{0, 0}, {1, 0}}), cols({{0, 0}})) == doctest::Approx(1.0));
    const PointMatrix shifted = cols({{0.3, 0}, {1.3, 0}, {1.3, 1}, {0.3, 1}});
    const double h = geometry::hausdorff(sq, shifted);
    CHECK(h == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(brute::sampled_planar_hausdorff(sq, shifted) == doctest::Approx(h).epsilon(1e-6));
}

TEST_CASE("hausdorff is symmetric and obeys the triangle inequality") {
    const double tol = 1e-7;
    for (std::uint64_t t = 0; t < 20; ++t) {
        Rng rng = stream_rng(21, t);
        const auto random_set = [&](int n) {
            Matrix M(2, n);
            for (int j = 0; j < n; ++j) M.col(j) = gaussian_vector(rng, 2);
            return PointMatrix(M);
        };
        const PointMatrix A = random_set(3), B = random_set(4), C = random_set(5);
        const double ab = geometry::hausdorff(A, B, tol), ba = geometry::hausdorff(B, A, tol);
        const double scale = brute::pairwise_diameter(PointMatrix(Matrix(
            (Matrix(2, 12) << A.matrix(), B.matrix(), C.matrix()).finished())));
        CHECK(std::abs(ab - ba) <= tol * scale);
        const double ac = geometry::hausdorff(A, C, tol), bc = geometry::hausdorff(B, C, tol);
        CHECK(ac <= ab + bc + 3 * tol * scale);
        CHECK(ab == doctest::Approx(brute::sampled_planar_hausdorff(A, B, 400)).epsilon(1e-3));
    }
}

TEST_CASE("diameter") {
    CHECK(geometry::diameter(cols({{1, 2}})) == 0.0);
    CHECK(geometry::diameter(cols({{0, 0}, {3, 4}})) == doctest::Approx(5.0));
    Rng rng = stream_rng(3, 0);
    Matrix M(3, 100);
    for (int j = 0; j < 100; ++j) {
        Vector v = gaussian_vector(rng, 3);
        M.col(j) = v / v.norm() * std::pow(std::uniform_real_distribution<double>(0, 1)(rng), 1.0 / 3.0);
    }
    const PointMatrix W(M);
    CHECK(geometry::diameter(W) == brute::pairwise_diameter(W));
    const Matrix Q = random_orthonormal(rng, 3, 3);
    CHECK(geometry::diameter(PointMatrix(Matrix(Q * M))) == doctest::Approx(geometry::diameter(W)).epsilon(1e-9));
    CHECK_THROWS(geometry::diameter(PointMatrix(3, 0)));
}

TEST_CASE("well_separation examples") {
    const VPolytope simplex{cols({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})};
    CHECK(geometry::well_separation(simplex) == doctest::Approx(std::sqrt(1.5) / std::sqrt(2.0)).epsilon(1e-4));
    CHECK(geometry::well_separation(VPolytope{cols({{0, 0}, {1, 0}})}) == doctest::Approx(1.0));
    const VPolytope with_centre{cols({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}})};
    CHECK(geometry::well_separation(with_centre) == doctest::Approx(0.0).scale(1e-6));
    CHECK_THROWS(geometry::well_separation(VPolytope{cols({{0, 0}})}));
    CHECK(geometry::well_separation(VPolytope{cols({{1, 1}, {1, 1}})}) == 0.0);
}
