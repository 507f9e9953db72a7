#include "brute_force.hpp"

#include "polylearn/geometry.hpp"
#include "polylearn/learner.hpp"
#include "polylearn/random.hpp"

#include <doctest.h>

#include <random>

using namespace polylearn;
using namespace polylearn::learner;
using brute::cols;

namespace {

const VPolytope kTriangle{cols({{0, 0}, {1, 0}, {0.5, 0.9}})};
const VPolytope kSquare{cols({{0, 0}, {1, 0}, {1, 1}, {0, 1}})};

bool is_vertex(const Vector& x, const VPolytope& K) {
    for (std::size_t l = 0; l < K.size(); ++l)
        if (x == Vector(K.vertices().col(l))) return true;
    return false;
}

class FailingOracle final : public oracles::OptOracle {
public:
    Vector query(const Vector& u) const override {
        if (u(0) > 0.9) throw Error("refused");
        return u;
    }
    std::size_t dim() const override { return 2; }
    double advertised_epsilon() const override { return 0.0; }
    double reference_diameter() const override { return 1.0; }
};

}  // namespace

TEST_CASE("random probes") {
    const oracles::ExactOracle seg(VPolytope{cols({{0, 0}, {1, 0}})});
    ProbeOptions po;
    po.seed = 5;
    const auto one = random_probes(seg, 1, po);
    CHECK(one.answers.count() == 1);
    CHECK(is_vertex(one.answers.col(0), VPolytope{cols({{0, 0}, {1, 0}})}));

    const oracles::ExactOracle tri(kTriangle);
    const auto probes = random_probes(tri, 300, po);
    CHECK(probes.directions.count() == 300);
    for (std::size_t i = 0; i < 300; ++i) {
        CHECK(probes.directions.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(is_vertex(probes.answers.col(i), kTriangle));
    }
    CHECK(random_probes(tri, 300, po).answers == probes.answers);
    po.threads = 4;
    CHECK(random_probes(tri, 300, po).answers == probes.answers);
    CHECK_THROWS_AS(random_probes(tri, 0, po), InvalidArgument);
}

TEST_CASE("noisy answers stay inside the softened polytope") {
    const oracles::NoisyOracle noisy(kTriangle, 0.05, 2);
    const auto probes = random_probes(noisy, 200, {});
    for (std::size_t i = 0; i < 200; ++i) {
        CHECK(geometry::dist_to_hull(probes.answers.col(i), kTriangle.vertices()).distance <=
              0.05 * kTriangle.diameter() + 1e-9);
    }
}

TEST_CASE("probes restricted to a subspace") {
    Matrix K = Matrix::Zero(4, 2);
    K(0, 1) = 1.0;
    const oracles::ExactOracle o(VPolytope{PointMatrix(K)});
    ProbeOptions po;
    Matrix B = Matrix::Zero(4, 2);
    B(0, 0) = 1.0;
    B(2, 1) = 1.0;
    po.subspace = B;
    const auto probes = random_probes(o, 50, po);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(probes.directions.col(i)(1) == 0.0);
        CHECK(probes.directions.col(i)(3) == 0.0);
    }
    po.subspace = Matrix::Ones(4, 2);
    CHECK_THROWS_AS(random_probes(o, 5, po), InvalidArgument);
}

TEST_CASE("oracle failures carry the probe index") {
    const FailingOracle o;
    try {
        random_probes(o, 200, {});
        FAIL("expected ProbeError");
    } catch (const ProbeError& e) {
        Rng rng = stream_rng(0, e.index());
        CHECK(unit_vector(rng, 2)(0) > 0.9);
    }
}

TEST_CASE("hausdorff learner") {
    const oracles::ExactOracle sq(kSquare);
    LearnOptions lo;
    lo.probes.seed = 1;
    lo.delta = 0.5;
    const auto res = hausdorff_learn(sq, 500, kSquare, lo);
    REQUIRE(res.report.hausdorff_to_truth.has_value());
    CHECK(*res.report.hausdorff_to_truth <= 0.05 * kSquare.diameter());
    CHECK(res.report.query_count == 500);
    CHECK(res.report.theory_recommended_m.has_value());

    const auto one = hausdorff_learn(oracles::ExactOracle(VPolytope{cols({{0, 0}, {1, 0}})}), 1,
                                     VPolytope{cols({{0, 0}, {1, 0}})}, lo);
    CHECK(*one.report.hausdorff_to_truth == doctest::Approx(1.0));

    // Probe hull contained in K for an exact oracle: one-sided distance is 0.
    for (std::size_t i = 0; i < res.probes.answers.count(); ++i) {
        CHECK(brute::planar_hull_distance(res.probes.answers.col(i), kSquare.vertices()) <= 1e-12);
    }
}

TEST_CASE("hausdorff by prefix is non-increasing and permutation invariant") {
    // Non-increase needs every answer inside K, so the exact oracle is used.
    Matrix ring(2, 12);
    for (int j = 0; j < 12; ++j) ring.col(j) << std::cos(j * 0.5236), std::sin(j * 0.5236);
    const VPolytope K{PointMatrix(ring)};
    LearnOptions lo;
    lo.probes.seed = 3;
    const auto res = hausdorff_learn(oracles::ExactOracle(K), 120, K, lo);
    const auto curve = hausdorff_by_prefix(res.probes, K);
    REQUIRE(curve.size() == 120);
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i] <= curve[i - 1] + 1e-9);
    CHECK(curve.back() == doctest::Approx(*res.report.hausdorff_to_truth).epsilon(1e-6));
    const PointMatrix distinct = res.probes.answers.select(unique_columns(res.probes.answers));
    CHECK(curve.back() == doctest::Approx(brute::sampled_planar_hausdorff(distinct, K.vertices(), 20)).epsilon(1e-6));

    std::vector<std::size_t> perm(120);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(1));
    const double shuffled = geometry::hausdorff(res.probes.answers.select(perm), K.vertices());
    CHECK(shuffled == doctest::Approx(*res.report.hausdorff_to_truth).epsilon(1e-6));
}

TEST_CASE("list learner") {
    const double delta = geometry::well_separation(kTriangle) * 0.99;
    LearnOptions lo;
    lo.probes.seed = 11;
    const auto exact = list_learn(oracles::ExactOracle(kTriangle), 3, delta, 3000, kTriangle, lo);
    REQUIRE(exact.report.per_vertex_error.has_value());
    for (double e : *exact.report.per_vertex_error) CHECK(e <= 1e-9);
    CHECK(*exact.report.success);

    const auto noisy = list_learn(oracles::NoisyOracle(kTriangle, 1e-3, 2), 3, delta, 3000, kTriangle, lo);
    for (double e : *noisy.report.per_vertex_error) {
        CHECK(e <= 1e-3 * kTriangle.diameter() + 1e-12);
        CHECK(e <= delta * kTriangle.diameter() / 10.0);
    }

    const auto weak = list_learn(oracles::NoisyOracle(kTriangle, 0.1, 2), 3, 0.2, 50, kTriangle, lo);
    bool named = false;
    for (const auto& w : weak.report.warnings) named = named || w.find("delta^2 >= c*eps*sqrt(d)") != std::string::npos;
    CHECK(named);

    CHECK_THROWS_AS(list_learn(oracles::ExactOracle(kTriangle), 3, 0.99, 10, kTriangle, lo), PreconditionViolated);
}

TEST_CASE("unique columns") {
    const PointMatrix W = cols({{0, 0}, {1, 0}, {0, 0}, {1, 0}, {2, 2}});
    CHECK(unique_columns(W) == std::vector<std::size_t>{0, 1, 4});
}
