#include "brute_force.hpp"

#include "polylearn/datagen.hpp"
#include "polylearn/random.hpp"
#include "polylearn/rsh.hpp"

#include <doctest.h>

using namespace polylearn;
using brute::cols;
using brute::vec;

TEST_CASE("margin") {
    const VPolytope K{cols({{0, 0}, {1, 0}, {0, 1}})};
    for (std::uint64_t t = 0; t < 20; ++t) {
        Rng rng = stream_rng(2, t);
        const Vector u = gaussian_vector(rng, 2);
        CHECK(rsh::margin(u, K.vertices().col(1), K) <= 0.0);
        const Vector a = 3.0 * gaussian_vector(rng, 2);
        double best = -INFINITY;
        for (int l = 0; l < 3; ++l) best = std::max(best, u.dot(K.vertices().col(l)));
        CHECK(rsh::margin(u, a, K) == doctest::Approx(u.dot(a) - best));
    }
    CHECK(rsh::margin(vec({1, 0}), vec({1, 0}), VPolytope{cols({{0, 0}})}) == 1.0);
    CHECK_THROWS_AS(rsh::margin(vec({1, 0, 0}), vec({1, 0}), K), DimensionMismatch);
}

TEST_CASE("threshold factor and bound arithmetic") {
    const double l2 = std::log(2.0);
    CHECK(rsh::margin_threshold_factor(2, 1.0, 50) == doctest::Approx(std::sqrt(l2) / (std::sqrt(l2) + 4 * std::sqrt(50.0))));
    CHECK(rsh::margin_threshold_factor(2, 1.0, 50) == doctest::Approx(0.0286).epsilon(2e-3));
    CHECK(rsh::margin_threshold_factor(1, 0.5, 10) == 0.0);
    CHECK(rsh::theoretical_lower_bound(2, 1.0) == doctest::Approx(2.44140625e-5));
}

TEST_CASE("wilson interval brackets the point estimate") {
    const auto w = rsh::wilson_interval(30, 1000);
    CHECK(w.lower < 0.03);
    CHECK(w.upper > 0.03);
    CHECK(w.lower > 0.0);
    const auto z = rsh::wilson_interval(0, 100);
    CHECK(z.lower == doctest::Approx(0.0).scale(1e-12));
}

TEST_CASE("rsh estimate on the segment fixture") {
    const auto fx = datagen::fixtures(50);
    const VPolytope K{fx.at("example1-segment")};
    const Vector a = fx.at("example1-point").col(0);
    rsh::RshOptions opt;
    opt.trials = 20000;
    opt.seed = 4;
    const auto est = rsh::estimate_rsh_probability(K, a, 1.0, 50, opt);
    CHECK(est.trials == 20000);
    CHECK(est.successes <= est.trials);
    CHECK(est.empirical_probability == doctest::Approx(static_cast<double>(est.successes) / est.trials));
    CHECK(est.measured_delta == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(est.subspace_dim == 50);
    CHECK(est.span_dim == 2);
    CHECK(est.empirical_probability >= est.theoretical_lower_bound);
    CHECK(est.interval.lower <= est.empirical_probability);
    REQUIRE(est.normalized_margin_quantiles.size() == 3);
    CHECK(est.normalized_margin_quantiles[0] <= est.normalized_margin_quantiles[2]);

    opt.threads = 3;
    const auto par = rsh::estimate_rsh_probability(K, a, 1.0, 50, opt);
    CHECK(par.successes == est.successes);
    CHECK(par.normalized_margin_quantiles == est.normalized_margin_quantiles);
}

TEST_CASE("rsh precondition rejects points inside the softened hull") {
    const VPolytope K{cols({{0, 0}, {1, 0}})};
    rsh::RshOptions opt;
    opt.trials = 100;
    CHECK_THROWS_AS(rsh::estimate_rsh_probability(K, vec({0.5, 0.4}), 1.0, 2, opt), PreconditionViolated);
    CHECK_THROWS_AS(rsh::estimate_rsh_probability(K, vec({0.5, 0.25}), 0.5, 2, opt), PreconditionViolated);
    CHECK_NOTHROW(rsh::estimate_rsh_probability(K, vec({0.5, 0.5}), 0.5, 2, opt));
}

TEST_CASE("containing subspace is orthonormal and contains the data") {
    const VPolytope K{cols({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}})};
    const Vector a = vec({0, 0, 1, 1, 0});
    std::size_t span = 0;
    const Matrix B = rsh::containing_subspace(K, a, 4, 8, &span);
    CHECK(span == 3);
    CHECK(B.cols() == 4);
    CHECK((B.transpose() * B - Matrix::Identity(4, 4)).norm() <= 1e-10);
    CHECK((B * (B.transpose() * a) - a).norm() <= 1e-10);
    for (int l = 0; l < 2; ++l) {
        const Vector v = K.vertices().col(l);
        CHECK((B * (B.transpose() * v) - v).norm() <= 1e-10);
    }
}

TEST_CASE("success event is invariant under positive rescaling of u") {
    const VPolytope K{cols({{0, 0, 0}, {1, 0, 0}})};
    const Vector a = vec({0.5, 1, 0});
    const double f = rsh::margin_threshold_factor(2, 1.0, 3);
    for (std::uint64_t t = 0; t < 200; ++t) {
        Rng rng = stream_rng(6, t);
        const Vector u = gaussian_vector(rng, 3);
        const auto event = [&](const Vector& v) { return rsh::margin(v, a, K) >= v.norm() * K.diameter() * f; };
        CHECK(event(u) == event(7.5 * u));
    }
}

TEST_CASE("separate_via_opt") {
    const VPolytope tri{cols({{0, 0}, {1, 0}, {0, 1}})};
    const oracles::ExactOracle exact(tri);
    const auto inside = rsh::separate_via_opt(vec({1, 0}), exact, 0.5, 2000, 1);
    CHECK(inside.verdict == rsh::Verdict::InsideSoftened);
    CHECK_FALSE(inside.separator.has_value());
    CHECK(inside.queries_used == 2000);

    const std::size_t d = 10;
    Matrix seg = Matrix::Zero(d, 2);
    seg(0, 1) = 1.0;
    const VPolytope K{PointMatrix(seg)};
    Vector a = Vector::Zero(d);
    a(0) = 0.5;
    a(1) = 0.5;
    const auto res = rsh::separate_via_opt(a, oracles::ExactOracle(K), 0.5, 100000, 3);
    REQUIRE(res.verdict == rsh::Verdict::Separated);
    CHECK(res.separator->norm() == doctest::Approx(1.0));
    CHECK(rsh::margin(*res.separator, a, K) > 0.0);
    CHECK(rsh::margin(*res.separator, a, K) >= 0.5 * K.diameter() / (20.0 * std::sqrt(10.0)));
    CHECK(res.threshold == doctest::Approx(0.5 / (11.0 * std::sqrt(10.0))));

    const oracles::NoisyOracle loose(K, 0.2, 1);
    const auto warned = rsh::separate_via_opt(a, loose, 0.5, 10, 3);
    CHECK_FALSE(warned.warnings.empty());
}

TEST_CASE("default query budget") {
    CHECK(rsh::default_query_budget(2, 1.0) == static_cast<std::size_t>(std::ceil(40.0 * 1024.0 * std::log(100.0))));
    CHECK(rsh::default_query_budget(4, 0.5) == 1000000);
}
