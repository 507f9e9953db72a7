#include "polylearn/datagen.hpp"

#include "polylearn/geometry.hpp"
#include "polylearn/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace polylearn::datagen {

namespace {

std::size_t ceil_count(double fraction, std::size_t n) {
    const double raw = fraction * static_cast<double>(n);
    return static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw));
}

Vector dirichlet_point(Rng& rng, const Matrix& vertices) {
    std::exponential_distribution<double> expo(1.0);
    Vector weights(vertices.cols());
    for (Eigen::Index i = 0; i < weights.size(); ++i) weights(i) = expo(rng);
    weights /= weights.sum();
    return vertices * weights;
}

std::vector<std::vector<std::size_t>> clusters_by_radius(const Matrix& P, const Matrix& M, double radius) {
    std::vector<std::vector<std::size_t>> sets(static_cast<std::size_t>(M.cols()));
    for (Eigen::Index l = 0; l < M.cols(); ++l) {
        const Vector dist = (P.colwise() - M.col(l)).colwise().norm();
        for (Eigen::Index j = 0; j < P.cols(); ++j) {
            if (dist(j) <= radius) sets[static_cast<std::size_t>(l)].push_back(static_cast<std::size_t>(j));
        }
    }
    return sets;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

double spectral_norm(const Matrix& E, double rel_tol, std::size_t max_iter) {
    if (E.size() == 0) return 0.0;
    const Matrix G = E.rows() <= E.cols() ? Matrix(E * E.transpose()) : Matrix(E.transpose() * E);
    if (G.norm() == 0.0) return 0.0;
    Vector v = Vector::LinSpaced(G.rows(), 1.0, 2.0);
    v.normalize();
    double lambda = v.dot(G * v);
    for (std::size_t it = 0; it < max_iter; ++it) {
        Vector w = G * v;
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        v = w / norm;
        const double next = v.dot(G * v);
        const bool done = std::abs(next - lambda) <= rel_tol * std::abs(next);
        lambda = next;
        if (done) break;
    }
    return std::sqrt(std::max(0.0, lambda));
}

std::vector<std::string> check_invariants(const LkpInstance& inst, double tol) {
    std::vector<std::string> problems;
    const std::size_t n = inst.n();
    if (inst.A.count() != n || inst.A.dim() != inst.d() || inst.P.dim() != inst.d()) {
        problems.push_back("shape mismatch between M, P and A");
        return problems;
    }
    const double diam = inst.M.diameter();
    for (std::size_t j = 0; j < n; ++j) {
        const double dist = geometry::dist_to_hull(inst.P.col(j), inst.M.vertices(), 1e-9).distance;
        if (dist > tol * std::max(1.0, diam)) {
            problems.push_back("latent point " + std::to_string(j) + " lies " + fmt(dist) + " outside CH(M)");
            break;
        }
    }
    if (inst.cluster_sets.size() != inst.k()) problems.push_back("cluster_sets must have k entries");
    const double radius = inst.w0 > 0.0 ? inst.sigma0 / std::sqrt(inst.w0) : 0.0;
    for (std::size_t l = 0; l < inst.cluster_sets.size(); ++l) {
        const auto& C = inst.cluster_sets[l];
        if (static_cast<double>(C.size()) < inst.w0 * static_cast<double>(n) - 1e-9) {
            problems.push_back("cluster " + std::to_string(l) + " has " + std::to_string(C.size()) +
                               " points, fewer than w0*n");
        }
        for (std::size_t j : C) {
            const double dist = (inst.P.col(j) - inst.M.vertices().col(l)).norm();
            if (dist > radius * (1.0 + 1e-12) + 1e-15) {
                problems.push_back("cluster " + std::to_string(l) + " member " + std::to_string(j) +
                                   " is farther than sigma0/sqrt(w0) from its vertex");
                break;
            }
        }
    }
    const double measured = spectral_norm(inst.P.matrix() - inst.A.matrix()) / std::sqrt(static_cast<double>(n));
    if (std::abs(measured - inst.sigma0) > 1e-6 * std::max(1.0, measured)) {
        problems.push_back("sigma0 " + fmt(inst.sigma0) + " differs from measured " + fmt(measured));
    }
    return problems;
}

PolytopeSample gen_well_separated_polytope(std::size_t d, std::size_t k, double delta_target,
                                           std::uint64_t seed, double scale) {
    if (k < 2) throw InvalidArgument("gen_well_separated_polytope: k must be at least 2");
    if (d < 1) throw InvalidArgument("gen_well_separated_polytope: d must be positive");
    constexpr std::size_t kBudget = 10000;
    for (std::size_t attempt = 0; attempt < kBudget; ++attempt) {
        Rng rng = stream_rng(seed, attempt);
        Matrix V(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k));
        for (Eigen::Index j = 0; j < V.cols(); ++j) V.col(j) = scale * gaussian_vector(rng, d);
        VPolytope K{PointMatrix(V)};
        const double sep = geometry::well_separation(K);
        if (sep >= delta_target) return PolytopeSample{std::move(K), sep, attempt + 1};
    }
    throw PreconditionViolated("gen_well_separated_polytope: no " + fmt(delta_target) +
                               "-well-separated sample within 10^4 attempts");
}

LkpInstance gen_lkp(const VPolytope& M, std::size_t n, double w0, double noise_scale,
                    std::uint64_t seed, const LkpOptions& options) {
    const std::size_t k = M.size();
    const std::size_t d = M.dim();
    if (!(w0 > 0.0 && w0 <= 1.0)) throw InvalidArgument("gen_lkp: w0 must lie in (0, 1]");
    if (w0 * static_cast<double>(k) > 1.0 + 1e-12) {
        throw InvalidArgument("gen_lkp: infeasible w0 * k = " + fmt(w0 * static_cast<double>(k)) + " > 1");
    }
    const std::size_t per_cluster = ceil_count(w0, n);
    if (per_cluster * k > n) {
        throw InvalidArgument("gen_lkp: ceil(w0*n)*k = " + std::to_string(per_cluster * k) + " exceeds n = " +
                              std::to_string(n));
    }
    if (noise_scale < 0.0) throw InvalidArgument("gen_lkp: noise_scale must be nonnegative");

    Rng perm_rng = stream_rng(seed, 0);
    Rng latent_rng = stream_rng(seed, 1);
    Rng noise_rng = stream_rng(seed, 2);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), perm_rng);

    const Matrix& V = M.vertices().matrix();
    const auto dd = static_cast<Eigen::Index>(d);
    const auto nn = static_cast<Eigen::Index>(n);

    Matrix E = Matrix::Zero(dd, nn);
    if (noise_scale > 0.0) {
        std::normal_distribution<double> normal(0.0, noise_scale);
        for (Eigen::Index j = 0; j < nn; ++j)
            for (Eigen::Index i = 0; i < dd; ++i) E(i, j) = normal(noise_rng);
    }
    LkpInstance inst{M, PointMatrix(dd, nn), PointMatrix(dd, nn), w0, 0.0, {}, seed};
    inst.sigma0 = spectral_norm(E) / std::sqrt(static_cast<double>(n));
    const double radius = inst.sigma0 / std::sqrt(w0);

    Matrix P(dd, nn);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const auto j = static_cast<Eigen::Index>(order[pos]);
        if (pos < per_cluster * k) {
            const auto l = static_cast<Eigen::Index>(pos / per_cluster);
            Vector p = V.col(l);
            if (options.cluster_spread > 0.0) {
                const Vector target = dirichlet_point(latent_rng, V);
                Vector shift = options.cluster_spread * unif(latent_rng) * (target - p);
                const double len = shift.norm();
                // Clamp strictly inside so rounding cannot push the point past the radius.
                if (len > radius) shift *= (len > 0.0 ? radius * (1.0 - 1e-9) / len : 0.0);
                p += shift;
            }
            P.col(j) = p;
        } else {
            P.col(j) = dirichlet_point(latent_rng, V);
        }
    }
    inst.cluster_sets = clusters_by_radius(P, V, radius);
    inst.A = PointMatrix(P + E);
    inst.P = PointMatrix(std::move(P));
    return inst;
}

LkpInstance gen_two_gaussian_mixture(std::size_t d, std::size_t n, double v_norm, std::uint64_t seed) {
    if (d < 1) throw InvalidArgument("gen_two_gaussian_mixture: d must be positive");
    if (n == 0 || n % 2 != 0) throw InvalidArgument("gen_two_gaussian_mixture: n must be even and positive");
    if (!(v_norm > 0.0)) throw InvalidArgument("gen_two_gaussian_mixture: v_norm must be positive");

    Rng dir_rng = stream_rng(seed, 0);
    Rng perm_rng = stream_rng(seed, 1);
    Rng noise_rng = stream_rng(seed, 2);

    const Vector v = v_norm * unit_vector(dir_rng, d);
    Matrix Mv(static_cast<Eigen::Index>(d), 2);
    Mv.col(0) = v;
    Mv.col(1) = -v;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), perm_rng);

    const auto dd = static_cast<Eigen::Index>(d);
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix P(dd, nn);
    for (std::size_t pos = 0; pos < n; ++pos) {
        P.col(static_cast<Eigen::Index>(order[pos])) = pos < n / 2 ? v : Vector(-v);
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix E(dd, nn);
    for (Eigen::Index j = 0; j < nn; ++j)
        for (Eigen::Index i = 0; i < dd; ++i) E(i, j) = normal(noise_rng);

    LkpInstance inst{VPolytope(PointMatrix(Mv)), PointMatrix(P), PointMatrix(P + E), 0.5, 0.0, {}, seed};
    inst.sigma0 = spectral_norm(E) / std::sqrt(static_cast<double>(n));
    inst.cluster_sets = clusters_by_radius(P, Mv, inst.sigma0 / std::sqrt(0.5));
    return inst;
}

PointMatrix sphere_fixture(std::size_t d, std::size_t k) {
    if (d < 4) throw InvalidArgument("sphere_fixture: needs d >= 4");
    if (k < 1) throw InvalidArgument("sphere_fixture: k must be positive");
    Matrix V = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < k; ++i) {
        const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(k);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(i);
        const auto j = static_cast<Eigen::Index>(i);
        V(1, j) = 0.5 * r * std::cos(phi);
        V(2, j) = 0.5 * r * std::sin(phi);
        V(3, j) = 0.5 * z;
    }
    return PointMatrix(std::move(V));
}

std::map<std::string, PointMatrix> fixtures(std::size_t d, std::size_t sphere_k) {
    if (d < 4) throw InvalidArgument("fixtures: d must be at least 4");
    std::map<std::string, PointMatrix> out;
    const double two_pi = 2.0 * std::numbers::pi;

    {
        // Center plus 8 points on a circle of radius 0.01, at (0,0) and (1,0).
        Matrix W(2, 18);
        for (int c = 0; c < 2; ++c) {
            const double cx = c;
            W.col(9 * c) << cx, 0.0;
            for (int i = 0; i < 8; ++i) {
                const double t = two_pi * i / 8.0;
                W.col(9 * c + 1 + i) << cx + 0.01 * std::cos(t), 0.01 * std::sin(t);
            }
        }
        out.emplace("two-cluster", PointMatrix(std::move(W)));
    }
    {
        // 16 points on circles of radius 0.05 around (0,0) and (0,1).
        Matrix W(2, 32);
        for (int c = 0; c < 2; ++c) {
            for (int i = 0; i < 16; ++i) {
                const double t = two_pi * i / 16.0;
                W.col(16 * c + i) << 0.05 * std::cos(t), c + 0.05 * std::sin(t);
            }
        }
        out.emplace("two-rings", PointMatrix(std::move(W)));
    }
    {
        Matrix W(2, 5);
        W << 0.0, 1.0, 1.0, 0.0, 0.5,
             0.0, 0.0, 1.0, 1.0, 1.0;
        out.emplace("square-plus-midpoint", PointMatrix(std::move(W)));
    }
    const auto dd = static_cast<Eigen::Index>(d);
    {
        Vector u1 = Vector::Zero(dd);
        u1(0) = 1.0;
        Vector u2 = Vector::Zero(dd);
        u2(0) = u2(1) = 1.0 / std::sqrt(2.0);
        Matrix W(dd, 4);
        W.col(0) = u1;
        W.col(1) = -u1;
        W.col(2) = u2;
        W.col(3) = -u2;
        out.emplace("needle-pair", PointMatrix(std::move(W)));
    }
    {
        Matrix W = Matrix::Zero(dd, 2);
        W(0, 1) = 1.0;
        out.emplace("example1-segment", PointMatrix(std::move(W)));
        Matrix a = Matrix::Zero(dd, 1);
        a(0, 0) = 0.5;
        a(1, 0) = 1.0;
        out.emplace("example1-point", PointMatrix(std::move(a)));
    }
    {
        out.emplace("example2-sphere", sphere_fixture(d, sphere_k));
        Matrix a = Matrix::Zero(dd, 1);
        a(0, 0) = 1.0;
        out.emplace("example2-point", PointMatrix(std::move(a)));
    }
    return out;
}

}  // namespace polylearn::datagen
