#include "polylearn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace polylearn::geometry {

namespace {

void check_inputs(const Vector& x, const PointMatrix& S, double tol, const char* what) {
    if (S.empty()) throw InvalidArgument(std::string(what) + ": empty point set");
    require_same_dim(static_cast<std::size_t>(x.size()), S.dim(), what);
    require_finite(x, what);
    if (!(tol > 0.0)) throw InvalidArgument(std::string(what) + ": tol must be positive");
}

enum class Verdict { Converged, Inside, Outside, IterationCap };

struct SolveState {
    Vector lambda;
    double f = 0.0;
    double gap = 0.0;
    std::size_t iterations = 0;
    Verdict verdict = Verdict::IterationCap;
};

// Frank-Wolfe with away steps on f(l) = |S l - x|^2 over the simplex.
// With a radius, stops early once the answer to "dist <= radius" is certain.
SolveState frank_wolfe(const Vector& x, const Matrix& S, double tol, double scale,
                       std::optional<double> radius) {
    const Eigen::Index n = S.cols();
    SolveState st;

    Eigen::Index start = 0;
    (S.colwise() - x).colwise().squaredNorm().minCoeff(&start);
    st.lambda = Vector::Zero(n);
    st.lambda(start) = 1.0;
    Vector y = S.col(start);

    const double gap_target = (tol * scale) * (tol * scale);
    const double outer = radius ? *radius + tol * scale : 0.0;
    const auto cap = static_cast<std::size_t>(
        std::max(1000.0, 50.0 * static_cast<double>(n) * std::log(1.0 / std::min(tol, 0.5))));

    for (st.iterations = 0; st.iterations < cap; ++st.iterations) {
        if (st.iterations % 64 == 63) y = S * st.lambda;
        const Vector r = y - x;
        st.f = r.squaredNorm();
        if (radius && std::sqrt(st.f) <= *radius) {
            st.verdict = Verdict::Inside;
            return st;
        }
        const Vector g = S.transpose() * r;
        const double ry = r.dot(y);

        Eigen::Index fw = 0;
        g.minCoeff(&fw);
        Eigen::Index away = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (st.lambda(i) > 0.0 && (away < 0 || g(i) > g(away))) away = i;
        }

        st.gap = 2.0 * (ry - g(fw));
        if (radius && st.f - st.gap > outer * outer) {
            st.verdict = Verdict::Outside;
            return st;
        }
        if (st.gap <= gap_target) {
            st.verdict = Verdict::Converged;
            return st;
        }

        const bool use_fw = (ry - g(fw)) >= (g(away) - ry);
        Vector dir;
        double step_max;
        if (use_fw) {
            dir = S.col(fw) - y;
            step_max = 1.0;
        } else {
            dir = y - S.col(away);
            const double la = st.lambda(away);
            step_max = la < 1.0 ? la / (1.0 - la) : std::numeric_limits<double>::infinity();
        }
        const double dd = dir.squaredNorm();
        if (dd <= 0.0) {
            st.verdict = Verdict::Converged;
            return st;
        }
        const double step = std::clamp(-r.dot(dir) / dd, 0.0, step_max);
        if (step <= 0.0) {
            // No progress along the chosen direction: the gap is numerically exhausted.
            st.verdict = Verdict::Converged;
            return st;
        }

        if (use_fw) {
            st.lambda *= (1.0 - step);
            st.lambda(fw) += step;
        } else {
            st.lambda *= (1.0 + step);
            st.lambda(away) -= step;
            if (step == step_max) st.lambda(away) = 0.0;
        }
        y += step * dir;
    }
    st.verdict = Verdict::IterationCap;
    return st;
}

void clean_weights(Vector& lambda) {
    lambda = lambda.cwiseMax(0.0);
    const double s = lambda.sum();
    if (s > 0.0) lambda /= s;
}

double column_scale(const Vector& x, const Matrix& S) {
    return std::sqrt((S.colwise() - x).colwise().squaredNorm().maxCoeff());
}

}  // namespace

HullDistance dist_to_hull(const Vector& x, const PointMatrix& S, double tol) {
    check_inputs(x, S, tol, "dist_to_hull");
    const Matrix& M = S.matrix();
    const double scale = column_scale(x, M);
    HullDistance out;
    if (scale == 0.0) {
        out.witness = SimplexCoeffs::indicator(S.count(), 0);
        out.converged = true;
        return out;
    }
    SolveState st = frank_wolfe(x, M, tol, scale, std::nullopt);
    clean_weights(st.lambda);
    out.distance = (M * st.lambda - x).norm();
    out.witness = SimplexCoeffs{std::move(st.lambda)};
    out.gap = st.gap;
    out.iterations = st.iterations;
    out.converged = st.verdict == Verdict::Converged;
    return out;
}

bool hull_within(const Vector& x, const PointMatrix& S, double radius, double tol,
                 SimplexCoeffs* witness) {
    check_inputs(x, S, tol, "hull_within");
    if (radius < 0.0) throw InvalidArgument("hull_within: negative radius");
    const Matrix& M = S.matrix();
    const double scale = column_scale(x, M);
    if (scale == 0.0) {
        if (witness) *witness = SimplexCoeffs::indicator(S.count(), 0);
        return true;
    }
    SolveState st = frank_wolfe(x, M, tol, scale, radius);
    bool inside = false;
    switch (st.verdict) {
        case Verdict::Inside: inside = true; break;
        case Verdict::Outside: inside = false; break;
        default: inside = std::sqrt(st.f) <= radius + tol * scale; break;
    }
    if (witness && inside) {
        clean_weights(st.lambda);
        *witness = SimplexCoeffs{std::move(st.lambda)};
    }
    return inside;
}

double hausdorff(const PointMatrix& P, const PointMatrix& Q, double tol) {
    if (P.empty() || Q.empty()) throw InvalidArgument("hausdorff: empty input");
    require_same_dim(P.dim(), Q.dim(), "hausdorff");
    double h = 0.0;
    for (std::size_t j = 0; j < P.count(); ++j) {
        h = std::max(h, dist_to_hull(P.col(j), Q, tol).distance);
    }
    for (std::size_t j = 0; j < Q.count(); ++j) {
        h = std::max(h, dist_to_hull(Q.col(j), P, tol).distance);
    }
    return h;
}

double diameter(const PointMatrix& W) {
    if (W.empty()) throw InvalidArgument("diameter: empty input");
    const Matrix& M = W.matrix();
    const Eigen::Index n = M.cols();
    double best = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double d2 = (M.rightCols(n - i - 1).colwise() - M.col(i)).colwise().squaredNorm().maxCoeff();
        best = std::max(best, d2);
    }
    return std::sqrt(best);
}

double well_separation(const VPolytope& K, double tol) {
    if (K.size() < 2) throw InvalidArgument("well_separation: needs at least two vertices");
    const double delta = K.diameter();
    if (delta == 0.0) return 0.0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < K.size(); ++v) {
        const PointMatrix others = K.vertices().without(v);
        worst = std::min(worst, dist_to_hull(K.vertices().col(v), others, tol).distance);
    }
    return worst / delta;
}

}  // namespace polylearn::geometry
