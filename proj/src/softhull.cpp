#include "polylearn/softhull.hpp"

#include "polylearn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polylearn::softhull {

namespace {

constexpr double kSolverTol = 1e-9;

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Soft-hull membership of every column of W in CH(T) + radius B; stops at the
// first failure. Witnesses are collected when requested.
bool covers(const PointMatrix& T, const PointMatrix& W, double radius,
            std::vector<SimplexCoeffs>* witnesses) {
    for (std::size_t j = 0; j < W.count(); ++j) {
        SimplexCoeffs w;
        if (!geometry::hull_within(W.col(j), T, radius, kSolverTol, witnesses ? &w : nullptr)) {
            return false;
        }
        if (witnesses) witnesses->push_back(std::move(w));
    }
    return true;
}

bool separated(const PointMatrix& T, double threshold) {
    if (T.count() <= 1) return true;
    for (std::size_t t = 0; t < T.count(); ++t) {
        // dist > threshold  <=>  not within threshold
        if (threshold < 0.0) continue;
        if (geometry::hull_within(T.col(t), T.without(t), threshold, kSolverTol)) return false;
    }
    return true;
}

void check_pair(const PointMatrix& T, const PointMatrix& W, const char* what) {
    if (T.empty()) throw InvalidArgument(std::string(what) + ": T is empty");
    if (W.empty()) throw InvalidArgument(std::string(what) + ": W is empty");
    require_same_dim(T.dim(), W.dim(), what);
}

}  // namespace

void EnvelopeParams::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw InvalidArgument("EnvelopeParams: epsilon must be nonnegative");
    }
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("EnvelopeParams: delta must lie in (0, 1]");
    if (!(epsilon3 > 0.0) || !std::isfinite(epsilon3)) {
        throw InvalidArgument("EnvelopeParams: epsilon3 must be positive");
    }
}

std::vector<std::string> EnvelopeParams::guarantee_warnings() const {
    std::vector<std::string> out;
    const auto in_range = [](double v) { return v > 0.0 && v < 0.125; };
    if (!in_range(epsilon) || !in_range(delta) || !in_range(epsilon3)) {
        out.push_back("envelope parameters outside (0, 1/8): epsilon=" + fmt(epsilon) +
                      " delta=" + fmt(delta) + " epsilon3=" + fmt(epsilon3));
    }
    if (!(epsilon3 > epsilon)) {
        out.push_back("epsilon3=" + fmt(epsilon3) + " does not exceed epsilon=" + fmt(epsilon));
    } else {
        const double bound = std::max(2.0 * epsilon / (epsilon3 - epsilon), 4.0 * epsilon3);
        if (!(delta > bound)) {
            out.push_back("delta=" + fmt(delta) + " does not exceed max(2eps/(eps3-eps), 4eps3)=" + fmt(bound));
        }
    }
    return out;
}

SoftMembership in_soft_hull(const Vector& w, const PointMatrix& S, double epsilon, double diamW,
                            double tol) {
    if (S.empty()) throw InvalidArgument("in_soft_hull: S is empty");
    require_same_dim(static_cast<std::size_t>(w.size()), S.dim(), "in_soft_hull");
    if (diamW < 0.0) throw InvalidArgument("in_soft_hull: negative diameter");
    SoftMembership out;
    SimplexCoeffs witness;
    out.inside = geometry::hull_within(w, S, epsilon * diamW + tol, kSolverTol, &witness);
    if (out.inside) out.witness = std::move(witness);
    return out;
}

bool is_env(const PointMatrix& T, const PointMatrix& W, double epsilon, double tol) {
    check_pair(T, W, "is_env");
    const double diam = geometry::diameter(W);
    return covers(T, W, (epsilon + tol) * diam, nullptr);
}

bool is_eps_delta_env(const PointMatrix& T, const PointMatrix& W, const EnvelopeParams& params,
                      double tol) {
    check_pair(T, W, "is_eps_delta_env");
    const double diam = geometry::diameter(W);
    if (!covers(T, W, (params.epsilon + tol) * diam, nullptr)) return false;
    return separated(T, (params.delta - tol) * diam);
}

EnvelopeResult find_soft_envelope(const PointMatrix& W, const EnvelopeParams& params, double tol) {
    if (W.empty()) throw InvalidArgument("find_soft_envelope: W is empty");
    params.validate();

    EnvelopeResult out;
    out.warnings = params.guarantee_warnings();
    const double diam = geometry::diameter(W);
    out.diameter = diam;
    const Matrix& M = W.matrix();
    const auto n = static_cast<std::size_t>(M.cols());
    const double far2 = std::pow(params.epsilon3 * diam, 2);

    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < n; ++j) {
        const Vector dist2 = (M.colwise() - M.col(static_cast<Eigen::Index>(j))).colwise().squaredNorm();
        std::vector<std::size_t> far;
        for (std::size_t i = 0; i < n; ++i) {
            if (dist2(static_cast<Eigen::Index>(i)) >= far2 && i != j) far.push_back(i);
        }
        bool pruned = false;
        if (!far.empty() && diam > 0.0) {
            pruned = geometry::hull_within(M.col(static_cast<Eigen::Index>(j)), W.select(far),
                                           (params.epsilon + tol) * diam, kSolverTol);
        }
        if (pruned) {
            ++out.pruned_count;
        } else {
            candidates.push_back(j);
        }
    }
    out.candidate_count = candidates.size();

    const double sep2 = std::pow(2.0 * params.epsilon3 * diam, 2);
    for (std::size_t j : candidates) {
        bool keep = true;
        for (std::size_t q : out.indices) {
            if ((M.col(static_cast<Eigen::Index>(j)) - M.col(static_cast<Eigen::Index>(q))).squaredNorm() <= sep2) {
                keep = false;
                break;
            }
        }
        if (keep) out.indices.push_back(j);
    }
    if (out.indices.empty()) return out;
    out.Q = W.select(out.indices);

    std::vector<SimplexCoeffs> certificate;
    const bool env = covers(out.Q, W, (params.epsilon + tol) * diam, &certificate);
    if (env && separated(out.Q, (params.delta - tol) * diam)) {
        out.verdict = Verdict::Found;
        out.certificate = std::move(certificate);
    }
    return out;
}

EnvelopeResult find_soft_envelope_sqrt(const PointMatrix& W, double epsilon, double delta, double tol) {
    if (!(epsilon > 0.0)) throw InvalidArgument("find_soft_envelope_sqrt: epsilon must be positive");
    if (!(delta > 16.0 * std::sqrt(epsilon))) {
        throw PreconditionViolated("find_soft_envelope_sqrt: requires delta > 16 sqrt(epsilon), got delta=" +
                                   fmt(delta) + " and 16 sqrt(epsilon)=" + fmt(16.0 * std::sqrt(epsilon)));
    }
    return find_soft_envelope(W, EnvelopeParams{epsilon, delta, 4.0 * std::sqrt(epsilon)}, tol);
}

}  // namespace polylearn::softhull
