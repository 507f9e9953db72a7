#include "polylearn/oracles.hpp"

#include "polylearn/geometry.hpp"
#include "polylearn/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace polylearn::oracles {

namespace {

constexpr double kUnitTol = 1e-9;
constexpr double kAuditGeomTol = 1e-10;

std::uint64_t hash_direction(const Vector& u, std::uint64_t seed) {
    std::uint64_t h = mix64(seed);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        h = mix64(h ^ std::bit_cast<std::uint64_t>(u(i)));
    }
    return h;
}

}  // namespace

void require_unit(const Vector& u, std::size_t dim, const char* what) {
    require_same_dim(static_cast<std::size_t>(u.size()), dim, what);
    require_finite(u, what);
    const double norm = u.norm();
    if (std::abs(norm - 1.0) > kUnitTol) {
        throw InvalidArgument(std::string(what) + ": query direction must be a unit vector (norm " +
                              std::to_string(norm) + ")");
    }
}

ExactOracle::ExactOracle(VPolytope K) : K_(std::move(K)) {}

Vector ExactOracle::query(const Vector& u) const {
    require_unit(u, dim(), "ExactOracle::query");
    return K_.vertices().col(K_.argmax(u));
}

NoisyOracle::NoisyOracle(VPolytope K, double epsilon, std::uint64_t seed)
    : K_(std::move(K)), epsilon_(epsilon), seed_(seed) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw InvalidArgument("NoisyOracle: epsilon must lie in [0, 1]");
    }
}

Vector NoisyOracle::query(const Vector& u) const {
    require_unit(u, dim(), "NoisyOracle::query");
    const Vector exact = K_.vertices().col(K_.argmax(u));
    const double radius = epsilon_ * K_.diameter();
    if (radius == 0.0) return exact;

    Rng rng(hash_direction(u, seed_));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Vector dir = unit_vector(rng, dim());
    const double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim()));
    Vector perturbation = r * dir;

    // Shrink until both contract clauses are certified against K.
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Vector x = exact + perturbation;
        if (audit_answer(K_, u, x, epsilon_, 0.0).passed) return x;
        perturbation *= 0.5;
    }
    return exact;
}

SubsetSmoothingOracle::SubsetSmoothingOracle(PointMatrix A, double fraction)
    : SubsetSmoothingOracle(A, fraction, 0.0, A.empty() ? 0.0 : geometry::diameter(A)) {}

SubsetSmoothingOracle::SubsetSmoothingOracle(PointMatrix A, double fraction,
                                             double advertised_epsilon, double reference_diameter)
    : A_(std::move(A)), subset_size_(0), epsilon_(advertised_epsilon),
      reference_diameter_(reference_diameter) {
    if (A_.empty()) throw InvalidArgument("SubsetSmoothingOracle: empty data");
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw InvalidArgument("SubsetSmoothingOracle: fraction must lie in (0, 1]");
    }
    const double raw = fraction * static_cast<double>(A_.count());
    // Guard against ceil() bumping an integral product up by rounding noise.
    subset_size_ = static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw));
    subset_size_ = std::clamp<std::size_t>(subset_size_, 1, A_.count());
    if (advertised_epsilon < 0.0 || reference_diameter < 0.0) {
        throw InvalidArgument("SubsetSmoothingOracle: negative epsilon or diameter");
    }
}

std::vector<std::size_t> SubsetSmoothingOracle::top_indices(const Vector& direction) const {
    require_same_dim(static_cast<std::size_t>(direction.size()), dim(), "SubsetSmoothingOracle");
    const Vector scores = A_.matrix().transpose() * direction;
    std::vector<std::size_t> idx(A_.count());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const auto better = [&](std::size_t a, std::size_t b) {
        const double sa = scores(static_cast<Eigen::Index>(a));
        const double sb = scores(static_cast<Eigen::Index>(b));
        return sa > sb || (sa == sb && a < b);
    };
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(subset_size_ - 1),
                     idx.end(), better);
    idx.resize(subset_size_);
    std::sort(idx.begin(), idx.end());
    return idx;
}

Vector SubsetSmoothingOracle::answer_for(const Vector& direction) const {
    require_finite(direction, "SubsetSmoothingOracle::answer_for");
    if (direction.norm() == 0.0) throw InvalidArgument("SubsetSmoothingOracle: zero direction");
    const auto idx = top_indices(direction);
    Vector sum = Vector::Zero(static_cast<Eigen::Index>(dim()));
    for (std::size_t j : idx) sum += A_.col(j);
    return sum / static_cast<double>(idx.size());
}

Vector SubsetSmoothingOracle::query(const Vector& u) const {
    require_unit(u, dim(), "SubsetSmoothingOracle::query");
    return answer_for(u);
}

NeedleOracle::NeedleOracle(std::size_t d) : d_(d) {
    if (d < 4) throw InvalidArgument("NeedleOracle: dimension must be at least 4");
}

double NeedleOracle::advertised_epsilon() const {
    const double d = static_cast<double>(d_);
    return 8.0 * std::log(d) / std::sqrt(d);
}

Vector NeedleOracle::query(const Vector& u) const {
    require_unit(u, d_, "NeedleOracle::query");
    {
        std::lock_guard lock(mutex_);
        log_.insert(log_.end(), u.data(), u.data() + u.size());
    }
    return Vector::Zero(static_cast<Eigen::Index>(d_));
}

std::size_t NeedleOracle::query_count() const {
    std::lock_guard lock(mutex_);
    return log_.size() / d_;
}

Matrix NeedleOracle::query_log() const {
    std::lock_guard lock(mutex_);
    const auto q = static_cast<Eigen::Index>(log_.size() / d_);
    return Eigen::Map<const Matrix>(log_.data(), static_cast<Eigen::Index>(d_), q);
}

double NeedleOracle::max_abs_correlation(const Vector& u) const {
    require_same_dim(static_cast<std::size_t>(u.size()), d_, "NeedleOracle::max_abs_correlation");
    std::lock_guard lock(mutex_);
    const auto q = static_cast<Eigen::Index>(log_.size() / d_);
    if (q == 0) return 0.0;
    const Eigen::Map<const Matrix> V(log_.data(), static_cast<Eigen::Index>(d_), q);
    return (V.transpose() * u).cwiseAbs().maxCoeff();
}

NeedlePair find_consistent_needles(const NeedleOracle& oracle, std::uint64_t seed, double min_gap,
                                   std::size_t max_candidates) {
    const std::size_t d = oracle.dim();
    const double dd = static_cast<double>(d);
    NeedlePair out;
    out.bound = 4.0 * std::log(dd) / std::sqrt(dd);

    Rng rng = stream_rng(seed, 0);
    bool have_first = false;
    while (out.candidates_tried < max_candidates) {
        ++out.candidates_tried;
        Vector u = unit_vector(rng, d);
        if (have_first) {
            if ((out.u1 - u).norm() < min_gap || (out.u1 + u).norm() < min_gap) continue;
        }
        const double corr = oracle.max_abs_correlation(u);
        if (corr > out.bound) continue;
        if (!have_first) {
            out.u1 = std::move(u);
            out.max_corr_u1 = corr;
            have_first = true;
        } else {
            out.u2 = std::move(u);
            out.max_corr_u2 = corr;
            return out;
        }
    }
    throw PreconditionViolated("find_consistent_needles: no consistent needle pair within " +
                               std::to_string(max_candidates) + " candidates");
}

OracleAudit audit_answer(const VPolytope& K, const Vector& u, const Vector& x, double epsilon,
                         double tol, double reference_diameter) {
    require_same_dim(static_cast<std::size_t>(u.size()), K.dim(), "audit_answer");
    require_same_dim(static_cast<std::size_t>(x.size()), K.dim(), "audit_answer");
    const double delta = reference_diameter > 0.0 ? reference_diameter : K.diameter();
    const double radius = epsilon * delta;
    OracleAudit audit;
    audit.containment_slack =
        geometry::dist_to_hull(x, K.vertices(), kAuditGeomTol).distance - radius;
    audit.optimality_slack = u.dot(x) - K.support(u) + radius;
    audit.passed = audit.containment_slack <= tol && audit.optimality_slack >= -tol;
    return audit;
}

}  // namespace polylearn::oracles
