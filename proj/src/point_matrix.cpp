#include "polylearn/point_matrix.hpp"

#include "polylearn/geometry.hpp"

#include <cmath>

namespace polylearn {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) +
                                " does not match " + std::to_string(b));
    }
}

void require_finite(const Vector& x, const char* what) {
    if (!x.allFinite()) {
        throw InvalidArgument(std::string(what) + ": non-finite entry");
    }
}

PointMatrix::PointMatrix(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 1) {
        throw InvalidArgument("PointMatrix: dim must be at least 1");
    }
    if (!data_.allFinite()) {
        throw InvalidArgument("PointMatrix: non-finite entry");
    }
}

PointMatrix::PointMatrix(std::size_t dim, std::size_t count)
    : PointMatrix(Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(count))) {}

PointMatrix PointMatrix::from_columns(const std::vector<Vector>& columns) {
    if (columns.empty()) {
        throw InvalidArgument("PointMatrix::from_columns: need at least one column to infer dim");
    }
    Matrix m(columns.front().size(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        require_same_dim(static_cast<std::size_t>(columns[j].size()),
                         static_cast<std::size_t>(m.rows()), "PointMatrix::from_columns");
        m.col(static_cast<Eigen::Index>(j)) = columns[j];
    }
    return PointMatrix(std::move(m));
}

PointMatrix PointMatrix::select(const std::vector<std::size_t>& indices) const {
    Matrix m(data_.rows(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
        if (indices[j] >= count()) {
            throw InvalidArgument("PointMatrix::select: index out of range");
        }
        m.col(static_cast<Eigen::Index>(j)) = data_.col(static_cast<Eigen::Index>(indices[j]));
    }
    return PointMatrix(std::move(m));
}

PointMatrix PointMatrix::without(std::size_t skip) const {
    if (skip >= count()) {
        throw InvalidArgument("PointMatrix::without: index out of range");
    }
    Matrix m(data_.rows(), data_.cols() - 1);
    const auto s = static_cast<Eigen::Index>(skip);
    m.leftCols(s) = data_.leftCols(s);
    m.rightCols(data_.cols() - s - 1) = data_.rightCols(data_.cols() - s - 1);
    return PointMatrix(std::move(m));
}

PointMatrix PointMatrix::with_column(const Vector& x) const {
    require_same_dim(static_cast<std::size_t>(x.size()), dim(), "PointMatrix::with_column");
    Matrix m(data_.rows(), data_.cols() + 1);
    m.leftCols(data_.cols()) = data_;
    m.col(data_.cols()) = x;
    return PointMatrix(std::move(m));
}

bool SimplexCoeffs::valid(double tol) const {
    if (weights.size() == 0) return false;
    if ((weights.array() < -tol).any()) return false;
    return std::abs(weights.sum() - 1.0) <= tol;
}

SimplexCoeffs SimplexCoeffs::indicator(std::size_t size, std::size_t index) {
    SimplexCoeffs c{Vector::Zero(static_cast<Eigen::Index>(size))};
    c.weights(static_cast<Eigen::Index>(index)) = 1.0;
    return c;
}

VPolytope::VPolytope(PointMatrix vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) {
        throw InvalidArgument("VPolytope: needs at least one vertex");
    }
    diameter_ = geometry::diameter(vertices_);
}

double VPolytope::support(const Vector& u) const {
    require_same_dim(static_cast<std::size_t>(u.size()), dim(), "VPolytope::support");
    return (vertices_.matrix().transpose() * u).maxCoeff();
}

std::size_t VPolytope::argmax(const Vector& u) const {
    require_same_dim(static_cast<std::size_t>(u.size()), dim(), "VPolytope::argmax");
    const Vector scores = vertices_.matrix().transpose() * u;
    std::size_t best = 0;
    for (Eigen::Index j = 1; j < scores.size(); ++j) {
        if (scores(j) > scores(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(j);
    }
    return best;
}

}  // namespace polylearn
