#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace polylearn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an algorithm does not hold on the input.
class PreconditionViolated : public Error {
public:
    using Error::Error;
};

/// Error raised inside a named pipeline stage.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// A dim x count collection of points stored column-wise.
///
/// Entries are always finite and dim is at least one; both are checked on
/// construction. The count may be zero.
class PointMatrix {
public:
    PointMatrix() : data_(1, 0) {}
    explicit PointMatrix(Matrix data);
    PointMatrix(std::size_t dim, std::size_t count);

    static PointMatrix from_columns(const std::vector<Vector>& columns);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }
    std::size_t count() const noexcept { return static_cast<std::size_t>(data_.cols()); }
    bool empty() const noexcept { return data_.cols() == 0; }

    const Matrix& matrix() const noexcept { return data_; }
    auto col(std::size_t j) const { return data_.col(static_cast<Eigen::Index>(j)); }

    /// Columns at the given indices, in the given order.
    PointMatrix select(const std::vector<std::size_t>& indices) const;
    /// All columns except `skip`.
    PointMatrix without(std::size_t skip) const;
    PointMatrix with_column(const Vector& x) const;

    bool operator==(const PointMatrix& other) const {
        return data_.rows() == other.data_.rows() && data_.cols() == other.data_.cols() &&
               data_ == other.data_;
    }

private:
    Matrix data_;
};

/// Nonnegative convex-combination weights summing to one.
struct SimplexCoeffs {
    Vector weights;

    bool valid(double tol = 1e-9) const;
    static SimplexCoeffs indicator(std::size_t size, std::size_t index);
};

/// Polytope represented by its vertex list; diameter is computed once on
/// construction.
class VPolytope {
public:
    explicit VPolytope(PointMatrix vertices);

    const PointMatrix& vertices() const noexcept { return vertices_; }
    std::size_t dim() const noexcept { return vertices_.dim(); }
    std::size_t size() const noexcept { return vertices_.count(); }
    double diameter() const noexcept { return diameter_; }

    /// max over vertices of u . M_l
    double support(const Vector& u) const;
    /// Index of the vertex attaining `support`, lowest index on ties.
    std::size_t argmax(const Vector& u) const;

private:
    PointMatrix vertices_;
    double diameter_;
};

/// Unspecified constants from the theory; used for hypothesis checks and
/// derived parameters, never silently.
struct TheoryConstants {
    double c = 20.0;
    double c_prime = 100.0;
    double c0 = 20.0;
};

void require_same_dim(std::size_t a, std::size_t b, const char* what);
void require_finite(const Vector& x, const char* what);

}  // namespace polylearn
