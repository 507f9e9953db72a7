#include "polylearn/random.hpp"

namespace polylearn {

Matrix random_orthonormal(Rng& rng, std::size_t n, std::size_t m) {
    if (m > n) throw InvalidArgument("random_orthonormal: m exceeds ambient dimension");
    Matrix G(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (Eigen::Index j = 0; j < G.cols(); ++j) G.col(j) = gaussian_vector(rng, n);
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(G.rows(), G.cols());
    return Q;
}

}  // namespace polylearn
