#pragma once

#include "polylearn/point_matrix.hpp"

#include <cstdint>
#include <random>

namespace polylearn {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Generator for stream `index` of a run seeded with `seed`.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

inline Vector gaussian_vector(Rng& rng, std::size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    return v;
}

/// Uniform on the unit sphere S^{n-1} (Gaussian then normalize).
inline Vector unit_vector(Rng& rng, std::size_t n) {
    for (;;) {
        Vector v = gaussian_vector(rng, n);
        const double norm = v.norm();
        if (norm > 0.0) return v / norm;
    }
}

/// Orthonormal basis (n x m) of a uniformly random m-dimensional subspace.
Matrix random_orthonormal(Rng& rng, std::size_t n, std::size_t m);

}  // namespace polylearn
