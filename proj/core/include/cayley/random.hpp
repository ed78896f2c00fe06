#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "cayley/multilinear.hpp"

namespace cayley {

using Rng = std::mt19937_64;

// splitmix64 mix of (seed, stream); used to give every sample of a batch its
// own generator so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Haar-distributed orthonormal 8x4 frame (QR of a Gaussian matrix with the
// sign of R's diagonal fixed). Orientation is random.
Frame4 haar_frame(Rng& rng);

// Haar-distributed element of U(4).
Eigen::Matrix4cd haar_unitary(Rng& rng);

// Real 8x8 matrix of a complex-linear map of C^4 in the coordinates
// (x1, y1, ..., x4, y4).
Matrix8 realify(const Eigen::Matrix4cd& m);

// z_k = x_k + i y_k
Eigen::Vector4cd to_complex(const Vector8& v);
Vector8 to_real(const Eigen::Vector4cd& z);

// Random element of SO(4).
Matrix4 random_rotation(Rng& rng);

}  // namespace cayley
