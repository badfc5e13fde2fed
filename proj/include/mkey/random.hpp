// Seeded random matrices.
#pragma once

#include <cstdint>
#include <random>

#include "mkey/matrix.hpp"

namespace mkey {

using Rng = std::mt19937_64;

Matrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);
Matrix random_hermitian(std::size_t n, Rng& rng);
// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
Matrix random_unitary(std::size_t n, Rng& rng);
// Density matrix G G† / Tr with G of size n x rank.
Matrix random_density(std::size_t n, Rng& rng, std::size_t rank = 0);
Vector random_pure(std::size_t n, Rng& rng);
std::vector<double> random_distribution(std::size_t n, Rng& rng);

}  // namespace mkey
