#pragma once

#include <cstdint>
#include <random>

#include "qcc/linalg.hpp"

namespace qcc {

using Rng = std::mt19937_64;

/// Matrix with i.i.d. standard complex Gaussian entries.
CMatrix gaussian_matrix(Rng& rng, int rows, int cols);
/// Haar-distributed unitary (QR of a Gaussian matrix with phase fix).
CMatrix haar_unitary(Rng& rng, int d);
CMatrix random_hermitian(Rng& rng, int d);
/// Random density matrix G G† / Tr, with G of shape d × rank.
CMatrix random_density(Rng& rng, int d, int rank = -1);

}  // namespace qcc
