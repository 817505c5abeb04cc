#pragma once

// Seeded generators for the random instances used by tests, the verify suite
// and the experiment ensembles.

#include <cstdint>
#include <random>

#include "doilab/spectral.hpp"

namespace doilab::random {

using Engine = std::mt19937_64;

// Entries with independent standard normal real and imaginary parts.
ComplexMatrix gaussian(Eigen::Index rows, Eigen::Index cols, Engine& rng);
ComplexMatrix gaussian(Eigen::Index d, Engine& rng);

// Haar-distributed unitary (QR of a Gaussian matrix with phase correction).
ComplexMatrix unitary(Eigen::Index d, Engine& rng);

// (G + G*) / 2 scaled by `scale`.
HermitianMatrix hermitian(Eigen::Index d, Engine& rng, double scale = 1.0);

// Tuple with a Haar basis and joint eigenvalues uniform in [-radius, radius]^n.
SpectralTuple commuting_tuple(int n, Eigen::Index d, Engine& rng, double radius = 1.0);

}  // namespace doilab::random
