#include "doilab/random.hpp"

namespace doilab::random {

ComplexMatrix gaussian(Eigen::Index rows, Eigen::Index cols, Engine& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = gauss(rng);
      m(i, j) = Complex(re, gauss(rng));
    }
  }
  return m;
}

ComplexMatrix gaussian(Eigen::Index d, Engine& rng) { return gaussian(d, d, rng); }

ComplexMatrix unitary(Eigen::Index d, Engine& rng) {
  const ComplexMatrix g = gaussian(d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

HermitianMatrix hermitian(Eigen::Index d, Engine& rng, double scale) {
  const ComplexMatrix g = gaussian(d, rng);
  return HermitianMatrix((g + g.adjoint()) * (0.5 * scale));
}

SpectralTuple commuting_tuple(int n, Eigen::Index d, Engine& rng, double radius) {
  std::uniform_real_distribution<double> uniform(-radius, radius);
  RowMajorMatrix eigs(d, n);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (int j = 0; j < n; ++j) eigs(a, j) = uniform(rng);
  }
  return SpectralTuple(unitary(d, rng), std::move(eigs));
}

}  // namespace doilab::random
