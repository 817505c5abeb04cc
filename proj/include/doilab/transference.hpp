#pragma once

// Operator-valued trigonometric polynomials on the torus [0,1)^{n+1}, the
// lift h_y(theta) = u(theta) y u(theta)* of an off-diagonal matrix, and the
// identity T_{m_j}(h_y) = h_{I_{phi_g} I_{phi_j}(y)}.

#include <cstdint>
#include <map>
#include <vector>

#include "doilab/doi.hpp"
#include "doilab/spectral.hpp"
#include "doilab/symbols.hpp"

namespace doilab {

// h(theta) = sum_k c_k exp(2 pi i k . theta).
class TrigPolynomial {
 public:
  using Coefficients = std::map<Frequency, ComplexMatrix>;

  TrigPolynomial(int dimension, Eigen::Index matrix_dim, Coefficients coefficients = {});

  int dimension() const { return dimension_; }
  Eigen::Index matrix_dim() const { return matrix_dim_; }
  const Coefficients& coefficients() const { return coeffs_; }
  std::size_t support_size() const { return coeffs_.size(); }
  // Largest |k_i| over the support (0 for an empty support).
  std::int64_t max_abs_frequency() const;

  ComplexMatrix evaluate(Point theta) const;

 private:
  int dimension_;
  Eigen::Index matrix_dim_;
  Coefficients coeffs_;
};

// Largest entrywise modulus of a - b, frequencies missing on one side
// counting as zero.
double max_coefficient_difference(const TrigPolynomial& a, const TrigPolynomial& b);

// Values on grid points k/m stored as integer numerators over m N.
class GridFunction {
 public:
  GridFunction(int arity, std::int64_t m, std::int64_t N, std::map<Frequency, std::int64_t> numerators);

  int arity() const { return arity_; }
  std::int64_t m() const { return m_; }
  std::int64_t N() const { return N_; }
  const std::map<Frequency, std::int64_t>& numerators() const { return numerators_; }

  // Throws OffGridEigenvalue for a point that was not snapped.
  std::int64_t numerator(const Frequency& k) const;
  double value(const Frequency& k) const;

 private:
  int arity_;
  std::int64_t m_;
  std::int64_t N_;
  std::map<Frequency, std::int64_t> numerators_;
};

// Upper bound for the l1 Lipschitz constant of B_m(xi) = prod b(2 m xi_i),
// b(t) = exp(1 - 1/(1 - t^2)) on (-1, 1).
double bump_lipschitz(std::int64_t m);

struct SnappedFunction {
  LipschitzFunction f_N;
  GridFunction g;
};

// f_N = f + sum_k (floor(N f(k/m))/N - f(k/m)) B_m(. - k/m) over grid_points.
SnappedFunction snap_function(const LipschitzFunction& f, std::int64_t m, std::int64_t N,
                              const std::vector<Frequency>& grid_points);

// Sorted distinct k with some joint eigenvalue equal to k/m; throws
// OffGridEigenvalue if an eigenvalue is not on the grid.
std::vector<Frequency> occupied_bins(const SpectralTuple& s, std::int64_t m);

// u(theta) = sum_k exp(2 pi i (N k . theta' + m N g(k/m) theta_{n+1})) p_k.
ComplexMatrix torus_unitary(const SpectralTuple& s, const GridFunction& g, Point theta);

// Coefficient at (N (k - k'), m N (g(k/m) - g(k'/m))) is the sum of p_k y p_k'
// over bin pairs landing there. Throws NotOffDiagonal when some p_k y p_k is
// nonzero and OffGridEigenvalue when an eigenvalue is off the (1/m)-grid.
TrigPolynomial build_hy(const SpectralTuple& s, const GridFunction& g, const ComplexMatrix& y);

// Multiplies each coefficient by m(k), dropping frequencies where m(k) = 0.
TrigPolynomial apply_torus_multiplier(const DiscreteSymbol& m, const TrigPolynomial& h);

struct TransferenceCheck {
  TrigPolynomial lhs;
  TrigPolynomial rhs;
  double max_error;
};

// lhs = T_{m_j}(h_y); rhs = h_z with z = I_{phi_g} I_{phi_j}(y) computed by
// Schur multiplication. Requires |g(k/m) - g(k'/m)| <= ||k - k'||_1 / m for
// all occupied bins.
TransferenceCheck check_transference(const SpectralTuple& s, const GridFunction& g, const ComplexMatrix& y, int j);

// (mean over the uniform grid of ||h(theta)||_p^p)^{1/p}; the maximum for p = inf.
double torus_lp_norm(const TrigPolynomial& h, NormOrder p, int grid_per_axis);

}  // namespace doilab
