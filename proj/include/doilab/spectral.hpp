#pragma once

// Dense complex matrix foundation: Hermitian spectral calculus for commuting
// tuples, functional calculus, Schatten norms and rearrangement functionals.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace doilab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A point of R^n, viewed without ownership.
using Point = std::span<const double>;
using RealFunction = std::function<double(Point)>;

struct Tolerances {
  double commute = 1e-9;    // relative commutator tolerance
  double unitary = 1e-10;   // ||U*U - I||_max
  double hermitian = 1e-12; // relative Hermitian defect
  double cluster = 1e-9;    // relative eigenvalue gap treated as degenerate
};

class HermitianMatrix {
 public:
  // Validates ||M - M*||_max <= tol * (1 + ||M||_max), then stores the exact
  // Hermitian part (M + M*) / 2.
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = 1e-12);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

// Exponent p in [1, inf] of a Schatten norm, with its conjugate p'.
class NormOrder {
 public:
  explicit NormOrder(double p);
  static NormOrder infinity();

  double p() const { return p_; }
  double conjugate() const;
  bool is_infinite() const;

 private:
  double p_;
};

// Nonincreasing singular values s_1 >= ... >= s_d >= 0. The rearrangement
// mu_t is the step function s_{floor(t)+1} on [0, d) and 0 beyond.
class SingularProfile {
 public:
  explicit SingularProfile(std::vector<double> values);
  static SingularProfile of(const ComplexMatrix& x);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  double mu(double t) const;
  // Integral of mu over [0, t].
  double integral(double t) const;
  // Integral of mu^q over [0, t].
  double power_integral(double t, double q) const;

  double schatten(NormOrder p) const;
  // sup_t t * mu_t = max_k k * s_k.
  double weak_l1() const;
  // sup_{t>0} integral(t) / log(1 + t), maximized segment by segment.
  double m1inf() const;

 private:
  std::vector<double> values_;
};

// n commuting Hermitian matrices sharing the eigenbasis U. Row a of the
// joint eigenvalue matrix belongs to column a of U. Rows are kept in
// lexicographic order, ties broken by the original column index.
class SpectralTuple {
 public:
  SpectralTuple(ComplexMatrix basis, RowMajorMatrix joint_eigs, double unitary_tol = 1e-10);

  int arity() const { return static_cast<int>(eigs_.cols()); }
  Eigen::Index dim() const { return basis_.rows(); }

  const ComplexMatrix& basis() const { return basis_; }
  const RowMajorMatrix& joint_eigenvalues() const { return eigs_; }
  Point eigenvalue(Eigen::Index a) const {
    return {eigs_.data() + a * eigs_.cols(), static_cast<std::size_t>(eigs_.cols())};
  }

  // A_j = U diag(lambda_j) U*.
  HermitianMatrix operator_at(int j) const;
  std::vector<HermitianMatrix> operators() const;

  // Maps to and from the joint eigenbasis: U* x U and U x U*.
  ComplexMatrix to_eigenbasis(const ComplexMatrix& x) const;
  ComplexMatrix from_eigenbasis(const ComplexMatrix& x) const;

 private:
  ComplexMatrix basis_;
  RowMajorMatrix eigs_;
};

// Diagonalizes a random combination of the tuple, then refines clusters of
// near-equal eigenvalues recursively. Retries with fresh coefficients up to
// five times before raising DegenerateFailure.
SpectralTuple joint_diagonalize(std::span<const HermitianMatrix> tuple, std::uint64_t seed,
                                const Tolerances& tol = {});

HermitianMatrix apply_function(const SpectralTuple& s, const RealFunction& f);

double schatten_norm(const ComplexMatrix& x, NormOrder p);
inline double schatten_norm(const ComplexMatrix& x, double p) { return schatten_norm(x, NormOrder(p)); }
double operator_norm(const ComplexMatrix& x);

// Singular values in nonincreasing order. Hermitian and skew-Hermitian inputs
// go through the eigensolver.
std::vector<double> singular_values(const ComplexMatrix& x);

struct RearrangementNorms {
  SingularProfile profile;
  double weak;
  double m1inf;
};

RearrangementNorms rearrangement_norms(const ComplexMatrix& x);

// Samples (p, (p - 1) * ||x||_p) along a grid strictly decreasing toward 1.
// For matrices this tends to 0 as p -> 1; the equivalence with the M_{1,inf}
// norm is an infinite-dimensional statement and is shown for illustration.
std::vector<std::pair<double, double>> zeta_profile(const ComplexMatrix& x,
                                                    std::span<const double> p_grid);

// U diag(exp(i s . lambda)) U*.
ComplexMatrix exp_tuple(const SpectralTuple& s, std::span<const double> coeffs);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace doilab
