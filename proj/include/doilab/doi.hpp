#pragma once

// Double operator integrals for atomic spectral measures. In the joint
// eigenbasis of a SpectralTuple, I_phi is the Schur multiplier
//   (U* I_phi(x) U)_{ab} = phi(lambda_a, lambda_b) (U* x U)_{ab}.

#include <complex>
#include <functional>
#include <memory>
#include <string>

#include "doilab/spectral.hpp"

namespace doilab {

// Bounded kernel on R^n x R^n. Pairs with identical arguments (including two
// distinct eigenvector indices sharing one joint eigenvalue) get the explicit
// diagonal value.
class ScalarSymbol2n {
 public:
  using Kernel = std::function<Complex(Point, Point)>;

  ScalarSymbol2n(int arity, Kernel off_diagonal, Complex diagonal_value);

  int arity() const { return arity_; }
  Complex diagonal_value() const { return diagonal_; }
  Complex operator()(Point xi, Point eta) const;

  // Pointwise product; the diagonal value is the product of diagonal values.
  friend ScalarSymbol2n operator*(const ScalarSymbol2n& lhs, const ScalarSymbol2n& rhs);

 private:
  int arity_;
  std::shared_ptr<const Kernel> kernel_;
  Complex diagonal_;
};

ScalarSymbol2n constant_symbol(int n, Complex value);
// delta(xi, eta) = 1 iff xi == eta.
ScalarSymbol2n delta_symbol(int n);
// 1 when ||xi - eta||_2 > 1/l, else 0.
ScalarSymbol2n cutoff_symbol(int n, int l);

// f: R^n -> R with a declared Lipschitz bound for the l1 distance on R^n.
class LipschitzFunction {
 public:
  LipschitzFunction(int arity, RealFunction f, double declared_lip);

  int arity() const { return arity_; }
  double declared_lip() const { return lip_; }
  double operator()(Point xi) const { return (*f_)(xi); }
  const RealFunction& function() const { return *f_; }

 private:
  int arity_;
  std::shared_ptr<const RealFunction> f_;
  double lip_;
};

// A few Lipschitz functions with l1 constant 1, used by tests and ensembles.
namespace functions {
LipschitzFunction identity();                 // n = 1
LipschitzFunction absolute();                 // |t|, n = 1
LipschitzFunction relu();                     // max(t, 0), n = 1
LipschitzFunction sine();                     // sin(t), n = 1
LipschitzFunction coordinate(int j, int n);   // xi_j
LipschitzFunction l1_norm(int n);             // ||xi||_1
LipschitzFunction l2_norm(int n);             // ||xi||_2
LipschitzFunction max_abs(int n);             // max_j |xi_j|
LipschitzFunction constant(int n, double c);
// Looks up a function by name ("identity", "abs", "relu", "sin", "l1", "l2",
// "maxabs", "coord<j>" with 0-based j), for n-ary arguments where it makes sense.
LipschitzFunction by_name(const std::string& name, int n);
}  // namespace functions

struct SymbolPair {
  ScalarSymbol2n psi;  // difference f(xi) - f(eta)
  ScalarSymbol2n phi;  // difference divided by ||xi - eta||_2, 0 on the diagonal
};

SymbolPair divided_difference_symbols(const LipschitzFunction& f);
// psi_j = xi_j - eta_j and phi_j = psi_j / ||xi - eta||_2 for 0-based j < n.
SymbolPair direction_symbols(int j, int n);

// Matrix of phi(lambda_a, lambda_b) over all eigenvector pairs.
ComplexMatrix schur_kernel(const SpectralTuple& s, const ScalarSymbol2n& phi);

ComplexMatrix doi_apply(const SpectralTuple& s, const ScalarSymbol2n& phi, const ComplexMatrix& x);
// Same as doi_apply with a precomputed schur_kernel.
ComplexMatrix doi_apply_kernel(const SpectralTuple& s, const ComplexMatrix& kernel, const ComplexMatrix& x);

// x - I_delta(x).
ComplexMatrix offdiag_project(const SpectralTuple& s, const ComplexMatrix& x);

// tau(z I_phi(y)), evaluated as the integral of phi against the atomic
// measure nu_{z,y}(a, b) = (U* z U)_{ba} (U* y U)_{ab}.
Complex trace_pairing(const ComplexMatrix& z, const ScalarSymbol2n& phi, const ComplexMatrix& y,
                      const SpectralTuple& s);

// Same basis, each eigenvalue coordinate moved to the left end of its bin
// [k/m, (k+1)/m). ||A_j^m - A_j|| <= 1/m.
SpectralTuple discretize_measure(const SpectralTuple& s, int m);

// f_k = G_k * f with G_k(eta) = (k/pi)^{n/2} exp(-k |eta|^2), by composite
// Simpson on [-8/sqrt(k), 8/sqrt(k)]^n with quad_points nodes per axis.
LipschitzFunction mollify_function(const LipschitzFunction& f, double k, int quad_points = 4097);

}  // namespace doilab
