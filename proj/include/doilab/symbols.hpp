#pragma once

// Fourier multiplier symbols on R^{n+1} = {(xi, mu)}: Hilbert and Riesz
// symbols, the averaged Hilbert symbol K, the cone symbol R, their product
// m_{1,j}, and the smoothed homogeneous even symbol m_j, each with an
// independent evaluation route used as an oracle.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "doilab/spectral.hpp"

namespace doilab {

// i sign(xi_1), sign(0) = 0.
Complex eval_hilbert(Point xi);
// i xi_j / ||xi||_2 with value 0 at the origin (0-based j).
Complex eval_riesz(int j, Point xi);

// i mu / ||xi||_1 if |mu| <= ||xi||_1, else i sign(mu).
Complex eval_K(Point xi, double mu);
// Sum over sign vectors eps of k(eps xi, mu) prod_j (1 + sign(eps_j xi_j)) / 2,
// with k(xi, mu) = (i/2) int_{-1}^{1} sign(t (xi_1 + ... + xi_n) + mu) dt
// integrated exactly piece by piece around the single sign change.
Complex eval_K_quadrature(Point xi, double mu);
// Sum over eps of the explicit piecewise k_eps (2^{-l} weights, l = number of
// zero coordinates).
Complex eval_K_epsilon_sum(Point xi, double mu);

// i ||xi||_1 / ||xi||_2 if |mu| <= ||xi||_1 (the boundary takes this branch), else 0.
Complex eval_R(Point xi, double mu);
// Sum over eps of the product of Hilbert-type indicators defining r_eps.
// Agrees with eval_R off the null set |mu| = ||xi||_1.
Complex eval_R_product_form(Point xi, double mu);

// i K R r_j.
Complex eval_m1j(int j, Point xi, double mu);

// Smooth bump s supported in [1/2, 3/4], s = c exp(-1/((t - 1/2)(3/4 - t))),
// normalized to unit mass, with its cumulative S tabulated on a 10^4-interval
// grid and evaluated by monotone cubic Hermite interpolation.
class BumpProfile {
 public:
  static constexpr double kSupportLeft = 0.5;
  static constexpr double kSupportRight = 0.75;
  static constexpr std::size_t kTableIntervals = 10000;

  double density(double t) const;
  double cumulative(double t) const;
  // The constant c above.
  double normalization() const;

 private:
  friend BumpProfile make_bump();
  BumpProfile() = default;

  double peak_scale_ = 0.0;  // c * exp(-64): density at the midpoint
  std::vector<double> table_;
};

BumpProfile make_bump();
// Process-wide read-only instance.
const BumpProfile& standard_bump();

// Closed form: 0 when ||xi||_1 <= |mu| / 2, mu xi_j / ||xi||_2^2 when
// |mu| <= ||xi||_1, S(||xi||_1 / |mu|) mu xi_j / ||xi||_2^2 in between.
// Throws InvalidArgument at the origin.
Complex eval_mj(int j, Point xi, double mu, const BumpProfile& bump = standard_bump());
// int_0^1 s(l) (1/l) m_{1,j}(xi, l mu) dl by adaptive quadrature.
Complex eval_mj_quadrature(int j, Point xi, double mu, const BumpProfile& bump = standard_bump(),
                           double tol = 1e-9);

enum class Region { Origin, Vanishing, Blend, Identity };

// Vanishing: ||xi||_1 <= |mu|/2; Identity: |mu| <= ||xi||_1; Blend otherwise.
Region classify_region(Point xi, double mu);
std::string region_name(Region r);

struct SymbolFlags {
  bool even = false;
  bool odd = false;
  bool homogeneous = false;
};

// A function on R^{dimension}; points are (xi_1, ..., xi_n, mu).
class MultiplierSymbol {
 public:
  using Evaluator = std::function<Complex(Point)>;

  MultiplierSymbol(std::string name, int dimension, Evaluator evaluator, SymbolFlags flags);

  const std::string& name() const { return name_; }
  int dimension() const { return dimension_; }
  SymbolFlags flags() const { return flags_; }
  Complex operator()(Point w) const;

 private:
  std::string name_;
  int dimension_;
  std::shared_ptr<const Evaluator> eval_;
  SymbolFlags flags_;
};

MultiplierSymbol hilbert_symbol(int dimension);
MultiplierSymbol riesz_symbol(int j, int dimension);
MultiplierSymbol k_symbol(int n);
MultiplierSymbol r_symbol(int n);
MultiplierSymbol m1j_symbol(int j, int n);
MultiplierSymbol mj_symbol(int j, int n, std::shared_ptr<const BumpProfile> bump = nullptr);

// Largest deviation from the declared parity and degree-0 homogeneity
// (scalings 0.5, 2, 17) over random nonzero sample points.
double flag_defect(const MultiplierSymbol& m, int samples, std::uint64_t seed);

using Frequency = std::vector<std::int64_t>;

// Restriction to the integer lattice with value 0 at the origin.
class DiscreteSymbol {
 public:
  explicit DiscreteSymbol(MultiplierSymbol symbol);

  int dimension() const { return symbol_.dimension(); }
  const MultiplierSymbol& symbol() const { return symbol_; }
  Complex operator()(std::span<const std::int64_t> k) const;

 private:
  MultiplierSymbol symbol_;
};

DiscreteSymbol restrict_discrete(const MultiplierSymbol& m);

}  // namespace doilab
