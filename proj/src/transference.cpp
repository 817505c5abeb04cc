#include "doilab/transference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doilab/error.hpp"

namespace doilab {

namespace {

// max |d/dt exp(1 - 1/(1 - t^2))| = 2.17035708571..., rounded up.
constexpr double kBumpSlope = 2.1703571;

double bump1(double t) {
  if (!(std::abs(t) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

// Sets k to the nearest integer when v is within rounding of it.
bool on_grid(double v, std::int64_t& k) {
  const double nearest = std::round(v);
  if (std::abs(v - nearest) > 1e-9 * std::max(1.0, std::abs(v))) return false;
  k = static_cast<std::int64_t>(nearest);
  return true;
}

std::vector<Frequency> bins_of(const SpectralTuple& s, std::int64_t m) {
  if (m < 1) throw InvalidArgument("grid resolution m must be positive");
  const auto n = static_cast<std::size_t>(s.arity());
  std::vector<Frequency> bins(static_cast<std::size_t>(s.dim()), Frequency(n));
  for (Eigen::Index a = 0; a < s.dim(); ++a) {
    const Point lambda = s.eigenvalue(a);
    for (std::size_t i = 0; i < n; ++i) {
      if (!on_grid(lambda[i] * static_cast<double>(m), bins[static_cast<std::size_t>(a)][i])) {
        throw OffGridEigenvalue("eigenvalue coordinate " + std::to_string(lambda[i]) + " is not on the (1/" +
                                std::to_string(m) + ")-grid");
      }
    }
  }
  return bins;
}

}  // namespace

TrigPolynomial::TrigPolynomial(int dimension, Eigen::Index matrix_dim, Coefficients coefficients)
    : dimension_(dimension), matrix_dim_(matrix_dim), coeffs_(std::move(coefficients)) {
  if (dimension < 1) throw InvalidArgument("TrigPolynomial: dimension must be positive");
  for (const auto& [k, c] : coeffs_) {
    if (static_cast<int>(k.size()) != dimension) throw DimensionMismatch("TrigPolynomial: frequency of wrong length");
    if (c.rows() != matrix_dim || c.cols() != matrix_dim) {
      throw DimensionMismatch("TrigPolynomial: coefficient of wrong size");
    }
  }
}

std::int64_t TrigPolynomial::max_abs_frequency() const {
  std::int64_t best = 0;
  for (const auto& entry : coeffs_) {
    for (std::int64_t v : entry.first) best = std::max(best, v < 0 ? -v : v);
  }
  return best;
}

ComplexMatrix TrigPolynomial::evaluate(Point theta) const {
  if (static_cast<int>(theta.size()) != dimension_) throw DimensionMismatch("TrigPolynomial: wrong torus point");
  ComplexMatrix acc = ComplexMatrix::Zero(matrix_dim_, matrix_dim_);
  for (const auto& [k, c] : coeffs_) {
    double phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) phase += static_cast<double>(k[i]) * theta[i];
    // Reduce before scaling by 2 pi so large frequencies keep full accuracy.
    phase -= std::floor(phase);
    acc += std::polar(1.0, 2.0 * std::numbers::pi * phase) * c;
  }
  return acc;
}

double max_coefficient_difference(const TrigPolynomial& a, const TrigPolynomial& b) {
  if (a.dimension() != b.dimension() || a.matrix_dim() != b.matrix_dim()) {
    throw DimensionMismatch("max_coefficient_difference: shapes differ");
  }
  double worst = 0.0;
  for (const auto& [k, c] : a.coefficients()) {
    const auto it = b.coefficients().find(k);
    const double diff = it == b.coefficients().end() ? c.cwiseAbs().maxCoeff() : (c - it->second).cwiseAbs().maxCoeff();
    worst = std::max(worst, diff);
  }
  for (const auto& [k, c] : b.coefficients()) {
    if (!a.coefficients().contains(k)) worst = std::max(worst, c.cwiseAbs().maxCoeff());
  }
  return worst;
}

GridFunction::GridFunction(int arity, std::int64_t m, std::int64_t N, std::map<Frequency, std::int64_t> numerators)
    : arity_(arity), m_(m), N_(N), numerators_(std::move(numerators)) {
  if (arity < 1 || m < 1 || N < 1) throw InvalidArgument("GridFunction: arity, m and N must be positive");
  for (const auto& entry : numerators_) {
    if (static_cast<int>(entry.first.size()) != arity) throw DimensionMismatch("GridFunction: grid point of wrong arity");
  }
}

std::int64_t GridFunction::numerator(const Frequency& k) const {
  const auto it = numerators_.find(k);
  if (it == numerators_.end()) throw OffGridEigenvalue("GridFunction: point was not snapped");
  return it->second;
}

double GridFunction::value(const Frequency& k) const {
  return static_cast<double>(numerator(k)) / static_cast<double>(m_ * N_);
}

double bump_lipschitz(std::int64_t m) { return 2.0 * static_cast<double>(m) * kBumpSlope; }

SnappedFunction snap_function(const LipschitzFunction& f, std::int64_t m, std::int64_t N,
                              const std::vector<Frequency>& grid_points) {
  if (m < 1 || N < 1) throw InvalidArgument("snap_function: m and N must be positive");
  const int n = f.arity();
  std::map<Frequency, std::int64_t> numerators;
  auto corrections = std::make_shared<std::vector<std::pair<std::vector<double>, double>>>();
  std::vector<double> point(static_cast<std::size_t>(n));
  for (const auto& k : grid_points) {
    if (static_cast<int>(k.size()) != n) throw DimensionMismatch("snap_function: grid point of wrong arity");
    if (numerators.contains(k)) continue;
    for (std::size_t i = 0; i < k.size(); ++i) point[i] = static_cast<double>(k[i]) / static_cast<double>(m);
    const double value = f(point);
    const double scaled = static_cast<double>(N) * value;
    std::int64_t floor_value = 0;
    if (!on_grid(scaled, floor_value)) floor_value = static_cast<std::int64_t>(std::floor(scaled));
    numerators.emplace(k, m * floor_value);
    const double correction = static_cast<double>(floor_value) / static_cast<double>(N) - value;
    if (correction != 0.0) corrections->emplace_back(point, correction);
  }

  const double two_m = 2.0 * static_cast<double>(m);
  auto snapped = [f, corrections, two_m](Point xi) {
    double acc = f(xi);
    for (const auto& [center, delta] : *corrections) {
      double bump = 1.0;
      for (std::size_t i = 0; i < center.size() && bump != 0.0; ++i) bump *= bump1(two_m * (xi[i] - center[i]));
      acc += delta * bump;
    }
    return acc;
  };
  const double lip = f.declared_lip() + bump_lipschitz(m) / static_cast<double>(N);
  return {LipschitzFunction(n, std::move(snapped), lip), GridFunction(n, m, N, std::move(numerators))};
}

std::vector<Frequency> occupied_bins(const SpectralTuple& s, std::int64_t m) {
  auto bins = bins_of(s, m);
  std::sort(bins.begin(), bins.end());
  bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
  return bins;
}

ComplexMatrix torus_unitary(const SpectralTuple& s, const GridFunction& g, Point theta) {
  const auto n = static_cast<std::size_t>(s.arity());
  if (theta.size() != n + 1) throw DimensionMismatch("torus_unitary: torus point must have n + 1 coordinates");
  const auto bins = bins_of(s, g.m());
  Eigen::VectorXcd phases(s.dim());
  for (Eigen::Index a = 0; a < s.dim(); ++a) {
    const auto& k = bins[static_cast<std::size_t>(a)];
    double phase = static_cast<double>(g.numerator(k)) * theta[n];
    for (std::size_t i = 0; i < n; ++i) phase += static_cast<double>(g.N() * k[i]) * theta[i];
    phase -= std::floor(phase);
    phases(a) = std::polar(1.0, 2.0 * std::numbers::pi * phase);
  }
  return s.basis() * phases.asDiagonal() * s.basis().adjoint();
}

TrigPolynomial build_hy(const SpectralTuple& s, const GridFunction& g, const ComplexMatrix& y) {
  if (y.rows() != s.dim() || y.cols() != s.dim()) throw DimensionMismatch("build_hy: y has wrong size");
  if (g.arity() != s.arity()) throw DimensionMismatch("build_hy: grid function arity differs from tuple arity");
  const auto n = static_cast<std::size_t>(s.arity());
  const auto bins = bins_of(s, g.m());
  const ComplexMatrix yt = s.to_eigenbasis(y);
  const double scale = std::max(1.0, yt.cwiseAbs().maxCoeff());

  std::map<Frequency, ComplexMatrix> blocks;
  for (Eigen::Index b = 0; b < s.dim(); ++b) {
    const auto& kb = bins[static_cast<std::size_t>(b)];
    const std::int64_t gb = g.numerator(kb);
    for (Eigen::Index a = 0; a < s.dim(); ++a) {
      const auto& ka = bins[static_cast<std::size_t>(a)];
      if (ka == kb) {
        if (std::abs(yt(a, b)) > 1e-10 * scale) throw NotOffDiagonal("build_hy: y has a nonzero diagonal block");
        continue;
      }
      if (yt(a, b) == 0.0) continue;
      Frequency freq(n + 1);
      for (std::size_t i = 0; i < n; ++i) freq[i] = g.N() * (ka[i] - kb[i]);
      freq[n] = g.numerator(ka) - gb;
      auto [it, inserted] = blocks.try_emplace(std::move(freq));
      if (inserted) it->second = ComplexMatrix::Zero(s.dim(), s.dim());
      it->second(a, b) += yt(a, b);
    }
  }

  TrigPolynomial::Coefficients coeffs;
  for (auto& [freq, block] : blocks) coeffs.emplace(freq, s.from_eigenbasis(block));
  return TrigPolynomial(static_cast<int>(n) + 1, s.dim(), std::move(coeffs));
}

TrigPolynomial apply_torus_multiplier(const DiscreteSymbol& m, const TrigPolynomial& h) {
  if (m.dimension() != h.dimension()) throw DimensionMismatch("apply_torus_multiplier: dimensions differ");
  TrigPolynomial::Coefficients out;
  for (const auto& [k, c] : h.coefficients()) {
    const Complex factor = m(k);
    if (factor == 0.0) continue;
    out.emplace(k, factor * c);
  }
  return TrigPolynomial(h.dimension(), h.matrix_dim(), std::move(out));
}

TransferenceCheck check_transference(const SpectralTuple& s, const GridFunction& g, const ComplexMatrix& y, int j) {
  const int n = s.arity();
  if (j < 0 || j >= n) throw InvalidArgument("check_transference: direction index out of range");
  const auto bins = occupied_bins(s, g.m());
  for (std::size_t a = 0; a < bins.size(); ++a) {
    for (std::size_t b = a + 1; b < bins.size(); ++b) {
      std::int64_t l1 = 0;
      for (int i = 0; i < n; ++i) l1 += std::abs(bins[a][static_cast<std::size_t>(i)] - bins[b][static_cast<std::size_t>(i)]);
      if (std::abs(g.numerator(bins[a]) - g.numerator(bins[b])) > g.N() * l1) {
        throw InvalidArgument("check_transference: grid function increments exceed the l1 distance of the bins");
      }
    }
  }

  const TrigPolynomial hy = build_hy(s, g, y);
  const TrigPolynomial lhs = apply_torus_multiplier(restrict_discrete(mj_symbol(j, n)), hy);

  const auto m = static_cast<double>(g.m());
  const auto mN = static_cast<double>(g.m() * g.N());
  auto value_at = [g, m, mN](Point xi) {
    Frequency k(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) k[i] = static_cast<std::int64_t>(std::round(xi[i] * m));
    return static_cast<double>(g.numerator(k)) / mN;
  };
  const LipschitzFunction g_fn(n, value_at, 1.0);
  const ScalarSymbol2n symbol = divided_difference_symbols(g_fn).phi * direction_symbols(j, n).phi;
  const ComplexMatrix z = doi_apply(s, symbol, y);
  TrigPolynomial rhs = build_hy(s, g, z);
  const double err = max_coefficient_difference(lhs, rhs);
  return {lhs, std::move(rhs), err};
}

double torus_lp_norm(const TrigPolynomial& h, NormOrder p, int grid_per_axis) {
  if (grid_per_axis < 1) throw InvalidArgument("torus_lp_norm: grid_per_axis must be positive");
  const auto dim = static_cast<std::size_t>(h.dimension());
  std::vector<int> index(dim, 0);
  std::vector<double> theta(dim, 0.0);
  double acc = 0.0;
  std::size_t count = 0;
  while (true) {
    for (std::size_t i = 0; i < dim; ++i) theta[i] = static_cast<double>(index[i]) / grid_per_axis;
    const double norm = schatten_norm(h.evaluate(theta), p);
    if (p.is_infinite()) {
      acc = std::max(acc, norm);
    } else {
      acc += std::pow(norm, p.p());
    }
    ++count;
    std::size_t i = 0;
    while (i < dim && ++index[i] == grid_per_axis) index[i++] = 0;
    if (i == dim) break;
  }
  if (p.is_infinite()) return acc;
  return std::pow(acc / static_cast<double>(count), 1.0 / p.p());
}

}  // namespace doilab
