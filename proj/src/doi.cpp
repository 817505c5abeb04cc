#include "doilab/doi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "doilab/error.hpp"

namespace doilab {

namespace {

bool same_point(Point a, Point b) { return std::equal(a.begin(), a.end(), b.begin(), b.end()); }

double l2_distance(Point a, Point b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

void require_arity(Point p, int n, const char* who) {
  if (static_cast<int>(p.size()) != n) throw DimensionMismatch(std::string(who) + ": point has wrong arity");
}

}  // namespace

ScalarSymbol2n::ScalarSymbol2n(int arity, Kernel off_diagonal, Complex diagonal_value)
    : arity_(arity), kernel_(std::make_shared<const Kernel>(std::move(off_diagonal))), diagonal_(diagonal_value) {
  if (arity < 1) throw InvalidArgument("ScalarSymbol2n: arity must be positive");
  if (!*kernel_) throw InvalidArgument("ScalarSymbol2n: empty kernel");
}

Complex ScalarSymbol2n::operator()(Point xi, Point eta) const {
  if (xi.size() != static_cast<std::size_t>(arity_) || eta.size() != static_cast<std::size_t>(arity_)) {
    throw DimensionMismatch("ScalarSymbol2n: argument size differs from arity");
  }
  if (same_point(xi, eta)) return diagonal_;
  return (*kernel_)(xi, eta);
}

ScalarSymbol2n operator*(const ScalarSymbol2n& lhs, const ScalarSymbol2n& rhs) {
  if (lhs.arity_ != rhs.arity_) throw DimensionMismatch("ScalarSymbol2n: product of different arities");
  auto a = lhs.kernel_;
  auto b = rhs.kernel_;
  return ScalarSymbol2n(
      lhs.arity_, [a, b](Point xi, Point eta) { return (*a)(xi, eta) * (*b)(xi, eta); },
      lhs.diagonal_ * rhs.diagonal_);
}

ScalarSymbol2n constant_symbol(int n, Complex value) {
  return ScalarSymbol2n(n, [value](Point, Point) { return value; }, value);
}

ScalarSymbol2n delta_symbol(int n) { return ScalarSymbol2n(n, [](Point, Point) { return Complex(0.0); }, 1.0); }

ScalarSymbol2n cutoff_symbol(int n, int l) {
  if (l < 1) throw InvalidArgument("cutoff_symbol: l must be positive");
  const double radius = 1.0 / l;
  return ScalarSymbol2n(
      n, [radius](Point xi, Point eta) { return Complex(l2_distance(xi, eta) > radius ? 1.0 : 0.0); }, 0.0);
}

LipschitzFunction::LipschitzFunction(int arity, RealFunction f, double declared_lip)
    : arity_(arity), f_(std::make_shared<const RealFunction>(std::move(f))), lip_(declared_lip) {
  if (arity < 1) throw InvalidArgument("LipschitzFunction: arity must be positive");
  if (!*f_) throw InvalidArgument("LipschitzFunction: empty function");
  if (!(declared_lip >= 0.0)) throw InvalidArgument("LipschitzFunction: Lipschitz bound must be nonnegative");
}

namespace functions {

LipschitzFunction identity() {
  return LipschitzFunction(1, [](Point x) { return x[0]; }, 1.0);
}

LipschitzFunction absolute() {
  return LipschitzFunction(1, [](Point x) { return std::abs(x[0]); }, 1.0);
}

LipschitzFunction relu() {
  return LipschitzFunction(1, [](Point x) { return std::max(x[0], 0.0); }, 1.0);
}

LipschitzFunction sine() {
  return LipschitzFunction(1, [](Point x) { return std::sin(x[0]); }, 1.0);
}

LipschitzFunction coordinate(int j, int n) {
  if (j < 0 || j >= n) throw InvalidArgument("functions::coordinate: index out of range");
  return LipschitzFunction(n, [j](Point x) { return x[static_cast<std::size_t>(j)]; }, 1.0);
}

LipschitzFunction l1_norm(int n) {
  return LipschitzFunction(
      n,
      [](Point x) {
        double acc = 0.0;
        for (double v : x) acc += std::abs(v);
        return acc;
      },
      1.0);
}

LipschitzFunction l2_norm(int n) {
  return LipschitzFunction(
      n,
      [](Point x) {
        double acc = 0.0;
        for (double v : x) acc += v * v;
        return std::sqrt(acc);
      },
      1.0);
}

LipschitzFunction max_abs(int n) {
  return LipschitzFunction(
      n,
      [](Point x) {
        double best = 0.0;
        for (double v : x) best = std::max(best, std::abs(v));
        return best;
      },
      1.0);
}

LipschitzFunction constant(int n, double c) {
  return LipschitzFunction(n, [c](Point) { return c; }, 0.0);
}

LipschitzFunction by_name(const std::string& name, int n) {
  if (name.rfind("coord", 0) == 0) {
    const int j = name.size() > 5 ? std::stoi(name.substr(5)) : 0;
    return coordinate(j, n);
  }
  if (name == "l1") return l1_norm(n);
  if (name == "l2") return l2_norm(n);
  if (name == "maxabs") return max_abs(n);
  if (n != 1) throw InvalidArgument("functions::by_name: '" + name + "' is only defined for n = 1");
  if (name == "identity") return identity();
  if (name == "abs") return absolute();
  if (name == "relu") return relu();
  if (name == "sin") return sine();
  throw InvalidArgument("functions::by_name: unknown function '" + name + "'");
}

}  // namespace functions

SymbolPair divided_difference_symbols(const LipschitzFunction& f) {
  const int n = f.arity();
  auto psi = ScalarSymbol2n(n, [f](Point xi, Point eta) { return Complex(f(xi) - f(eta)); }, 0.0);
  auto phi = ScalarSymbol2n(
      n, [f](Point xi, Point eta) { return Complex((f(xi) - f(eta)) / l2_distance(xi, eta)); }, 0.0);
  return {std::move(psi), std::move(phi)};
}

SymbolPair direction_symbols(int j, int n) {
  if (j < 0 || j >= n) throw InvalidArgument("direction_symbols: index out of range");
  const auto jj = static_cast<std::size_t>(j);
  auto psi = ScalarSymbol2n(n, [jj](Point xi, Point eta) { return Complex(xi[jj] - eta[jj]); }, 0.0);
  auto phi = ScalarSymbol2n(
      n, [jj](Point xi, Point eta) { return Complex((xi[jj] - eta[jj]) / l2_distance(xi, eta)); }, 0.0);
  return {std::move(psi), std::move(phi)};
}

ComplexMatrix schur_kernel(const SpectralTuple& s, const ScalarSymbol2n& phi) {
  if (phi.arity() != s.arity()) throw DimensionMismatch("schur_kernel: symbol arity differs from tuple arity");
  const auto d = s.dim();
  ComplexMatrix kernel(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    for (Eigen::Index a = 0; a < d; ++a) kernel(a, b) = phi(s.eigenvalue(a), s.eigenvalue(b));
  }
  return kernel;
}

ComplexMatrix doi_apply_kernel(const SpectralTuple& s, const ComplexMatrix& kernel, const ComplexMatrix& x) {
  if (kernel.rows() != s.dim() || kernel.cols() != s.dim()) throw DimensionMismatch("doi_apply: kernel size mismatch");
  const ComplexMatrix inner = s.to_eigenbasis(x);
  return s.from_eigenbasis(kernel.cwiseProduct(inner));
}

ComplexMatrix doi_apply(const SpectralTuple& s, const ScalarSymbol2n& phi, const ComplexMatrix& x) {
  return doi_apply_kernel(s, schur_kernel(s, phi), x);
}

ComplexMatrix offdiag_project(const SpectralTuple& s, const ComplexMatrix& x) {
  return x - doi_apply(s, delta_symbol(s.arity()), x);
}

Complex trace_pairing(const ComplexMatrix& z, const ScalarSymbol2n& phi, const ComplexMatrix& y,
                      const SpectralTuple& s) {
  const ComplexMatrix zt = s.to_eigenbasis(z);
  const ComplexMatrix yt = s.to_eigenbasis(y);
  const ComplexMatrix kernel = schur_kernel(s, phi);
  Complex acc = 0.0;
  for (Eigen::Index b = 0; b < s.dim(); ++b) {
    for (Eigen::Index a = 0; a < s.dim(); ++a) acc += kernel(a, b) * zt(b, a) * yt(a, b);
  }
  return acc;
}

SpectralTuple discretize_measure(const SpectralTuple& s, int m) {
  if (m < 1) throw InvalidArgument("discretize_measure: m must be positive");
  RowMajorMatrix eigs = s.joint_eigenvalues();
  const double scale = static_cast<double>(m);
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    const double v = eigs.data()[i] * scale;
    const double nearest = std::round(v);
    // Values already on the grid stay there despite binary rounding of m * lambda.
    const double k = std::abs(v - nearest) <= 1e-9 * std::max(1.0, std::abs(v)) ? nearest : std::floor(v);
    eigs.data()[i] = k / scale;
  }
  return SpectralTuple(s.basis(), std::move(eigs));
}

LipschitzFunction mollify_function(const LipschitzFunction& f, double k, int quad_points) {
  if (!(k > 0.0)) throw InvalidArgument("mollify_function: k must be positive");
  if (quad_points < 5 || quad_points % 2 == 0) {
    throw InvalidArgument("mollify_function: quad_points must be odd and >= 5");
  }
  const double half_width = 8.0 / std::sqrt(k);
  const double step = 2.0 * half_width / (quad_points - 1);
  const double sigma = 1.0 / std::sqrt(2.0 * k);
  if (step > sigma / 4.0) {
    throw InvalidArgument("mollify_function: quadrature window too small for the Gaussian (raise quad_points)");
  }

  // One-dimensional Simpson weights times the Gaussian factor, normalized to
  // unit mass so affine functions are reproduced.
  auto nodes = std::make_shared<std::vector<double>>(static_cast<std::size_t>(quad_points));
  auto weights = std::make_shared<std::vector<double>>(static_cast<std::size_t>(quad_points));
  const double density = std::sqrt(k / std::numbers::pi);
  double mass = 0.0;
  for (int i = 0; i < quad_points; ++i) {
    const double eta = -half_width + i * step;
    const double simpson = (i == 0 || i + 1 == quad_points) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    (*nodes)[static_cast<std::size_t>(i)] = eta;
    (*weights)[static_cast<std::size_t>(i)] = simpson * step / 3.0 * density * std::exp(-k * eta * eta);
    mass += (*weights)[static_cast<std::size_t>(i)];
  }
  for (double& w : *weights) w /= mass;

  const int n = f.arity();
  auto smoothed = [f, nodes, weights, n](Point xi) {
    require_arity(xi, n, "mollified function");
    const auto q = nodes->size();
    std::vector<std::size_t> index(static_cast<std::size_t>(n), 0);
    std::vector<double> shifted(static_cast<std::size_t>(n));
    double acc = 0.0;
    while (true) {
      double w = 1.0;
      for (std::size_t j = 0; j < index.size(); ++j) {
        w *= (*weights)[index[j]];
        shifted[j] = xi[j] - (*nodes)[index[j]];
      }
      acc += w * f(shifted);
      std::size_t j = 0;
      while (j < index.size() && ++index[j] == q) index[j++] = 0;
      if (j == index.size()) break;
    }
    return acc;
  };
  return LipschitzFunction(n, std::move(smoothed), f.declared_lip());
}

}  // namespace doilab
