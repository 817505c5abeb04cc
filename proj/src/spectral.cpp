#include "doilab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "doilab/error.hpp"

namespace doilab {

namespace {

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) * 0.5; }

struct Cluster {
  Eigen::Index begin;
  Eigen::Index size;
};

struct Refinement {
  ComplexMatrix basis;
  std::vector<Cluster> leaves;
};

bool all_scalar(const std::vector<ComplexMatrix>& ops, double tol) {
  for (const auto& op : ops) {
    const auto k = op.rows();
    const Complex mean = op.trace() / static_cast<double>(k);
    const ComplexMatrix centered = op - mean * ComplexMatrix::Identity(k, k);
    if (centered.norm() > tol * std::max(1.0, op.norm())) return false;
  }
  return true;
}

Refinement refine(const std::vector<ComplexMatrix>& ops, std::mt19937_64& rng, const Tolerances& tol,
                  int depth) {
  const auto k = ops.front().rows();
  if (k == 1 || all_scalar(ops, tol.cluster)) {
    return {ComplexMatrix::Identity(k, k), {{0, k}}};
  }
  if (depth > 64) throw DegenerateFailure("joint_diagonalize: refinement depth exceeded");

  std::normal_distribution<double> gauss;
  ComplexMatrix combo = ComplexMatrix::Zero(k, k);
  for (const auto& op : ops) combo += gauss(rng) * op;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(combo));
  if (es.info() != Eigen::Success) throw DegenerateFailure("joint_diagonalize: eigensolver failed");

  const Eigen::VectorXd& evals = es.eigenvalues();
  const double scale = std::max(1.0, evals.cwiseAbs().maxCoeff());
  std::vector<Cluster> clusters;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= k; ++i) {
    if (i == k || evals(i) - evals(i - 1) > tol.cluster * scale) {
      clusters.push_back({start, i - start});
      start = i;
    }
  }
  // A generic combination of a non-scalar commuting tuple always splits.
  if (clusters.size() == 1) throw DegenerateFailure("joint_diagonalize: combination did not split");

  Refinement out{es.eigenvectors(), {}};
  for (const auto& c : clusters) {
    if (c.size == 1) {
      out.leaves.push_back(c);
      continue;
    }
    const ComplexMatrix sub_basis = out.basis.middleCols(c.begin, c.size);
    std::vector<ComplexMatrix> sub_ops;
    sub_ops.reserve(ops.size());
    for (const auto& op : ops) sub_ops.push_back(hermitian_part(sub_basis.adjoint() * op * sub_basis));
    auto inner = refine(sub_ops, rng, tol, depth + 1);
    out.basis.middleCols(c.begin, c.size) = sub_basis * inner.basis;
    for (const auto& leaf : inner.leaves) out.leaves.push_back({c.begin + leaf.begin, leaf.size});
  }
  return out;
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionMismatch("HermitianMatrix: matrix must be square and nonempty");
  if (!m.allFinite()) throw InvalidArgument("HermitianMatrix: entries must be finite");
  const double defect = max_abs(m - m.adjoint());
  if (defect > tol * (1.0 + max_abs(m))) {
    throw InvalidArgument("HermitianMatrix: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  m_ = hermitian_part(m);
}

NormOrder::NormOrder(double p) : p_(p) {
  if (std::isnan(p) || p < 1.0) throw InvalidArgument("NormOrder: p must lie in [1, inf]");
}

NormOrder NormOrder::infinity() { return NormOrder(std::numeric_limits<double>::infinity()); }

bool NormOrder::is_infinite() const { return std::isinf(p_); }

double NormOrder::conjugate() const {
  if (is_infinite()) return 1.0;
  if (p_ == 1.0) return std::numeric_limits<double>::infinity();
  return p_ / (p_ - 1.0);
}

SingularProfile::SingularProfile(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw InvalidArgument("SingularProfile: values must be finite and nonnegative");
    }
    if (i > 0 && values_[i] > values_[i - 1]) throw InvalidArgument("SingularProfile: values must be nonincreasing");
  }
}

SingularProfile SingularProfile::of(const ComplexMatrix& x) { return SingularProfile(singular_values(x)); }

double SingularProfile::mu(double t) const {
  if (t < 0.0) throw InvalidArgument("SingularProfile::mu: t must be nonnegative");
  const auto k = static_cast<std::size_t>(std::floor(t));
  return k < values_.size() ? values_[k] : 0.0;
}

double SingularProfile::integral(double t) const { return power_integral(t, 1.0); }

double SingularProfile::power_integral(double t, double q) const {
  if (t < 0.0) throw InvalidArgument("SingularProfile: t must be nonnegative");
  double acc = 0.0;
  std::size_t k = 0;
  for (; k < values_.size() && static_cast<double>(k + 1) <= t; ++k) acc += std::pow(values_[k], q);
  if (k < values_.size()) acc += (t - static_cast<double>(k)) * std::pow(values_[k], q);
  return acc;
}

double SingularProfile::schatten(NormOrder p) const {
  if (values_.empty() || values_.front() == 0.0) return 0.0;
  const double top = values_.front();
  if (p.is_infinite()) return top;
  double acc = 0.0;
  for (double s : values_) acc += std::pow(s / top, p.p());
  return top * std::pow(acc, 1.0 / p.p());
}

double SingularProfile::weak_l1() const {
  double best = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) best = std::max(best, static_cast<double>(i + 1) * values_[i]);
  return best;
}

double SingularProfile::m1inf() const {
  double best = 0.0;
  double prefix = 0.0;  // F_k
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double s = values_[k];
    const double left = static_cast<double>(k);
    const double right = left + 1.0;
    const double f_k = prefix;
    const auto ratio = [&](double t) { return (f_k + s * (t - left)) / std::log1p(t); };

    // t -> 0+ limit on the first segment is s_1; elsewhere the left node value.
    best = std::max(best, k == 0 ? s : f_k / std::log1p(left));
    best = std::max(best, ratio(right));

    // The derivative of ratio has the sign of h.
    const auto h = [&](double t) { return s * std::log1p(t) - (f_k + s * (t - left)) / (1.0 + t); };
    double lo = std::max(left, 1e-300);
    double hi = right;
    if (h(lo) < 0.0 && h(hi) > 0.0) {
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
      }
      best = std::max(best, ratio(0.5 * (lo + hi)));
    }
    prefix += s;
  }
  return best;
}

SpectralTuple::SpectralTuple(ComplexMatrix basis, RowMajorMatrix joint_eigs, double unitary_tol) {
  const auto d = basis.rows();
  if (d == 0 || basis.cols() != d) throw DimensionMismatch("SpectralTuple: basis must be square and nonempty");
  if (joint_eigs.rows() != d || joint_eigs.cols() < 1) {
    throw DimensionMismatch("SpectralTuple: need one joint eigenvalue row per basis column");
  }
  if (!joint_eigs.allFinite() || !basis.allFinite()) throw InvalidArgument("SpectralTuple: nonfinite input");
  const double defect = max_abs(basis.adjoint() * basis - ComplexMatrix::Identity(d, d));
  if (defect > unitary_tol) {
    throw InvalidArgument("SpectralTuple: basis is not unitary (defect " + std::to_string(defect) + ")");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto n = joint_eigs.cols();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (joint_eigs(a, j) != joint_eigs(b, j)) return joint_eigs(a, j) < joint_eigs(b, j);
    }
    return false;
  });

  basis_.resize(d, d);
  eigs_.resize(d, n);
  for (Eigen::Index a = 0; a < d; ++a) {
    basis_.col(a) = basis.col(order[static_cast<std::size_t>(a)]);
    eigs_.row(a) = joint_eigs.row(order[static_cast<std::size_t>(a)]);
  }
}

HermitianMatrix SpectralTuple::operator_at(int j) const {
  if (j < 0 || j >= arity()) throw InvalidArgument("SpectralTuple::operator_at: index out of range");
  const Eigen::VectorXcd diag = eigs_.col(j).cast<Complex>();
  return HermitianMatrix(basis_ * diag.asDiagonal() * basis_.adjoint(), 1e-10);
}

std::vector<HermitianMatrix> SpectralTuple::operators() const {
  std::vector<HermitianMatrix> out;
  out.reserve(static_cast<std::size_t>(arity()));
  for (int j = 0; j < arity(); ++j) out.push_back(operator_at(j));
  return out;
}

ComplexMatrix SpectralTuple::to_eigenbasis(const ComplexMatrix& x) const {
  if (x.rows() != dim() || x.cols() != dim()) throw DimensionMismatch("SpectralTuple: operand dimension mismatch");
  return basis_.adjoint() * x * basis_;
}

ComplexMatrix SpectralTuple::from_eigenbasis(const ComplexMatrix& x) const {
  if (x.rows() != dim() || x.cols() != dim()) throw DimensionMismatch("SpectralTuple: operand dimension mismatch");
  return basis_ * x * basis_.adjoint();
}

SpectralTuple joint_diagonalize(std::span<const HermitianMatrix> tuple, std::uint64_t seed, const Tolerances& tol) {
  if (tuple.empty()) throw InvalidArgument("joint_diagonalize: empty tuple");
  const auto d = tuple.front().dim();
  std::vector<ComplexMatrix> ops;
  ops.reserve(tuple.size());
  for (const auto& a : tuple) {
    if (a.dim() != d) throw DimensionMismatch("joint_diagonalize: operators differ in dimension");
    ops.push_back(a.matrix());
  }
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      const double c = commutator(ops[i], ops[j]).norm();
      if (c > tol.commute * std::max(1.0, ops[i].norm() * ops[j].norm())) {
        throw NonCommuting("joint_diagonalize: operators " + std::to_string(i) + " and " + std::to_string(j) +
                           " do not commute (||[A,B]||_2 = " + std::to_string(c) + ")");
      }
    }
  }

  std::mt19937_64 rng(seed);
  constexpr int kAttempts = 5;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Refinement r;
    try {
      r = refine(ops, rng, tol, 0);
    } catch (const DegenerateFailure&) {
      continue;
    }
    RowMajorMatrix eigs(d, static_cast<Eigen::Index>(ops.size()));
    for (const auto& leaf : r.leaves) {
      const ComplexMatrix v = r.basis.middleCols(leaf.begin, leaf.size);
      for (std::size_t j = 0; j < ops.size(); ++j) {
        const double value = (v.adjoint() * ops[j] * v).trace().real() / static_cast<double>(leaf.size);
        eigs.block(leaf.begin, static_cast<Eigen::Index>(j), leaf.size, 1).setConstant(value);
      }
    }
    return SpectralTuple(std::move(r.basis), std::move(eigs), tol.unitary);
  }
  throw DegenerateFailure("joint_diagonalize: genericity retries exhausted");
}

HermitianMatrix apply_function(const SpectralTuple& s, const RealFunction& f) {
  Eigen::VectorXcd diag(s.dim());
  for (Eigen::Index a = 0; a < s.dim(); ++a) diag(a) = f(s.eigenvalue(a));
  if (!diag.allFinite()) throw InvalidArgument("apply_function: function returned a nonfinite value");
  return HermitianMatrix(s.basis() * diag.asDiagonal() * s.basis().adjoint(), 1e-10);
}

std::vector<double> singular_values(const ComplexMatrix& x) {
  const auto count = static_cast<std::size_t>(std::min(x.rows(), x.cols()));
  if (count == 0) return {};
  const double scale = max_abs(x);
  if (scale == 0.0) return std::vector<double>(count, 0.0);

  std::vector<double> out;
  if (x.rows() == x.cols()) {
    const ComplexMatrix adj = x.adjoint();
    const double herm_defect = max_abs(x - adj);
    const double skew_defect = max_abs(x + adj);
    if (herm_defect <= 1e-13 * scale || skew_defect <= 1e-13 * scale) {
      const ComplexMatrix h = herm_defect <= 1e-13 * scale ? ComplexMatrix((x + adj) * 0.5)
                                                           : ComplexMatrix((x - adj) * Complex(0.0, -0.5));
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
      const Eigen::VectorXd abs_evals = es.eigenvalues().cwiseAbs();
      out.assign(abs_evals.data(), abs_evals.data() + abs_evals.size());
      std::sort(out.begin(), out.end(), std::greater<>());
      return out;
    }
  }
  Eigen::BDCSVD<ComplexMatrix> svd(x);
  const Eigen::VectorXd& sv = svd.singularValues();
  out.assign(sv.data(), sv.data() + sv.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double schatten_norm(const ComplexMatrix& x, NormOrder p) { return SingularProfile::of(x).schatten(p); }

double operator_norm(const ComplexMatrix& x) { return schatten_norm(x, NormOrder::infinity()); }

RearrangementNorms rearrangement_norms(const ComplexMatrix& x) {
  SingularProfile profile = SingularProfile::of(x);
  const double weak = profile.weak_l1();
  const double m1 = profile.m1inf();
  return {std::move(profile), weak, m1};
}

std::vector<std::pair<double, double>> zeta_profile(const ComplexMatrix& x, std::span<const double> p_grid) {
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] > 1.0)) throw InvalidArgument("zeta_profile: every p must exceed 1");
    if (i > 0 && !(p_grid[i] < p_grid[i - 1])) throw InvalidArgument("zeta_profile: p grid must be strictly decreasing");
  }
  const SingularProfile profile = SingularProfile::of(x);
  std::vector<std::pair<double, double>> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) out.emplace_back(p, (p - 1.0) * profile.schatten(NormOrder(p)));
  return out;
}

ComplexMatrix exp_tuple(const SpectralTuple& s, std::span<const double> coeffs) {
  if (static_cast<int>(coeffs.size()) != s.arity()) throw DimensionMismatch("exp_tuple: coefficient count != arity");
  Eigen::VectorXcd phase(s.dim());
  for (Eigen::Index a = 0; a < s.dim(); ++a) {
    const Point lambda = s.eigenvalue(a);
    const double angle = std::inner_product(lambda.begin(), lambda.end(), coeffs.begin(), 0.0);
    phase(a) = std::polar(1.0, angle);
  }
  return s.basis() * phase.asDiagonal() * s.basis().adjoint();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("commutator: dimension mismatch");
  return a * b - b * a;
}

}  // namespace doilab
