#include "doilab/symbols.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "doilab/error.hpp"
#include "doilab/quadrature.hpp"

namespace doilab {

namespace {

constexpr Complex kI(0.0, 1.0);

double sign(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

double l1(Point xi) {
  double acc = 0.0;
  for (double v : xi) acc += std::abs(v);
  return acc;
}

double l2_squared(Point xi) {
  double acc = 0.0;
  for (double v : xi) acc += v * v;
  return acc;
}

void require_index(int j, Point xi, const char* who) {
  if (j < 0 || j >= static_cast<int>(xi.size())) throw InvalidArgument(std::string(who) + ": index out of range");
}

// (1/2)(-i h(x) + 1): 1 for x > 0, 1/2 at 0, 0 for x < 0.
Complex half_line_indicator(double x) { return 0.5 * (-kI * (kI * sign(x)) + 1.0); }

// (i/2) int_{-1}^{1} sign(t sigma + mu) dt with sigma = xi_1 + ... + xi_n.
Complex averaged_hilbert(Point xi, double mu) {
  double sigma = 0.0;
  for (double v : xi) sigma += v;
  std::array<double, 3> cuts{-1.0, 1.0, 1.0};
  std::size_t count = 2;
  if (sigma != 0.0) {
    const double root = -mu / sigma;
    if (root > -1.0 && root < 1.0) {
      cuts = {-1.0, root, 1.0};
      count = 3;
    }
  }
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    integral += (cuts[i + 1] - cuts[i]) * sign(mid * sigma + mu);
  }
  return 0.5 * kI * integral;
}

template <typename Fn>
Complex sum_over_signs(std::size_t n, Fn&& term) {
  Complex acc = 0.0;
  std::vector<double> eps(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t j = 0; j < n; ++j) eps[j] = (mask >> j) & 1U ? -1.0 : 1.0;
    acc += term(std::span<const double>(eps));
  }
  return acc;
}

}  // namespace

Complex eval_hilbert(Point xi) {
  if (xi.empty()) throw InvalidArgument("eval_hilbert: empty point");
  return kI * sign(xi[0]);
}

Complex eval_riesz(int j, Point xi) {
  require_index(j, xi, "eval_riesz");
  const double norm = std::sqrt(l2_squared(xi));
  if (norm == 0.0) return 0.0;
  return kI * (xi[static_cast<std::size_t>(j)] / norm);
}

Complex eval_K(Point xi, double mu) {
  const double l = l1(xi);
  if (l == 0.0 && mu == 0.0) return 0.0;
  if (std::abs(mu) <= l) return kI * (mu / l);
  return kI * sign(mu);
}

Complex eval_K_quadrature(Point xi, double mu) {
  std::vector<double> flipped(xi.size());
  return sum_over_signs(xi.size(), [&](Point eps) {
    Complex weight = 1.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
      flipped[j] = eps[j] * xi[j];
      weight *= half_line_indicator(flipped[j]);
    }
    if (weight == 0.0) return Complex(0.0);
    return averaged_hilbert(flipped, mu) * weight;
  });
}

Complex eval_K_epsilon_sum(Point xi, double mu) {
  return sum_over_signs(xi.size(), [&](Point eps) {
    int zeros = 0;
    double oriented = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
      if (eps[j] * xi[j] < 0.0) return Complex(0.0);
      if (xi[j] == 0.0) ++zeros;
      oriented += eps[j] * xi[j];
    }
    const double weight = std::ldexp(1.0, -zeros);
    const double l = std::abs(oriented);
    if (l == 0.0 && mu == 0.0) return Complex(0.0);
    if (std::abs(mu) <= l) return kI * (weight * mu / l);
    return kI * (weight * sign(mu));
  });
}

Complex eval_R(Point xi, double mu) {
  const double l = l1(xi);
  if (l == 0.0) return 0.0;
  if (std::abs(mu) <= l) return kI * (l / std::sqrt(l2_squared(xi)));
  return 0.0;
}

Complex eval_R_product_form(Point xi, double mu) {
  const double norm = std::sqrt(l2_squared(xi));
  if (norm == 0.0) return 0.0;
  return sum_over_signs(xi.size(), [&](Point eps) {
    Complex weight = 1.0;
    double dot = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
      weight *= half_line_indicator(eps[j] * xi[j]);
      dot += eps[j] * xi[j];
    }
    const Complex cone = half_line_indicator(mu) * half_line_indicator(dot - mu) +
                         half_line_indicator(-mu) * half_line_indicator(dot + mu);
    return kI * (dot / norm) * weight * cone;
  });
}

Complex eval_m1j(int j, Point xi, double mu) {
  require_index(j, xi, "eval_m1j");
  return kI * eval_K(xi, mu) * eval_R(xi, mu) * eval_riesz(j, xi);
}

double BumpProfile::density(double t) const {
  if (!(t > kSupportLeft && t < kSupportRight)) return 0.0;
  return peak_scale_ * std::exp(64.0 - 1.0 / ((t - kSupportLeft) * (kSupportRight - t)));
}

double BumpProfile::cumulative(double t) const {
  if (t <= kSupportLeft) return 0.0;
  if (t >= kSupportRight) return 1.0;
  const double h = (kSupportRight - kSupportLeft) / static_cast<double>(kTableIntervals);
  const auto i = std::min(static_cast<std::size_t>((t - kSupportLeft) / h), kTableIntervals - 1);
  const double t0 = kSupportLeft + static_cast<double>(i) * h;
  const double u = std::clamp((t - t0) / h, 0.0, 1.0);
  const double s0 = table_[i];
  const double s1 = table_[i + 1];
  const double delta = s1 - s0;
  if (delta <= 0.0) return s0;

  // Cubic Hermite with exact slopes S' = s, limited (Fritsch-Carlson) so the
  // interpolant stays monotone.
  double m0 = density(t0) * h;
  double m1 = density(t0 + h) * h;
  const double alpha = m0 / delta;
  const double beta = m1 / delta;
  const double radius = alpha * alpha + beta * beta;
  if (radius > 9.0) {
    const double tau = 3.0 / std::sqrt(radius);
    m0 = tau * alpha * delta;
    m1 = tau * beta * delta;
  }
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double value = (2 * u3 - 3 * u2 + 1) * s0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * s1 + (u3 - u2) * m1;
  return std::clamp(value, s0, s1);
}

double BumpProfile::normalization() const { return peak_scale_ * std::exp(64.0); }

BumpProfile make_bump() {
  constexpr std::array<double, 5> nodes{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                        0.9061798459386640};
  constexpr std::array<double, 5> weights{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                          0.4786286704993665, 0.2369268850561891};
  BumpProfile bump;
  bump.peak_scale_ = 1.0;  // unnormalized: density peaks at 1
  const double h = (BumpProfile::kSupportRight - BumpProfile::kSupportLeft) /
                   static_cast<double>(BumpProfile::kTableIntervals);
  bump.table_.assign(BumpProfile::kTableIntervals + 1, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < BumpProfile::kTableIntervals; ++i) {
    const double mid = BumpProfile::kSupportLeft + (static_cast<double>(i) + 0.5) * h;
    double piece = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) piece += weights[q] * bump.density(mid + 0.5 * h * nodes[q]);
    acc += 0.5 * h * piece;
    bump.table_[i + 1] = acc;
  }
  for (double& v : bump.table_) v /= acc;
  bump.table_.back() = 1.0;
  bump.peak_scale_ = 1.0 / acc;
  return bump;
}

const BumpProfile& standard_bump() {
  static const BumpProfile bump = make_bump();
  return bump;
}

Complex eval_mj(int j, Point xi, double mu, const BumpProfile& bump) {
  require_index(j, xi, "eval_mj");
  const double l = l1(xi);
  const double a = std::abs(mu);
  if (l == 0.0 && a == 0.0) throw InvalidArgument("eval_mj: undefined at the origin");
  if (2.0 * l <= a) return 0.0;
  const double base = mu * xi[static_cast<std::size_t>(j)] / l2_squared(xi);
  if (a <= l) return base;
  return bump.cumulative(l / a) * base;
}

Complex eval_mj_quadrature(int j, Point xi, double mu, const BumpProfile& bump, double tol) {
  require_index(j, xi, "eval_mj_quadrature");
  if (l1(xi) == 0.0 && mu == 0.0) throw InvalidArgument("eval_mj_quadrature: undefined at the origin");
  const auto integrand = [&](double lambda) {
    const double s = bump.density(lambda);
    if (s == 0.0) return 0.0;
    return s * eval_m1j(j, xi, lambda * mu).real() / lambda;
  };
  // The cone symbol jumps where lambda |mu| = ||xi||_1; integrate on each side.
  const double lo = BumpProfile::kSupportLeft;
  const double hi = BumpProfile::kSupportRight;
  const double a = std::abs(mu);
  const double jump = a > 0.0 ? l1(xi) / a : hi;
  if (jump <= lo || jump >= hi) return quadrature::adaptive(integrand, lo, hi, tol);
  return quadrature::adaptive(integrand, lo, jump, tol) + quadrature::adaptive(integrand, jump, hi, tol);
}

Region classify_region(Point xi, double mu) {
  const double l = l1(xi);
  const double a = std::abs(mu);
  if (l == 0.0 && a == 0.0) return Region::Origin;
  if (2.0 * l <= a) return Region::Vanishing;
  if (a <= l) return Region::Identity;
  return Region::Blend;
}

std::string region_name(Region r) {
  switch (r) {
    case Region::Origin:
      return "origin";
    case Region::Vanishing:
      return "vanishing";
    case Region::Blend:
      return "blend";
    case Region::Identity:
      return "identity";
  }
  return "unknown";
}

MultiplierSymbol::MultiplierSymbol(std::string name, int dimension, Evaluator evaluator, SymbolFlags flags)
    : name_(std::move(name)),
      dimension_(dimension),
      eval_(std::make_shared<const Evaluator>(std::move(evaluator))),
      flags_(flags) {
  if (dimension < 1) throw InvalidArgument("MultiplierSymbol: dimension must be positive");
  if (flags.even && flags.odd) throw InvalidArgument("MultiplierSymbol: symbol cannot be both even and odd");
}

Complex MultiplierSymbol::operator()(Point w) const {
  if (static_cast<int>(w.size()) != dimension_) throw DimensionMismatch("MultiplierSymbol: wrong point dimension");
  return (*eval_)(w);
}

MultiplierSymbol hilbert_symbol(int dimension) {
  return MultiplierSymbol("h", dimension, [](Point w) { return eval_hilbert(w); }, {false, true, true});
}

MultiplierSymbol riesz_symbol(int j, int dimension) {
  if (j < 0 || j >= dimension) throw InvalidArgument("riesz_symbol: index out of range");
  return MultiplierSymbol("r" + std::to_string(j + 1), dimension, [j](Point w) { return eval_riesz(j, w); },
                          {false, true, true});
}

MultiplierSymbol k_symbol(int n) {
  const auto nn = static_cast<std::size_t>(n);
  return MultiplierSymbol("K", n + 1, [nn](Point w) { return eval_K(w.first(nn), w[nn]); }, {false, true, true});
}

MultiplierSymbol r_symbol(int n) {
  const auto nn = static_cast<std::size_t>(n);
  return MultiplierSymbol("R", n + 1, [nn](Point w) { return eval_R(w.first(nn), w[nn]); }, {true, false, true});
}

MultiplierSymbol m1j_symbol(int j, int n) {
  if (j < 0 || j >= n) throw InvalidArgument("m1j_symbol: index out of range");
  const auto nn = static_cast<std::size_t>(n);
  return MultiplierSymbol("m1_" + std::to_string(j + 1), n + 1,
                          [j, nn](Point w) { return eval_m1j(j, w.first(nn), w[nn]); }, {true, false, true});
}

MultiplierSymbol mj_symbol(int j, int n, std::shared_ptr<const BumpProfile> bump) {
  if (j < 0 || j >= n) throw InvalidArgument("mj_symbol: index out of range");
  const auto nn = static_cast<std::size_t>(n);
  return MultiplierSymbol(
      "m_" + std::to_string(j + 1), n + 1,
      [j, nn, bump](Point w) { return eval_mj(j, w.first(nn), w[nn], bump ? *bump : standard_bump()); },
      {true, false, true});
}

double flag_defect(const MultiplierSymbol& m, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-3.0, 3.0);
  const auto dim = static_cast<std::size_t>(m.dimension());
  std::vector<double> w(dim), reflected(dim), scaled(dim);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (auto& v : w) v = uniform(rng);
    const Complex base = m(w);
    for (std::size_t i = 0; i < dim; ++i) reflected[i] = -w[i];
    if (m.flags().even) worst = std::max(worst, std::abs(m(reflected) - base));
    if (m.flags().odd) worst = std::max(worst, std::abs(m(reflected) + base));
    if (m.flags().homogeneous) {
      for (double lambda : {0.5, 2.0, 17.0}) {
        for (std::size_t i = 0; i < dim; ++i) scaled[i] = lambda * w[i];
        worst = std::max(worst, std::abs(m(scaled) - base));
      }
    }
  }
  return worst;
}

DiscreteSymbol::DiscreteSymbol(MultiplierSymbol symbol) : symbol_(std::move(symbol)) {}

Complex DiscreteSymbol::operator()(std::span<const std::int64_t> k) const {
  if (static_cast<int>(k.size()) != dimension()) throw DimensionMismatch("DiscreteSymbol: wrong frequency dimension");
  if (std::all_of(k.begin(), k.end(), [](std::int64_t v) { return v == 0; })) return 0.0;
  std::vector<double> point(k.begin(), k.end());
  return symbol_(point);
}

DiscreteSymbol restrict_discrete(const MultiplierSymbol& m) { return DiscreteSymbol(m); }

}  // namespace doilab
