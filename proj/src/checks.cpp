#include "doilab/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "doilab/doi.hpp"
#include "doilab/error.hpp"
#include "doilab/experiments.hpp"
#include "doilab/random.hpp"
#include "doilab/spectral.hpp"
#include "doilab/symbols.hpp"
#include "doilab/transference.hpp"

namespace doilab::checks {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

random::Engine engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{seed, stream, index};
  return random::Engine(seq);
}

int uniform_int(random::Engine& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform(random::Engine& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::string sci(double v) {
  std::ostringstream out;
  out << std::setprecision(3) << std::scientific << v;
  return out.str();
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream out;
  out << std::setprecision(digits) << std::fixed << v;
  return out.str();
}

CheckResult finish(std::string name, bool passed, std::string detail, Clock::time_point start, double limit,
                   const SuiteOptions& o) {
  const double seconds = elapsed(start);
  if (o.enforce_runtime && limit > 0.0 && seconds > limit) {
    passed = false;
    detail += "; runtime " + fixed(seconds, 1) + " s exceeds " + fixed(limit, 0) + " s";
  }
  return {std::move(name), passed, std::move(detail), seconds};
}

std::vector<std::string> function_names(int n) {
  if (n == 1) return {"identity", "abs", "relu", "sin", "l1", "l2", "maxabs", "coord0"};
  return {"l1", "l2", "maxabs", "coord0", "coord" + std::to_string(n - 1)};
}

struct OperatorCase {
  SpectralTuple s;
  ComplexMatrix x;
  LipschitzFunction f;
};

// Random tuple with some repeated joint eigenvalues (and some repeated single
// coordinates), Gaussian x and a Lipschitz function of matching arity.
OperatorCase operator_case(std::uint64_t seed, int index, int max_dim) {
  auto rng = engine(seed, 1, static_cast<std::uint64_t>(index));
  const int n = 1 + index % 3;
  const int d = uniform_int(rng, 2, std::max(2, max_dim));
  RowMajorMatrix eigs(d, n);
  for (int a = 0; a < d; ++a) {
    for (int j = 0; j < n; ++j) eigs(a, j) = uniform(rng, -1.0, 1.0);
  }
  if (index % 4 == 0) {
    for (int a = 1; a < d; a += 3) eigs.row(a) = eigs.row(a - 1);
  } else if (index % 4 == 1) {
    for (int a = 1; a < d; a += 2) eigs(a, 0) = eigs(a - 1, 0);
  }
  SpectralTuple s(random::unitary(d, rng), std::move(eigs));
  ComplexMatrix x = random::gaussian(d, rng);
  const auto names = function_names(n);
  const auto& name = names[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(names.size()) - 1))];
  return {std::move(s), std::move(x), functions::by_name(name, n)};
}

double function_scale(const OperatorCase& c) {
  double scale = 1.0;
  for (Eigen::Index a = 0; a < c.s.dim(); ++a) scale = std::max(scale, std::abs(c.f(c.s.eigenvalue(a))));
  return scale;
}

}  // namespace

TransferInstance transfer_instance(std::uint64_t seed, int index, int n, int max_dim) {
  if (n < 0 || max_dim < 2) throw InvalidArgument("transfer_instance: need n >= 0 and max_dim >= 2");
  auto rng = engine(seed, 5, static_cast<std::uint64_t>(index));
  if (n == 0) n = 1 + index % 2;
  const int d = uniform_int(rng, 2, max_dim);

  // Either a coordinate function with m | N, or a function with l1 constant
  // <= 1/2 and N >= 2m; both keep every increment inside the identity region.
  std::int64_t m = 1;
  std::int64_t N = 1;
  LipschitzFunction f = functions::coordinate(0, n);
  const int kind = index % 3;
  if (kind == 0) {
    m = std::int64_t{1} << uniform_int(rng, 0, 3);
    N = m * (std::int64_t{1} << uniform_int(rng, 0, static_cast<int>(3 - std::log2(static_cast<double>(m)))));
    f = functions::coordinate(uniform_int(rng, 0, n - 1), n);
  } else {
    m = std::int64_t{1} << uniform_int(rng, 0, 2);
    N = uniform_int(rng, static_cast<int>(2 * m), 8);
    if (n == 1) {
      f = LipschitzFunction(1, [](Point t) { return 0.5 * std::sin(t[0]); }, 0.5);
    } else if (kind == 1) {
      f = LipschitzFunction(n, [](Point t) { return 0.5 * std::hypot(t[0], t[1]); }, 0.5);
    } else {
      f = LipschitzFunction(
          n, [](Point t) { return 0.25 * std::max(std::abs(t[0]), std::abs(t[1])) - 0.25 * t[1]; }, 0.5);
    }
  }

  const int bins = uniform_int(rng, 2, std::max(2, d));
  std::vector<Frequency> centers(static_cast<std::size_t>(bins), Frequency(static_cast<std::size_t>(n)));
  for (auto& k : centers) {
    for (auto& v : k) v = uniform_int(rng, -3, 3);
  }
  RowMajorMatrix eigs(d, n);
  std::vector<int> owner(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    owner[static_cast<std::size_t>(a)] = a < 2 ? a : uniform_int(rng, 0, bins - 1);
    const auto& k = centers[static_cast<std::size_t>(owner[static_cast<std::size_t>(a)])];
    for (int j = 0; j < n; ++j) eigs(a, j) = static_cast<double>(k[static_cast<std::size_t>(j)]) / static_cast<double>(m);
  }
  const ComplexMatrix u = random::unitary(d, rng);
  ComplexMatrix yt = random::gaussian(d, rng);
  for (int b = 0; b < d; ++b) {
    for (int a = 0; a < d; ++a) {
      if (eigs.row(a) == eigs.row(b)) yt(a, b) = 0.0;
    }
  }
  const ComplexMatrix y = u * yt * u.adjoint();
  SpectralTuple s(u, std::move(eigs));
  auto snapped = snap_function(f, m, N, occupied_bins(s, m));
  return {std::move(s), std::move(snapped.g), y};
}

SuiteOptions acceptance_options() { return {}; }

SuiteOptions verify_options(std::uint64_t seed, int dim) {
  SuiteOptions o;
  o.seed = seed;
  o.max_dim = std::max(2, dim);
  o.operator_instances = 60;
  o.symbol_points = 300;
  o.region_points = 2000;
  o.transfer_instances = 30;
  o.sample_instances = 30;
  o.extremal_max_dim = 64;
  o.sweep_seeds = 2;
  o.enforce_runtime = false;
  return o;
}

CheckResult commutator_identity(const SuiteOptions& o) {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < o.operator_instances; ++i) {
    const OperatorCase c = operator_case(o.seed, i, o.max_dim);
    const ComplexMatrix lhs = doi_apply(c.s, divided_difference_symbols(c.f).psi, c.x);
    const ComplexMatrix rhs = commutator(apply_function(c.s, c.f.function()).matrix(), c.x);
    worst = std::max(worst, (lhs - rhs).norm() / (c.x.norm() * function_scale(c)));
  }
  const double tol = 1e-10 * o.tol_scale;
  return finish("commutator identity", worst <= tol,
                std::to_string(o.operator_instances) + " instances, max relative error " + sci(worst) + " (tol " +
                    sci(tol) + ")",
                start, 10.0, o);
}

CheckResult factorization(const SuiteOptions& o) {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < o.operator_instances; ++i) {
    const OperatorCase c = operator_case(o.seed, i, o.max_dim);
    const int n = c.s.arity();
    const SymbolPair fp = divided_difference_symbols(c.f);
    ComplexMatrix sum = ComplexMatrix::Zero(c.s.dim(), c.s.dim());
    for (int j = 0; j < n; ++j) {
      const SymbolPair dj = direction_symbols(j, n);
      sum += doi_apply(c.s, fp.phi, doi_apply(c.s, dj.phi, doi_apply(c.s, dj.psi, c.x)));
    }
    const ComplexMatrix target = doi_apply(c.s, fp.psi, c.x);
    worst = std::max(worst, (sum - target).norm() / (c.x.norm() * function_scale(c)));
  }
  const double tol = 1e-10 * o.tol_scale;
  return finish("divided-difference factorization", worst <= tol,
                std::to_string(o.operator_instances) + " instances, max relative error " + sci(worst) + " (tol " +
                    sci(tol) + ")",
                start, 0.0, o);
}

CheckResult symbol_oracles(const SuiteOptions& o) {
  const auto start = Clock::now();
  double k_quad = 0.0;
  double k_eps = 0.0;
  double r_err = 0.0;
  double mj_err = 0.0;
  for (int i = 0; i < o.symbol_points; ++i) {
    auto rng = engine(o.seed, 3, static_cast<std::uint64_t>(i));
    const int n = 1 + i % 3;
    std::vector<double> xi(static_cast<std::size_t>(n));
    for (auto& v : xi) v = uniform(rng, -3.0, 3.0);
    if (i % 10 == 0 && n > 1) xi[static_cast<std::size_t>(uniform_int(rng, 0, n - 1))] = 0.0;
    double l = 0.0;
    for (double v : xi) l += std::abs(v);
    const double mu = i % 25 == 1 ? 0.0 : l * uniform(rng, -3.0, 3.0);

    const Complex k = eval_K(xi, mu);
    k_quad = std::max(k_quad, std::abs(k - eval_K_quadrature(xi, mu)));
    k_eps = std::max(k_eps, std::abs(k - eval_K_epsilon_sum(xi, mu)));
    if (std::abs(mu) != l) r_err = std::max(r_err, std::abs(eval_R(xi, mu) - eval_R_product_form(xi, mu)));
    const int j = uniform_int(rng, 0, n - 1);
    mj_err = std::max(mj_err, std::abs(eval_mj(j, xi, mu) - eval_mj_quadrature(j, xi, mu)));
  }

  // Parity and degree-0 homogeneity of the closed form: exact under
  // reflection and dyadic scaling everywhere, and under scaling by 17 on
  // integer points.
  double parity = 0.0;
  double scaling = 0.0;
  for (int i = 0; i < o.symbol_points; ++i) {
    auto rng = engine(o.seed, 4, static_cast<std::uint64_t>(i));
    const int n = 1 + i % 3;
    const bool lattice = i % 2 == 0;
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    do {
      for (auto& v : w) v = lattice ? uniform_int(rng, -6, 6) : uniform(rng, -3.0, 3.0);
    } while (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; }));
    const auto symbol = mj_symbol(uniform_int(rng, 0, n - 1), n);
    const Complex base = symbol(w);
    std::vector<double> other(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) other[t] = -w[t];
    parity = std::max(parity, std::abs(symbol(other) - base));
    std::vector<double> factors{0.5, 2.0};
    if (lattice) factors.push_back(17.0);
    for (double lambda : factors) {
      for (std::size_t t = 0; t < w.size(); ++t) other[t] = lambda * w[t];
      scaling = std::max(scaling, std::abs(symbol(other) - base));
    }
  }

  const double ts = o.tol_scale;
  const bool ok = k_quad <= 1e-8 * ts && k_eps <= 1e-8 * ts && r_err <= 1e-10 * ts && mj_err <= 1e-7 * ts &&
                  parity == 0.0 && scaling == 0.0;
  return finish("symbol oracles", ok,
                std::to_string(o.symbol_points) + " points; K vs integral " + sci(k_quad) + ", K vs sign sum " +
                    sci(k_eps) + ", R vs product form " + sci(r_err) + ", m_j vs quadrature " + sci(mj_err) +
                    ", parity defect " + sci(parity) + ", scaling defect " + sci(scaling),
                start, 0.0, o);
}

CheckResult region_identity(const SuiteOptions& o) {
  const auto start = Clock::now();
  int mismatches = 0;
  double quad_err = 0.0;
  int identity_points = 0;
  int vanishing_points = 0;
  for (int i = 0; i < o.region_points; ++i) {
    auto rng = engine(o.seed, 6, static_cast<std::uint64_t>(i));
    const int n = 1 + i % 3;
    std::vector<double> xi(static_cast<std::size_t>(n));
    for (auto& v : xi) v = uniform(rng, -3.0, 3.0);
    double l = 0.0;
    double sq = 0.0;
    for (double v : xi) {
      l += std::abs(v);
      sq += v * v;
    }
    const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    const bool identity = i % 2 == 0;
    double mu = 0.0;
    if (identity) {
      mu = i % 50 == 0 ? sign * l : l * uniform(rng, -1.0, 1.0);
    } else {
      mu = i % 50 == 1 ? sign * 2.0 * l : sign * l * uniform(rng, 2.0, 5.0);
    }
    const int j = uniform_int(rng, 0, n - 1);
    const Complex value = eval_mj(j, xi, mu);
    const Complex expected = identity ? Complex(mu * xi[static_cast<std::size_t>(j)] / sq) : Complex(0.0);
    if (value != expected) ++mismatches;
    (identity ? identity_points : vanishing_points)++;
    quad_err = std::max(quad_err, std::abs(value - eval_mj_quadrature(j, xi, mu)));
  }
  const bool ok = mismatches == 0 && quad_err <= 1e-7 * o.tol_scale;
  return finish("region identity", ok,
                std::to_string(identity_points) + " identity-region and " + std::to_string(vanishing_points) +
                    " vanishing-region points, " + std::to_string(mismatches) +
                    " closed-form mismatches, max deviation from quadrature " + sci(quad_err),
                start, 0.0, o);
}

CheckResult transference(const SuiteOptions& o) {
  const auto start = Clock::now();
  double worst = 0.0;
  double norm_err = 0.0;
  double recon_err = 0.0;
  std::size_t collisions = 0;
  const std::vector<NormOrder> orders{NormOrder(1.0), NormOrder(1.5), NormOrder(2.0), NormOrder(4.0),
                                      NormOrder::infinity()};
  for (int i = 0; i < o.transfer_instances; ++i) {
    const TransferInstance c = transfer_instance(o.seed, i);
    const double scale = c.y.norm();
    for (int j = 0; j < c.s.arity(); ++j) {
      const TransferenceCheck t = check_transference(c.s, c.g, c.y, j);
      worst = std::max(worst, t.max_error / scale);
    }
    const TrigPolynomial h = build_hy(c.s, c.g, c.y);
    const auto bins = occupied_bins(c.s, c.g.m());
    if (h.support_size() < bins.size() * (bins.size() - 1)) ++collisions;
    const int grid = c.s.arity() == 1 ? 4 : 3;
    for (const auto& p : orders) norm_err = std::max(norm_err, std::abs(torus_lp_norm(h, p, grid) - schatten_norm(c.y, p)));
    auto rng = engine(o.seed, 7, static_cast<std::uint64_t>(i));
    std::vector<double> theta(static_cast<std::size_t>(c.s.arity()) + 1);
    for (int r = 0; r < 3; ++r) {
      for (auto& v : theta) v = uniform(rng, 0.0, 1.0);
      const ComplexMatrix u = torus_unitary(c.s, c.g, theta);
      recon_err = std::max(recon_err, (h.evaluate(theta) - u * c.y * u.adjoint()).cwiseAbs().maxCoeff() / scale);
    }
  }
  const double ts = o.tol_scale;
  const bool ok = worst <= 1e-9 * ts && norm_err <= 1e-10 * ts && recon_err <= 1e-12 * ts;
  return finish("transference", ok,
                std::to_string(o.transfer_instances) + " instances (" + std::to_string(collisions) +
                    " with frequency collisions); max coefficient error / ||y||_2 " + sci(worst) +
                    ", norm transport error " + sci(norm_err) + ", pointwise reconstruction " + sci(recon_err),
                start, 60.0, o);
}

CheckResult discretization_convergence(const SuiteOptions& o) {
  const auto start = Clock::now();
  auto rng = engine(o.seed, 8, 0);
  const int d = 64;
  RowMajorMatrix eigs(d, 2);
  for (int a = 0; a < d; ++a) {
    eigs(a, 0) = a < d / 2 ? uniform(rng, -1.0, -0.5) : uniform(rng, 0.5, 1.0);
    eigs(a, 1) = uniform(rng, -1.0, 1.0);
  }
  const ComplexMatrix u = random::unitary(d, rng);
  ComplexMatrix yt = random::gaussian(d, rng);
  for (int b = 0; b < d; ++b) {
    for (int a = 0; a < d; ++a) {
      if ((a < d / 2) == (b < d / 2)) yt(a, b) = 0.0;
    }
  }
  const ComplexMatrix y = u * yt * u.adjoint();
  const ComplexMatrix z = y.adjoint();
  const SpectralTuple s(u, std::move(eigs));
  // Smooth and increasing in every coordinate, so each floor step moves the
  // pairing in the same direction.
  const ScalarSymbol2n phi(
      2, [](Point xi, Point eta) { return Complex(std::exp(0.3 * (xi[0] + eta[0]) + 0.2 * (xi[1] + eta[1]))); }, 0.0);

  const Complex exact = trace_pairing(z, phi, y, s);
  const Complex direct = (z * doi_apply(s, phi, y)).trace();
  std::vector<double> xs;
  std::vector<double> ys;
  std::string errors;
  for (int m = 4; m <= 256; m *= 2) {
    const double err = std::abs(trace_pairing(z, phi, y, discretize_measure(s, m)) - exact);
    xs.push_back(std::log(static_cast<double>(m)));
    ys.push_back(std::log(err));
    errors += (errors.empty() ? "" : ", ") + sci(err);
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  const double pairing_gap = std::abs(exact - direct) / std::abs(exact);
  const bool ok = slope >= -1.3 && slope <= -0.7 && pairing_gap <= 1e-12 * o.tol_scale;
  return finish("discretization convergence", ok,
                "slope " + fixed(slope) + " over m = 4..256 (errors " + errors + "), measure vs trace pairing " +
                    sci(pairing_gap),
                start, 0.0, o);
}

CheckResult exponential_bound_and_mollification(const SuiteOptions& o) {
  const auto start = Clock::now();
  double worst_slack = -1.0;
  int violations = 0;
  for (int i = 0; i < o.sample_instances; ++i) {
    auto rng = engine(o.seed, 9, static_cast<std::uint64_t>(i));
    const int n = 1 + i % 3;
    const int d = uniform_int(rng, 1, std::min(16, o.max_dim));
    const SpectralTuple b = random::commuting_tuple(n, d, rng);
    SpectralTuple c = b;
    if (i % 2 == 0) {
      RowMajorMatrix eigs = b.joint_eigenvalues();
      for (Eigen::Index t = 0; t < eigs.size(); ++t) eigs.data()[t] += uniform(rng, -0.2, 0.2);
      c = SpectralTuple(b.basis(), std::move(eigs));
    } else {
      c = random::commuting_tuple(n, d, rng);
    }
    std::vector<double> svec(static_cast<std::size_t>(n));
    for (auto& v : svec) v = 2.0 * std::normal_distribution<double>()(rng);
    const double lhs = operator_norm(exp_tuple(b, svec) - exp_tuple(c, svec));
    double rhs = 0.0;
    for (int j = 0; j < n; ++j) {
      rhs += std::abs(svec[static_cast<std::size_t>(j)]) *
             operator_norm(b.operator_at(j).matrix() - c.operator_at(j).matrix());
    }
    if (lhs > rhs * (1.0 + 1e-12) + 1e-13) ++violations;
    if (rhs > 0.0) worst_slack = std::max(worst_slack, lhs / rhs);
  }

  double moll_err = 0.0;
  for (double k : {1.0, 10.0, 100.0}) {
    const double zero = 0.0;
    const double value = mollify_function(functions::absolute(), k)(Point(&zero, 1));
    moll_err = std::max(moll_err, std::abs(value - 1.0 / std::sqrt(k * std::numbers::pi)));
  }

  // Sampled Lipschitz quotients before and after smoothing, on one set of pairs.
  int increases = 0;
  struct Case {
    LipschitzFunction f;
    int quad;
  };
  const std::vector<Case> cases{{functions::absolute(), 4097},
                                {functions::relu(), 4097},
                                {functions::sine(), 4097},
                                {LipschitzFunction(1, [](Point t) { return std::abs(std::abs(t[0]) - 1.0); }, 1.0), 4097},
                                {functions::l1_norm(2), 129},
                                {functions::max_abs(2), 129}};
  auto rng = engine(o.seed, 10, 0);
  for (const auto& cs : cases) {
    const auto n = static_cast<std::size_t>(cs.f.arity());
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
    for (int t = 0; t < (n == 1 ? 200 : 40); ++t) {
      std::vector<double> a(n), b(n);
      for (std::size_t q = 0; q < n; ++q) {
        a[q] = uniform(rng, -3.0, 3.0);
        b[q] = t % 2 == 0 ? a[q] + uniform(rng, -0.5, 0.5) : uniform(rng, -3.0, 3.0);
      }
      pairs.emplace_back(a, b);
    }
    auto quotient = [&](const LipschitzFunction& g) {
      double best = 0.0;
      for (const auto& [a, b] : pairs) {
        double dist = 0.0;
        for (std::size_t q = 0; q < n; ++q) dist += std::abs(a[q] - b[q]);
        if (dist > 0.0) best = std::max(best, std::abs(g(a) - g(b)) / dist);
      }
      return best;
    };
    const double before = quotient(cs.f);
    for (double k : {1.0, 10.0, 100.0}) {
      if (quotient(mollify_function(cs.f, k, cs.quad)) > before + 1e-9 * o.tol_scale) ++increases;
    }
  }

  const bool ok = violations == 0 && moll_err <= 1e-8 * o.tol_scale && increases == 0;
  return finish("exponential bound and mollification", ok,
                std::to_string(o.sample_instances) + " exponential samples, " + std::to_string(violations) +
                    " violations (max lhs/rhs " + fixed(worst_slack) + "); mollified |t| at 0 error " +
                    sci(moll_err) + "; " + std::to_string(increases) + " quotient increases",
                start, 0.0, o);
}

CheckResult block_reduction(const SuiteOptions& o) {
  const auto start = Clock::now();
  double worst = 0.0;
  const std::vector<std::string> names{"identity", "abs", "relu", "sin"};
  const std::vector<double> ps{1.0, 1.5, 2.0, 3.0, 4.0, 7.5, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < o.sample_instances; ++i) {
    auto rng = engine(o.seed, 11, static_cast<std::uint64_t>(i));
    const int d = uniform_int(rng, 1, std::min(12, o.max_dim));
    const HermitianMatrix x = random::hermitian(d, rng);
    const HermitianMatrix y = random::hermitian(d, rng);
    const auto f = functions::by_name(names[static_cast<std::size_t>(i) % names.size()], 1);
    const NormOrder p(ps[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(ps.size()) - 1))]);
    const BlockEmbedding e = block_embed(x, y);
    const double embedded = commutator_ratio(f, e.tuple, e.x, p).ratio;
    worst = std::max(worst, std::abs(embedded - lipschitz_ratio(f, x, y, p)));
  }
  const double tol = 1e-10 * o.tol_scale;
  return finish("block reduction", worst <= tol,
                std::to_string(o.sample_instances) + " pairs, max |embedded - Lipschitz ratio| " + sci(worst), start,
                0.0, o);
}

CheckResult constant_trends(const SuiteOptions& o) {
  const auto start = Clock::now();
  const std::vector<double> p_grid{4.0 / 3.0, 2.0, 4.0, 16.0};

  SweepConfig extremal;
  extremal.p_grid = p_grid;
  for (int d = 4; d <= o.extremal_max_dim; d *= 2) extremal.dims.push_back(d);
  extremal.seeds = {o.seed};
  extremal.ensembles = {"extremal"};
  extremal.extremal_iterations = o.extremal_iterations;

  SweepConfig randomized;
  randomized.p_grid = p_grid;
  for (int d = 4; d <= std::min(32, o.max_dim); d *= 2) randomized.dims.push_back(d);
  if (randomized.dims.empty()) randomized.dims.push_back(std::max(2, o.max_dim));
  for (int k = 0; k < o.sweep_seeds; ++k) randomized.seeds.push_back(o.seed + static_cast<std::uint64_t>(k));
  randomized.ensembles = {"commuting", "pair"};

  std::vector<ExperimentRecord> records;
  for (const auto* config : {&extremal, &randomized}) {
    for (auto& r : constant_sweep(*config)) {
      if (r.kind != "envelope") records.push_back(std::move(r));
    }
  }

  Envelope envelope;
  double p2_max = 0.0;
  double path_max = 0.0;
  std::map<int, double> p4;
  std::map<int, double> p16;
  std::map<int, double> p2;
  double sym_low = 0.0;
  for (const auto& r : records) {
    const double p = r.parameters.p_grid.front();
    const double ratio = r.results.at("ratio").front();
    envelope.add(p, ratio);
    path_max = std::max(path_max, r.results.at("path_error").front() / std::max(1.0, r.results.at("numerator").front()));
    if (p == 2.0) p2_max = std::max(p2_max, ratio);
    if (r.kind == "extremal") {
      if (p == 4.0) p4[r.parameters.d] = ratio;
      if (p == 16.0) p16[r.parameters.d] = ratio;
      if (p == 2.0) p2[r.parameters.d] = ratio;
      if (p == 4.0 / 3.0 && r.parameters.d == o.extremal_max_dim) sym_low = ratio;
    }
  }
  const double c = envelope.fitted_c();

  bool monotone = true;
  std::string trend;
  double previous = -1.0;
  for (const auto& [d, ratio] : p4) {
    // Equal values can differ in the last bits after the round trip through
    // the complex commutator evaluation.
    if (ratio < previous - 1e-12) monotone = false;
    previous = ratio;
    trend += (trend.empty() ? "" : ", ") + fixed(ratio);
  }
  const int top = o.extremal_max_dim;
  const bool p_trend = p16.contains(top) && p2.contains(top) && p16.at(top) > p2.at(top);
  bool fit = true;
  for (const auto& r : records) {
    const double p = r.parameters.p_grid.front();
    if (r.results.at("ratio").front() > c * bound_reference(p) * (1.0 + 1e-12)) fit = false;
  }
  const bool p2_ok = p2_max <= 1.0 + 1e-9 * o.tol_scale;
  const bool ok = p2_ok && monotone && p_trend && fit && path_max <= 1e-9 * o.tol_scale;

  std::string detail = std::to_string(records.size()) + " records; max p=2 ratio " + fixed(p2_max, 6) +
                       "; extremal p=4 ratios over d=4.." + std::to_string(top) + ": " + trend;
  if (p_trend) {
    detail += "; d=" + std::to_string(top) + ": p=16 " + fixed(p16.at(top)) + " vs p=2 " + fixed(p2.at(top)) +
              " (p=4/3 " + fixed(sym_low) + " vs p=4 " + fixed(p4.at(top)) + ")";
  }
  detail += "; fitted c = " + fixed(c, 6) + "; max path error " + sci(path_max);
  return finish("constant trends", ok, detail, start, 600.0, o);
}

CheckResult weak_type(const SuiteOptions& o) {
  const auto start = Clock::now();
  int failures = 0;
  std::size_t samples = 0;
  double ratio_max = 0.0;
  for (int i = 0; i < o.sample_instances; ++i) {
    auto rng = engine(o.seed, 12, static_cast<std::uint64_t>(i));
    const int d = uniform_int(rng, 2, std::min(32, std::max(2, o.max_dim)));
    const SpectralTuple s = random::commuting_tuple(2, d, rng);
    const ComplexMatrix x = random::gaussian(d, rng);
    const auto names = function_names(2);
    const auto f = functions::by_name(names[static_cast<std::size_t>(i) % names.size()], 2);
    const ExperimentRecord r = weak_type_experiment(f, s, x);
    for (double h : r.results.at("holder_holds")) {
      ++samples;
      if (h != 1.0) ++failures;
    }
    ratio_max = std::max(ratio_max, r.results.at("ratio").front());
  }

  double scan_err = 0.0;
  for (int i = 0; i < o.sample_instances; ++i) {
    auto rng = engine(o.seed, 13, static_cast<std::uint64_t>(i));
    const int size = uniform_int(rng, 1, 40);
    std::vector<double> values(static_cast<std::size_t>(size));
    for (auto& v : values) v = i % 3 == 0 ? std::exp(uniform(rng, -6.0, 2.0)) : uniform(rng, 0.0, 5.0);
    if (i % 5 == 0) values.back() = 0.0;
    if (i % 7 == 0 && size > 2) values[1] = values[0];
    std::sort(values.begin(), values.end(), std::greater<>());
    const SingularProfile profile(values);
    double brute = 0.0;
    for (int k = 1; k <= 1024 * (size + 2); ++k) {
      const double t = k / 1024.0;
      brute = std::max(brute, profile.integral(t) / std::log1p(t));
    }
    scan_err = std::max(scan_err, std::abs(profile.m1inf() - brute));
  }
  const bool ok = failures == 0 && scan_err <= 1e-6 * o.tol_scale;
  return finish("weak-type harness", ok,
                std::to_string(o.sample_instances) + " instances, " + std::to_string(samples) + " sampled s, " +
                    std::to_string(failures) + " Hoelder failures, max M_{1,inf} ratio " + fixed(ratio_max) +
                    "; segment maximizer vs grid scan " + sci(scan_err),
                start, 0.0, o);
}

std::vector<CheckResult> acceptance_suite(const SuiteOptions& o) {
  return {commutator_identity(o), factorization(o),       symbol_oracles(o),
          region_identity(o),     transference(o),        discretization_convergence(o),
          exponential_bound_and_mollification(o), block_reduction(o), constant_trends(o),
          weak_type(o)};
}

std::vector<CheckResult> verify_suite(const SuiteOptions& o) {
  std::vector<CheckResult> out = acceptance_suite(o);

  {
    const auto start = Clock::now();
    double recon = 0.0;
    for (int i = 0; i < 20; ++i) {
      auto rng = engine(o.seed, 20, static_cast<std::uint64_t>(i));
      const int n = 1 + i % 3;
      const int d = uniform_int(rng, 2, std::max(2, o.max_dim));
      const SpectralTuple truth = random::commuting_tuple(n, d, rng);
      const auto ops = truth.operators();
      const SpectralTuple found = joint_diagonalize(ops, o.seed + static_cast<std::uint64_t>(i));
      for (int j = 0; j < n; ++j) {
        recon = std::max(recon, (found.operator_at(j).matrix() - ops[static_cast<std::size_t>(j)].matrix()).norm());
        recon = std::max(recon, (found.joint_eigenvalues().col(j) - truth.joint_eigenvalues().col(j)).cwiseAbs().maxCoeff());
      }
    }
    out.push_back(finish("joint diagonalization", recon <= 1e-9 * o.tol_scale,
                         "max reconstruction / eigenvalue error " + sci(recon), start, 0.0, o));
  }
  {
    const auto start = Clock::now();
    double worst = 0.0;
    double inclusion = 0.0;
    for (int i = 0; i < 20; ++i) {
      auto rng = engine(o.seed, 21, static_cast<std::uint64_t>(i));
      const int d = uniform_int(rng, 1, std::max(1, o.max_dim));
      const ComplexMatrix x = random::gaussian(d, rng);
      worst = std::max(worst, std::abs(schatten_norm(x, 2.0) - x.norm()) / x.norm());
      const auto norms = rearrangement_norms(x);
      inclusion = std::max(inclusion, norms.m1inf / norms.weak);
    }
    out.push_back(finish("schatten and rearrangement norms", worst <= 1e-12 && inclusion <= 1.6,
                         "S_2 vs Frobenius " + sci(worst) + ", max M_{1,inf} / weak-L1 " + fixed(inclusion), start,
                         0.0, o));
  }
  {
    const auto start = Clock::now();
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const OperatorCase c = operator_case(o.seed + 1, i, o.max_dim);
      const int n = c.s.arity();
      const auto a = divided_difference_symbols(c.f).phi;
      const auto b = direction_symbols(0, n).phi;
      const ComplexMatrix composed = doi_apply(c.s, a, doi_apply(c.s, b, c.x));
      worst = std::max(worst, (composed - doi_apply(c.s, a * b, c.x)).norm() / c.x.norm());
      worst = std::max(worst, (doi_apply(c.s, constant_symbol(n, 1.0), c.x) - c.x).norm() / c.x.norm());
    }
    out.push_back(finish("schur multiplier algebra", worst <= 1e-12 * o.tol_scale,
                         "max product / unit error " + sci(worst), start, 0.0, o));
  }
  {
    const auto start = Clock::now();
    SweepConfig config;
    config.p_grid = {2.0, 3.0};
    config.dims = {4};
    config.seeds = {o.seed};
    config.ensembles = {"commuting", "pair"};
    int bad = 0;
    std::size_t count = 0;
    for (const auto& r : constant_sweep(config)) {
      ++count;
      if (!(ExperimentRecord::from_json(nlohmann::json::parse(r.to_json().dump())) == r)) ++bad;
    }
    out.push_back(finish("record serialization", bad == 0,
                         std::to_string(count) + " records, " + std::to_string(bad) + " lossy round trips", start, 0.0,
                         o));
  }
  return out;
}

std::string format(const CheckResult& r) {
  std::ostringstream out;
  out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << std::fixed << std::setprecision(2) << r.seconds
      << " s): " << r.detail;
  return out.str();
}

}  // namespace doilab::checks
