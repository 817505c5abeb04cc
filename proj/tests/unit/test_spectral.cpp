#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doilab/error.hpp"
#include "doilab/random.hpp"
#include "doilab/spectral.hpp"

using namespace doilab;

namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("hermitian matrix validation") {
  ComplexMatrix m(2, 2);
  m << 1, Complex(0, 1), Complex(0, -1), 2;
  CHECK_NOTHROW(HermitianMatrix{m});
  m(0, 1) = 3;
  CHECK_THROWS_AS(HermitianMatrix{m}, InvalidArgument);
  CHECK_THROWS_AS(HermitianMatrix{ComplexMatrix::Zero(2, 3)}, DimensionMismatch);
}

TEST_CASE("norm order") {
  CHECK(NormOrder(4.0).conjugate() == doctest::Approx(4.0 / 3.0));
  CHECK(NormOrder(1.0).is_infinite() == false);
  CHECK(std::isinf(NormOrder(1.0).conjugate()));
  CHECK(NormOrder::infinity().conjugate() == 1.0);
  CHECK_THROWS_AS(NormOrder(0.5), InvalidArgument);
  CHECK_THROWS_AS(NormOrder(std::nan("")), InvalidArgument);
}

TEST_CASE("schatten norms") {
  ComplexMatrix nil = ComplexMatrix::Zero(2, 2);
  nil(0, 1) = 1;
  for (double p : {1.0, 1.5, 2.0, 7.0}) CHECK(schatten_norm(nil, p) == doctest::Approx(1.0));
  CHECK(schatten_norm(nil, NormOrder::infinity()) == doctest::Approx(1.0));
  CHECK(schatten_norm(ComplexMatrix::Identity(3, 3), 2.0) == doctest::Approx(std::sqrt(3.0)));

  random::Engine rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix x = random::gaussian(7, rng);
    const double frob = std::sqrt((x.adjoint() * x).trace().real());
    CHECK(std::abs(schatten_norm(x, 2.0) - frob) <= 1e-12 * frob);
    const ComplexMatrix u = random::unitary(7, rng);
    const ComplexMatrix v = random::unitary(7, rng);
    for (double p : {1.0, 3.0}) {
      const double a = schatten_norm(x, p);
      CHECK(std::abs(schatten_norm(u * x * v, p) - a) <= 1e-10 * a);
    }
    const ComplexMatrix y = random::gaussian(7, rng);
    const double p = 1.0 + trial * 0.5;
    CHECK(std::abs((x * y).trace()) <= schatten_norm(x, p) * schatten_norm(y, NormOrder(NormOrder(p).conjugate())) + 1e-9);
  }
}

TEST_CASE("singular values are sorted and hermitian inputs agree with the svd path") {
  random::Engine rng(3);
  const HermitianMatrix h = random::hermitian(6, rng);
  const auto s = singular_values(h.matrix());
  REQUIRE(s.size() == 6);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] <= s[i - 1]);
  Eigen::JacobiSVD<ComplexMatrix> svd(h.matrix());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == doctest::Approx(svd.singularValues()(static_cast<Eigen::Index>(i))));
}

TEST_CASE("rearrangement norms") {
  SUBCASE("rank one") {
    const auto r = rearrangement_norms(diag({1.0}));
    CHECK(r.weak == doctest::Approx(1.0));
    CHECK(r.m1inf == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-9));
  }
  SUBCASE("two equal values") {
    const auto r = rearrangement_norms(diag({1.0, 1.0}));
    CHECK(r.weak == doctest::Approx(2.0));
    CHECK(r.m1inf == doctest::Approx(2.0 / std::log(3.0)).epsilon(1e-9));
  }
  SUBCASE("weak norm takes the max of k s_k") {
    CHECK(rearrangement_norms(diag({4.0, 1.0})).weak == doctest::Approx(4.0));
  }
  SUBCASE("zero matrix") {
    const auto r = rearrangement_norms(ComplexMatrix::Zero(3, 3));
    CHECK(r.weak == 0.0);
    CHECK(r.m1inf == 0.0);
  }
}

TEST_CASE("singular profile step function") {
  const SingularProfile s({3.0, 2.0, 1.0});
  CHECK(s.mu(0.0) == 3.0);
  CHECK(s.mu(1.5) == 2.0);
  CHECK(s.mu(2.999) == 1.0);
  CHECK(s.mu(3.0) == 0.0);
  CHECK(s.integral(1.5) == doctest::Approx(4.0));
  CHECK(s.integral(10.0) == doctest::Approx(6.0));
  CHECK(s.power_integral(2.0, 2.0) == doctest::Approx(13.0));
  CHECK_THROWS_AS(SingularProfile({1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(SingularProfile({-1.0}), InvalidArgument);
}

TEST_CASE("M_{1,inf} is bounded by 1.6 times weak-L1 on random profiles") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + trial % 40);
    for (auto& x : v) x = std::pow(u(rng), 1 + trial % 4);
    std::sort(v.rbegin(), v.rend());
    const SingularProfile s(v);
    CHECK(s.m1inf() <= 1.6 * s.weak_l1() + 1e-12);
  }
}

TEST_CASE("zeta profile") {
  const std::vector<double> grid{2.0, 1.5, 1.1, 1.01};
  const auto z = zeta_profile(ComplexMatrix::Identity(2, 2), grid);
  REQUIRE(z.size() == 4);
  CHECK(z[3].second == doctest::Approx(0.01 * std::pow(2.0, 1.0 / 1.01)));
  for (const auto& [p, v] : zeta_profile(ComplexMatrix::Zero(2, 2), grid)) CHECK(v == 0.0);
  const std::vector<double> bad{1.5, 2.0};
  CHECK_THROWS_AS(zeta_profile(ComplexMatrix::Identity(2, 2), bad), InvalidArgument);
}

TEST_CASE("spectral tuple and functional calculus") {
  RowMajorMatrix eigs(2, 1);
  eigs << 1, 2;
  const SpectralTuple s(ComplexMatrix::Identity(2, 2), eigs);
  const auto sq = apply_function(s, [](Point x) { return x[0] * x[0]; });
  CHECK((sq.matrix() - diag({1.0, 4.0})).norm() < 1e-15);
  const auto c = apply_function(s, [](Point) { return 2.5; });
  CHECK((c.matrix() - 2.5 * ComplexMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK_THROWS_AS(SpectralTuple(ComplexMatrix::Ones(2, 2), eigs), InvalidArgument);
  CHECK_THROWS_AS(SpectralTuple(ComplexMatrix::Identity(3, 3), eigs), DimensionMismatch);

  random::Engine rng(9);
  const SpectralTuple t = random::commuting_tuple(2, 8, rng);
  const auto a1 = apply_function(t, [](Point x) { return x[1]; });
  CHECK((a1.matrix() - t.operator_at(1).matrix()).norm() < 1e-12);
  auto f = [](Point x) { return std::sin(x[0]) + x[1]; };
  auto g = [](Point x) { return x[0] * x[1] - 1.0; };
  const ComplexMatrix fg = apply_function(t, f).matrix() * apply_function(t, g).matrix();
  CHECK((fg - apply_function(t, [&](Point x) { return f(x) * g(x); }).matrix()).norm() < 1e-10);
}

TEST_CASE("joint diagonalization recovers commuting tuples") {
  random::Engine rng(21);
  const SpectralTuple t = random::commuting_tuple(3, 10, rng);
  const auto ops = t.operators();
  const SpectralTuple s = joint_diagonalize(ops, 4);
  for (int j = 0; j < 3; ++j) CHECK((s.operator_at(j).matrix() - ops[j].matrix()).norm() < 1e-10);
  for (Eigen::Index a = 1; a < s.dim(); ++a) {
    const auto prev = s.eigenvalue(a - 1);
    const auto cur = s.eigenvalue(a);
    CHECK(std::lexicographical_compare(prev.begin(), prev.end(), cur.begin(), cur.end()));
  }
}

TEST_CASE("joint diagonalization with degenerate eigenvalues") {
  random::Engine rng(2);
  const ComplexMatrix u = random::unitary(6, rng);
  const ComplexMatrix a = u * diag({1, 1, 1, 2, 2, 3}) * u.adjoint();
  const ComplexMatrix b = u * diag({0, 5, 5, 0, 1, 0}) * u.adjoint();
  const std::vector<HermitianMatrix> tuple{HermitianMatrix(a, 1e-10), HermitianMatrix(b, 1e-10)};
  const SpectralTuple s = joint_diagonalize(tuple, 1);
  CHECK((s.operator_at(0).matrix() - tuple[0].matrix()).norm() < 1e-10);
  CHECK((s.operator_at(1).matrix() - tuple[1].matrix()).norm() < 1e-10);
  CHECK(s.eigenvalue(0)[0] == doctest::Approx(1.0));
  CHECK(s.eigenvalue(0)[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("joint diagonalization rejects non-commuting tuples") {
  ComplexMatrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  const std::vector<HermitianMatrix> tuple{HermitianMatrix(x), HermitianMatrix(z)};
  CHECK_THROWS_AS(joint_diagonalize(tuple, 0), NonCommuting);
  const std::vector<HermitianMatrix> mixed{HermitianMatrix(x), HermitianMatrix(ComplexMatrix::Identity(3, 3))};
  CHECK_THROWS_AS(joint_diagonalize(mixed, 0), DimensionMismatch);
}

TEST_CASE("exponential of a tuple") {
  RowMajorMatrix eigs(2, 1);
  eigs << 0, std::numbers::pi;
  const SpectralTuple s(ComplexMatrix::Identity(2, 2), eigs);
  const std::vector<double> one{1.0}, zero{0.0};
  CHECK((exp_tuple(s, one) - diag({1.0, -1.0})).norm() < 1e-15);
  CHECK((exp_tuple(s, zero) - ComplexMatrix::Identity(2, 2)).norm() < 1e-15);

  random::Engine rng(8);
  const ComplexMatrix u = random::unitary(5, rng);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    RowMajorMatrix b(5, 2), c(5, 2);
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      b.data()[i] = dist(rng);
      c.data()[i] = dist(rng);
    }
    const SpectralTuple sb(u, b), sc(u, c);
    const std::vector<double> coeffs{3 * dist(rng), 3 * dist(rng)};
    const ComplexMatrix e = exp_tuple(sb, coeffs);
    CHECK((e.adjoint() * e - ComplexMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
    double rhs = 0.0;
    for (int j = 0; j < 2; ++j) {
      rhs += std::abs(coeffs[static_cast<std::size_t>(j)]) *
             operator_norm(sb.operator_at(j).matrix() - sc.operator_at(j).matrix());
    }
    CHECK(operator_norm(e - exp_tuple(sc, coeffs)) <= rhs + 1e-12);
  }
}
