#include <doctest.h>

#include <cmath>

#include "doilab/checks.hpp"
#include "doilab/error.hpp"
#include "doilab/random.hpp"
#include "doilab/transference.hpp"

using namespace doilab;

namespace {

SpectralTuple diagonal_tuple(std::initializer_list<double> values) {
  RowMajorMatrix eigs(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (double v : values) eigs(i++, 0) = v;
  return SpectralTuple(ComplexMatrix::Identity(eigs.rows(), eigs.rows()), eigs);
}

GridFunction identity_grid(std::int64_t m, std::int64_t N, std::initializer_list<std::int64_t> bins) {
  std::map<Frequency, std::int64_t> num;
  for (auto k : bins) num[{k}] = k * N;
  return GridFunction(1, m, N, num);
}

}  // namespace

TEST_CASE("trig polynomial basics") {
  const TrigPolynomial zero(2, 3);
  CHECK(zero.support_size() == 0);
  CHECK(zero.max_abs_frequency() == 0);
  const std::vector<double> theta{0.3, 0.7};
  CHECK(zero.evaluate(theta).norm() == 0.0);
  CHECK(torus_lp_norm(zero, NormOrder(2.0), 4) == 0.0);

  random::Engine rng(5);
  const ComplexMatrix x = random::gaussian(3, rng);
  const TrigPolynomial constant(2, 3, {{{0, 0}, x}});
  for (double p : {1.0, 2.0, 4.0}) CHECK(torus_lp_norm(constant, NormOrder(p), 3) == doctest::Approx(schatten_norm(x, p)));

  const TrigPolynomial mode(2, 3, {{{1, -2}, x}});
  CHECK(mode.max_abs_frequency() == 2);
  const Complex phase = std::exp(Complex(0, 2 * M_PI * (0.3 - 1.4)));
  CHECK((mode.evaluate(theta) - phase * x).norm() < 1e-12);
  CHECK(max_coefficient_difference(mode, zero) == doctest::Approx(x.cwiseAbs().maxCoeff()));
  CHECK_THROWS_AS(TrigPolynomial(2, 3, {{{1}, x}}), DimensionMismatch);
  CHECK_THROWS_AS(TrigPolynomial(2, 2, {{{1, 1}, x}}), DimensionMismatch);
}

TEST_CASE("grid function") {
  const GridFunction g = identity_grid(2, 3, {0, 1, 5});
  CHECK(g.numerator({5}) == 15);
  CHECK(g.value({5}) == doctest::Approx(2.5));
  CHECK_THROWS_AS(g.numerator({2}), OffGridEigenvalue);
  CHECK_THROWS_AS(GridFunction(1, 0, 1, {}), InvalidArgument);
}

TEST_CASE("snapping") {
  SUBCASE("values already on the lattice") {
    const std::vector<Frequency> pts{{0}, {1}, {2}};
    const auto [fN, g] = snap_function(functions::identity(), 1, 2, pts);
    for (const auto& k : pts) {
      CHECK(g.value(k) == doctest::Approx(static_cast<double>(k[0])));
      const std::vector<double> t{static_cast<double>(k[0])};
      CHECK(fN(t) == doctest::Approx(t[0]));
    }
  }
  SUBCASE("t / sqrt 2") {
    const LipschitzFunction f(1, [](Point t) { return t[0] / std::sqrt(2.0); }, 1.0 / std::sqrt(2.0));
    const std::vector<Frequency> pts{{1}};
    const auto [fN, g] = snap_function(f, 1, 10, pts);
    CHECK(g.numerator({1}) == 7);
    const std::vector<double> one{1.0};
    CHECK(fN(one) == doctest::Approx(0.7));
    CHECK(fN(one) - f(one) == doctest::Approx(-0.00710678118654752));
    const std::vector<double> away{3.0};
    CHECK(fN(away) == f(away));
    CHECK(fN.declared_lip() <= f.declared_lip() + bump_lipschitz(1) / 10 + 1e-15);
  }
  CHECK(bump_lipschitz(3) == doctest::Approx(6 * 2.1703571));
}

TEST_CASE("lift of a single matrix unit") {
  const SpectralTuple s = diagonal_tuple({0, 1, 2});
  const GridFunction g = identity_grid(1, 1, {0, 1, 2});
  ComplexMatrix y = ComplexMatrix::Zero(3, 3);
  y(2, 0) = 1.0;
  const TrigPolynomial h = build_hy(s, g, y);
  REQUIRE(h.support_size() == 1);
  CHECK(h.coefficients().begin()->first == Frequency{2, 2});

  const GridFunction flat(1, 1, 1, {{{0}, 0}, {{1}, 0}, {{2}, 0}});
  ComplexMatrix y2 = ComplexMatrix::Zero(3, 3);
  y2(0, 1) = y2(1, 2) = y2(2, 0) = 1.0;
  const TrigPolynomial h2 = build_hy(s, flat, y2);
  // (0,1) and (1,2) collide at frequency (-1, 0).
  REQUIRE(h2.support_size() == 2);
  const ComplexMatrix& collided = h2.coefficients().at({-1, 0});
  CHECK(collided(0, 1) == Complex(1.0));
  CHECK(collided(1, 2) == Complex(1.0));
  for (const auto& [k, c] : h2.coefficients()) CHECK(k[1] == 0);

  CHECK_THROWS_AS(build_hy(s, g, ComplexMatrix::Identity(3, 3)), NotOffDiagonal);
  const SpectralTuple off = diagonal_tuple({0, 0.5, 2});
  CHECK_THROWS_AS(build_hy(off, g, y), OffGridEigenvalue);
  CHECK_THROWS_AS(occupied_bins(off, 1), OffGridEigenvalue);
}

TEST_CASE("lift reproduces the conjugation and transports norms") {
  const auto inst = checks::transfer_instance(31, 2, 2, 10);
  const TrigPolynomial h = build_hy(inst.s, inst.g, inst.y);
  const std::vector<double> theta{0.13, 0.71, 0.42};
  const ComplexMatrix u = torus_unitary(inst.s, inst.g, theta);
  CHECK((h.evaluate(theta) - u * inst.y * u.adjoint()).norm() < 1e-12 * (1 + inst.y.norm()));
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    const double yp = schatten_norm(inst.y, p);
    CHECK(std::abs(torus_lp_norm(h, NormOrder(p), 3) - yp) <= 1e-10 * yp);
  }
  const double yinf = schatten_norm(inst.y, NormOrder::infinity());
  CHECK(std::abs(torus_lp_norm(h, NormOrder::infinity(), 3) - yinf) <= 1e-10 * yinf);
}

TEST_CASE("torus multiplier") {
  random::Engine rng(2);
  const ComplexMatrix a = random::gaussian(2, rng);
  const ComplexMatrix b = random::gaussian(2, rng);
  const TrigPolynomial h(2, 2, {{{0, 0}, a}, {{3, 3}, b}});
  const MultiplierSymbol one("one", 2, [](Point) { return Complex(1.0); }, {});
  const TrigPolynomial out = apply_torus_multiplier(restrict_discrete(one), h);
  REQUIRE(out.support_size() == 1);
  CHECK((out.coefficients().at({3, 3}) - b).norm() == 0.0);

  // On (N dk, m N dg) the symbol reduces to m dg dk_j / |dk|^2.
  const TrigPolynomial single(2, 2, {{{8, 4}, a}});
  const auto scaled = apply_torus_multiplier(restrict_discrete(mj_symbol(0, 1)), single);
  CHECK((scaled.coefficients().at({8, 4}) - 0.5 * a).norm() < 1e-15);
  CHECK_THROWS_AS(apply_torus_multiplier(restrict_discrete(mj_symbol(0, 2)), single), DimensionMismatch);
}

TEST_CASE("transference identity") {
  SUBCASE("identity function") {
    const SpectralTuple s = diagonal_tuple({0, 1, 1, 3});
    const GridFunction g = identity_grid(1, 2, {0, 1, 3});
    random::Engine rng(3);
    ComplexMatrix y = random::gaussian(4, rng);
    y.diagonal().setZero();
    y(1, 2) = y(2, 1) = 0.0;
    const auto r = check_transference(s, g, y, 0);
    CHECK(r.max_error < 1e-12);
    CHECK(max_coefficient_difference(r.lhs, build_hy(s, g, y)) < 1e-12);
  }
  SUBCASE("constant function") {
    const SpectralTuple s = diagonal_tuple({0, 1, 2});
    const GridFunction g(1, 1, 4, {{{0}, 0}, {{1}, 0}, {{2}, 0}});
    ComplexMatrix y = ComplexMatrix::Ones(3, 3);
    y.diagonal().setZero();
    const auto r = check_transference(s, g, y, 0);
    CHECK(r.lhs.support_size() == 0);
    CHECK(r.rhs.support_size() == 0);
    CHECK(r.max_error == 0.0);
  }
  SUBCASE("random n = 2 instances") {
    for (int index = 0; index < 10; ++index) {
      const auto inst = checks::transfer_instance(99, index, 2, 8);
      for (int j = 0; j < 2; ++j) {
        CHECK(check_transference(inst.s, inst.g, inst.y, j).max_error <= 1e-9 * inst.y.norm());
      }
    }
  }
  SUBCASE("region precondition") {
    const SpectralTuple s = diagonal_tuple({0, 1});
    const GridFunction steep(1, 1, 1, {{{0}, 0}, {{1}, 3}});
    ComplexMatrix y = ComplexMatrix::Zero(2, 2);
    y(0, 1) = 1.0;
    CHECK_THROWS_AS(check_transference(s, steep, y, 0), InvalidArgument);
    CHECK_THROWS_AS(check_transference(s, identity_grid(1, 1, {0, 1}), y, 1), InvalidArgument);
  }
}
