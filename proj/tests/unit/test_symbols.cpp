#include <doctest.h>

#include <cmath>
#include <random>

#include "doilab/error.hpp"
#include "doilab/symbols.hpp"

using namespace doilab;

namespace {

using V = std::vector<double>;
const Complex I(0.0, 1.0);

bool near(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("hilbert and riesz") {
  CHECK(eval_hilbert(V{2.0, -1.0}) == I);
  CHECK(eval_hilbert(V{-0.1}) == -I);
  CHECK(eval_hilbert(V{0.0, 5.0}) == Complex(0.0));
  CHECK(near(eval_riesz(1, V{3.0, 4.0}), 0.8 * I));
  CHECK(eval_riesz(0, V{0.0, 0.0}) == Complex(0.0));
  CHECK_THROWS_AS(eval_riesz(2, V{1.0, 1.0}), InvalidArgument);
}

TEST_CASE("K closed form") {
  CHECK(near(eval_K(V{1.0, 1.0}, 1.0), 0.5 * I));
  CHECK(near(eval_K(V{1.0, 0.0}, -3.0), -I));
  CHECK(near(eval_K(V{2.0, -1.0}, 3.0), I));
  CHECK(near(eval_K(V{0.0}, 0.0), 0.0));
  CHECK(near(eval_K(V{0.0, 0.0}, 2.0), I));
}

TEST_CASE("K oracles") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    V xi(1 + trial % 3);
    for (auto& x : xi) x = u(rng);
    if (trial % 7 == 0) xi[0] = 0.0;
    const double mu = u(rng);
    const Complex k = eval_K(xi, mu);
    CHECK(near(k, eval_K_quadrature(xi, mu), 1e-8));
    CHECK(near(k, eval_K_epsilon_sum(xi, mu), 1e-8));
    CHECK(std::abs(k) <= 1.0 + 1e-15);
  }
}

TEST_CASE("R closed form and product oracle") {
  CHECK(near(eval_R(V{3.0, 4.0}, 1.0), 1.4 * I));
  CHECK(eval_R(V{1.0, 0.0, 0.0}, 5.0) == Complex(0.0));
  CHECK(near(eval_R(V{1.0, 1.0}, 1.9), std::sqrt(2.0) * I));
  CHECK(near(eval_R(V{1.0, 1.0}, 2.0), std::sqrt(2.0) * I));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    V xi(1 + trial % 4);
    for (auto& x : xi) x = u(rng);
    const double mu = 2.0 * u(rng);
    const Complex r = eval_R(xi, mu);
    CHECK(near(r, eval_R_product_form(xi, mu), 1e-10));
    CHECK(std::abs(r) <= std::sqrt(static_cast<double>(xi.size())) + 1e-12);
  }
}

TEST_CASE("m1j") {
  CHECK(near(eval_m1j(0, V{3.0, 4.0}, 1.0), 0.12));
  CHECK(eval_m1j(1, V{3.0, 4.0}, 10.0) == Complex(0.0));
  CHECK(near(eval_m1j(0, V{1.0, 0.0}, -0.5), -0.5));
  CHECK_THROWS_AS(eval_m1j(2, V{1.0, 0.0}, 0.1), InvalidArgument);
}

TEST_CASE("bump profile") {
  const BumpProfile& b = standard_bump();
  CHECK(b.density(0.4) == 0.0);
  CHECK(b.density(0.8) == 0.0);
  CHECK(b.density(0.5) == 0.0);
  CHECK(b.density(0.625) > 0.0);
  CHECK(b.cumulative(0.5) == 0.0);
  CHECK(std::abs(b.cumulative(1.0) - 1.0) <= 1e-10);
  CHECK(b.cumulative(0.3) == 0.0);
  CHECK(b.cumulative(7.0) == 1.0);
  // Reference values from an independent 40-digit quadrature.
  CHECK(b.normalization() == doctest::Approx(2.2773352001702099e29).epsilon(1e-9));
  CHECK(std::abs(b.cumulative(0.6) - 0.009759202309748135) <= 1e-10);
  CHECK(std::abs(b.cumulative(0.625) - 0.5) <= 1e-12);
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double s = b.cumulative(0.5 + 0.25 * i / 1000.0);
    CHECK(s >= prev);
    prev = s;
  }
}

TEST_CASE("m_j closed form") {
  CHECK(near(eval_mj(0, V{3.0, 4.0}, 1.0), 0.12));
  CHECK(eval_mj(0, V{1.0}, 3.0) == Complex(0.0));
  CHECK(std::abs(eval_mj(0, V{0.6}, 1.0) - 0.016265337182913559) <= 1e-10);
  CHECK(near(eval_mj(0, V{0.6}, 1.0), eval_mj_quadrature(0, V{0.6}, 1.0), 1e-7));
  CHECK_THROWS_AS(eval_mj(0, V{0.0, 0.0}, 0.0), InvalidArgument);
  CHECK(eval_mj(0, V{0.0, 0.0}, 1.0) == Complex(0.0));
}

TEST_CASE("m_j quadrature agrees in every region") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int counts[4] = {0, 0, 0, 0};
  for (int trial = 0; trial < 1000; ++trial) {
    V xi(1 + trial % 3);
    for (auto& x : xi) x = u(rng);
    const double mu = 3.0 * u(rng);
    const int j = trial % static_cast<int>(xi.size());
    ++counts[static_cast<int>(classify_region(xi, mu))];
    CHECK(near(eval_mj(j, xi, mu), eval_mj_quadrature(j, xi, mu), 1e-7));
  }
  CHECK(counts[static_cast<int>(Region::Vanishing)] > 0);
  CHECK(counts[static_cast<int>(Region::Blend)] > 0);
  CHECK(counts[static_cast<int>(Region::Identity)] > 0);
}

TEST_CASE("m_j symmetry is exact") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    V xi(2);
    for (auto& x : xi) x = u(rng);
    const double mu = u(rng);
    const Complex v = eval_mj(0, xi, mu);
    CHECK(eval_mj(0, V{-xi[0], -xi[1]}, -mu) == v);
    for (double lambda : {0.5, 2.0}) CHECK(eval_mj(0, V{lambda * xi[0], lambda * xi[1]}, lambda * mu) == v);
    CHECK(near(eval_mj(0, V{17 * xi[0], 17 * xi[1]}, 17 * mu), v, 1e-13));
  }
}

TEST_CASE("regions") {
  CHECK(classify_region(V{0.0, 0.0}, 0.0) == Region::Origin);
  CHECK(classify_region(V{1.0}, 2.0) == Region::Vanishing);
  CHECK(classify_region(V{1.0}, 1.5) == Region::Blend);
  CHECK(classify_region(V{1.0}, 1.0) == Region::Identity);
  CHECK(region_name(Region::Blend) == "blend");
}

TEST_CASE("multiplier symbols and flags") {
  const auto k = k_symbol(2);
  CHECK(k.dimension() == 3);
  CHECK(k.flags().odd);
  CHECK(flag_defect(k, 200, 1) < 1e-12);
  const auto m = mj_symbol(1, 2);
  CHECK(m.flags().even);
  CHECK(m.flags().homogeneous);
  CHECK(flag_defect(m, 200, 2) < 1e-12);
  CHECK(flag_defect(m1j_symbol(0, 2), 200, 3) < 1e-12);
  CHECK_THROWS_AS(m(V{1.0, 2.0}), DimensionMismatch);
  CHECK_THROWS_AS(mj_symbol(2, 2), InvalidArgument);
}

TEST_CASE("discrete restriction") {
  const auto d = restrict_discrete(mj_symbol(0, 2));
  const std::vector<std::int64_t> origin{0, 0, 0}, k{3, 4, 1}, k2{6, 8, 2};
  CHECK(d(origin) == Complex(0.0));
  CHECK(near(d(k), 0.12));
  CHECK(d(k2) == d(k));
  const auto kd = restrict_discrete(k_symbol(1));
  CHECK(kd(std::vector<std::int64_t>{0, 0}) == Complex(0.0));
}
