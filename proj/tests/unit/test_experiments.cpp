#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "doilab/error.hpp"
#include "doilab/experiments.hpp"
#include "doilab/parallel.hpp"
#include "doilab/random.hpp"

using namespace doilab;

TEST_CASE("lipschitz ratio") {
  random::Engine rng(1);
  const HermitianMatrix x = random::hermitian(6, rng), y = random::hermitian(6, rng);
  CHECK(lipschitz_ratio(functions::identity(), x, y, NormOrder(3.0)) == doctest::Approx(1.0));
  ComplexMatrix two(1, 1), one(1, 1);
  two << 2.0;
  one << 1.0;
  CHECK(lipschitz_ratio(functions::absolute(), HermitianMatrix(two), HermitianMatrix(one), NormOrder(2.0)) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(lipschitz_ratio(functions::absolute(), x, x, NormOrder(2.0)), InvalidArgument);
  CHECK_THROWS_AS(lipschitz_ratio(functions::l1_norm(2), x, y, NormOrder(2.0)), InvalidArgument);
}

TEST_CASE("commutator ratio") {
  random::Engine rng(2);
  const SpectralTuple s = random::commuting_tuple(2, 16, rng);
  const ComplexMatrix x = random::gaussian(16, rng);
  const auto coord = commutator_ratio(functions::coordinate(0, 2), s, x, NormOrder(2.0));
  CHECK(coord.ratio <= 1.0 + 1e-12);
  CHECK(commutator_ratio(functions::constant(2, 3.0), s, x, NormOrder(2.0)).ratio == doctest::Approx(0.0));
  const auto r = commutator_ratio(functions::l2_norm(2), s, x, NormOrder(8.0));
  CHECK(r.path_error <= 1e-9 * (1 + r.numerator));
  CHECK_THROWS_AS(commutator_ratio(functions::l2_norm(2), s, ComplexMatrix::Identity(16, 16), NormOrder(2.0)),
                  InvalidArgument);
}

TEST_CASE("block embedding") {
  ComplexMatrix one(1, 1), zero(1, 1);
  one << 1.0;
  zero << 0.0;
  const auto e = block_embed(HermitianMatrix(one), HermitianMatrix(zero));
  const ComplexMatrix fa = apply_function(e.tuple, functions::absolute().function()).matrix();
  CHECK(schatten_norm(commutator(fa, e.x), 2.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(schatten_norm(commutator(e.tuple.operator_at(0).matrix(), e.x), 2.0) == doctest::Approx(std::sqrt(2.0)));

  const auto same = block_embed(HermitianMatrix(one), HermitianMatrix(one));
  CHECK(commutator(same.tuple.operator_at(0).matrix(), same.x).norm() < 1e-15);
  CHECK_THROWS_AS(block_embed(HermitianMatrix(one), HermitianMatrix(ComplexMatrix::Identity(2, 2))),
                  DimensionMismatch);

  random::Engine rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix x = random::hermitian(5, rng), y = random::hermitian(5, rng);
    const auto b = block_embed(x, y);
    const NormOrder p(1.2 + trial);
    CHECK(std::abs(commutator_ratio(functions::absolute(), b.tuple, b.x, p).ratio -
                   lipschitz_ratio(functions::absolute(), x, y, p)) < 1e-10);
  }
}

TEST_CASE("extremal family and chain") {
  CHECK(extremal_eigenvalues(5) == std::vector<double>{-1, 1, -2, 2, -3});
  const Instance inst = extremal_family(4);
  CHECK(inst.x(0, 1).real() == doctest::Approx(-0.5));
  CHECK(inst.x(0, 2) == Complex(0.0));
  CHECK_THROWS_AS(extremal_family(1), InvalidArgument);

  const std::vector<int> dims{4, 8, 16, 32};
  const auto chain = extremal_chain(dims, 4.0, 20);
  REQUIRE(chain.size() == 4);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    CHECK(chain[i].ratio >= chain[i].family_ratio);
    if (i > 0) CHECK(chain[i].ratio >= chain[i - 1].ratio);
    // The stored x must realize the reported ratio.
    const Instance fam = extremal_family(chain[i].d);
    const auto r = commutator_ratio(fam.f, fam.tuple, chain[i].x, NormOrder(4.0));
    CHECK(r.ratio == doctest::Approx(chain[i].ratio).epsilon(1e-9));
  }
  for (const auto& pt : extremal_chain(dims, 2.0, 20)) CHECK(pt.ratio <= 1.0 + 1e-9);
  const std::vector<int> bad{8, 4};
  CHECK_THROWS_AS(extremal_chain(bad, 4.0), InvalidArgument);
  CHECK_THROWS_AS(extremal_chain(dims, 1.0), InvalidArgument);
}

TEST_CASE("envelope") {
  Envelope e;
  e.add(2.0, 0.5);
  e.add(2.0, 0.9);
  e.add(4.0, 1.2);
  CHECK(e.c_hat().at(2.0) == 0.9);
  CHECK(e.fitted_c() == doctest::Approx(std::max(0.9 / 4.0, 1.2 * 3.0 / 16.0)));
  for (const auto& [p, c] : e.c_hat()) CHECK(c <= e.fitted_c() * bound_reference(p) + 1e-15);
}

TEST_CASE("records round trip through json") {
  ExperimentRecord r;
  r.kind = "commutator";
  r.parameters = {2, 8, {1.5, 4.0}, 42, "commuting", "l1"};
  r.results["ratio"] = {0.1, 1.0 / 3.0, std::numeric_limits<double>::infinity()};
  r.results["odd"] = {std::nan(""), -0.0};
  r.timestamp = "1970-01-01T00:00:00Z";
  r.version = version();
  const auto text = r.to_json().dump();
  CHECK(ExperimentRecord::from_json(nlohmann::json::parse(text)) == r);
  CHECK_THROWS(ExperimentRecord::from_json(nlohmann::json::parse("{\"kind\": 3}")));
}

TEST_CASE("sweep configuration and determinism") {
  SweepConfig c;
  c.p_grid = {2.0, 4.0};
  c.dims = {4, 6};
  c.seeds = {1, 2};
  c.extremal_iterations = 5;
  c.timestamp = "fixed";
  const auto a = constant_sweep(c);
  REQUIRE(!a.empty());
  CHECK(a.back().kind == "envelope");
  CHECK(a == constant_sweep(c));
  for (const auto& r : a) {
    if (r.parameters.ensemble == "pair") CHECK(r.parameters.d % 2 == 0);
    if (r.kind == "envelope" || r.parameters.p_grid.front() != 2.0) continue;
    CHECK(r.results.at("ratio").front() <= 1.0 + 1e-9);
  }

  SweepConfig bad = c;
  bad.p_grid = {0.5};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.ensembles = {"nope"};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.dims = {1};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  SweepConfig empty = c;
  empty.seeds.clear();
  empty.ensembles = {"commuting"};
  CHECK(constant_sweep(empty).empty());
}

TEST_CASE("timestamps follow SOURCE_DATE_EPOCH") {
  const char* old = std::getenv("SOURCE_DATE_EPOCH");
  const std::string saved = old ? old : "";
  setenv("SOURCE_DATE_EPOCH", "86400", 1);
  CHECK(default_timestamp() == "1970-01-02T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
  CHECK(default_timestamp() == "1970-01-01T00:00:00Z");
  if (old) setenv("SOURCE_DATE_EPOCH", saved.c_str(), 1);
}

TEST_CASE("weak-type experiment") {
  random::Engine rng(6);
  const SpectralTuple s = random::commuting_tuple(2, 12, rng);
  const ComplexMatrix x = random::gaussian(12, rng);
  const auto r = weak_type_experiment(functions::l1_norm(2), s, x);
  const auto& lhs = r.results.at("holder_lhs");
  const auto& rhs = r.results.at("holder_rhs");
  REQUIRE(lhs.size() == default_weak_samples(12).size());
  for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] <= rhs[i] * (1 + 1e-12));
  CHECK(r.results.at("m1inf").front() > 0.0);
  const std::vector<double> bad{2.0};
  CHECK_THROWS_AS(weak_type_experiment(functions::l1_norm(2), s, x, bad), InvalidArgument);
}

TEST_CASE("parallel map keeps order and rethrows") {
  const auto v = parallel::map<int>(100, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
  CHECK_THROWS_AS(parallel::map<int>(10,
                                     [](std::size_t i) -> int {
                                       if (i == 7) throw InvalidArgument("boom");
                                       return 0;
                                     }),
                  InvalidArgument);
}
