#pragma once

// Empirical lower bounds for the best constants in the Lipschitz and
// commutator estimates: ratios on random and adversarial instances, the 2x2
// block reduction, constant sweeps with an upper-envelope fit, and the
// weak-type M_{1,inf} harness.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "doilab/doi.hpp"
#include "doilab/spectral.hpp"

namespace doilab {

const char* version();

// SOURCE_DATE_EPOCH as an ISO-8601 UTC string, or the epoch itself.
std::string default_timestamp();

struct ExperimentParameters {
  int n = 0;
  int d = 0;
  std::vector<double> p_grid;
  std::uint64_t seed = 0;
  std::string ensemble;
  std::string function;

  bool operator==(const ExperimentParameters&) const = default;
};

struct ExperimentRecord {
  std::string kind;
  ExperimentParameters parameters;
  std::map<std::string, std::vector<double>> results;
  std::string timestamp;
  std::string version;

  // Non-finite doubles are written as the strings "inf", "-inf" and "nan".
  nlohmann::json to_json() const;
  static ExperimentRecord from_json(const nlohmann::json& j);

  bool operator==(const ExperimentRecord&) const;
};

struct Instance {
  SpectralTuple tuple;
  ComplexMatrix x;
  LipschitzFunction f;
};

struct Ensemble {
  std::string name;
  int n;
  int d;
  std::function<Instance(std::uint64_t seed)> sample;
};

// Haar basis, joint eigenvalues uniform in [-1, 1]^n, Gaussian x.
Ensemble commuting_ensemble(int n, int d, const std::string& function_name);
// block_embed of two independent random Hermitian d x d matrices (tuple size 2d).
Ensemble pair_ensemble(int d, const std::string& function_name);
// The fixed absolute-value family of extremal_family(d); the seed is ignored.
Ensemble extremal_ensemble(int d);

// ||f(X) - f(Y)||_p / ||X - Y||_p for n = 1.
double lipschitz_ratio(const LipschitzFunction& f, const HermitianMatrix& x, const HermitianMatrix& y, NormOrder p);

struct CommutatorRatio {
  double ratio;
  double numerator;    // ||[f(A), x]||_p
  double denominator;  // sum_j ||[A_j, x]||_p
  // ||[f(A), x] - sum_j I_{phi_f} I_{phi_j}([A_j, x])||_2
  double path_error;
};

CommutatorRatio commutator_ratio(const LipschitzFunction& f, const SpectralTuple& s, const ComplexMatrix& x,
                                 NormOrder p);

struct BlockEmbedding {
  SpectralTuple tuple;  // A = diag(X, Y)
  ComplexMatrix x;      // [[0, I], [I, 0]]
};

BlockEmbedding block_embed(const HermitianMatrix& x, const HermitianMatrix& y);

// f(t) = |t|, A = diag(-1, 1, -2, 2, ...), x_ab = 1/(lambda_a - lambda_b) when
// lambda_a and lambda_b have opposite signs and 0 otherwise.
Instance extremal_family(int d);
std::vector<double> extremal_eigenvalues(int d);

struct ExtremalPoint {
  int d;
  double p;
  double family_ratio;  // ratio of extremal_family(d) itself
  double ratio;         // best ratio found
  ComplexMatrix x;      // test matrix attaining `ratio`
};

// For each d in the increasing list `dims`, maximizes ||[|A|, x]||_p / ||[A, x]||_p
// over x by the power iteration y <- offdiag(J_{p'}(K o J_p(K o y))) on
// y = [A, x], where K is the divided difference of |t| and J_r the duality map
// of S_r. Each d starts from the family's x and from the optimum for the
// previous d embedded as a leading block, keeping the best iterate, so the
// reported ratios are nondecreasing in d.
std::vector<ExtremalPoint> extremal_chain(std::span<const int> dims, double p, int iterations = 40);

// Running maximum of observed ratios per p and the envelope fit
// c = max_p C_p (p - 1) / p^2.
class Envelope {
 public:
  void add(double p, double ratio);
  const std::map<double, double>& c_hat() const { return c_hat_; }
  double fitted_c() const;

 private:
  std::map<double, double> c_hat_;
};

double bound_reference(double p);  // p^2 / (p - 1)

struct SweepConfig {
  std::vector<double> p_grid;
  std::vector<int> dims;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> ensembles{"commuting", "pair", "extremal"};
  int n = 2;
  // Empty selects "l1" for the commuting ensemble and "abs" for pairs.
  std::string function;
  int extremal_iterations = 40;
  std::string timestamp = default_timestamp();

  // Throws ConfigError.
  void validate() const;
};

// One record per cell (ensemble, d, p, seed; the extremal ensemble once per
// (d, p), from one chain over the sorted dims) followed by one "envelope"
// record carrying C_hat per p, the reference curve and fitted_c. Pair records
// report the embedded size 2d. No seeds gives no records.
std::vector<ExperimentRecord> constant_sweep(const SweepConfig& config);

// Default sample points s > e for the Hoelder step.
std::vector<double> default_weak_samples(Eigen::Index d);

// T = [f(A), x]; records ||T||_{M_{1,inf}}, sum_j ||[A_j, x]||_1 and, at each
// sampled s, both sides of int_0^s mu(T) <= s^{1/p} (int_0^s mu(T)^q)^{1/q}
// with p = log s, q = p / (p - 1).
ExperimentRecord weak_type_experiment(const LipschitzFunction& f, const SpectralTuple& s, const ComplexMatrix& x,
                                      std::span<const double> samples = {});

}  // namespace doilab
