#pragma once

// Identity, oracle and property suites shared by the acceptance binary and
// the `verify` subcommand.

#include <cstdint>
#include <string>
#include <vector>

#include "doilab/transference.hpp"

namespace doilab::checks {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  int max_dim = 32;             // cap on d for random operator instances
  int operator_instances = 200;
  int symbol_points = 1000;
  int region_points = 10000;
  int transfer_instances = 100;
  int sample_instances = 100;   // exponential bound, block reduction, weak harness
  int extremal_max_dim = 256;
  int extremal_iterations = 40;
  int sweep_seeds = 3;
  double tol_scale = 1.0;       // multiplies every tolerance
  bool enforce_runtime = true;
};

struct TransferInstance {
  SpectralTuple s;
  GridFunction g;
  ComplexMatrix y;
};

// Random transference instance: joint eigenvalues on a (1/m)-grid with
// repeated bins, y off-diagonal for the bins, g snapped from a function whose
// increments stay in the identity region of m_j (m, N <= 8). n = 0 alternates
// between n = 1 and n = 2 by index; n > 2 uses functions of the first two
// coordinates.
TransferInstance transfer_instance(std::uint64_t seed, int index, int n = 0, int max_dim = 16);

// Full-size settings used by the acceptance binary.
SuiteOptions acceptance_options();
// Smaller instance counts with d capped by `dim`.
SuiteOptions verify_options(std::uint64_t seed, int dim);

CheckResult commutator_identity(const SuiteOptions& o);
CheckResult factorization(const SuiteOptions& o);
CheckResult symbol_oracles(const SuiteOptions& o);
CheckResult region_identity(const SuiteOptions& o);
CheckResult transference(const SuiteOptions& o);
CheckResult discretization_convergence(const SuiteOptions& o);
CheckResult exponential_bound_and_mollification(const SuiteOptions& o);
CheckResult block_reduction(const SuiteOptions& o);
CheckResult constant_trends(const SuiteOptions& o);
CheckResult weak_type(const SuiteOptions& o);

// The ten criteria above, in order.
std::vector<CheckResult> acceptance_suite(const SuiteOptions& o);
// The criteria plus structural invariants of each module.
std::vector<CheckResult> verify_suite(const SuiteOptions& o);

// "PASS name (1.23 s): detail" / "FAIL ...".
std::string format(const CheckResult& r);

}  // namespace doilab::checks
