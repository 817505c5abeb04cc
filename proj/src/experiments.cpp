#include "doilab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <numbers>
#include <set>

#include "doilab/error.hpp"
#include "doilab/parallel.hpp"
#include "doilab/random.hpp"

#ifndef DOILAB_VERSION
#define DOILAB_VERSION "0.0.0"
#endif

namespace doilab {

namespace {

nlohmann::json encode(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double decode(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InvalidArgument("ExperimentRecord: bad number '" + s + "'");
  }
  return j.get<double>();
}

nlohmann::json encode(const std::vector<double>& values) {
  auto arr = nlohmann::json::array();
  for (double v : values) arr.push_back(encode(v));
  return arr;
}

std::vector<double> decode_array(const nlohmann::json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(decode(v));
  return out;
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool same(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](double x, double y) { return same(x, y); });
}

SpectralTuple single_tuple(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix());
  RowMajorMatrix eigs = es.eigenvalues();
  return SpectralTuple(es.eigenvectors(), std::move(eigs));
}

// Scale-invariant Schatten norm and duality map for real matrices.
double real_schatten(const RealMatrix& z, double p) {
  Eigen::BDCSVD<RealMatrix> svd(z);
  const Eigen::VectorXd s = svd.singularValues();
  const double top = s.size() ? s.maxCoeff() : 0.0;
  if (top == 0.0) return 0.0;
  return top * std::pow((s / top).array().pow(p).sum(), 1.0 / p);
}

// J_r(z) = U S^{r-1} V* / ||z||_r^{r-1}: the unit S_{r'} element norming z.
RealMatrix duality_map(const RealMatrix& z, double r) {
  Eigen::BDCSVD<RealMatrix> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  const double top = s.maxCoeff();
  const Eigen::VectorXd t = s / top;
  const double norm = std::pow(t.array().pow(r).sum(), 1.0 / r);
  const Eigen::VectorXd w = (t / norm).array().pow(r - 1.0);
  return svd.matrixU() * w.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace

const char* version() { return DOILAB_VERSION; }

std::string default_timestamp() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json ExperimentRecord::to_json() const {
  nlohmann::json results_json = nlohmann::json::object();
  for (const auto& [key, values] : results) results_json[key] = encode(values);
  return {
      {"kind", kind},
      {"parameters",
       {{"n", parameters.n},
        {"d", parameters.d},
        {"p_grid", encode(parameters.p_grid)},
        {"seed", parameters.seed},
        {"ensemble", parameters.ensemble},
        {"function", parameters.function}}},
      {"results", results_json},
      {"timestamp", timestamp},
      {"version", version},
  };
}

ExperimentRecord ExperimentRecord::from_json(const nlohmann::json& j) {
  ExperimentRecord r;
  r.kind = j.at("kind").get<std::string>();
  const auto& p = j.at("parameters");
  r.parameters.n = p.at("n").get<int>();
  r.parameters.d = p.at("d").get<int>();
  r.parameters.p_grid = decode_array(p.at("p_grid"));
  r.parameters.seed = p.at("seed").get<std::uint64_t>();
  r.parameters.ensemble = p.at("ensemble").get<std::string>();
  r.parameters.function = p.at("function").get<std::string>();
  for (const auto& [key, values] : j.at("results").items()) r.results[key] = decode_array(values);
  r.timestamp = j.at("timestamp").get<std::string>();
  r.version = j.at("version").get<std::string>();
  return r;
}

bool ExperimentRecord::operator==(const ExperimentRecord& other) const {
  if (kind != other.kind || timestamp != other.timestamp || version != other.version) return false;
  const auto& a = parameters;
  const auto& b = other.parameters;
  if (a.n != b.n || a.d != b.d || a.seed != b.seed || a.ensemble != b.ensemble || a.function != b.function ||
      !same(a.p_grid, b.p_grid)) {
    return false;
  }
  if (results.size() != other.results.size()) return false;
  for (const auto& [key, values] : results) {
    const auto it = other.results.find(key);
    if (it == other.results.end() || !same(values, it->second)) return false;
  }
  return true;
}

Ensemble commuting_ensemble(int n, int d, const std::string& function_name) {
  if (n < 1 || d < 2) throw InvalidArgument("commuting_ensemble: need n >= 1 and d >= 2");
  const LipschitzFunction f = functions::by_name(function_name, n);
  return {"commuting", n, d, [n, d, f](std::uint64_t seed) {
            random::Engine rng(seed);
            SpectralTuple s = random::commuting_tuple(n, d, rng);
            ComplexMatrix x = random::gaussian(d, rng);
            return Instance{std::move(s), std::move(x), f};
          }};
}

Ensemble pair_ensemble(int d, const std::string& function_name) {
  if (d < 1) throw InvalidArgument("pair_ensemble: need d >= 1");
  const LipschitzFunction f = functions::by_name(function_name, 1);
  return {"pair", 1, 2 * d, [d, f](std::uint64_t seed) {
            random::Engine rng(seed);
            const HermitianMatrix x = random::hermitian(d, rng);
            const HermitianMatrix y = random::hermitian(d, rng);
            BlockEmbedding e = block_embed(x, y);
            return Instance{std::move(e.tuple), std::move(e.x), f};
          }};
}

Ensemble extremal_ensemble(int d) {
  if (d < 2) throw InvalidArgument("extremal_ensemble: need d >= 2");
  return {"extremal", 1, d, [d](std::uint64_t) { return extremal_family(d); }};
}

double lipschitz_ratio(const LipschitzFunction& f, const HermitianMatrix& x, const HermitianMatrix& y, NormOrder p) {
  if (f.arity() != 1) throw InvalidArgument("lipschitz_ratio: f must be a function of one variable");
  if (x.dim() != y.dim()) throw DimensionMismatch("lipschitz_ratio: X and Y differ in size");
  const ComplexMatrix diff = x.matrix() - y.matrix();
  const double denominator = schatten_norm(diff, p);
  if (denominator == 0.0) throw InvalidArgument("lipschitz_ratio: X equals Y");
  const ComplexMatrix fx = apply_function(single_tuple(x), f.function()).matrix();
  const ComplexMatrix fy = apply_function(single_tuple(y), f.function()).matrix();
  return schatten_norm(fx - fy, p) / denominator;
}

CommutatorRatio commutator_ratio(const LipschitzFunction& f, const SpectralTuple& s, const ComplexMatrix& x,
                                 NormOrder p) {
  if (f.arity() != s.arity()) throw DimensionMismatch("commutator_ratio: function arity differs from tuple arity");
  if (x.rows() != s.dim() || x.cols() != s.dim()) throw DimensionMismatch("commutator_ratio: x has wrong size");
  const int n = s.arity();
  const ComplexMatrix fa = apply_function(s, f.function()).matrix();
  const ComplexMatrix t = commutator(fa, x);

  const ScalarSymbol2n phi_f = divided_difference_symbols(f).phi;
  ComplexMatrix path = ComplexMatrix::Zero(s.dim(), s.dim());
  double denominator = 0.0;
  for (int j = 0; j < n; ++j) {
    const ComplexMatrix cj = commutator(s.operator_at(j).matrix(), x);
    denominator += schatten_norm(cj, p);
    path += doi_apply(s, phi_f * direction_symbols(j, n).phi, cj);
  }
  if (denominator == 0.0) throw InvalidArgument("commutator_ratio: x commutes with every A_j");
  const double numerator = schatten_norm(t, p);
  return {numerator / denominator, numerator, denominator, (t - path).norm()};
}

BlockEmbedding block_embed(const HermitianMatrix& x, const HermitianMatrix& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch("block_embed: X and Y differ in size");
  const Eigen::Index d = x.dim();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ex(x.matrix());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ey(y.matrix());
  ComplexMatrix basis = ComplexMatrix::Zero(2 * d, 2 * d);
  basis.topLeftCorner(d, d) = ex.eigenvectors();
  basis.bottomRightCorner(d, d) = ey.eigenvectors();
  RowMajorMatrix eigs(2 * d, 1);
  eigs.topRows(d) = ex.eigenvalues();
  eigs.bottomRows(d) = ey.eigenvalues();
  ComplexMatrix swap = ComplexMatrix::Zero(2 * d, 2 * d);
  swap.topRightCorner(d, d).setIdentity();
  swap.bottomLeftCorner(d, d).setIdentity();
  return {SpectralTuple(std::move(basis), std::move(eigs)), std::move(swap)};
}

std::vector<double> extremal_eigenvalues(int d) {
  if (d < 2) throw InvalidArgument("extremal_family: need d >= 2");
  std::vector<double> lambda(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) lambda[static_cast<std::size_t>(i)] = (i % 2 == 0 ? -1.0 : 1.0) * (i / 2 + 1);
  return lambda;
}

Instance extremal_family(int d) {
  const auto lambda = extremal_eigenvalues(d);
  RowMajorMatrix eigs(d, 1);
  for (int i = 0; i < d; ++i) eigs(i, 0) = lambda[static_cast<std::size_t>(i)];
  ComplexMatrix x = ComplexMatrix::Zero(d, d);
  for (int b = 0; b < d; ++b) {
    for (int a = 0; a < d; ++a) {
      const double la = lambda[static_cast<std::size_t>(a)];
      const double lb = lambda[static_cast<std::size_t>(b)];
      if ((la < 0) != (lb < 0)) x(a, b) = 1.0 / (la - lb);
    }
  }
  return {SpectralTuple(ComplexMatrix::Identity(d, d), std::move(eigs)), std::move(x), functions::absolute()};
}

std::vector<ExtremalPoint> extremal_chain(std::span<const int> dims, double p, int iterations) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("extremal_chain: p must be finite and > 1");
  if (iterations < 0) throw InvalidArgument("extremal_chain: iterations must be nonnegative");
  const double q = p / (p - 1.0);
  std::vector<ExtremalPoint> out;
  RealMatrix previous;
  for (std::size_t idx = 0; idx < dims.size(); ++idx) {
    const int d = dims[idx];
    if (idx > 0 && d <= dims[idx - 1]) throw InvalidArgument("extremal_chain: dims must be increasing");
    const auto lambda = extremal_eigenvalues(d);
    RealMatrix kernel = RealMatrix::Zero(d, d);
    RealMatrix family_y = RealMatrix::Zero(d, d);
    for (int b = 0; b < d; ++b) {
      for (int a = 0; a < d; ++a) {
        if (a == b) continue;
        const double la = lambda[static_cast<std::size_t>(a)];
        const double lb = lambda[static_cast<std::size_t>(b)];
        kernel(a, b) = (std::abs(la) - std::abs(lb)) / (la - lb);
        if ((la < 0) != (lb < 0)) family_y(a, b) = 1.0;
      }
    }
    auto ratio_of = [&](const RealMatrix& y) {
      const double den = real_schatten(y, p);
      return den == 0.0 ? 0.0 : real_schatten(kernel.cwiseProduct(y), p) / den;
    };

    const double family_ratio = ratio_of(family_y);
    double best = family_ratio;
    RealMatrix best_y = family_y;
    std::vector<RealMatrix> starts{family_y};
    if (previous.size() > 0) {
      RealMatrix warm = RealMatrix::Zero(d, d);
      warm.topLeftCorner(previous.rows(), previous.cols()) = previous;
      const double r = ratio_of(warm);
      if (r > best) {
        best = r;
        best_y = warm;
      }
      starts.push_back(std::move(warm));
    }
    for (RealMatrix y : starts) {
      for (int it = 0; it < iterations; ++it) {
        const RealMatrix ky = kernel.cwiseProduct(y);
        if (ky.cwiseAbs().maxCoeff() == 0.0) break;
        const RealMatrix kw = kernel.cwiseProduct(duality_map(ky, p));
        if (kw.cwiseAbs().maxCoeff() == 0.0) break;
        y = duality_map(kw, q);
        y.diagonal().setZero();
        const double r = ratio_of(y);
        if (r > best) {
          best = r;
          best_y = y;
        }
      }
    }

    ComplexMatrix x = ComplexMatrix::Zero(d, d);
    for (int b = 0; b < d; ++b) {
      for (int a = 0; a < d; ++a) {
        if (a != b) x(a, b) = best_y(a, b) / (lambda[static_cast<std::size_t>(a)] - lambda[static_cast<std::size_t>(b)]);
      }
    }
    out.push_back({d, p, family_ratio, best, std::move(x)});
    previous = std::move(best_y);
  }
  return out;
}

void Envelope::add(double p, double ratio) {
  auto [it, inserted] = c_hat_.try_emplace(p, ratio);
  if (!inserted) it->second = std::max(it->second, ratio);
}

double Envelope::fitted_c() const {
  double c = 0.0;
  for (const auto& [p, value] : c_hat_) c = std::max(c, value / bound_reference(p));
  return c;
}

double bound_reference(double p) { return p * p / (p - 1.0); }

void SweepConfig::validate() const {
  for (double p : p_grid) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("p_grid entries must be finite and > 1");
  }
  for (int d : dims) {
    if (d < 2) throw ConfigError("dims entries must be >= 2");
  }
  if (n < 1) throw ConfigError("n must be positive");
  if (extremal_iterations < 0) throw ConfigError("extremal_iterations must be nonnegative");
  for (const auto& e : ensembles) {
    if (e != "commuting" && e != "pair" && e != "extremal") throw ConfigError("unknown ensemble '" + e + "'");
  }
  try {
    if (!function.empty()) {
      for (const auto& e : ensembles) {
        if (e == "commuting") (void)functions::by_name(function, n);
        if (e == "pair") (void)functions::by_name(function, 1);
      }
    }
  } catch (const InvalidArgument& err) {
    throw ConfigError(err.what());
  }
}

std::vector<ExperimentRecord> constant_sweep(const SweepConfig& config) {
  config.validate();
  if (config.seeds.empty()) return {};

  // A task is one random cell, or one extremal chain over all dims at a fixed p.
  struct Task {
    std::string ensemble;
    int d;
    double p;
    std::uint64_t seed;
  };
  std::vector<int> sorted_dims = config.dims;
  std::sort(sorted_dims.begin(), sorted_dims.end());
  sorted_dims.erase(std::unique(sorted_dims.begin(), sorted_dims.end()), sorted_dims.end());
  std::vector<Task> tasks;
  for (const auto& e : config.ensembles) {
    if (e == "extremal") {
      for (double p : config.p_grid) tasks.push_back({e, 0, p, config.seeds.front()});
      continue;
    }
    for (int d : config.dims) {
      for (double p : config.p_grid) {
        for (auto seed : config.seeds) tasks.push_back({e, d, p, seed});
      }
    }
  }

  const std::string commuting_fn = config.function.empty() ? "l1" : config.function;
  const std::string pair_fn = config.function.empty() ? "abs" : config.function;

  auto base_record = [&](const Task& t, int d) {
    ExperimentRecord r;
    r.timestamp = config.timestamp;
    r.version = version();
    r.parameters.d = d;
    r.parameters.p_grid = {t.p};
    r.parameters.seed = t.seed;
    r.parameters.ensemble = t.ensemble;
    return r;
  };

  auto run_task = [&](std::size_t i) {
    const Task& t = tasks[i];
    const NormOrder p(t.p);
    std::vector<ExperimentRecord> out;
    if (t.ensemble == "extremal") {
      if (sorted_dims.empty()) return out;
      std::vector<int> dims;
      for (int k = 4; k < sorted_dims.front(); k *= 2) dims.push_back(k);
      dims.insert(dims.end(), sorted_dims.begin(), sorted_dims.end());
      const auto chain = extremal_chain(dims, t.p, config.extremal_iterations);
      for (const auto& point : chain) {
        if (!std::binary_search(sorted_dims.begin(), sorted_dims.end(), point.d)) continue;
        ExperimentRecord r = base_record(t, point.d);
        r.kind = "extremal";
        r.parameters.n = 1;
        r.parameters.function = "abs";
        const Instance inst = extremal_family(point.d);
        const CommutatorRatio cr = commutator_ratio(inst.f, inst.tuple, point.x, p);
        r.results = {{"ratio", {cr.ratio}},
                     {"family_ratio", {point.family_ratio}},
                     {"numerator", {cr.numerator}},
                     {"denominator", {cr.denominator}},
                     {"path_error", {cr.path_error}},
                     {"bound_ref", {bound_reference(t.p)}}};
        out.push_back(std::move(r));
      }
      return out;
    }
    const bool pair = t.ensemble == "pair";
    const Ensemble ens = pair ? pair_ensemble(t.d, pair_fn) : commuting_ensemble(config.n, t.d, commuting_fn);
    ExperimentRecord r = base_record(t, ens.d);
    r.kind = pair ? "lipschitz" : "commutator";
    r.parameters.n = ens.n;
    r.parameters.function = pair ? pair_fn : commuting_fn;
    const Instance inst = ens.sample(t.seed);
    const CommutatorRatio cr = commutator_ratio(inst.f, inst.tuple, inst.x, p);
    r.results = {{"ratio", {cr.ratio}},
                 {"numerator", {cr.numerator}},
                 {"denominator", {cr.denominator}},
                 {"path_error", {cr.path_error}},
                 {"bound_ref", {bound_reference(t.p)}}};
    out.push_back(std::move(r));
    return out;
  };

  std::vector<ExperimentRecord> records;
  for (auto& batch : parallel::map<std::vector<ExperimentRecord>>(tasks.size(), run_task)) {
    for (auto& r : batch) records.push_back(std::move(r));
  }

  Envelope envelope;
  for (const auto& r : records) envelope.add(r.parameters.p_grid.front(), r.results.at("ratio").front());
  ExperimentRecord summary;
  summary.kind = "envelope";
  summary.timestamp = config.timestamp;
  summary.version = version();
  summary.parameters.n = config.n;
  for (const auto& [p, value] : envelope.c_hat()) {
    summary.parameters.p_grid.push_back(p);
    summary.results["C_hat"].push_back(value);
    summary.results["bound_ref"].push_back(bound_reference(p));
  }
  summary.results["fitted_c"] = {envelope.fitted_c()};
  records.push_back(std::move(summary));
  return records;
}

std::vector<double> default_weak_samples(Eigen::Index d) {
  const double top = std::max(4.0, 2.0 * static_cast<double>(d));
  const double bottom = 2.8;
  std::vector<double> s;
  constexpr int kCount = 12;
  for (int i = 0; i < kCount; ++i) s.push_back(bottom * std::pow(top / bottom, static_cast<double>(i) / (kCount - 1)));
  return s;
}

ExperimentRecord weak_type_experiment(const LipschitzFunction& f, const SpectralTuple& s, const ComplexMatrix& x,
                                      std::span<const double> samples) {
  if (f.arity() != s.arity()) throw DimensionMismatch("weak_type_experiment: function arity differs from tuple arity");
  if (x.rows() != s.dim() || x.cols() != s.dim()) throw DimensionMismatch("weak_type_experiment: x has wrong size");
  double trace_sum = 0.0;
  for (int j = 0; j < s.arity(); ++j) trace_sum += schatten_norm(commutator(s.operator_at(j).matrix(), x), 1.0);
  if (trace_sum == 0.0) throw InvalidArgument("weak_type_experiment: all commutators [A_j, x] vanish");

  const ComplexMatrix t = commutator(apply_function(s, f.function()).matrix(), x);
  const SingularProfile profile = SingularProfile::of(t);
  const double m1inf = profile.m1inf();

  std::vector<double> chosen(samples.begin(), samples.end());
  if (chosen.empty()) chosen = default_weak_samples(s.dim());

  ExperimentRecord r;
  r.kind = "weak";
  r.timestamp = default_timestamp();
  r.version = version();
  r.parameters.n = s.arity();
  r.parameters.d = static_cast<int>(s.dim());
  std::vector<double> lhs, rhs, holds;
  for (double sv : chosen) {
    if (!(sv > std::numbers::e)) throw InvalidArgument("weak_type_experiment: sample points must exceed e");
    const double p = std::log(sv);
    const double q = p / (p - 1.0);
    const double left = profile.integral(sv);
    const double right = std::pow(sv, 1.0 / p) * std::pow(profile.power_integral(sv, q), 1.0 / q);
    lhs.push_back(left);
    rhs.push_back(right);
    holds.push_back(left <= right * (1.0 + 1e-12) ? 1.0 : 0.0);
  }
  r.results = {{"m1inf", {m1inf}},
               {"trace_norm_sum", {trace_sum}},
               {"ratio", {m1inf / trace_sum}},
               {"s", chosen},
               {"holder_lhs", lhs},
               {"holder_rhs", rhs},
               {"holder_holds", holds}};
  return r;
}

}  // namespace doilab
