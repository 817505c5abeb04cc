#include "doilab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "doilab/checks.hpp"
#include "doilab/error.hpp"
#include "doilab/experiments.hpp"
#include "doilab/random.hpp"
#include "doilab/symbols.hpp"
#include "doilab/transference.hpp"

namespace doilab::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
  std::string command;
  std::uint64_t seed = 7;
  int dim = 16;
  int n = 2;
  std::vector<double> p_grid{1.5, 2.0, 4.0, 8.0};
  std::string out = ".";
  bool out_given = false;
  double tol = 1.0;
  std::vector<int> dims;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> ensembles{"commuting", "pair", "extremal"};
  std::string function;
  int extremal_iterations = 40;
  double grid = 0.25;
  double extent = 4.0;
  int count = 5;
  bool coefficients = false;
};

template <typename T>
T read_key(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void load_config(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  static const std::set<std::string> known{"seed",     "dim",    "n",         "p_grid",    "out",
                                           "tol",      "dims",   "seeds",     "ensembles", "function",
                                           "extremal_iterations", "grid", "extent", "count", "coefficients"};
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) throw ConfigError("unknown config key '" + item.key() + "'");
  }
  if (j.contains("seed")) c.seed = read_key<std::uint64_t>(j, "seed");
  if (j.contains("dim")) c.dim = read_key<int>(j, "dim");
  if (j.contains("n")) c.n = read_key<int>(j, "n");
  if (j.contains("p_grid")) c.p_grid = read_key<std::vector<double>>(j, "p_grid");
  if (j.contains("out")) {
    c.out = read_key<std::string>(j, "out");
    c.out_given = true;
  }
  if (j.contains("tol")) c.tol = read_key<double>(j, "tol");
  if (j.contains("dims")) c.dims = read_key<std::vector<int>>(j, "dims");
  if (j.contains("seeds")) c.seeds = read_key<std::vector<std::uint64_t>>(j, "seeds");
  if (j.contains("ensembles")) c.ensembles = read_key<std::vector<std::string>>(j, "ensembles");
  if (j.contains("function")) c.function = read_key<std::string>(j, "function");
  if (j.contains("extremal_iterations")) c.extremal_iterations = read_key<int>(j, "extremal_iterations");
  if (j.contains("grid")) c.grid = read_key<double>(j, "grid");
  if (j.contains("extent")) c.extent = read_key<double>(j, "extent");
  if (j.contains("count")) c.count = read_key<int>(j, "count");
  if (j.contains("coefficients")) c.coefficients = read_key<bool>(j, "coefficients");
}

void validate(const RunConfig& c) {
  if (c.dim < 1) throw ConfigError("dim must be positive");
  if (c.n < 1) throw ConfigError("n must be positive");
  if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
  if (c.count < 0) throw ConfigError("count must be nonnegative");
  if (c.command == "symbols") {
    if (!(c.grid > 0.0) || !(c.extent >= 0.0)) throw ConfigError("grid must be positive and extent nonnegative");
    if (c.n > 4) throw ConfigError("symbols supports n <= 4");
    const double per_axis = std::floor(2.0 * c.extent / c.grid + 1e-9) + 1.0;
    if (std::pow(per_axis, c.n + 1) > 5e6) throw ConfigError("symbols grid too large");
  }
  if (c.command == "transfer" || c.command == "weak") {
    if (c.dim < 2) throw ConfigError("dim must be at least 2");
  }
  if (c.command == "weak" && c.n > 1) {
    try {
      (void)functions::by_name(c.function.empty() ? "l1" : c.function, c.n);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
}

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Output is assembled in memory and written only after the run completes.
void write_file(const RunConfig& c, const std::string& name, const std::string& content) {
  const fs::path dir(c.out);
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw Error("cannot write " + (dir / name).string());
  out << content;
}

std::string jsonl(const std::vector<ExperimentRecord>& records) {
  std::string text;
  for (const auto& r : records) text += r.to_json().dump() + "\n";
  return text;
}

int cmd_verify(const RunConfig& c) {
  auto options = checks::verify_options(c.seed, c.dim);
  options.tol_scale = c.tol;
  const auto results = checks::verify_suite(options);
  std::string text;
  bool ok = true;
  for (const auto& r : results) {
    std::cout << checks::format(r) << std::endl;
    ok = ok && r.passed;
    text += json{{"check", r.name}, {"passed", r.passed}, {"detail", r.detail}}.dump() + "\n";
  }
  if (c.out_given) write_file(c, "results.jsonl", text);
  std::cout << (ok ? "all checks passed" : "some checks FAILED") << std::endl;
  return ok ? 0 : 1;
}

int cmd_symbols(const RunConfig& c) {
  const int n = c.n;
  const auto per_axis = static_cast<int>(std::floor(2.0 * c.extent / c.grid + 1e-9)) + 1;
  std::ostringstream csv;
  csv << "symbol,j";
  for (int i = 1; i <= n; ++i) csv << ",xi" << i;
  csv << ",mu,value_re,value_im,region\n";

  std::vector<int> index(static_cast<std::size_t>(n) + 1, 0);
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  std::size_t rows = 0;
  while (true) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = -c.extent + index[i] * c.grid;
    const Point xi(w.data(), static_cast<std::size_t>(n));
    const double mu = w.back();
    const Region region = classify_region(xi, mu);
    std::string coords;
    for (double v : w) coords += "," + num(v);
    const std::string tail = "," + region_name(region) + "\n";
    auto emit = [&](const char* name, const std::string& j, Complex value) {
      csv << name << "," << j << coords << "," << num(value.real()) << "," << num(value.imag()) << tail;
      ++rows;
    };
    emit("K", "", eval_K(xi, mu));
    emit("R", "", eval_R(xi, mu));
    for (int j = 0; j < n; ++j) {
      emit("m1j", std::to_string(j + 1), eval_m1j(j, xi, mu));
      emit("mj", std::to_string(j + 1), region == Region::Origin ? Complex(0.0) : eval_mj(j, xi, mu));
    }
    std::size_t i = 0;
    while (i < index.size() && ++index[i] == per_axis) index[i++] = 0;
    if (i == index.size()) break;
  }
  write_file(c, "symbols.csv", csv.str());
  std::cout << "wrote " << rows << " rows to " << (fs::path(c.out) / "symbols.csv").string() << std::endl;
  return 0;
}

json polynomial_json(const TrigPolynomial& h) {
  json arr = json::array();
  for (const auto& [k, m] : h.coefficients()) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json rr = json::array();
      json ri = json::array();
      for (Eigen::Index s = 0; s < m.cols(); ++s) {
        rr.push_back(m(r, s).real());
        ri.push_back(m(r, s).imag());
      }
      re.push_back(rr);
      im.push_back(ri);
    }
    arr.push_back({{"frequency", k}, {"re", re}, {"im", im}});
  }
  return arr;
}

int cmd_transfer(const RunConfig& c) {
  std::string text;
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < c.count; ++i) {
    const auto inst = checks::transfer_instance(c.seed, i, c.n, std::max(2, c.dim));
    const double scale = inst.y.norm();
    for (int j = 0; j < inst.s.arity(); ++j) {
      const TransferenceCheck t = check_transference(inst.s, inst.g, inst.y, j);
      const double rel = t.max_error / scale;
      const bool passed = rel <= 1e-9 * c.tol;
      ok = ok && passed;
      worst = std::max(worst, rel);
      json rec{{"kind", "transfer"},
               {"seed", c.seed},
               {"index", i},
               {"n", inst.s.arity()},
               {"d", inst.s.dim()},
               {"m", inst.g.m()},
               {"N", inst.g.N()},
               {"j", j + 1},
               {"support", t.lhs.support_size()},
               {"y_norm", scale},
               {"max_error", t.max_error},
               {"relative_error", rel},
               {"passed", passed},
               {"timestamp", default_timestamp()},
               {"version", version()}};
      if (c.coefficients) {
        rec["lhs"] = polynomial_json(t.lhs);
        rec["rhs"] = polynomial_json(t.rhs);
      }
      text += rec.dump() + "\n";
    }
  }
  write_file(c, "results.jsonl", text);
  std::cout << c.count << " transference instances, max relative coefficient error " << worst << std::endl;
  return ok ? 0 : 1;
}

std::string summary_csv(const std::vector<ExperimentRecord>& rows, double fitted_c) {
  std::string csv = "kind,n,d,p,seed,ratio,bound_ref,fitted_c\n";
  for (const auto& r : rows) {
    const auto& p = r.parameters;
    const std::string pv = p.p_grid.size() == 1 ? num(p.p_grid.front()) : "";
    const auto bound = r.results.find("bound_ref");
    const std::string bv = bound != r.results.end() && bound->second.size() == 1 ? num(bound->second.front()) : "";
    csv += r.kind + "," + std::to_string(p.n) + "," + std::to_string(p.d) + "," + pv + "," + std::to_string(p.seed) +
           "," + num(r.results.at("ratio").front()) + "," + bv + "," + num(fitted_c) + "\n";
  }
  return csv;
}

int cmd_sweep(const RunConfig& c) {
  SweepConfig config;
  config.p_grid = c.p_grid;
  config.dims = c.dims.empty() ? std::vector<int>{c.dim} : c.dims;
  config.seeds = c.seeds.empty() ? std::vector<std::uint64_t>{c.seed, c.seed + 1, c.seed + 2} : c.seeds;
  config.ensembles = c.ensembles;
  config.n = c.n;
  config.function = c.function;
  config.extremal_iterations = c.extremal_iterations;
  config.validate();
  const auto records = constant_sweep(config);
  std::vector<ExperimentRecord> cells;
  double fitted = 0.0;
  for (const auto& r : records) {
    if (r.kind == "envelope") {
      fitted = r.results.at("fitted_c").front();
    } else {
      cells.push_back(r);
    }
  }
  write_file(c, "results.jsonl", jsonl(records));
  write_file(c, "summary.csv", summary_csv(cells, fitted));
  std::cout << cells.size() << " sweep records, fitted c = " << fitted << std::endl;
  return 0;
}

int cmd_weak(const RunConfig& c) {
  const std::string name = c.function.empty() ? (c.n == 1 ? "abs" : "l1") : c.function;
  const LipschitzFunction f = functions::by_name(name, c.n);
  std::vector<ExperimentRecord> records;
  bool ok = true;
  double fitted = 0.0;
  for (int i = 0; i < c.count; ++i) {
    std::seed_seq seq{c.seed, std::uint64_t{14}, static_cast<std::uint64_t>(i)};
    random::Engine rng(seq);
    const int d = std::uniform_int_distribution<int>(2, std::max(2, c.dim))(rng);
    const SpectralTuple s = random::commuting_tuple(c.n, d, rng);
    const ComplexMatrix x = random::gaussian(d, rng);
    ExperimentRecord r = weak_type_experiment(f, s, x);
    r.parameters.seed = c.seed;
    r.parameters.ensemble = "commuting";
    r.parameters.function = name;
    for (double h : r.results.at("holder_holds")) ok = ok && h == 1.0;
    fitted = std::max(fitted, r.results.at("ratio").front());
    records.push_back(std::move(r));
  }
  write_file(c, "results.jsonl", jsonl(records));
  write_file(c, "summary.csv", summary_csv(records, fitted));
  std::cout << records.size() << " weak-type instances, max M_{1,inf} ratio " << fitted
            << (ok ? "" : "; Hoelder step FAILED") << std::endl;
  return ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Double operator integrals, transference and best-constant experiments"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  RunConfig c;
  std::string config_path;
  std::vector<CLI::Option*> given;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (flags override its values)");
    given.push_back(sub->add_option("--seed", c.seed, "random seed"));
    given.push_back(sub->add_option("--dim", c.dim, "matrix dimension (cap for random instances)"));
    given.push_back(sub->add_option("--n", c.n, "number of commuting operators"));
    given.push_back(sub->add_option("--p-grid", c.p_grid, "comma-separated Schatten exponents")->delimiter(','));
    given.push_back(sub->add_option("--out", c.out, "output directory"));
    given.push_back(sub->add_option("--tol", c.tol, "multiplier applied to every tolerance"));
  };

  auto* verify = app.add_subcommand("verify", "run every identity and property suite");
  common(verify);
  auto* symbols = app.add_subcommand("symbols", "tabulate K, R, m1j and mj on a grid");
  common(symbols);
  given.push_back(symbols->add_option("--grid", c.grid, "grid spacing"));
  given.push_back(symbols->add_option("--extent", c.extent, "half-width of the grid box"));
  auto* transfer = app.add_subcommand("transfer", "check the transference identity on random instances");
  common(transfer);
  given.push_back(transfer->add_option("--count", c.count, "number of instances"));
  given.push_back(transfer->add_flag("--coefficients", c.coefficients, "include coefficient tables"));
  auto* sweep = app.add_subcommand("sweep", "best-constant sweep with envelope fit");
  common(sweep);
  given.push_back(sweep->add_option("--dims", c.dims, "comma-separated dimensions")->delimiter(','));
  given.push_back(sweep->add_option("--seeds", c.seeds, "comma-separated seeds")->delimiter(','));
  given.push_back(sweep->add_option("--ensembles", c.ensembles, "commuting, pair, extremal")->delimiter(','));
  given.push_back(sweep->add_option("--function", c.function, "Lipschitz function name"));
  auto* weak = app.add_subcommand("weak", "weak-type M_{1,inf} batch");
  common(weak);
  given.push_back(weak->add_option("--count", c.count, "number of instances"));
  given.push_back(weak->add_option("--function", c.function, "Lipschitz function name"));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) {
      // Flags win: remember them, load the file, then reapply.
      const RunConfig flags = c;
      load_config(config_path, c);
      for (const auto* opt : given) {
        if (opt->count() == 0) continue;
        const std::string name = opt->get_name();
        if (name == "--seed") c.seed = flags.seed;
        if (name == "--dim") c.dim = flags.dim;
        if (name == "--n") c.n = flags.n;
        if (name == "--p-grid") c.p_grid = flags.p_grid;
        if (name == "--out") c.out = flags.out;
        if (name == "--tol") c.tol = flags.tol;
        if (name == "--grid") c.grid = flags.grid;
        if (name == "--extent") c.extent = flags.extent;
        if (name == "--count") c.count = flags.count;
        if (name == "--coefficients") c.coefficients = flags.coefficients;
        if (name == "--dims") c.dims = flags.dims;
        if (name == "--seeds") c.seeds = flags.seeds;
        if (name == "--ensembles") c.ensembles = flags.ensembles;
        if (name == "--function") c.function = flags.function;
      }
    }
    for (const auto* opt : given) {
      if (opt->get_name() == "--out" && opt->count() > 0) c.out_given = true;
    }
    validate(c);
    if (c.command == "sweep") {
      SweepConfig probe;
      probe.p_grid = c.p_grid;
      probe.dims = c.dims.empty() ? std::vector<int>{c.dim} : c.dims;
      probe.ensembles = c.ensembles;
      probe.n = c.n;
      probe.function = c.function;
      probe.extremal_iterations = c.extremal_iterations;
      probe.validate();
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  }

  try {
    if (c.command == "verify") return cmd_verify(c);
    if (c.command == "symbols") return cmd_symbols(c);
    if (c.command == "transfer") return cmd_transfer(c);
    if (c.command == "sweep") return cmd_sweep(c);
    return cmd_weak(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace doilab::cli
