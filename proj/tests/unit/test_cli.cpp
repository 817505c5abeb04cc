#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doilab/cli.hpp"

namespace fs = std::filesystem;
using doilab::cli::run;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("doilab_cli_" + tag)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("usage errors exit with 2 and write nothing") {
  TempDir out("usage");
  CHECK(run({}) == 2);
  CHECK(run({"sweep", "--out", out.str(), "--bogus"}) == 2);
  CHECK(run({"sweep", "--out", out.str(), "--p-grid", "0.5"}) == 2);
  CHECK(run({"sweep", "--out", out.str(), "--ensembles", "nope"}) == 2);
  CHECK(run({"symbols", "--out", out.str(), "--grid", "-1"}) == 2);
  CHECK(run({"sweep", "--out", out.str(), "--config", (out.path / "missing.json").string()}) == 2);
  CHECK(!fs::exists(out.path));
}

TEST_CASE("config files reject unknown keys and yield to flags") {
  TempDir dir("config");
  fs::create_directories(dir.path);
  const fs::path bad = dir.path / "bad.json";
  std::ofstream(bad) << R"({"seed": 1, "colour": "red"})";
  CHECK(run({"weak", "--config", bad.string(), "--out", (dir.path / "a").string()}) == 2);
  CHECK(!fs::exists(dir.path / "a"));

  const fs::path good = dir.path / "good.json";
  std::ofstream(good) << R"({"seed": 5, "dim": 6, "count": 2, "function": "l1"})";
  REQUIRE(run({"weak", "--config", good.string(), "--out", (dir.path / "b").string()}) == 0);
  REQUIRE(run({"weak", "--config", good.string(), "--seed", "5", "--out", (dir.path / "c").string()}) == 0);
  REQUIRE(run({"weak", "--config", good.string(), "--seed", "6", "--out", (dir.path / "d").string()}) == 0);
  CHECK(slurp(dir.path / "b" / "results.jsonl") == slurp(dir.path / "c" / "results.jsonl"));
  CHECK(slurp(dir.path / "b" / "results.jsonl") != slurp(dir.path / "d" / "results.jsonl"));
}

TEST_CASE("symbols table") {
  TempDir out("symbols");
  REQUIRE(run({"symbols", "--grid", "0.25", "--n", "2", "--out", out.str()}) == 0);
  const std::string csv = slurp(out.path / "symbols.csv");
  CHECK(csv.rfind("symbol,j,xi1,xi2,mu,value_re,value_im,region\n", 0) == 0);
  CHECK(csv.find("\nmj,1,3,4,1,0.12,0,identity\n") != std::string::npos);
  CHECK(csv.find("\nmj,1,0,0,0,0,0,origin\n") != std::string::npos);
}

TEST_CASE("sweep output is byte-identical across runs") {
  TempDir a("sweep_a"), b("sweep_b");
  const std::vector<std::string> common{"sweep", "--dims", "4,6", "--seeds", "1,2", "--p-grid", "2,4"};
  auto args_a = common, args_b = common;
  args_a.insert(args_a.end(), {"--out", a.str()});
  args_b.insert(args_b.end(), {"--out", b.str()});
  REQUIRE(run(args_a) == 0);
  REQUIRE(run(args_b) == 0);
  for (const char* f : {"results.jsonl", "summary.csv"}) {
    const std::string x = slurp(a.path / f);
    CHECK(!x.empty());
    CHECK(x == slurp(b.path / f));
  }
  CHECK(slurp(a.path / "summary.csv").rfind("kind,n,d,p,seed,ratio,bound_ref,fitted_c\n", 0) == 0);
}

TEST_CASE("transfer and verify") {
  TempDir out("transfer");
  CHECK(run({"transfer", "--count", "4", "--coefficients", "--out", out.str()}) == 0);
  const std::string text = slurp(out.path / "results.jsonl");
  CHECK(text.find("\"lhs\"") != std::string::npos);
  TempDir v("verify");
  CHECK(run({"verify", "--dim", "6", "--out", v.str()}) == 0);
  CHECK(fs::exists(v.path / "results.jsonl"));
}
