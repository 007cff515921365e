#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rmedge/cli.hpp"
#include "rmedge/linop.hpp"

using namespace rmedge;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  int c = cli::run(args, o, e);
  return {c, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("rmedge_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("manifest round trip") {
  cli::RunManifest m{"sample",
                     {{"seed", {"18446744073709551615"}}, {"interval", {"-1", "inf"}}, {"out", {"a b/\"c\".csv"}}},
                     "0.1.0",
                     18446744073709551615ull,
                     0.1 + 0.2,
                     {"x.csv", "y.csv"}};
  CHECK(cli::manifest_from_json(cli::to_json(m)) == m);
  m.seed.reset();
  m.wall_seconds = 1e-300;
  CHECK(cli::manifest_from_json(cli::to_json(m)) == m);
  auto a = cli::manifest_args(m);
  REQUIRE(a.size() == 6);
  CHECK(a[0] == "sample");
  CHECK(a[1] == "--interval");
  CHECK(a[2] == "-1");
}

TEST_CASE("det reports the Fredholm determinant") {
  auto r = call({"det", "--kernel", "sine", "--t", "1", "--interval", "0", "1", "--z", "1", "--n", "64"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  double direct = fredholm_det(discretize(sine_kernel(1), {0, 1}, 64), 1.0);
  CHECK(j["det"].get<double>() == direct);
  CHECK(j["n"] == 64);
  auto inf = call({"det", "--kernel", "airy", "--interval", "0", "inf", "--n", "60"});
  REQUIRE(inf.code == 0);
  CHECK(nlohmann::json::parse(inf.out)["interval"][1] == "inf");
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == 2);
  auto u = call({"frobnicate"});
  CHECK(u.code == 2);
  CHECK(u.err.find("unknown subcommand") != std::string::npos);
  CHECK(call({"det", "--interval", "0", "1", "--bogus", "3"}).code == 2);
  CHECK(call({"det", "--kernel", "sine"}).code == 2);  // --interval is required
  CHECK(call({"det", "--kernel", "cosine", "--interval", "0", "1"}).code == 2);
  CHECK(call({"det", "--interval", "0", "x"}).code == 2);
  CHECK(call({"det", "--help"}).code == 0);
  auto n = call({"sample", "--n", "50", "--samples", "500"});
  CHECK(n.code == 1);
  CHECK(n.err.find("ensembles") != std::string::npos);
  auto w = call({"mathieu", "--alpha", "1", "--index", "0"});
  CHECK(w.code == 1);
  CHECK(w.err.find("hill") != std::string::npos);
}

TEST_CASE("gap probabilities in both formats") {
  auto c = call({"gap", "--kernel", "sine", "--interval", "0", "1", "--kmax", "30", "--n", "30"});
  REQUIRE(c.code == 0);
  auto ls = lines(c.out);
  REQUIRE(ls.size() == 32);
  CHECK(ls[0] == "k,E");
  double s = 0;
  for (std::size_t i = 1; i < ls.size(); ++i) s += std::strtod(ls[i].c_str() + ls[i].find(',') + 1, nullptr);
  CHECK(std::fabs(s - 1) < 1e-10);
  auto j = call({"gap", "--interval", "0", "1", "--format", "json"});
  REQUIRE(j.code == 0);
  CHECK(nlohmann::json::parse(j.out)["E"].size() == 4);
}

TEST_CASE("tw table, cache and replay") {
  fs::path d = scratch("tw");
  setenv("RMEDGE_CACHE_DIR", (d / "cache").c_str(), 1);
  auto out = (d / "tw.csv").string();
  auto r = call({"tw", "--t", "1", "--xmin", "-5", "--xmax", "2", "--step", "0.1", "--out", out});
  REQUIRE(r.code == 0);
  auto ls = lines(slurp(out));
  REQUIRE(ls.size() == 72);
  CHECK(ls[0] == "x,F_painleve,F_det,gap");
  CHECK(ls[1].rfind("-5,", 0) == 0);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    std::istringstream row(ls[i]);
    std::string x, fp, fd, g;
    std::getline(row, x, ',');
    std::getline(row, fp, ',');
    std::getline(row, fd, ',');
    std::getline(row, g, ',');
    CHECK(std::stod(g) < 1e-6);
  }
  auto m = cli::read_manifest(out + ".manifest.json");
  CHECK(m.command == "tw");
  CHECK(m.params.at("step") == std::vector<std::string>{"0.1"});
  CHECK(m.params.at("n") == std::vector<std::string>{"80"});
  CHECK_FALSE(m.seed.has_value());
  REQUIRE(m.outputs.size() == 2);
  CHECK(fs::exists(m.outputs[1]));

  // a cache hit returns the same bytes; replay with caching off recomputes them
  auto again = (d / "again.csv").string();
  REQUIRE(call({"tw", "--xmin=-5", "--xmax", "2", "--out", again}).code == 0);
  CHECK(slurp(again) == slurp(out));
  auto replayed = (d / "replayed.csv").string();
  cli::RunManifest nc = m;
  nc.params["no-cache"] = {"true"};
  std::ofstream(d / "nc.json") << cli::to_json(nc);
  REQUIRE(call({"replay", (d / "nc.json").string(), "--out", replayed}).code == 0);
  CHECK(slurp(replayed) == slurp(out));
  unsetenv("RMEDGE_CACHE_DIR");
}

TEST_CASE("config file presets flags, flags win") {
  fs::path d = scratch("config");
  std::ofstream(d / "run.cfg") << "# preset\nkernel = bessel\nnu=1\ninterval=0 0.5\nz=0.5\n";
  auto a = call({"det", "--config", (d / "run.cfg").string(), "--z", "1"});
  REQUIRE(a.code == 0);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j["z"] == 1.0);
  CHECK(j["det"].get<double>() == fredholm_det(discretize(bessel_hard_kernel(1), {0, 0.5}, 64), 1.0));
  auto b = call({"det", "--config", (d / "run.cfg").string()});
  CHECK(nlohmann::json::parse(b.out)["z"] == 0.5);
  std::ofstream(d / "bad.cfg") << "warp=9\n";
  CHECK(call({"det", "--interval", "0", "1", "--config", (d / "bad.cfg").string()}).code == 2);
}

TEST_CASE("hardedge, hill and mathieu reports") {
  auto h = call({"hardedge", "--nu", "2", "--a", "0.25", "--z", "0.8"});
  REQUIRE(h.code == 0);
  auto hj = nlohmann::json::parse(h.out);
  CHECK(hj["gap"].get<double>() < 1e-6);
  CHECK(std::fabs(hj["alpha"].get<double>() - std::log(2.0)) < 1e-15);

  auto c = call({"hill", "--alpha", "0", "--count", "5", "--samples", "3", "--lambda-min", "0", "--lambda-max", "4"});
  REQUIRE(c.code == 0);
  auto ls = lines(c.out);
  REQUIRE(ls.size() == 9);
  CHECK(ls[0] == "kind,index,lambda,discriminant,period");
  CHECK(ls[2].rfind("spectrum,1,", 0) == 0);
  CHECK(ls[2].substr(ls[2].rfind(',') + 1) == "2pi");
  CHECK(ls[7].rfind("discriminant,1,2,", 0) == 0);

  auto m = call({"mathieu", "--alpha", "0", "--index", "1", "--n", "48"});
  REQUIRE(m.code == 0);
  auto mj = nlohmann::json::parse(m.out);
  CHECK(std::fabs(mj["checks"][0]["eigenvalue"].get<double>() - 2 * M_PI) < 1e-8);
  CHECK(mj["worst_residual"].get<double>() < 1e-8);
}

TEST_CASE("sample is reproducible and replayable") {
  fs::path d = scratch("sample");
  auto out = (d / "s.csv").string();
  REQUIRE(call({"sample", "--n", "100", "--samples", "500", "--seed", "7", "--alpha", "-1", "--out", out}).code == 0);
  auto ls = lines(slurp(out));
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "k,empirical,std_error,predicted");
  auto m = cli::read_manifest(out + ".manifest.json");
  CHECK(m.seed == 7u);
  auto again = (d / "t.csv").string();
  REQUIRE(call({"replay", out + ".manifest.json", "--out", again}).code == 0);
  CHECK(slurp(again) == slurp(out));
  auto w = call({"sample", "--ensemble", "wishart", "--n", "100", "--samples", "500", "--kmax", "1"});
  REQUIRE(w.code == 0);
  CHECK(lines(w.out)[1].substr(lines(w.out)[1].rfind(',') + 1) == "nan");
}

TEST_CASE("verify runs selected criteria") {
  auto v = call({"verify", "--only", "1", "2"});
  CHECK(v.code == 0);
  auto ls = lines(v.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0].rfind("PASS  [1]", 0) == 0);
  CHECK(ls[2] == "all 2 criteria passed");
}
