#include "commands.hpp"
#include "doctest.h"
#include "gbcache.hpp"
#include "helpers.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace pfcalc;
using namespace pfcalc::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("pfcalc_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(const std::string& args, const std::string& env = "") {
  fs::path dir = scratch("run");
  std::string cmd = env + " " + PFCALC_BIN + " " + args + " > " + (dir / "out").string() + " 2> " + (dir / "err").string();
  int status = std::system(cmd.c_str());
  Run r{WEXITSTATUS(status), slurp(dir / "out"), slurp(dir / "err")};
  fs::remove_all(dir);
  return r;
}

std::string config(const std::string& name) { return std::string(PFCALC_CONFIGS) + "/" + name; }

std::string write_config(const std::string& body) {
  static int counter = 0;
  fs::path p = fs::temp_directory_path() / ("pfcalc_cfg_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".json");
  std::ofstream(p) << body;
  return p.string();
}

GroebnerBasis sample_basis() {
  const BaseRing F7 = BaseRing::prime_field(7);
  VarSet V({"x", "y"}, {1, 2});
  return buchberger(testing_util::Ps({"x^2 - 3*y", "x*y - 1"}, F7, V), MonomialOrder::grevlex());
}

}  // namespace

TEST_CASE("sha256 known digest") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("basis serialization round trip") {
  auto G = sample_basis();
  auto text = serialize_basis(G, "v1");
  auto back = deserialize_basis(text, "v1");
  REQUIRE(back);
  CHECK(back->generators == G.generators);
  CHECK(back->leading_monomials == G.leading_monomials);
  CHECK(back->vars == G.vars);
  CHECK(serialize_basis(*back, "v1") == text);
  CHECK(!deserialize_basis(text, "v2"));
  CHECK(!deserialize_basis(text.substr(0, text.size() / 2), "v1"));

  const BaseRing QQ = BaseRing::rationals();
  VarSet V({"a", "b"});
  auto H = buchberger(testing_util::Ps({"a^2 - 1/3*b", "2*a*b"}, QQ, V), MonomialOrder::lex());
  auto h2 = deserialize_basis(serialize_basis(H, "v1"), "v1");
  REQUIRE(h2);
  CHECK(h2->generators == H.generators);
  CHECK(h2->order == H.order);
}

TEST_CASE("cache store, lookup, unknown key, version bump") {
  fs::path dir = scratch("cache");
  GbCache cache(dir);
  auto G = sample_basis();
  const std::string k = cache.key(G.generators, G.order);
  CHECK(!cache.lookup(k));
  cache.store(k, G);
  auto hit = cache.lookup(k);
  REQUIRE(hit);
  CHECK(hit->generators == G.generators);
  CHECK(serialize_basis(*hit, GbCache::kVersion) == *cache.raw(k));
  CHECK(!cache.lookup(std::string(64, '0')));

  GbCache bumped(dir, "pfcalc-gb-cache/999");
  CHECK(bumped.key(G.generators, G.order) != k);
  CHECK(!bumped.lookup(k));
  fs::remove_all(dir);
}

TEST_CASE("corrupt cache entries are ignored with a warning and recomputed") {
  fs::path dir = scratch("corrupt");
  std::ostringstream warn;
  GbCache cache(dir, GbCache::kVersion, &warn);
  auto G = sample_basis();
  const std::string k = cache.key(G.generators, G.order);
  cache.store(k, G);
  {
    std::ofstream out(dir / (k + ".gb"), std::ios::trunc);
    out << GbCache::kVersion << "\nFp(7)\ngrevlex\nx:1 y:2\n2\ngarbage\n";
  }
  CHECK(!cache.lookup(k));
  CHECK(warn.str().find("corrupt") != std::string::npos);
  auto fn = cache.hook();
  auto again = fn(G.generators, G.order, {});
  CHECK(again.generators == G.generators);
  CHECK(cache.lookup(k));
  fs::remove_all(dir);
}

TEST_CASE("cache hook reproduces geometry results") {
  fs::path dir = scratch("hook");
  GbCache cache(dir);
  GeometryOptions opts;
  opts.groebner = cache.hook();
  PolyTransformation a({{"v", 1}, {"w", 1}}, "v^3 + w^3");
  auto first = image_closure(a, 2, BaseRing::prime_field(3), opts);
  CHECK(cache.misses() > 0);
  CHECK(cache.hits() == 0);
  auto second = image_closure(a, 2, BaseRing::prime_field(3), opts);
  CHECK(cache.hits() > 0);
  CHECK(first.gb.generators == second.gb.generators);
  CHECK(second.gb.generators == image_closure(a, 2, BaseRing::prime_field(3)).gb.generators);
  fs::remove_all(dir);
}

TEST_CASE("config validation names the offending key") {
  RunOptions o;
  try {
    run_command("taylor", json::parse(R"({"field":"QQ","vars":["x"],"f":"x^2","split":1,"colour":3})"), o);
    FAIL("accepted an unknown key");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("'colour'") != std::string::npos);
  }
  try {
    run_command("schur-table", json::parse(R"({"n":-1,"d":2})"), o);
    FAIL("accepted a negative rank");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("'n'") != std::string::npos);
  }
  try {
    run_command("good-primes", json::parse(R"({"vars":["x"],"ideal":["x"],"primes":[2,4]})"), o);
    FAIL("accepted a composite prime");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("'primes'") != std::string::npos);
  }
  CHECK_THROWS_AS(run_command("dimfn", json::parse(R"({"functor":"Sym(2"})"), o), ConfigError);
  CHECK_THROWS_AS(run_command("image-closure", json::parse(R"({"source":[{"name":"v","deg":1}],"rule":"v","n":1})"), o),
                  ConfigError);
  CHECK_THROWS_AS(run_command("nope", json::object(), o), ConfigError);
}

TEST_CASE("command results") {
  RunOptions o;
  auto r = run_command("ring-of-module", json::parse(slurp(config("ring_of_module_dual_numbers.json"))), o);
  std::vector<std::string> dims;
  for (const auto& row : r.rows) dims.push_back(row[1]);
  CHECK(dims == std::vector<std::string>{"2", "1", "1", "1", "1", "1"});

  auto d = run_command("dim-per-prime", json::parse(slurp(config("dim_per_prime_cube_sum.json"))), o);
  std::vector<std::string> col;
  for (const auto& row : d.rows) col.push_back(row[0] + ":" + row[1]);
  CHECK(col == std::vector<std::string>{"0:4", "2:4", "3:2", "5:4"});
  auto csv = render(d, "csv");
  CHECK(csv.rfind("prime,dimension,basis_size,time_ms\n", 0) == 0);
  CHECK(render(d, "text").find("time_ms") == std::string::npos);
  CHECK(json::parse(render(d, "json"))["rows"].size() == 4);

  auto t = run_command("dimfn", json::parse(slurp(config("dimfn_sym2_ext3.json"))), o);
  for (const auto& row : t.rows) CHECK(row[7] == "yes");
}

TEST_CASE("binary: every checked-in config runs and is deterministic") {
  for (const auto& entry : fs::directory_iterator(PFCALC_CONFIGS)) {
    std::string stem = entry.path().stem().string();
    std::string cmd;
    for (const auto& name : command_names()) {
      std::string under = name;
      std::replace(under.begin(), under.end(), '-', '_');
      if (stem.rfind(under, 0) == 0 && under.size() > cmd.size()) cmd = name;
    }
    REQUIRE_MESSAGE(!cmd.empty(), stem);
    for (std::string fmt : {"text", "json"}) {
      auto a = run_cli(cmd + " --config " + entry.path().string() + " --format " + fmt);
      auto b = run_cli(cmd + " --config " + entry.path().string() + " --format " + fmt + " --threads 2");
      CHECK_MESSAGE(a.code == 0, stem, a.err);
      CHECK_MESSAGE(a.out == b.out, stem);
    }
  }
}

TEST_CASE("binary: exit codes and outputs") {
  auto bad = write_config(R"({"vars":["x"],"ideal":["x"],"primes":[2],"bogus":1})");
  auto r = run_cli("good-primes --config " + bad);
  CHECK(r.code == 2);
  CHECK(r.err.find("'bogus'") != std::string::npos);

  auto notjson = write_config("{ nope");
  CHECK(run_cli("taylor --config " + notjson).code == 2);

  r = run_cli("image-closure --config " + config("image_closure_cube_sum_f3.json") + " --max-vars 3");
  CHECK(r.code == 3);
  CHECK(r.err.find("exceed") != std::string::npos);

  fs::path out = scratch("out");
  r = run_cli("dim-per-prime --config " + config("dim_per_prime_cube_sum.json") + " --format csv --out " + out.string());
  CHECK(r.code == 0);
  auto csv = slurp(out / "report.csv");
  CHECK(csv.rfind("prime,dimension,basis_size,time_ms\n0,4,", 0) == 0);

  fs::path cache = scratch("envcache");
  r = run_cli("image-closure --config " + config("image_closure_four_squares_f2.json"), "PFCALC_CACHE_DIR=" + cache.string());
  CHECK(r.code == 0);
  CHECK(std::distance(fs::directory_iterator(cache), fs::directory_iterator{}) > 0);
  auto again = run_cli("image-closure --config " + config("image_closure_four_squares_f2.json"), "PFCALC_CACHE_DIR=" + cache.string());
  CHECK(again.out == r.out);
  fs::remove_all(out);
  fs::remove_all(cache);
  fs::remove(bad);
  fs::remove(notjson);
}
