#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "ucp/cli.hpp"

using namespace ucp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int rc;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::vector<const char*> argv{"ucp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

std::string outdir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "ucp_unit_cli" / name;
  fs::remove_all(p);
  return p.string();
}

}  // namespace

TEST_CASE("FNV-1a") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(manifest_hash(json{{"a", 1}, {"b", 2}}) == manifest_hash(json{{"b", 2}, {"a", 1}}));
}

TEST_CASE("iterate") {
  const std::string dir = outdir("iterate");
  const Run r = run({"iterate", "--alpha0", "1.338333", "--gamma", "0.1", "--eps", "0.1", "--out", dir});
  REQUIRE(r.rc == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("N").get<int>() <= 39);
  CHECK(j.at("final_exponent").get<double>() <= 1.1);
  CHECK(fs::exists(fs::path(dir) / "trace.csv"));
  const json written = json::parse(std::ifstream(fs::path(dir) / "certificate.json"));
  CHECK(written.at("manifest_hash") == j.at("manifest_hash"));
  std::ifstream csv(fs::path(dir) / "trace.csv");
  std::string first;
  std::getline(csv, first);
  CHECK(first == "# manifest_hash=" + j.at("manifest_hash").get<std::string>());
}

TEST_CASE("three-circle on monomials") {
  const Run r = run({"three-circle", "--scenario", "harmonic:3", "--radii", "0.5,1,2", "--out", outdir("tc")});
  REQUIRE(r.rc == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("theta").get<double>() == doctest::Approx(0.5));
  CHECK(j.at("equality_gap").get<double>() <= 1e-6);
}

TEST_CASE("quasiball of the Laplacian") {
  const Run r = run({"quasiball", "--scenario", "laplacian", "--s", "0.5", "--out", outdir("qb")});
  REQUIRE(r.rc == 0);
  const json j = json::parse(r.out);
  const double h = j.at("grid_h").get<double>();
  const json& g = j.at("geometries").at(0);
  CHECK(std::abs(g.at("sigma").get<double>() - 0.5) <= 2 * h);
  CHECK(std::abs(g.at("rho").get<double>() - 0.5) <= 2 * h);
}

TEST_CASE("error reporting and exit codes") {
  const Run bad = run({"iterate", "--alpha0", "2", "--gamma", "0.3", "--eps", "0.1", "--out", outdir("bad")});
  CHECK(bad.rc == 2);
  CHECK(json::parse(bad.err).at("error").at("type") == "validation");

  const Run missing = run({"vanishing", "--scenario", "harmonic"});
  CHECK(missing.rc == 2);

  const fs::path f = fs::temp_directory_path() / "ucp_unit_cli" / "broken.json";
  fs::create_directories(f.parent_path());
  std::ofstream(f) << R"({"name": "x", "operator": {}})";
  const Run schema = run({"verify-operator", "--scenario", f.string(), "--out", outdir("schema")});
  CHECK(schema.rc == 2);
  CHECK(json::parse(schema.err).at("error").at("path") == "/operator");
}

TEST_CASE("identical invocations give identical outputs") {
  const std::string dir = outdir("det");
  const Run a = run({"certificate", "--mode", "global", "--params", "mu0=1", "--out", dir});
  const Run b = run({"certificate", "--mode", "global", "--params", "mu0=1", "--out", dir});
  REQUIRE(a.rc == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j.at("d").get<double>() == 0.8);
}
