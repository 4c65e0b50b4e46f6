#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
namespace cli = dncsf::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "dncsf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) {
  const fs::path p = fs::path(DNCSF_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(call({}).code == cli::kExitUsage);
  CHECK(call({"nonsense"}).code == cli::kExitUsage);
  CHECK(call({"pair", "--no-such-flag"}).code == cli::kExitUsage);
  CHECK(call({"verify", "--d", "0"}).code == cli::kExitUsage);
  CHECK(call({"verify", "--d", "1.5"}).code == cli::kExitUsage);
  CHECK(call({"verify", "--tol-ode", "-1"}).code == cli::kExitUsage);
  CHECK(call({"flow", "--nodes", "4"}).code == cli::kExitUsage);
  CHECK(call({"pair", "--theta", "2"}).code == cli::kExitUsage);
  CHECK(call({"ancient", "--rho"}).code == cli::kExitUsage);
  CHECK(call({"ancient", "--rho", "0.1", "0.2", "--out", tmp("bad").string()}).code == cli::kExitUsage);
  const auto r = call({"verify", "--d", "0"});
  CHECK_FALSE(r.err.empty());
  CHECK(call({"--help"}).code == cli::kExitPass);
}

TEST_CASE("pair prints the orthogonal slice") {
  const fs::path dir = tmp("pair");
  const auto r = call({"pair", "--theta", "0.3", "--d", "0.5", "--out", dir.string()});
  REQUIRE(r.code == cli::kExitPass);
  const json j = json::parse(r.out);
  CHECK(j["lambda"].get<double>() > 0.0);
  CHECK(j["radial_residual"].get<double>() < 1e-8);
  CHECK(json::parse(slurp(dir / "pair.json")) == j);
}

TEST_CASE("barriers writes one report per arc") {
  const fs::path dir = tmp("barriers");
  const auto r = call({"barriers", "--d", "0.7", "--samples", "64", "--out", dir.string()});
  CHECK(r.code == cli::kExitPass);
  const json s = json::parse(slurp(dir / "summary.json"));
  CHECK(s["passed"] == true);
  CHECK(s["reports"].size() == 40);
  CHECK(fs::exists(dir / "dn_0.json"));
  CHECK(fs::exists(dir / "nn_19.json"));
}

TEST_CASE("flow writes a trajectory and is deterministic") {
  const fs::path a = tmp("flow_a"), b = tmp("flow_b");
  const std::vector<std::string> common = {"flow", "--d", "0.5", "--rho", "0.3", "--nodes", "32"};
  auto with_out = [&](const fs::path& p) {
    auto v = common;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  REQUIRE(call(with_out(a)).code == cli::kExitPass);
  REQUIRE(call(with_out(b)).code == cli::kExitPass);
  const json m = json::parse(slurp(a / "manifest.json"));
  CHECK(m["outcome"]["kind"] == "ConvergedToMinimizer");
  CHECK(m["N"] == 32);
  for (const auto& e : fs::directory_iterator(a)) CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
}

TEST_CASE("config file supplies option values") {
  const fs::path dir = tmp("config");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.ini");
    cfg << "d=1.0\nrho=0.3\nnodes=32\n";
  }
  const auto r = call({"flow", "--config", (dir / "run.ini").string(), "--out", (dir / "out").string()});
  REQUIRE(r.code == cli::kExitPass);
  const json m = json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(m["d"] == 1.0);
  CHECK(m["N"] == 32);
  CHECK(m["outcome"]["kind"] == "Extinct");
}

TEST_CASE("ancient sweep: lambda_rho decreases towards lambda0") {
  const fs::path dir = tmp("ancient");
  const auto r = call({"ancient", "--d", "0.5", "--nodes", "32", "--rho", "0.1", "0.05", "0.03", "--out", dir.string()});
  CHECK(r.code == cli::kExitPass);
  const json s = json::parse(slurp(dir / "summary.json"));
  REQUIRE(s["rows"].size() == 3);
  double prev = 1e9;
  for (const auto& row : s["rows"]) {
    REQUIRE(row.contains("lambda_rho"));
    const double l = row["lambda_rho"].get<double>();
    CHECK(l < prev);
    CHECK(l > s["lambda0"].get<double>());
    prev = l;
    CHECK(row["outcome"] == "ConvergedToMinimizer");
  }
}

TEST_CASE("blowup and verify pass at small resolution") {
  const fs::path dir = tmp("blowup");
  const auto r = call({"blowup", "--d", "1", "--rho", "0.3", "--nodes", "64", "--count", "4", "--out", dir.string()});
  CHECK(r.code == cli::kExitPass);
  CHECK(fs::exists(dir / "grim_reaper.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(call({"blowup", "--d", "0.5", "--rho", "0.3", "--nodes", "32", "--out", tmp("blowup_bad").string()}).code ==
        cli::kExitCheckFailed);

  for (const char* d : {"0.5", "1"}) {
    const fs::path v = tmp(std::string("verify_") + d);
    const auto res = call({"verify", "--d", d, "--rho", "0.3", "--nodes", "64", "--out", v.string()});
    CHECK_MESSAGE(res.code == cli::kExitPass, res.err);
    CHECK(fs::exists(v / "verify.json"));
  }
}
