#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "dncsf/hairclip.hpp"
#include "dncsf/io.hpp"
#include "json.hpp"

using namespace dncsf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dncsf_test_io_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Trajectory short_run() {
  FlowRunConfig cfg(0.5, initial_curve(0.3, 0.5, 16));
  cfg.nodes = 16;
  cfg.t_end = 0.02;
  cfg.stop = StopRule::max_time();
  cfg.record_every = 20;
  return run(cfg);
}

}  // namespace

TEST_CASE("curve CSV round trip is exact") {
  const Curve c = initial_curve(0.3, 0.5, 64);
  const std::string text = curve_to_csv(c);
  CHECK(text.rfind("x,y\n", 0) == 0);
  const Curve back = curve_from_csv(text);
  REQUIRE(back.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(back.node(i) == c.node(i));

  const fs::path dir = scratch("csv");
  write_curve_csv(dir / "c.csv", c);
  const Curve file = read_curve_csv(dir / "c.csv");
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(file.node(i) == c.node(i));
  CHECK_THROWS_AS(read_curve_csv(dir / "missing.csv"), IoError);
}

TEST_CASE("malformed curve CSV is rejected") {
  CHECK_THROWS_AS(curve_from_csv("a,b\n0,0\n"), IoError);
  CHECK_THROWS_AS(curve_from_csv("x,y\n0 0\n"), IoError);
  CHECK_THROWS_AS(curve_from_csv("x,y\n0,zero\n"), IoError);
  CHECK_THROWS_AS(curve_from_csv("x,y\n0,0\n1,0\n"), InvalidCurve);
}

TEST_CASE("JSON reports carry their fields") {
  const Curve c = initial_curve(0.3, 0.5, 16);
  const json cj = json::parse(curve_to_json(c, 0.5));
  CHECK(cj["d"] == 0.5);
  CHECK(cj["nodes"].size() == 17);
  CHECK(cj["chart"].is_string());

  const ProblemConfig cfg(0.5);
  const json bj = json::parse(barrier_report_json(verify_barrier_inequality(cfg, ArcKind::DirichletNeumann, -1.0, 64)));
  for (const char* k : {"kind", "d", "t", "samples", "theta", "min_slack", "argmin_point"}) CHECK(bj.contains(k));
  CHECK(bj["samples"] == 64);

  GrimReaperReport g;
  g.sup_deviation = std::numeric_limits<double>::infinity();
  g.deviations = {0.1, std::numeric_limits<double>::infinity()};
  const json gj = json::parse(grim_reaper_json(g));
  CHECK(gj["sup_deviation"].is_null());
  CHECK(gj["deviations"][1].is_null());

  const json fj = json::parse(fit_json(AsymptoticFit{0.7, 0.73, 1e-3, {-5.0, -1.0}, 12}));
  CHECK(fj["states_used"] == 12);
  CHECK(fj["window"][0] == -5.0);
  CHECK(json::parse(invariants_json(InvariantReport{})).contains("embedded"));
  CHECK(json::parse(theta_bar_ode_json(ThetaBarOdeReport{})).contains("worst_rate_margin"));
  CHECK(json::parse(speed_bound_json(SpeedBoundReport{})).contains("max_kappa_over_y"));
  CHECK(json::parse(area_balance_json(AreaBalanceReport{})).contains("max_discrepancy"));
}

TEST_CASE("trajectory export") {
  const Trajectory tr = short_run();
  const fs::path dir = scratch("traj");
  write_trajectory(dir, tr, 0.3);
  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m["d"] == 0.5);
  CHECK(m["rho"] == 0.3);
  CHECK(m["N"] == 16);
  CHECK(m["outcome"]["kind"] == "MaxTimeReached");
  REQUIRE(m["files"].size() == tr.states.size());
  CHECK(m["times"].size() == tr.states.size());
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const Curve c = read_curve_csv(dir / m["files"][i].get<std::string>());
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(c.node(k) == tr.states[i].curve.node(k));
  }
  const std::string diag = slurp(dir / "diagnostics.csv");
  CHECK(diag.rfind("t,theta_min,theta_max,kappa_max,area,height_max,length\n", 0) == 0);
  CHECK(std::count(diag.begin(), diag.end(), '\n') == static_cast<long>(tr.states.size() + 1));

  // Identical inputs give byte-identical outputs.
  const fs::path again = scratch("traj2");
  write_trajectory(again, short_run(), 0.3);
  for (const auto& e : fs::directory_iterator(dir)) CHECK(slurp(e.path()) == slurp(again / e.path().filename()));

  const fs::path norho = scratch("traj3");
  write_trajectory(norho, tr, std::nullopt);
  CHECK(json::parse(slurp(norho / "manifest.json"))["rho"].is_null());
}

TEST_CASE("blow-up export") {
  FlowRunConfig cfg(1.0, initial_curve(0.3, 1.0, 32));
  cfg.nodes = 32;
  cfg.record_every = 5;
  const auto seq = extract_blowup(run(cfg), 3);
  const fs::path dir = scratch("blowup");
  write_blowup(dir, seq);
  const json m = json::parse(slurp(dir / "manifest.json"));
  REQUIRE(m["members"].size() == seq.times.size());
  for (std::size_t j = 0; j < seq.times.size(); ++j) {
    const auto& e = m["members"][j];
    CHECK(e["blowup_index"] == j);
    CHECK(e["scale"] == seq.scales[j]);
    CHECK(fs::exists(dir / e["file"].get<std::string>()));
  }
}
