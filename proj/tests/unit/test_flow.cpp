#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "dncsf/flow.hpp"
#include "dncsf/hairclip.hpp"

using namespace dncsf;

namespace {

Curve segment(Point a, Point b, std::size_t n) {
  std::vector<Point> p(n + 1);
  for (std::size_t k = 0; k <= n; ++k) p[k] = a + (static_cast<double>(k) / n) * (b - a);
  return Curve(std::move(p));
}

double stable_dt(const Curve& c) { return 0.25 * min_spacing(c) * min_spacing(c); }

Trajectory quick_run(double d, double rho, std::size_t n) {
  FlowRunConfig cfg(d, initial_curve(rho, d, n));
  cfg.nodes = n;
  cfg.record_every = 10;
  return run(cfg);
}

}  // namespace

TEST_CASE("stationary arcs are fixed points of the discrete step") {
  for (double d : {0.5, 1.0}) {
    for (auto [a, b] : {std::pair{Point{-d, 0.0}, Point{1.0, 0.0}}, std::pair{Point{-d, 0.0}, Point{-1.0, 0.0}}}) {
      if (distance(a, b) < 1e-12) continue;
      const Curve c = segment(a, b, 32);
      FlowState s = FlowState::at(c, 0.0);
      for (int k = 0; k < 20; ++k) s = step(s, stable_dt(s.curve));
      for (std::size_t i = 0; i < c.size(); ++i) CHECK(distance(s.curve.node(i), c.node(i)) < 1e-14);
    }
  }
}

TEST_CASE("one step from the initial slice") {
  const double d = 0.5;
  const Curve c0 = initial_curve(0.3, d, 64);
  const FlowState s0 = FlowState::at(c0, 0.0);
  const FlowState s1 = step(s0, stable_dt(c0));
  CHECK(s1.time == doctest::Approx(stable_dt(c0)));
  CHECK(s1.step == 1);
  CHECK(s1.curve.front() == Point{-d, 0.0});
  CHECK(std::abs(norm(s1.curve.back()) - 1.0) < 1e-14);
  const auto [kmin, ksmin] = min_kappa_and_kappa_s(s1.curve);
  CHECK(kmin >= -tol_inv(s1.diagnostics));
  CHECK(ksmin >= -tol_inv(s1.diagnostics));
  // Below pi/2 the highest point is the Neumann end, which climbs the circle.
  CHECK(s1.diagnostics.height_max > s0.diagnostics.height_max);
  // The ghost-centred end tangent is radial to second order.
  auto end_error = [&](std::size_t n) {
    const Curve c = initial_curve(0.3, d, n);
    const FlowState s = step(FlowState::at(c, 0.0), stable_dt(c));
    const Point e = s.curve.back();
    return std::abs(curvature_profile(s.curve).back().theta - std::atan2(e.y, e.x));
  };
  CHECK(end_error(128) < 1e-3);
  CHECK(end_error(64) / end_error(128) >= 3.0);
}

TEST_CASE("the height rate of one step is resolution independent") {
  auto rate = [](std::size_t n) {
    const Curve c = initial_curve(0.3, 0.5, n);
    const FlowState s0 = FlowState::at(c, 0.0);
    const FlowState s1 = step(s0, stable_dt(c));
    return (s1.diagnostics.height_max - s0.diagnostics.height_max) / s1.time;
  };
  CHECK(rate(128) == doctest::Approx(rate(256)).epsilon(0.02));
}

TEST_CASE("step enforces the stability limit") {
  const Curve c = initial_curve(0.3, 0.5, 32);
  const double h = min_spacing(c);
  CHECK_THROWS_AS(step(FlowState::at(c, 0.0), 0.51 * h * h), DomainError);
  CHECK_NOTHROW(step(FlowState::at(c, 0.0), 0.5 * h * h));
}

TEST_CASE("run configuration validation") {
  const Curve c = initial_curve(0.3, 0.5, 32);
  auto bad = [&](auto mutate) {
    FlowRunConfig cfg(0.5, c);
    cfg.nodes = 32;
    mutate(cfg);
    return cfg;
  };
  CHECK_NOTHROW(bad([](FlowRunConfig&) {}).validate());
  CHECK_THROWS_AS(bad([](FlowRunConfig& k) { k.nodes = 4; }).validate(), DomainError);
  CHECK_THROWS_AS(bad([](FlowRunConfig& k) { k.dt_safety = 0.6; }).validate(), DomainError);
  CHECK_THROWS_AS(bad([](FlowRunConfig& k) { k.stop.eps = 0.0; }).validate(), DomainError);
  CHECK_THROWS_AS(bad([](FlowRunConfig& k) { k.record_every = 0; }).validate(), DomainError);
  CHECK_THROWS_AS(bad([](FlowRunConfig& k) { k.t_end = -1.0; }).validate(), DomainError);
  CHECK_THROWS_AS(bad([](FlowRunConfig& k) { k.stop = StopRule::max_time(); }).validate(), DomainError);
  CHECK_THROWS_AS(bad([](FlowRunConfig& k) { k.d = 0.0; }).validate(), DomainError);
  CHECK_THROWS_AS(FlowRunConfig(0.7, c).validate(), InvalidCurve);
  CHECK_THROWS_AS(bad([](FlowRunConfig& k) { k.initial = segment({-0.5, 0.0}, {0.5, 0.0}, 16); }).validate(), InvalidCurve);
}

TEST_CASE("d < 1 converges to the minimizing arc") {
  int calls = 0;
  FlowRunConfig cfg(0.5, initial_curve(0.3, 0.5, 32));
  cfg.nodes = 32;
  cfg.record_every = 10;
  cfg.progress = [&](const FlowState&) { ++calls; };
  const Trajectory tr = run(cfg);
  CHECK(tr.outcome == Outcome::ConvergedToMinimizer);
  CHECK(calls > 0);
  REQUIRE(tr.states.size() >= 3);
  const auto ts = tr.times();
  for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i] > ts[i - 1]);
  CHECK(hausdorff_to_segment(tr.states.back().curve, {-0.5, 0.0}, {-1.0, 0.0}) < 1e-3);
  bool half_pi = false;
  for (const auto& e : tr.events) half_pi = half_pi || e.kind == EventKind::ThetaBarHalfPi;
  CHECK(half_pi);
  CHECK(half_pi_time(tr).has_value());

  const auto ode = theta_bar_ode_check(tr);
  CHECK_FALSE(ode.skipped);
  CHECK(ode.worst_rate_margin >= -kTolOde);
  CHECK(ode.worst_comparison_margin >= -kTolOde);

  const auto inv = check_invariants(tr);
  CHECK(inv.states_checked > 0);
  CHECK(inv.kappa_margin >= 0.0);
  CHECK(inv.kappa_s_margin >= 0.0);
  CHECK(inv.curvature_lower_bound_margin >= 0.0);
  CHECK(inv.gradient_lower_bound_margin >= 0.0);
  CHECK(inv.theta_max_increment > 0.0);
  CHECK(inv.embedded);
}

TEST_CASE("d = 1 becomes extinct near the same time at two resolutions") {
  const Trajectory a = quick_run(1.0, 0.3, 32);
  const Trajectory b = quick_run(1.0, 0.3, 64);
  REQUIRE(a.outcome == Outcome::Extinct);
  REQUIRE(b.outcome == Outcome::Extinct);
  CHECK(a.extinction_time == doctest::Approx(b.extinction_time).epsilon(0.02));
  CHECK(b.extinction_time >= b.states.back().time);
  CHECK(extinction_estimate(b.states.back()) >= b.states.back().time);
}

TEST_CASE("unstable arc with t_end runs to MaxTimeReached unchanged") {
  const Curve c = segment({-0.5, 0.0}, {1.0, 0.0}, 32);
  FlowRunConfig cfg(0.5, c);
  cfg.nodes = 32;
  cfg.t_end = 0.05;
  cfg.stop = StopRule::max_time();
  cfg.record_every = 50;
  const Trajectory tr = run(cfg);
  CHECK(tr.outcome == Outcome::MaxTimeReached);
  CHECK(tr.states.back().time == doctest::Approx(0.05));
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(distance(tr.states.back().curve.node(i), c.node(i)) < 1e-13);
  const auto ode = theta_bar_ode_check(tr);
  CHECK(ode.skipped);
  CHECK_FALSE(ode.reason.empty());
}

TEST_CASE("speed bound holds with equality on the initial slice") {
  auto margin = [](std::size_t n) {
    const auto pair = solve_orthogonal_pair(0.3, 0.5);
    Trajectory tr;
    tr.d = 0.5;
    tr.states.push_back(FlowState::at(initial_curve(0.3, 0.5, n), 0.0));
    const auto rep = speed_bound_check(tr, pair.lambda, 1.0);
    REQUIRE(rep.max_kappa_over_y.size() == 1);
    CHECK(std::isfinite(rep.max_kappa_over_y.front()));
    return std::abs(rep.worst_margin);
  };
  const double m64 = margin(64), m128 = margin(128);
  CHECK(m128 < 1e-4);
  CHECK(m64 / m128 >= 3.0);
}

TEST_CASE("max kappa over y is finite at the Dirichlet node") {
  const Curve c = initial_curve(0.3, 0.5, 64);
  const double q = max_kappa_over_y(c);
  CHECK(std::isfinite(q));
  CHECK(q > 0.0);
}

TEST_CASE("default stop rule and string conversions") {
  CHECK(default_stop_rule(0.5).kind == StopKind::Converged);
  CHECK(default_stop_rule(1.0).kind == StopKind::Extinct);
  CHECK(to_string(Outcome::Extinct) == "Extinct");
  CHECK(to_string(EventKind::ThetaBarHalfPi) == "ThetaBarHalfPi");
}

TEST_CASE("runs stay below the time-translated supersolution family") {
  for (double d : {0.5, 1.0}) {
    const double rho = 0.3;
    const Trajectory tr = quick_run(d, rho, 64);
    // The NN arc with sin(theta) = 2 sin(rho) / (1 + sin^2(rho)) lies above
    // the initial slice; translate theta_plus so it starts there.
    const double s = std::sin(rho);
    const double tau0 = 0.5 * std::log(2.0 * s / (1.0 + s * s));
    int checked = 0;
    for (const auto& st : tr.states) {
      const double tau = tau0 + (st.time - tr.states.front().time);
      if (tau >= 0.0) break;
      const ArcBarrier arc = nn_arc(theta_plus(tau));
      double margin = 1e300;
      for (const auto& p : st.curve.nodes()) margin = std::min(margin, distance(p, arc.center) - arc.radius);
      CHECK(margin > 0.0);
      ++checked;
    }
    CHECK(checked > 10);
  }
}

TEST_CASE("max height rises with the Neumann end, then falls") {
  // While theta_max < pi/2 the highest point is the Neumann end at height
  // sin(theta_max), so the height increases; afterwards it decreases.
  for (double d : {0.5, 1.0}) {
    const Trajectory tr = quick_run(d, 0.3, 64);
    for (std::size_t i = 1; i < tr.states.size(); ++i) {
      const auto& a = tr.states[i - 1].diagnostics;
      const auto& b = tr.states[i].diagnostics;
      if (b.theta_max < 0.5 * kPi) {
        CHECK(b.height_max > a.height_max);
        CHECK(b.height_max == doctest::Approx(std::sin(b.theta_max)).epsilon(1e-2));
      } else if (a.theta_max >= 0.5 * kPi) {
        CHECK(b.height_max <= a.height_max);
      }
    }
  }
}
