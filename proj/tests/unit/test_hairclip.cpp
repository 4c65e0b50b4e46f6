#include <cmath>

#include "doctest.h"
#include "dncsf/hairclip.hpp"
#include "oracles.hpp"

using namespace dncsf;

TEST_CASE("slice_height") {
  for (double d : {0.3, 1.0}) CHECK(slice_height({0.9, -2.0, d}, -d) == 0.0);
  CHECK_THROWS_AS(slice_height({1.0, 0.0, 1.0}, 0.0), DomainError);
  CHECK(slice_height({1.0, -1.0, 1.0}, 0.0) == doctest::Approx(oracle::kSliceHeight).epsilon(1e-14));
  CHECK_THROWS_AS(slice_height({1.0, -1.0, 1.0}, -1.5), DomainError);
  CHECK_THROWS_AS(slice_height({-1.0, -1.0, 1.0}, 0.0), DomainError);
}

TEST_CASE("pairing function limits and monotonicity") {
  const double th = kPi / 3.0;
  CHECK(pairing_function_g(1e-7, th, 0.5) == doctest::Approx(0.5 / std::cos(th)).epsilon(1e-6));
  const double top = 0.5 * kPi / std::sin(th);
  CHECK(pairing_function_g(top * (1.0 - 1e-9), th, 0.5) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK_THROWS_AS(pairing_function_g(top, th, 0.5), DomainError);
  CHECK_THROWS_AS(pairing_function_g(0.5, 0.5 * kPi, 0.5), DomainError);

  const double q = 0.25 * kPi;
  CHECK(pairing_function_g(0.5, q, 0.5) > pairing_function_g(1.0, q, 0.5));
  CHECK(pairing_function_g(1.0, q, 0.5) > pairing_function_g(1.5, q, 0.5));
}

TEST_CASE("orthogonal pairs: residuals, brackets and frozen values") {
  for (auto [th, d] : {std::pair{0.25 * kPi, 0.5}, std::pair{kPi / 3.0, 1.0}}) {
    const auto p = solve_orthogonal_pair(th, d);
    CHECK(std::abs(pairing_function_g(p.lambda, th, d)) < 1e-12);
    CHECK(p.radial_residual < 1e-8);
    CHECK(p.contact_residual < 1e-10);
    CHECK(pairing_function_g(p.lambda - 1e-6, th, d) > 0.0);
    CHECK(pairing_function_g(p.lambda + 1e-6, th, d) < 0.0);
  }
  for (const auto& ref : oracle::kPairs) {
    const auto p = solve_orthogonal_pair(ref.rho, ref.d);
    CHECK(p.lambda == doctest::Approx(ref.lambda).epsilon(1e-8));
    CHECK(p.t == doctest::Approx(ref.t).epsilon(1e-5));
  }
  CHECK_THROWS_AS(solve_orthogonal_pair(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(solve_orthogonal_pair(0.5 * kPi, 0.5), DomainError);
  CHECK_THROWS_AS(solve_orthogonal_pair(0.3, 0.0), DomainError);
}

TEST_CASE("lambda_rho tends to lambda0 as rho -> 0") {
  for (double d : {0.5, 1.0}) {
    CHECK(std::abs(solve_orthogonal_pair(1e-3, d).lambda - lambda0(d).lambda0) < 1e-2);
  }
}

TEST_CASE("eigenvalue lambda0") {
  CHECK(std::abs(lambda0(1.0).lambda0 - oracle::kLambda0_d1) < 1e-12);
  CHECK(std::abs(lambda0(0.5).lambda0 - oracle::kLambda0_d05) < 1e-12);
  CHECK(std::abs(lambda0(0.3).lambda0 - oracle::kLambda0_d03) < 1e-12);
  CHECK(std::abs(lambda0(0.7).lambda0 - oracle::kLambda0_d07) < 1e-12);
  for (int i = 1; i <= 50; ++i) {
    const double d = i / 50.0;
    const auto e = lambda0(d);
    CHECK(e.residual() < 1e-12);
    CHECK(e.lambda0 > 0.0);
    CHECK(e.lambda0 < 1.0);
    CHECK(std::tanh(1e-3 * (1.0 + d)) - 1e-3 > 0.0);
    CHECK(std::tanh(0.999999 * (1.0 + d)) - 0.999999 < 0.0);
  }
  CHECK_THROWS_AS(lambda0(0.0), DomainError);
}

TEST_CASE("slice speed identities hold at second order on sampled slices") {
  const auto pair = solve_orthogonal_pair(0.3, 0.5);
  auto errors = [&](std::size_t n) {
    const Curve c = initial_curve(0.3, 0.5, n);
    const auto prof = curvature_profile(c);
    double e_cos = 0.0, e_sin = 0.0;
    const double l = pair.lambda;
    for (std::size_t i = 1; i < n; ++i) {
      const Point p = c.node(i);
      e_cos = std::max(e_cos, std::abs(prof[i].kappa / std::cos(prof[i].theta) - l * std::tan(l * p.y)));
      e_sin = std::max(e_sin, std::abs(prof[i].kappa / std::sin(prof[i].theta) - l * std::tanh(l * (p.x + 0.5))));
    }
    return std::pair{e_cos, e_sin};
  };
  const auto [c1, s1] = errors(64);
  const auto [c2, s2] = errors(128);
  CHECK(c1 / c2 >= 3.0);
  CHECK(s1 / s2 >= 3.0);
  CHECK(c2 < 1e-4);
}

TEST_CASE("initial curve: convex, increasing curvature, radial end") {
  for (double d : {0.5, 1.0}) {
    const Curve c = initial_curve(0.3, d, 128);
    CHECK(c.front() == Point{-d, 0.0});
    CHECK(c.back().x == doctest::Approx(std::cos(0.3)).epsilon(1e-15));
    CHECK(c.back().y == doctest::Approx(std::sin(0.3)).epsilon(1e-15));
    const auto prof = curvature_profile(c);
    CHECK(std::abs(prof.front().kappa) < 1e-3);
    for (std::size_t i = 1; i < prof.size(); ++i) {
      CHECK(prof[i].kappa >= 0.0);
      CHECK(prof[i].kappa >= prof[i - 1].kappa - 1e-9);
    }
    // Slice nodes lie on the slice.
    const auto pair = solve_orthogonal_pair(0.3, d);
    for (std::size_t i = 0; i < c.size(); i += 7) {
      CHECK(c.node(i).y == doctest::Approx(slice_height(pair.slice(d), c.node(i).x)).epsilon(1e-12));
    }
    // Max kappa / sin(theta) bounded by lambda tanh(lambda (1 + d)).
    const double l = pair.lambda;
    for (std::size_t i = 1; i < prof.size(); ++i) {
      CHECK(prof[i].kappa / std::sin(prof[i].theta) <= l * std::tanh(l * (1.0 + d)) + 1e-4);
    }
  }
  auto radial_error = [](std::size_t n) {
    const Curve c = initial_curve(0.3, 0.5, n);
    return std::abs(curvature_profile(c).back().theta - 0.3);
  };
  CHECK(radial_error(128) < 1e-3);
  CHECK(radial_error(64) / radial_error(128) >= 3.0);

  CHECK(diagnose(initial_curve(0.01, 0.5, 64)).height_max < diagnose(initial_curve(0.1, 0.5, 64)).height_max);
  CHECK_THROWS_AS(initial_curve(0.0, 0.5, 64), DomainError);
  CHECK_THROWS_AS(initial_curve(0.3, 0.5, 4), DomainError);
}
