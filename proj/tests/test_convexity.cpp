#include <cmath>
#include <random>

#include "doctest.h"
#include "laakso/convexity.hpp"
#include "laakso/error.hpp"
#include "laakso/norms.hpp"

using namespace laakso;

TEST_CASE("hilbert modulus closed form") {
  CHECK(hilbert_modulus(1.0) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
  CHECK(hilbert_modulus(0.25) == doctest::Approx(std::sqrt(17.0) / 4.0 - 1.0).epsilon(1e-15));
  // Small ε keeps full relative precision.
  CHECK(hilbert_modulus(1e-9) == doctest::Approx(5e-19).epsilon(1e-12));
  CHECK_THROWS_AS(hilbert_modulus(0.0), Error);
  CHECK_THROWS_AS(hilbert_modulus(-1.0), Error);
  const auto h = RoundBallModulus::hilbert();
  CHECK(h.delta(0.0) == 0.0);
  CHECK(h.delta(0.5) == hilbert_modulus(0.5));
  CHECK_FALSE(h.identically_zero());
}

TEST_CASE("two-ball intersection in the plane has the closed-form diameter") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 0.9);
  EstimatorConfig config;
  config.starts = 16;
  for (int k = 0; k < 20; ++k) {
    const double delta = u(rng);
    const double got = max_intersection_diameter(2.0, {1.0, 0.0}, delta, config);
    CHECK(got == doctest::Approx(std::sqrt(2.0 * delta + delta * delta)).epsilon(1e-6));
  }
}

TEST_CASE("numeric estimate tracks the hilbert modulus for p = 2") {
  for (int d : {2, 3}) {
    for (double eps : {0.1, 0.5}) {
      const auto est = estimate_modulus(2.0, d, eps);
      CHECK(est.round_ball);
      CHECK(est.delta == doctest::Approx(hilbert_modulus(eps)).epsilon(1e-3));
      CHECK(std::abs(est.delta - hilbert_modulus(eps)) <= 1e-3);
      CHECK(est.error_bar > 0.0);
    }
  }
}

TEST_CASE("p-norms with p > 2 are no rounder than Hilbert space") {
  for (double eps : {0.2, 0.6}) {
    const auto est = estimate_modulus(4.0, 2, eps);
    CHECK(est.round_ball);
    CHECK(est.delta > 0.0);
    CHECK(est.delta <= hilbert_modulus(eps) + 1e-3);
  }
}

namespace {

void check_flat_witness(double p, double eps) {
  const auto est = estimate_modulus(p, 2, eps);
  CHECK_FALSE(est.round_ball);
  CHECK(est.delta == 0.0);
  REQUIRE(est.witness);
  const auto& w = *est.witness;
  const std::vector<double> origin(w.center.size(), 0.0);
  CHECK(lp_norm(w.center, p) == doctest::Approx(1.0));
  // Both points lie in both closed balls of radius 1/2 and are a full ε apart.
  for (const auto* pt : {&w.z, &w.w}) {
    CHECK(lp_distance(*pt, origin, p) <= 0.5 + 1e-15);
    CHECK(lp_distance(*pt, w.center, p) <= 0.5 + 1e-15);
  }
  CHECK(w.separation == doctest::Approx(lp_distance(w.z, w.w, p)));
  CHECK(w.separation >= eps);
}

}  // namespace

TEST_CASE("sup-norm and l1 planes are not round-ball") {
  check_flat_witness(kInfinity, 0.5);
  check_flat_witness(1.0, 0.5);
}

TEST_CASE("estimator rejects bad input") {
  CHECK_THROWS_AS(estimate_modulus(0.5, 2, 0.5), Error);
  CHECK_THROWS_AS(estimate_modulus(2.0, 1, 0.5), Error);
  CHECK_THROWS_AS(estimate_modulus(2.0, 2, 0.0), Error);
  CHECK_THROWS_AS(estimate_modulus(2.0, 2, 2.5), Error);
}

TEST_CASE("estimates are deterministic") {
  const auto a = estimate_modulus(3.0, 3, 0.4);
  const auto b = estimate_modulus(3.0, 3, 0.4);
  CHECK(a.delta == b.delta);
  CHECK(a.error_bar == b.error_bar);
}

TEST_CASE("tabulated moduli are monotone step functions") {
  const auto m = RoundBallModulus::tabulated(
      {{0.1, 0.01, 0.0}, {0.2, 0.005, 0.0}, {0.4, 0.05, 0.0}}, "table");
  CHECK(m.kind() == RoundBallModulus::Kind::kTabulated);
  CHECK(m.delta(0.05) == 0.0);
  CHECK(m.delta(0.1) == 0.01);
  CHECK(m.delta(0.25) == 0.01);  // running max over the dip at 0.2
  CHECK(m.delta(0.4) == 0.05);
  CHECK(m.delta(3.0) == 0.05);
  for (std::size_t i = 1; i < m.table().size(); ++i) CHECK(m.table()[i].delta >= m.table()[i - 1].delta);
  CHECK_THROWS_AS(RoundBallModulus::tabulated({{0.2, 0.1, 0}, {0.1, 0.2, 0}}, "x"), Error);
  CHECK(RoundBallModulus::tabulated({{0.5, 0.0, 0.0}}, "zero").identically_zero());
}

TEST_CASE("target descriptors") {
  const auto h = TargetDescriptor::parse("hilbert");
  CHECK(h.kind == TargetDescriptor::Kind::kHilbert);
  const auto l = TargetDescriptor::parse("lp:3:4");
  CHECK(l.kind == TargetDescriptor::Kind::kLp);
  CHECK(l.p == 3.0);
  CHECK(l.dimension == 4);
  CHECK(std::isinf(TargetDescriptor::parse("lp:inf:2").p));
  CHECK(TargetDescriptor::parse(l.to_string()).p == 3.0);
  CHECK_THROWS_AS(TargetDescriptor::parse("banach"), Error);
  CHECK_THROWS_AS(TargetDescriptor::parse("lp:3"), Error);
  CHECK_THROWS_AS(TargetDescriptor::parse("lp:0.5:2"), Error);
}

TEST_CASE("modulus dispatch") {
  for (const char* t : {"lp:inf:2", "lp:1:3"}) {
    try {
      modulus_for_target(TargetDescriptor::parse(t));
      FAIL("expected a dispatch failure");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kNotUniformlyConvex);
    }
  }
  const auto table = modulus_for_target(TargetDescriptor::parse("lp:2:2"), {0.2, 0.5});
  REQUIRE(table.table().size() == 2);
  // Entries are shrunk by their error bars, so they never exceed the truth.
  CHECK(table.delta(0.5) <= hilbert_modulus(0.5));
  CHECK(table.delta(0.5) >= hilbert_modulus(0.5) - 1e-3);
}
