#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "laakso/certifier.hpp"
#include "laakso/error.hpp"
#include "laakso/spaces.hpp"

using namespace laakso;

namespace {

// Gamma_1 placed on the unit square with x1, x3 opposite corners.
Embedding square_embedding(const LevelGraph& g1, double t = 1.0) {
  const auto j = g1.copy_joints("");
  const double corners[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<double> coords(8);
  for (int k = 0; k < 4; ++k) {
    coords[j[k] * 2] = t * corners[k][0];
    coords[j[k] * 2 + 1] = t * corners[k][1];
  }
  return fixture::make_embedding(g1.graph().ids(), coords, 2);
}

Quadruple square_quadruple() {
  const LevelGraph g1 = build_gamma(1);
  Quadruple q = primary_quadruple(g1, "");
  const Embedding e = square_embedding(g1);
  std::array<std::span<const double>, 4> pts;
  for (int k = 0; k < 4; ++k) pts[k] = e.point(q.index[k]);
  q.set_image_points(std::span<const std::span<const double>, 4>(pts), 2.0);
  return q;
}

}  // namespace

TEST_CASE("pair constants") {
  CHECK(pair_lipschitz(2, 2) == 1.0);
  CHECK(pair_lipschitz(2, 3) == 1.5);
  CHECK(pair_lipschitz(std::ldexp(1.0, 7), 5.0) == 5.0 / 128.0);
  CHECK_THROWS_AS(pair_lipschitz(0, 1), Error);
}

TEST_CASE("square quadruple in closed form") {
  const Quadruple q = square_quadruple();
  const auto r = check_quadruple(q, RoundBallModulus::hilbert());
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.l_diagonal == doctest::Approx(std::numbers::sqrt2 / 2));
  CHECK(r.l_restriction == doctest::Approx(std::pow(2.0, 0.25)));
  const double rhs = std::sqrt(1.5) * std::numbers::sqrt2 / 2;  // (1 + δ(2^{-1/2}))·√2/2
  CHECK(r.rhs == doctest::Approx(rhs));
  CHECK(r.rhs < 1.0);
  CHECK(r.holds);
}

TEST_CASE("quadruple checks reject bad input") {
  Quadruple q = square_quadruple();
  Quadruple no_image = q;
  no_image.image.reset();
  CHECK_THROWS_AS(check_quadruple(no_image, RoundBallModulus::hilbert()), Error);
  Quadruple crooked = q;
  crooked.domain[Quadruple::kSide12] = Dyadic(2);
  CHECK_THROWS_AS(check_quadruple(crooked, RoundBallModulus::hilbert()), Error);
  Quadruple collapsed = q;
  (*collapsed.image)[Quadruple::kSide14] = 0.0;
  try {
    check_quadruple(collapsed, RoundBallModulus::hilbert());
    FAIL("expected a degenerate-image error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerate);
  }
}

TEST_CASE("diamond inequality holds for random images in 4-space") {
  std::mt19937_64 rng(2024);
  const auto h = RoundBallModulus::hilbert();
  for (int trial = 0; trial < 1000; ++trial) {
    const Quadruple q = fixture::random_diamond(rng, 4);
    const auto r = check_quadruple(q, h);
    CHECK(r.holds);
    for (double t : {1e-3, 1.0, 1e3}) CHECK(check_quadruple(fixture::scaled_images(q, t), h).holds == r.holds);
  }
}

TEST_CASE("a zero modulus makes the inequality trivial") {
  std::mt19937_64 rng(5);
  const auto zero = RoundBallModulus::tabulated({{1.0, 0.0, 0.0}}, "zero");
  for (int trial = 0; trial < 50; ++trial) CHECK(check_quadruple(fixture::random_diamond(rng, 3), zero).holds);
}

TEST_CASE("amplification on the square") {
  const LevelGraph g1 = build_gamma(1);
  const auto h = RoundBallModulus::hilbert();
  const auto t = amplify(g1, square_embedding(g1), h);
  REQUIRE(t.steps.size() == 1);
  CHECK(t.steps[0].factor == doctest::Approx(std::numbers::sqrt2));
  CHECK(t.l_glob == doctest::Approx(std::pow(2.0, 0.25)));
  CHECK(t.threshold == doctest::Approx(1.0 + hilbert_modulus(1.0 / std::numbers::sqrt2)));
  CHECK(t.steps[0].factor >= t.threshold);
  CHECK(t.passed);
  CHECK(t.modulus == "hilbert");

  const auto scaled = amplify(g1, square_embedding(g1, 1e3), h);
  CHECK(scaled.steps[0].factor == doctest::Approx(t.steps[0].factor));
}

TEST_CASE("amplification follows the largest side down to an edge") {
  const LevelGraph g3 = build_gamma(3);
  const FiniteMetricSpace m = path_metric(g3);
  OptimizerConfig config;
  config.restarts = 3;
  config.iterations_per_stage = 60;
  const Embedding e = minimize_distortion(m, {2.0, 8}, config);
  const auto h = RoundBallModulus::hilbert();
  const auto t = amplify(g3, e, h);
  REQUIRE(t.steps.size() == 3);
  CHECK(t.passed);
  CHECK(t.l_glob >= lower_bound(3, h).l_star - 1e-9);
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const auto& s = t.steps[k];
    CHECK(s.address.size() == k);
    CHECK(s.factor >= t.threshold - 1e-9);
    CHECK(s.l_pair >= std::pow(t.threshold, static_cast<double>(k + 1)) * t.l_start - 1e-6);
    if (k + 1 < t.steps.size()) {
      // The next quadruple's diagonal is the side chosen here.
      const auto next = t.steps[k + 1].quadruple;
      const VertexPair diag{static_cast<VertexId>(next.index[0]), static_cast<VertexId>(next.index[2])};
      CHECK(diag.same_unordered(s.pair_index));
      CHECK(t.steps[k + 1].l_diagonal == doctest::Approx(s.l_pair));
    }
  }
  CHECK(m.value(t.steps.back().pair_index.first, t.steps.back().pair_index.second) == 1.0);
}

TEST_CASE("amplification rejects incomplete or collapsed embeddings") {
  const LevelGraph g1 = build_gamma(1);
  Embedding e = square_embedding(g1);
  Embedding missing = e;
  missing.ids[2] = "nobody";
  CHECK_THROWS_WITH_AS(amplify(g1, missing, RoundBallModulus::hilbert()),
                       doctest::Contains(g1.graph().id(2).c_str()), Error);
  Embedding collapsed = e;
  collapsed.coords[2] = collapsed.coords[0];
  collapsed.coords[3] = collapsed.coords[1];
  CHECK_THROWS_AS(amplify(g1, collapsed, RoundBallModulus::hilbert()), Error);
}

TEST_CASE("lower bound closed form at one level") {
  const auto b = lower_bound(1, RoundBallModulus::hilbert());
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(b.l_star == doctest::Approx(std::pow(golden, 0.25)).epsilon(1e-12));
  CHECK(std::abs(b.l_star - 1.127838) < 1e-6);
  CHECK(b.d_star == doctest::Approx(b.l_star * b.l_star));
  CHECK_FALSE(b.vacuous);
  CHECK_THROWS_AS(lower_bound(0, RoundBallModulus::hilbert()), Error);
}

TEST_CASE("lower bounds increase with the level and solve their equation") {
  const auto h = RoundBallModulus::hilbert();
  double prev = 1.0;
  for (int n = 1; n <= 64; ++n) {
    const auto b = lower_bound(n, h);
    CHECK(b.l_star > prev);
    prev = b.l_star;
    const double back = std::pow(1.0 + hilbert_modulus(1.0 / (b.l_star * b.l_star)), n) - b.l_star * b.l_star;
    CHECK(std::abs(back) < 1e-6);
    CHECK(std::abs(b.residual) < 1e-6);
  }
}

TEST_CASE("zero modulus gives a vacuous bound") {
  const auto zero = RoundBallModulus::tabulated({{0.5, 0.0, 0.0}, {1.0, 0.0, 0.0}}, "zero");
  for (int n : {1, 7}) {
    const auto b = lower_bound(n, zero);
    CHECK(b.vacuous);
    CHECK(b.l_star == 1.0);
  }
}

TEST_CASE("large-scale reduction") {
  auto q = large_scale_reduction(1, 0);
  CHECK(q.l_large == 2.0);
  CHECK(q.s == 0.0);
  q = large_scale_reduction(2, 3);
  CHECK(q.l_large == 4.0);
  CHECK(q.s == 12.0);
  CHECK(12.0 / 2.0 - 3.0 == 12.0 / q.l_large);
  q = large_scale_reduction(1, 5);
  CHECK(q.l_large == 2.0);
  CHECK(q.s == 10.0);
  CHECK(large_scale_reduction(0.5, 1).l == 1.0);
  CHECK_THROWS_AS(large_scale_reduction(0, 1), Error);
  CHECK_THROWS_AS(large_scale_reduction(1, -1), Error);
}

TEST_CASE("large-scale bounds hold beyond the threshold") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = fixture::random_quasi_isometry(rng);
    const auto q = large_scale_reduction(c.qi.l, c.qi.c_add);
    for (std::size_t i = 0; i < c.space.size(); ++i) {
      for (std::size_t j = i + 1; j < c.space.size(); ++j) {
        const double d = c.space.value(i, j);
        if (d < q.s) continue;
        const double r = lp_distance(c.map.point(i), c.map.point(j), 2.0);
        CHECK(r <= q.l_large * d + 1e-9);
        CHECK(r >= d / q.l_large - 1e-9);
      }
    }
  }
}

TEST_CASE("required level") {
  const auto h = RoundBallModulus::hilbert();
  const int n = required_level(2.0, h);
  CHECK(n == 46);
  const double g = 1.0 + hilbert_modulus(0.25);
  CHECK(std::pow(g, 46) / 2.0 > 2.0);
  CHECK(std::pow(g, 45) / 2.0 <= 2.0);

  // A single factor of exactly L² meets the bound with equality, which the
  // strict inequality does not accept; the second factor crosses.
  const double l = 1.5;
  const auto tight = RoundBallModulus::tabulated({{1.0 / (l * l), l * l - 1.0, 0.0}}, "tight");
  CHECK(required_level(l, tight) == 2);
  const auto loose = RoundBallModulus::tabulated({{1.0 / (l * l), l * l - 0.5, 0.0}}, "loose");
  CHECK(required_level(l, loose) == 1);

  const auto zero = RoundBallModulus::tabulated({{1.0, 0.0, 0.0}}, "zero");
  try {
    required_level(2.0, zero);
    FAIL("expected unreachable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDispatch);
    CHECK(std::string(e.what()).find("unreachable") != std::string::npos);
  }
  CHECK_THROWS_AS(modulus_for_target(TargetDescriptor::parse("lp:inf:4")), Error);
}

TEST_CASE("promotion examples") {
  {
    const FiniteMetricSpace x({"a", "b"}, {0, 1, 1, 0});
    const Embedding f = fixture::make_embedding({"a", "b"}, {0.0, 0.0}, 1);
    const auto m = promote_to_bilipschitz(x, f, {1.0, 1.0});
    CHECK(m.distance(0, 1) == doctest::Approx(std::numbers::sqrt2));
    CHECK(m.report.upper_actual == doctest::Approx(std::numbers::sqrt2));
    CHECK(m.report.lower_actual == doctest::Approx(std::numbers::sqrt2));
    CHECK(m.report.holds);
  }
  {
    const FiniteMetricSpace x({"a", "b", "c"}, {0, 1, 2, 1, 0, 1, 2, 1, 0});
    const Embedding f = fixture::make_embedding({"a", "b", "c"}, {0.0, 1.0, 2.0}, 1);
    const auto m = promote_to_bilipschitz(x, f, {1.0, 0.0});
    CHECK(m.distance(0, 2) == doctest::Approx(2.0 + std::numbers::sqrt2));
    CHECK(m.report.upper_actual / m.report.lower_actual <= 1.0 + std::numbers::sqrt2);
    CHECK(m.report.upper_asserted == doctest::Approx(1.0 + std::numbers::sqrt2));
    CHECK(m.report.holds);
  }
  {
    const FiniteMetricSpace x({"a"}, {0});
    const auto m = promote_to_bilipschitz(x, fixture::make_embedding({"a"}, {3.0}, 1), {1.0, 0.0});
    CHECK(m.report.holds);
    const FiniteMetricSpace empty;
    CHECK(promote_to_bilipschitz(empty, fixture::make_embedding({}, {}, 1), {1.0, 0.0}).report.holds);
  }
}

TEST_CASE("promotion rejects maps outside the stated constants") {
  const FiniteMetricSpace x({"a", "b", "c"}, {0, 1, 2, 1, 0, 1, 2, 1, 0});
  const Embedding f = fixture::make_embedding({"a", "b", "c"}, {0.0, 5.0, 2.0}, 1);
  CHECK_THROWS_WITH_AS(promote_to_bilipschitz(x, f, {1.0, 0.5}), doctest::Contains("(a, b)"), Error);
}

TEST_CASE("promoted maps meet the asserted constants") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = fixture::random_quasi_isometry(rng);
    const auto m = promote_to_bilipschitz(c.space, c.map, c.qi);
    CHECK(m.report.holds);
    CHECK(m.report.lower_asserted >= std::numbers::sqrt2 / c.space.diameter() - 1e-12);
    CHECK(m.report.upper_actual <= m.report.upper_asserted * (1 + 1e-12));
    CHECK(m.report.lower_actual >= m.report.lower_asserted * (1 - 1e-12));
  }
}
