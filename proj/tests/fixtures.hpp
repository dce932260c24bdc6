#pragma once

// Random instances shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "laakso/certifier.hpp"
#include "laakso/embedder.hpp"
#include "laakso/metric_space.hpp"
#include "laakso/norms.hpp"
#include "laakso/quadruple.hpp"

namespace fixture {

inline laakso::Embedding make_embedding(std::vector<std::string> ids, std::vector<double> coords, int dim,
                                        double p = 2.0) {
  laakso::Embedding e;
  e.ids = std::move(ids);
  e.coords = std::move(coords);
  e.target = {p, dim};
  return e;
}

/// Diamond with diagonal C = 2^k (k in [-3, 5]) and Gaussian images in R^dim,
/// rejecting configurations where two images (nearly) coincide.
inline laakso::Quadruple random_diamond(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> ek(-3, 5);
  std::normal_distribution<double> g(0.0, 1.0);
  laakso::Quadruple q;
  q.ids = {"x1", "x2", "x3", "x4"};
  q.index = {0, 1, 2, 3};
  const int k = ek(rng);
  const laakso::Dyadic c = k >= 0 ? laakso::Dyadic(std::int64_t{1} << k) : laakso::Dyadic::from_parts(1, -k);
  q.domain = {c, c, c.half(), c.half(), c.half(), c.half()};
  for (;;) {
    std::vector<std::vector<double>> pts(4, std::vector<double>(dim));
    for (auto& p : pts)
      for (double& x : p) x = g(rng);
    std::array<std::span<const double>, 4> view{pts[0], pts[1], pts[2], pts[3]};
    q.set_image_points(std::span<const std::span<const double>, 4>(view), 2.0);
    if (*std::min_element(q.image->begin(), q.image->end()) > 1e-6) return q;
  }
}

inline laakso::Quadruple scaled_images(laakso::Quadruple q, double t) {
  for (double& v : *q.image) v *= t;
  return q;
}

struct QuasiIsometryCase {
  laakso::FiniteMetricSpace space;
  laakso::Embedding map;
  laakso::QuasiIsometryParams qi;
};

/// Integer points under the l1 metric, mapped by a random linear map plus
/// noise. L is drawn, and C is the least additive constant that makes the
/// map an (L, C) quasi-isometry.
inline QuasiIsometryCase random_quasi_isometry(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(2, 12), coord(-6, 6), dim(1, 3);
  std::uniform_real_distribution<double> lu(1.0, 3.0), noise(-1.5, 1.5), scale(0.3, 2.0);
  const int n = size(rng), k = dim(rng), m = dim(rng);
  std::vector<std::vector<int>> pts;
  while (static_cast<int>(pts.size()) < n) {
    std::vector<int> p(k);
    for (int& x : p) x = coord(rng);
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
  }
  std::vector<std::string> ids;
  std::vector<std::int64_t> d(n * n);
  for (int i = 0; i < n; ++i) {
    ids.push_back("q" + std::to_string(i));
    for (int j = 0; j < n; ++j) {
      std::int64_t s = 0;
      for (int c = 0; c < k; ++c) s += std::abs(pts[i][c] - pts[j][c]);
      d[i * n + j] = s;
    }
  }
  QuasiIsometryCase out;
  out.space = laakso::FiniteMetricSpace(ids, d);
  std::vector<double> coords(n * m);
  const double a = scale(rng);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < m; ++c) coords[i * m + c] = a * (c < k ? pts[i][c] : 0) + noise(rng);
  out.map = make_embedding(ids, coords, m);
  const double l = lu(rng);
  double c_add = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double r = laakso::lp_distance(out.map.point(i), out.map.point(j), 2.0);
      const double dd = static_cast<double>(d[i * n + j]);
      c_add = std::max({c_add, r - l * dd, dd / l - r});
    }
  }
  out.qi.l = l;
  out.qi.c_add = c_add;
  return out;
}

}  // namespace fixture
