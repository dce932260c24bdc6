#pragma once

// Data-parallel kernels. Each kernel has a serial reference in
// laakso::kernels::serial and an OpenMP version in laakso::kernels::parallel;
// both return bit-identical results for the same inputs (tie-breaks are by
// index, never by thread schedule). The library calls the parallel versions,
// tests compare the two, and laaksolab_bench times them.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "laakso/graph.hpp"
#include "laakso/metric_space.hpp"

namespace laakso::kernels {

inline constexpr std::int64_t kUnreachable = -1;

struct PairExtrema {
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  std::array<std::size_t, 2> argmax{0, 0};
  std::array<std::size_t, 2> argmin{0, 0};
};

struct BallCount {
  std::size_t max_cardinality = 0;
  VertexId center = 0;
};

enum class BallKind { kOpen, kClosed };

namespace serial {

/// Shortest-path distances from every source, row-major |V|×|V|. BFS for
/// unit-weight graphs, Dijkstra otherwise; kUnreachable marks missing paths.
std::vector<std::int64_t> all_pairs(const Graph& g);

/// First triple (i, j, k) in lexicographic order with d(i,k) > d(i,j)+d(j,k).
std::optional<std::array<std::size_t, 3>> triangle_violation(const FiniteMetricSpace& space);

/// Max/min over unordered pairs of ‖x_i − x_j‖_p / d(i, j). `coords` is
/// row-major |V|×dim in the space's point order.
PairExtrema pair_ratio_extrema(const FiniteMetricSpace& space, std::span<const double> coords,
                               std::size_t dim, double p);

/// Largest ball (by point count) of the given radius over all centers.
BallCount max_ball(const Graph& g, std::int64_t radius, BallKind kind);

}  // namespace serial

namespace parallel {

std::vector<std::int64_t> all_pairs(const Graph& g);
std::optional<std::array<std::size_t, 3>> triangle_violation(const FiniteMetricSpace& space);
PairExtrema pair_ratio_extrema(const FiniteMetricSpace& space, std::span<const double> coords,
                               std::size_t dim, double p);
BallCount max_ball(const Graph& g, std::int64_t radius, BallKind kind);

}  // namespace parallel

}  // namespace laakso::kernels
