#include "laakso/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <functional>
#include <queue>

#include "laakso/norms.hpp"

namespace laakso::kernels {
namespace {

void bfs_row(const Graph& g, VertexId source, std::int64_t* row) {
  const std::size_t n = g.vertex_count();
  std::fill(row, row + n, kUnreachable);
  std::vector<VertexId> frontier{source};
  std::vector<VertexId> next;
  row[source] = 0;
  std::int64_t depth = 0;
  while (!frontier.empty()) {
    ++depth;
    next.clear();
    for (VertexId u : frontier) {
      for (VertexId v : g.neighbors(u)) {
        if (row[v] == kUnreachable) {
          row[v] = depth;
          next.push_back(v);
        }
      }
    }
    frontier.swap(next);
  }
}

using QueueItem = std::pair<std::int64_t, VertexId>;
using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

void dijkstra_row(const Graph& g, VertexId source, std::int64_t* row) {
  const std::size_t n = g.vertex_count();
  std::fill(row, row + n, kUnreachable);
  MinQueue queue;
  row[source] = 0;
  queue.emplace(0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d != row[u]) continue;
    const auto nbrs = g.neighbors(u);
    const auto wts = g.neighbor_weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const std::int64_t nd = d + wts[k];
      const VertexId v = nbrs[k];
      if (row[v] == kUnreachable || nd < row[v]) {
        row[v] = nd;
        queue.emplace(nd, v);
      }
    }
  }
}

void fill_row(const Graph& g, VertexId source, std::int64_t* row) {
  if (g.unit_weights()) {
    bfs_row(g, source, row);
  } else {
    dijkstra_row(g, source, row);
  }
}

// Bounded Dijkstra from `source`; `dist` is a scratch array of size |V| that
// must be all kUnreachable on entry and is restored before returning.
std::size_t ball_size(const Graph& g, VertexId source, std::int64_t radius, BallKind kind,
                      std::vector<std::int64_t>& dist, std::vector<VertexId>& touched) {
  auto inside = [&](std::int64_t d) { return kind == BallKind::kClosed ? d <= radius : d < radius; };
  touched.clear();
  MinQueue queue;
  dist[source] = 0;
  touched.push_back(source);
  queue.emplace(0, source);
  std::size_t count = 0;
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d != dist[u]) continue;
    ++count;
    const auto nbrs = g.neighbors(u);
    const auto wts = g.neighbor_weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const std::int64_t nd = d + wts[k];
      if (!inside(nd)) continue;
      const VertexId v = nbrs[k];
      if (dist[v] == kUnreachable) {
        touched.push_back(v);
      } else if (nd >= dist[v]) {
        continue;
      }
      dist[v] = nd;
      queue.emplace(nd, v);
    }
  }
  for (VertexId v : touched) dist[v] = kUnreachable;
  return count;
}

std::optional<std::array<std::size_t, 2>> triangle_row(const FiniteMetricSpace& space,
                                                        std::size_t i) {
  const std::size_t n = space.size();
  const std::int64_t* d = space.numerators().data();
  const std::int64_t* di = d + i * n;
  for (std::size_t j = 0; j < n; ++j) {
    const std::int64_t dij = di[j];
    const std::int64_t* dj = d + j * n;
    for (std::size_t k = 0; k < n; ++k) {
      if (di[k] > dij + dj[k]) return std::array<std::size_t, 2>{j, k};
    }
  }
  return std::nullopt;
}

struct RowExtrema {
  double max_ratio = -1.0;
  double min_ratio = kInfinity;
  std::size_t argmax = 0;
  std::size_t argmin = 0;
};

RowExtrema ratio_row(const FiniteMetricSpace& space, std::span<const double> coords,
                     std::size_t dim, double p, std::size_t i) {
  RowExtrema r;
  const auto xi = coords.subspan(i * dim, dim);
  for (std::size_t j = i + 1; j < space.size(); ++j) {
    const double ratio = lp_distance(xi, coords.subspan(j * dim, dim), p) / space.value(i, j);
    if (ratio > r.max_ratio) {
      r.max_ratio = ratio;
      r.argmax = j;
    }
    if (ratio < r.min_ratio) {
      r.min_ratio = ratio;
      r.argmin = j;
    }
  }
  return r;
}

PairExtrema merge_rows(const std::vector<RowExtrema>& rows) {
  PairExtrema out;
  out.max_ratio = -1.0;
  out.min_ratio = kInfinity;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RowExtrema& r = rows[i];
    if (r.max_ratio > out.max_ratio) {
      out.max_ratio = r.max_ratio;
      out.argmax = {i, r.argmax};
    }
    if (r.min_ratio < out.min_ratio) {
      out.min_ratio = r.min_ratio;
      out.argmin = {i, r.argmin};
    }
  }
  return out;
}

}  // namespace

namespace serial {

std::vector<std::int64_t> all_pairs(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::int64_t> dist(n * n);
  for (std::size_t s = 0; s < n; ++s) fill_row(g, static_cast<VertexId>(s), dist.data() + s * n);
  return dist;
}

std::optional<std::array<std::size_t, 3>> triangle_violation(const FiniteMetricSpace& space) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (auto jk = triangle_row(space, i)) return std::array<std::size_t, 3>{i, (*jk)[0], (*jk)[1]};
  }
  return std::nullopt;
}

PairExtrema pair_ratio_extrema(const FiniteMetricSpace& space, std::span<const double> coords,
                               std::size_t dim, double p) {
  std::vector<RowExtrema> rows(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) rows[i] = ratio_row(space, coords, dim, p, i);
  return merge_rows(rows);
}

BallCount max_ball(const Graph& g, std::int64_t radius, BallKind kind) {
  std::vector<std::int64_t> dist(g.vertex_count(), kUnreachable);
  std::vector<VertexId> touched;
  BallCount best;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    const std::size_t c = ball_size(g, s, radius, kind, dist, touched);
    if (c > best.max_cardinality) best = {c, s};
  }
  return best;
}

}  // namespace serial

namespace parallel {

std::vector<std::int64_t> all_pairs(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::int64_t> dist(n * n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t s = 0; s < count; ++s) {
    fill_row(g, static_cast<VertexId>(s), dist.data() + s * count);
  }
  return dist;
}

std::optional<std::array<std::size_t, 3>> triangle_violation(const FiniteMetricSpace& space) {
  const auto n = static_cast<std::int64_t>(space.size());
  std::vector<std::optional<std::array<std::size_t, 2>>> rows(space.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) rows[i] = triangle_row(space, static_cast<std::size_t>(i));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i]) return std::array<std::size_t, 3>{i, (*rows[i])[0], (*rows[i])[1]};
  }
  return std::nullopt;
}

PairExtrema pair_ratio_extrema(const FiniteMetricSpace& space, std::span<const double> coords,
                               std::size_t dim, double p) {
  const auto n = static_cast<std::int64_t>(space.size());
  std::vector<RowExtrema> rows(space.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < n; ++i) {
    rows[i] = ratio_row(space, coords, dim, p, static_cast<std::size_t>(i));
  }
  return merge_rows(rows);
}

BallCount max_ball(const Graph& g, std::int64_t radius, BallKind kind) {
  const auto n = static_cast<std::int64_t>(g.vertex_count());
  std::vector<std::size_t> sizes(g.vertex_count());
#pragma omp parallel
  {
    std::vector<std::int64_t> dist(g.vertex_count(), kUnreachable);
    std::vector<VertexId> touched;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t s = 0; s < n; ++s) {
      sizes[s] = ball_size(g, static_cast<VertexId>(s), radius, kind, dist, touched);
    }
  }
  BallCount best;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (sizes[s] > best.max_cardinality) best = {sizes[s], s};
  }
  return best;
}

}  // namespace parallel

}  // namespace laakso::kernels
