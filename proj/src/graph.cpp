#include "laakso/graph.hpp"

#include <algorithm>

#include "laakso/error.hpp"

namespace laakso {

Graph::Graph(std::vector<std::string> ids, std::vector<Edge> edges)
    : ids_(std::move(ids)), edges_(std::move(edges)) {
  const std::size_t n = ids_.size();
  sorted_ids_ = std::is_sorted(ids_.begin(), ids_.end());
  for (auto& e : edges_) {
    if (e.u >= n || e.v >= n) throw Error(ErrorKind::kValidation, "edge endpoint out of range");
    if (e.u == e.v) throw Error(ErrorKind::kValidation, "self-loop at " + ids_[e.u]);
    if (e.weight <= 0) throw Error(ErrorKind::kValidation, "edge weight must be positive");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.weight != 1) unit_ = false;
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
      throw Error(ErrorKind::kValidation,
                  "duplicate edge " + ids_[edges_[i].u] + " -- " + ids_[edges_[i].v]);
    }
  }

  offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  adj_.resize(offsets_[n]);
  adj_weight_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adj_[fill[e.u]] = e.v;
    adj_weight_[fill[e.u]++] = e.weight;
    adj_[fill[e.v]] = e.u;
    adj_weight_[fill[e.v]++] = e.weight;
  }
}

VertexId Graph::index_of(const std::string& id) const {
  if (sorted_ids_) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) {
      throw Error(ErrorKind::kValidation, "unknown vertex id '" + id + "'");
    }
    return static_cast<VertexId>(it - ids_.begin());
  }
  auto lin = std::find(ids_.begin(), ids_.end(), id);
  if (lin == ids_.end()) throw Error(ErrorKind::kValidation, "unknown vertex id '" + id + "'");
  return static_cast<VertexId>(lin - ids_.begin());
}

}  // namespace laakso
